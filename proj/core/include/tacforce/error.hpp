// Copyright 2026 The tacforce Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TACFORCE__ERROR_HPP_
#define TACFORCE__ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tacforce
{

/// Base class for every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// A value violates a documented type invariant or precondition.
class InvalidArgument : public Error
{
public:
  using Error::Error;
};

/// Malformed input file. Carries the 1-based line number when known.
class ParseError : public Error
{
public:
  ParseError(const std::string & source, std::size_t line, const std::string & what)
  : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const {return line_;}

private:
  std::size_t line_;
};

/// Numerical solver refused or failed (size limits, singular systems).
class SolverError : public Error
{
public:
  using Error::Error;
};

/// Model fitting failed (RANSAC consensus too small, non-finite loss).
class FitError : public Error
{
public:
  using Error::Error;
};

}  // namespace tacforce

#endif  // TACFORCE__ERROR_HPP_
