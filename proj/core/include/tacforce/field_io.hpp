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

#ifndef TACFORCE__FIELD_IO_HPP_
#define TACFORCE__FIELD_IO_HPP_

#include "tacforce/field.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>

namespace tacforce
{

// Field file layout:
//
//   nx,ny,spacing,origin_x,origin_y      <- first line holds the grid values
//   i,j,u,v                              <- nx*ny lines, scan order (vector)
//   i,j,value                            <- nx*ny lines, scan order (scalar)
//
// Numbers use the shortest round-trip decimal form, so load -> write is
// byte-identical. Readers also accept a literal "nx,ny,..." names row before
// the grid values and an "i,j,..." names row before the cells.

void write_field(std::ostream & os, const VectorField2D & f);
void write_field(std::ostream & os, const ScalarField2D & f);
void write_field(const std::filesystem::path & path, const VectorField2D & f);
void write_field(const std::filesystem::path & path, const ScalarField2D & f);

using AnyField = std::variant<VectorField2D, ScalarField2D>;

/// Parses either kind of field; the column count of the first data line decides.
/// Throws ParseError with the offending line number.
AnyField read_any_field(std::istream & is, const std::string & source = "<stream>");
AnyField read_any_field(const std::filesystem::path & path);

VectorField2D read_vector_field(std::istream & is, const std::string & source = "<stream>");
VectorField2D read_vector_field(const std::filesystem::path & path);
ScalarField2D read_scalar_field(std::istream & is, const std::string & source = "<stream>");
ScalarField2D read_scalar_field(const std::filesystem::path & path);

/// Shortest round-trippable decimal text for a double.
std::string format_double(double x);

}  // namespace tacforce

#endif  // TACFORCE__FIELD_IO_HPP_
