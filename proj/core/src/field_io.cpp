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

#include "tacforce/field_io.hpp"

#include "tacforce/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace tacforce
{

namespace
{

std::vector<std::string_view> split_csv(std::string_view line)
{
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string_view::npos ? comma : comma - start));
    if (comma == std::string_view::npos) {
      break;
    }
    start = comma + 1;
  }
  return out;
}

std::string_view trim(std::string_view s)
{
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

template<typename T>
T parse_number(std::string_view text, const std::string & source, std::size_t line)
{
  text = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(source, line, "cannot parse number '" + std::string(text) + "'");
  }
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(value)) {
      throw ParseError(source, line, "non-finite value '" + std::string(text) + "'");
    }
  }
  return value;
}

void write_header(std::ostream & os, const GridSpec & g)
{
  os << g.nx << ',' << g.ny << ',' << format_double(g.spacing) << ',' <<
    format_double(g.origin.x()) << ',' << format_double(g.origin.y()) << '\n';
}

std::ofstream open_out(const std::filesystem::path & path)
{
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw Error("cannot open '" + path.string() + "' for writing");
  }
  return os;
}

std::ifstream open_in(const std::filesystem::path & path)
{
  std::ifstream is(path, std::ios::binary);
  if (!is) {
    throw Error("cannot open '" + path.string() + "' for reading");
  }
  return is;
}

}  // namespace

std::string format_double(double x)
{
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  (void)ec;
  return std::string(buf, ptr);
}

void write_field(std::ostream & os, const VectorField2D & f)
{
  const GridSpec & g = f.grid();
  write_header(os, g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      os << i << ',' << j << ',' << format_double(f.u(i, j)) << ',' << format_double(f.v(i, j)) <<
        '\n';
    }
  }
}

void write_field(std::ostream & os, const ScalarField2D & f)
{
  const GridSpec & g = f.grid();
  write_header(os, g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      os << i << ',' << j << ',' << format_double(f(i, j)) << '\n';
    }
  }
}

void write_field(const std::filesystem::path & path, const VectorField2D & f)
{
  auto os = open_out(path);
  write_field(os, f);
}

void write_field(const std::filesystem::path & path, const ScalarField2D & f)
{
  auto os = open_out(path);
  write_field(os, f);
}

AnyField read_any_field(std::istream & is, const std::string & source)
{
  std::string line;
  std::size_t lineno = 0;

  auto next_line = [&]() -> bool {
      while (std::getline(is, line)) {
        ++lineno;
        if (!trim(line).empty()) {
          return true;
        }
      }
      return false;
    };

  if (!next_line()) {
    throw ParseError(source, lineno, "empty field file");
  }
  auto head = split_csv(line);
  // An optional row of column names may precede the grid values.
  if (head.size() == 5 && trim(head[0]) == "nx") {
    if (!next_line()) {
      throw ParseError(source, lineno, "missing grid values after the column names");
    }
    head = split_csv(line);
  }
  if (head.size() != 5) {
    throw ParseError(source, lineno, "expected header nx,ny,spacing,origin_x,origin_y");
  }
  GridSpec grid;
  grid.nx = parse_number<int>(head[0], source, lineno);
  grid.ny = parse_number<int>(head[1], source, lineno);
  grid.spacing = parse_number<double>(head[2], source, lineno);
  grid.origin = {parse_number<double>(head[3], source, lineno),
    parse_number<double>(head[4], source, lineno)};
  try {
    grid.validate();
  } catch (const InvalidArgument & e) {
    throw ParseError(source, lineno, e.what());
  }

  const std::size_t n = grid.size();
  std::vector<double> a(n);
  std::vector<double> b(n);
  std::size_t columns = 0;
  bool names_allowed = true;
  for (std::size_t k = 0; k < n; ++k) {
    if (!next_line()) {
      throw ParseError(
              source, lineno, "expected " + std::to_string(n) + " data lines, got " +
              std::to_string(k));
    }
    const auto cells = split_csv(line);
    if (names_allowed && !cells.empty() && trim(cells[0]) == "i") {
      names_allowed = false;
      --k;
      continue;
    }
    names_allowed = false;
    if (columns == 0) {
      columns = cells.size();
      if (columns != 3 && columns != 4) {
        throw ParseError(source, lineno, "expected i,j,value or i,j,u,v");
      }
    } else if (cells.size() != columns) {
      throw ParseError(
              source, lineno, "expected " + std::to_string(columns) + " columns, got " +
              std::to_string(cells.size()));
    }
    const int i = parse_number<int>(cells[0], source, lineno);
    const int j = parse_number<int>(cells[1], source, lineno);
    if (i < 0 || j < 0 || i >= grid.nx || j >= grid.ny || grid.index(i, j) != k) {
      throw ParseError(source, lineno, "cell index out of scan order");
    }
    a[k] = parse_number<double>(cells[2], source, lineno);
    if (columns == 4) {
      b[k] = parse_number<double>(cells[3], source, lineno);
    }
  }
  if (next_line()) {
    throw ParseError(source, lineno, "trailing data after " + std::to_string(n) + " cells");
  }

  try {
    if (columns == 4) {
      return VectorField2D(grid, std::move(a), std::move(b));
    }
    return ScalarField2D(grid, std::move(a));
  } catch (const InvalidArgument & e) {
    throw ParseError(source, lineno, e.what());
  }
}

AnyField read_any_field(const std::filesystem::path & path)
{
  auto is = open_in(path);
  return read_any_field(is, path.string());
}

VectorField2D read_vector_field(std::istream & is, const std::string & source)
{
  auto any = read_any_field(is, source);
  if (auto * f = std::get_if<VectorField2D>(&any)) {
    return std::move(*f);
  }
  throw ParseError(source, 2, "expected a vector field (i,j,u,v)");
}

VectorField2D read_vector_field(const std::filesystem::path & path)
{
  auto is = open_in(path);
  return read_vector_field(is, path.string());
}

ScalarField2D read_scalar_field(std::istream & is, const std::string & source)
{
  auto any = read_any_field(is, source);
  if (auto * f = std::get_if<ScalarField2D>(&any)) {
    return std::move(*f);
  }
  throw ParseError(source, 2, "expected a scalar field (i,j,value)");
}

ScalarField2D read_scalar_field(const std::filesystem::path & path)
{
  auto is = open_in(path);
  return read_scalar_field(is, path.string());
}

}  // namespace tacforce
