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

#include "tacforce/field.hpp"

#include "tacforce/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tacforce
{

namespace
{

void check_values(const GridSpec & grid, const std::vector<double> & values, const char * name)
{
  if (values.size() != grid.size()) {
    throw InvalidArgument(
            std::string(name) + ": expected " + std::to_string(grid.size()) + " values, got " +
            std::to_string(values.size()));
  }
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!std::isfinite(values[k])) {
      throw InvalidArgument(std::string(name) + ": non-finite value at cell " + std::to_string(k));
    }
  }
}

// Derivative along x of a cell-indexed quantity.
template<typename Sample>
double ddx(const GridSpec & g, int i, int j, Sample && s)
{
  if (i == 0) {
    return (s(1, j) - s(0, j)) / g.spacing;
  }
  if (i == g.nx - 1) {
    return (s(i, j) - s(i - 1, j)) / g.spacing;
  }
  return (s(i + 1, j) - s(i - 1, j)) / (2.0 * g.spacing);
}

template<typename Sample>
double ddy(const GridSpec & g, int i, int j, Sample && s)
{
  if (j == 0) {
    return (s(i, 1) - s(i, 0)) / g.spacing;
  }
  if (j == g.ny - 1) {
    return (s(i, j) - s(i, j - 1)) / g.spacing;
  }
  return (s(i, j + 1) - s(i, j - 1)) / (2.0 * g.spacing);
}

template<typename Op>
std::vector<double> zip(std::span<const double> a, std::span<const double> b, Op op)
{
  std::vector<double> out(a.size());
  std::transform(a.begin(), a.end(), b.begin(), out.begin(), op);
  return out;
}

std::vector<double> scaled(double s, std::span<const double> a)
{
  std::vector<double> out(a.size());
  std::transform(a.begin(), a.end(), out.begin(), [s](double x) {return s * x;});
  return out;
}

void require_same_grid(const GridSpec & a, const GridSpec & b)
{
  if (!(a == b)) {
    throw InvalidArgument("field arithmetic on mismatched grids");
  }
}

}  // namespace

void GridSpec::validate() const
{
  if (nx < 2 || ny < 2) {
    throw InvalidArgument(
            "grid needs at least 2 cells per axis, got " + std::to_string(nx) + "x" +
            std::to_string(ny));
  }
  if (!(spacing > 0.0) || !std::isfinite(spacing)) {
    throw InvalidArgument("grid spacing must be positive and finite");
  }
  if (!origin.allFinite()) {
    throw InvalidArgument("grid origin must be finite");
  }
}

ScalarField2D::ScalarField2D(const GridSpec & grid)
: ScalarField2D(grid, std::vector<double>(grid.nx >= 2 && grid.ny >= 2 ? grid.size() : 0, 0.0))
{
}

ScalarField2D::ScalarField2D(const GridSpec & grid, std::vector<double> values)
: grid_(grid), values_(std::move(values))
{
  grid_.validate();
  check_values(grid_, values_, "scalar field");
}

double ScalarField2D::max_abs() const
{
  double m = 0.0;
  for (double x : values_) {
    m = std::max(m, std::abs(x));
  }
  return m;
}

ScalarField2D operator+(const ScalarField2D & a, const ScalarField2D & b)
{
  require_same_grid(a.grid_, b.grid_);
  return ScalarField2D(a.grid_, zip(a.values_, b.values_, std::plus<>()));
}

ScalarField2D operator-(const ScalarField2D & a, const ScalarField2D & b)
{
  require_same_grid(a.grid_, b.grid_);
  return ScalarField2D(a.grid_, zip(a.values_, b.values_, std::minus<>()));
}

ScalarField2D operator*(double s, const ScalarField2D & a)
{
  return ScalarField2D(a.grid_, scaled(s, a.values_));
}

VectorField2D::VectorField2D(const GridSpec & grid)
: VectorField2D(
    grid,
    std::vector<double>(grid.nx >= 2 && grid.ny >= 2 ? grid.size() : 0, 0.0),
    std::vector<double>(grid.nx >= 2 && grid.ny >= 2 ? grid.size() : 0, 0.0))
{
}

VectorField2D::VectorField2D(const GridSpec & grid, std::vector<double> u, std::vector<double> v)
: grid_(grid), u_(std::move(u)), v_(std::move(v))
{
  grid_.validate();
  check_values(grid_, u_, "vector field u");
  check_values(grid_, v_, "vector field v");
}

double VectorField2D::max_norm() const
{
  double m = 0.0;
  for (std::size_t k = 0; k < u_.size(); ++k) {
    m = std::max(m, std::hypot(u_[k], v_[k]));
  }
  return m;
}

VectorField2D operator+(const VectorField2D & a, const VectorField2D & b)
{
  require_same_grid(a.grid_, b.grid_);
  return VectorField2D(a.grid_, zip(a.u_, b.u_, std::plus<>()), zip(a.v_, b.v_, std::plus<>()));
}

VectorField2D operator-(const VectorField2D & a, const VectorField2D & b)
{
  require_same_grid(a.grid_, b.grid_);
  return VectorField2D(a.grid_, zip(a.u_, b.u_, std::minus<>()), zip(a.v_, b.v_, std::minus<>()));
}

VectorField2D operator*(double s, const VectorField2D & a)
{
  return VectorField2D(a.grid_, scaled(s, a.u_), scaled(s, a.v_));
}

ScalarField2D divergence(const VectorField2D & f)
{
  const GridSpec & g = f.grid();
  std::vector<double> out(g.size());
  auto u = [&f](int i, int j) {return f.u(i, j);};
  auto v = [&f](int i, int j) {return f.v(i, j);};
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      out[g.index(i, j)] = ddx(g, i, j, u) + ddy(g, i, j, v);
    }
  }
  return ScalarField2D(g, std::move(out));
}

ScalarField2D curl_z(const VectorField2D & f)
{
  const GridSpec & g = f.grid();
  std::vector<double> out(g.size());
  auto u = [&f](int i, int j) {return f.u(i, j);};
  auto v = [&f](int i, int j) {return f.v(i, j);};
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      out[g.index(i, j)] = ddx(g, i, j, v) - ddy(g, i, j, u);
    }
  }
  return ScalarField2D(g, std::move(out));
}

VectorField2D gradient(const ScalarField2D & s)
{
  const GridSpec & g = s.grid();
  std::vector<double> gx(g.size());
  std::vector<double> gy(g.size());
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      gx[g.index(i, j)] = ddx(g, i, j, s);
      gy[g.index(i, j)] = ddy(g, i, j, s);
    }
  }
  return VectorField2D(g, std::move(gx), std::move(gy));
}

VectorField2D rotate_quarter(const VectorField2D & f)
{
  std::vector<double> u(f.size());
  std::vector<double> v(f.v().begin(), f.v().end());
  // (u, v) -> (-v, u)
  std::transform(v.begin(), v.end(), u.begin(), [](double x) {return -x;});
  std::copy(f.u().begin(), f.u().end(), v.begin());
  return VectorField2D(f.grid(), std::move(u), std::move(v));
}

double sum_norms(const VectorField2D & f)
{
  double total = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    total += std::hypot(f.u()[k], f.v()[k]);
  }
  return total;
}

VectorSum norm_of_sum(const VectorField2D & f)
{
  Vec2 sum = Vec2::Zero();
  for (std::size_t k = 0; k < f.size(); ++k) {
    sum += f.at(k);
  }
  VectorSum out;
  out.magnitude = sum.norm();
  if (out.magnitude > 0.0) {
    out.direction = sum / out.magnitude;
  }
  return out;
}

double moment_sum(const VectorField2D & f, const Vec2 & centre)
{
  const GridSpec & g = f.grid();
  double total = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const Vec2 arm = g.position(k) - centre;
    total += arm.x() * f.v()[k] - arm.y() * f.u()[k];
  }
  return total;
}

}  // namespace tacforce
