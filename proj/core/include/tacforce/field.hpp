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

#ifndef TACFORCE__FIELD_HPP_
#define TACFORCE__FIELD_HPP_

#include <Eigen/Core>

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace tacforce
{

using Vec2 = Eigen::Vector2d;

/**
 * @brief Regular cell-centred grid.
 *
 * Cells are stored in row-major scan order: index = j * nx + i, with i the
 * column (x) and j the row (y). The physical centre of cell (i, j) is
 * origin + (i, j) * spacing, in millimetres.
 */
struct GridSpec
{
  int nx{2};
  int ny{2};
  double spacing{1.0};
  Vec2 origin{0.0, 0.0};

  /// Throws InvalidArgument unless nx, ny >= 2 and spacing > 0 (finite).
  void validate() const;

  std::size_t size() const {return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);}
  std::size_t index(int i, int j) const {return static_cast<std::size_t>(j) * nx + i;}
  Vec2 position(int i, int j) const {return origin + spacing * Vec2(i, j);}
  Vec2 position(std::size_t k) const
  {
    return position(static_cast<int>(k % nx), static_cast<int>(k / nx));
  }
  /// Physical centre of the grid's bounding box.
  Vec2 centre() const {return origin + 0.5 * spacing * Vec2(nx - 1, ny - 1);}
  bool interior(int i, int j) const {return i > 0 && j > 0 && i < nx - 1 && j < ny - 1;}

  friend bool operator==(const GridSpec & a, const GridSpec & b)
  {
    return a.nx == b.nx && a.ny == b.ny && a.spacing == b.spacing && a.origin == b.origin;
  }
};

class ScalarField2D
{
public:
  /// Zero field on grid.
  explicit ScalarField2D(const GridSpec & grid);
  /// Throws InvalidArgument on size mismatch or non-finite values.
  ScalarField2D(const GridSpec & grid, std::vector<double> values);

  const GridSpec & grid() const {return grid_;}
  std::span<const double> values() const {return values_;}
  double operator()(int i, int j) const {return values_[grid_.index(i, j)];}
  double operator[](std::size_t k) const {return values_[k];}
  std::size_t size() const {return values_.size();}

  double max_abs() const;

  friend ScalarField2D operator+(const ScalarField2D & a, const ScalarField2D & b);
  friend ScalarField2D operator-(const ScalarField2D & a, const ScalarField2D & b);
  friend ScalarField2D operator*(double s, const ScalarField2D & a);

private:
  GridSpec grid_;
  std::vector<double> values_;
};

/// Per-cell 2D displacement (u along x, v along y), millimetres.
class VectorField2D
{
public:
  explicit VectorField2D(const GridSpec & grid);
  VectorField2D(const GridSpec & grid, std::vector<double> u, std::vector<double> v);

  const GridSpec & grid() const {return grid_;}
  std::span<const double> u() const {return u_;}
  std::span<const double> v() const {return v_;}
  double u(int i, int j) const {return u_[grid_.index(i, j)];}
  double v(int i, int j) const {return v_[grid_.index(i, j)];}
  Vec2 at(std::size_t k) const {return {u_[k], v_[k]};}
  Vec2 at(int i, int j) const {return at(grid_.index(i, j));}
  std::size_t size() const {return u_.size();}

  /// Largest per-cell vector norm.
  double max_norm() const;

  friend VectorField2D operator+(const VectorField2D & a, const VectorField2D & b);
  friend VectorField2D operator-(const VectorField2D & a, const VectorField2D & b);
  friend VectorField2D operator*(double s, const VectorField2D & a);

private:
  GridSpec grid_;
  std::vector<double> u_;
  std::vector<double> v_;
};

// Discrete operators. Second-order central differences in the interior,
// first-order one-sided differences on boundary rows/columns.

ScalarField2D divergence(const VectorField2D & f);

/// z-component of the curl, dv/dx - du/dy.
ScalarField2D curl_z(const VectorField2D & f);

VectorField2D gradient(const ScalarField2D & s);

/// Per-cell (u, v) -> (-v, u).
VectorField2D rotate_quarter(const VectorField2D & f);

/// Sum over cells of |v_i|, mm.
double sum_norms(const VectorField2D & f);

struct VectorSum
{
  double magnitude{0.0};
  /// Unit vector along the sum; empty when the sum is exactly zero.
  std::optional<Vec2> direction;
};

/// |sum_i v_i| and its direction.
VectorSum norm_of_sum(const VectorField2D & f);

/// Sum over cells of (p_i - centre) x v_i, z-component (counter-clockwise positive), mm^2.
double moment_sum(const VectorField2D & f, const Vec2 & centre);

}  // namespace tacforce

#endif  // TACFORCE__FIELD_HPP_
