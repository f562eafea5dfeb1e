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

#ifndef TACFORCE_TESTS__RANDOM_FIELDS_HPP_
#define TACFORCE_TESTS__RANDOM_FIELDS_HPP_

#include "tacforce/field.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace tacforce::testing
{

/// Centred nx x ny grid.
inline GridSpec centred(int nx, int ny, double spacing)
{
  return GridSpec{nx, ny, spacing, {-0.5 * spacing * (nx - 1), -0.5 * spacing * (ny - 1)}};
}

/**
 * Sum of Gaussian blobs in both components, centres inside the grid and
 * widths between 15% and 35% of the grid extent. Smooth at the grid scale.
 */
inline VectorField2D random_smooth_field(const GridSpec & grid, std::mt19937_64 & rng, int blobs = 6)
{
  const double wx = grid.spacing * (grid.nx - 1);
  const double wy = grid.spacing * (grid.ny - 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> amp(0.0, 1.0);

  struct Blob
  {
    Vec2 c;
    double s;
    double a;
    double b;
  };
  std::vector<Blob> list;
  for (int k = 0; k < blobs; ++k) {
    const Vec2 c = grid.origin + Vec2(wx * (0.15 + 0.7 * unit(rng)), wy * (0.15 + 0.7 * unit(rng)));
    const double s = std::max(wx, wy) * (0.15 + 0.2 * unit(rng));
    list.push_back({c, s, amp(rng), amp(rng)});
  }
  std::vector<double> u(grid.size());
  std::vector<double> v(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Vec2 p = grid.position(k);
    for (const auto & b : list) {
      const double g = std::exp(-(p - b.c).squaredNorm() / (2.0 * b.s * b.s));
      u[k] += b.a * g;
      v[k] += b.b * g;
    }
  }
  return VectorField2D(grid, std::move(u), std::move(v));
}

/// Smooth random scalar field built the same way.
inline ScalarField2D random_smooth_scalar(const GridSpec & grid, std::mt19937_64 & rng, int blobs = 6)
{
  const VectorField2D f = random_smooth_field(grid, rng, blobs);
  return ScalarField2D(grid, std::vector<double>(f.u().begin(), f.u().end()));
}

}  // namespace tacforce::testing

#endif  // TACFORCE_TESTS__RANDOM_FIELDS_HPP_
