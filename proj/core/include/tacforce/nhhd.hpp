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

#ifndef TACFORCE__NHHD_HPP_
#define TACFORCE__NHHD_HPP_

#include "tacforce/field.hpp"

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace tacforce
{

/// Cell average of ln|x| over a unit square centred on the origin:
/// pi/4 - ln(2)/2 - 3/2. The free-space kernel at zero offset becomes
/// (ln(spacing) + kSelfTermOffset) / (2 pi).
inline constexpr double kSelfTermOffset = -1.0611754268825244;

struct PoissonOptions
{
  enum class Method
  {
    Direct,  ///< O(N^2) convolution, the reference path.
    Fft,     ///< Zero-padded FFT convolution.
    Auto,    ///< Direct up to direct_limit cells, FFT beyond.
  };

  Method method{Method::Direct};
  /// Largest nx*ny accepted by the direct path.
  std::size_t direct_limit{64 * 64};
};

/**
 * @brief Free-space solution of the 2D Poisson equation lap(phi) = rhs.
 *
 * phi(p) = sum_q G(p - q) rhs(q) spacing^2 with G(x) = ln|x| / (2 pi) and a
 * cell-averaged kernel at p = q. The direct path sums each output cell in
 * fixed scan order, so results do not depend on scheduling.
 *
 * Throws SolverError when the direct path is requested on a grid larger
 * than options.direct_limit.
 */
ScalarField2D solve_poisson_freespace(
  const ScalarField2D & rhs, const PoissonOptions & options = {});

/// Curl-free, divergence-free and harmonic parts of a field plus the two potentials.
struct Decomposition
{
  VectorField2D d;   ///< grad D, carries diverging motion.
  VectorField2D r;   ///< J grad R, carries rotational motion.
  VectorField2D h;   ///< Remainder f - d - r.
  ScalarField2D D;
  ScalarField2D R;
};

/// Natural Helmholtz-Hodge decomposition with free-space potentials.
Decomposition decompose(const VectorField2D & f, const PoissonOptions & options = {});

enum class Polarity
{
  Positive,  ///< global maximum of R
  Negative,  ///< global minimum of R
};

struct RotationCenter
{
  Vec2 position;
  Polarity polarity{Polarity::Positive};
  double potential_value{0.0};
  std::size_t cell{0};
};

inline constexpr double kDefaultSignificance = 0.1;

/**
 * Extrema of the rotational potential. A candidate is kept when
 * |R| >= significance * max|R|. Ties go to the lowest scan-order cell.
 * Returns at most one centre per polarity, positive first.
 */
std::vector<RotationCenter> locate_rotation_centers(
  const ScalarField2D & R, double significance = kDefaultSignificance);

/// Writes <stem>_d.csv, _r, _h, _D, _R into dir. Returns the paths written.
std::vector<std::filesystem::path> write_decomposition(
  const std::filesystem::path & dir, const std::string & stem, const Decomposition & dec);

}  // namespace tacforce

#endif  // TACFORCE__NHHD_HPP_
