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

#include "random_fields.hpp"

#include "tacforce/error.hpp"
#include "tacforce/field.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace tacforce
{
namespace
{

using testing::centred;

VectorField2D sample(const GridSpec & g, auto fn)
{
  std::vector<double> u(g.size());
  std::vector<double> v(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Vec2 w = fn(g.position(k));
    u[k] = w.x();
    v[k] = w.y();
  }
  return VectorField2D(g, std::move(u), std::move(v));
}

VectorField2D random_field(const GridSpec & g, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  return sample(g, [&](const Vec2 &) {return Vec2(n(rng), n(rng));});
}

// Brute-force stencils, written independently of the library loops.
double ddx(const std::vector<double> & a, int nx, int ny, double h, int i, int j)
{
  (void)ny;
  auto at = [&](int ii) {return a[static_cast<std::size_t>(j * nx + ii)];};
  if (i == 0) {
    return (at(1) - at(0)) / h;
  }
  if (i == nx - 1) {
    return (at(nx - 1) - at(nx - 2)) / h;
  }
  return (at(i + 1) - at(i - 1)) / (2.0 * h);
}

double ddy(const std::vector<double> & a, int nx, int ny, double h, int i, int j)
{
  auto at = [&](int jj) {return a[static_cast<std::size_t>(jj * nx + i)];};
  if (j == 0) {
    return (at(1) - at(0)) / h;
  }
  if (j == ny - 1) {
    return (at(ny - 1) - at(ny - 2)) / h;
  }
  return (at(j + 1) - at(j - 1)) / (2.0 * h);
}

TEST(GridSpec, RejectsDegenerateGrids)
{
  EXPECT_THROW((GridSpec{1, 4, 1.0, {0, 0}}.validate()), InvalidArgument);
  EXPECT_THROW((GridSpec{4, 4, 0.0, {0, 0}}.validate()), InvalidArgument);
  EXPECT_THROW((GridSpec{4, 4, std::nan(""), {0, 0}}.validate()), InvalidArgument);
  EXPECT_NO_THROW((GridSpec{2, 2, 0.1, {0, 0}}.validate()));
}

TEST(GridSpec, ScanOrderAndPositions)
{
  const GridSpec g{3, 2, 0.5, {1.0, -1.0}};
  EXPECT_EQ(g.index(2, 1), 5u);
  EXPECT_EQ(g.position(2, 1), Vec2(2.0, -0.5));
  EXPECT_EQ(g.position(std::size_t{5}), Vec2(2.0, -0.5));
}

TEST(VectorField2D, EnforcesInvariants)
{
  const GridSpec g{2, 2, 1.0, {0, 0}};
  EXPECT_THROW(VectorField2D(g, {0, 0, 0}, {0, 0, 0, 0}), InvalidArgument);
  EXPECT_THROW(VectorField2D(g, {0, 0, 0, INFINITY}, {0, 0, 0, 0}), InvalidArgument);
  EXPECT_THROW(ScalarField2D(g, {0, NAN, 0, 0}), InvalidArgument);
}

TEST(Divergence, ConstantFieldIsZero)
{
  const auto f = sample(centred(6, 5, 0.3), [](const Vec2 &) {return Vec2(1.0, 1.0);});
  const auto div = divergence(f);
  for (double x : div.values()) {
    EXPECT_EQ(x, 0.0);
  }
}

TEST(Divergence, LinearFieldIsTwoInInterior)
{
  const GridSpec g = centred(7, 9, 0.25);
  const auto div = divergence(sample(g, [](const Vec2 & p) {return p;}));
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      EXPECT_NEAR(div.values()[g.index(i, j)], 2.0, 1e-12);
    }
  }
}

TEST(Divergence, MatchesBruteForceStencil)
{
  const GridSpec g = centred(8, 8, 0.7);
  const auto f = random_field(g, 3);
  const std::vector<double> u(f.u().begin(), f.u().end());
  const std::vector<double> v(f.v().begin(), f.v().end());
  const auto div = divergence(f);
  const auto curl = curl_z(f);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double want_div = ddx(u, g.nx, g.ny, g.spacing, i, j) + ddy(v, g.nx, g.ny, g.spacing, i, j);
      const double want_curl = ddx(v, g.nx, g.ny, g.spacing, i, j) - ddy(u, g.nx, g.ny, g.spacing, i, j);
      EXPECT_NEAR(div.values()[g.index(i, j)], want_div, 1e-12);
      EXPECT_NEAR(curl.values()[g.index(i, j)], want_curl, 1e-12);
    }
  }
}

TEST(Curl, RigidRotationIsTwo)
{
  const GridSpec g = centred(6, 6, 0.5);
  const auto curl = curl_z(sample(g, [](const Vec2 & p) {return Vec2(-p.y(), p.x());}));
  for (double x : curl.values()) {
    EXPECT_NEAR(x, 2.0, 1e-12);
  }
  const auto zero = curl_z(sample(g, [](const Vec2 &) {return Vec2(3.0, -1.0);}));
  for (double x : zero.values()) {
    EXPECT_EQ(x, 0.0);
  }
}

TEST(Gradient, LinearAndConstantScalars)
{
  const GridSpec g = centred(5, 4, 0.2);
  std::vector<double> x(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    x[k] = g.position(k).x();
  }
  const auto grad = gradient(ScalarField2D(g, x));
  for (std::size_t k = 0; k < g.size(); ++k) {
    EXPECT_NEAR(grad.u()[k], 1.0, 1e-12);
    EXPECT_NEAR(grad.v()[k], 0.0, 1e-12);
  }
  const auto flat = gradient(ScalarField2D(g, std::vector<double>(g.size(), 4.2)));
  EXPECT_EQ(flat.max_norm(), 0.0);
}

TEST(Gradient, QuadraticIsSecondOrderAccurate)
{
  // Central differences are exact for x^2 in the interior.
  const GridSpec g = centred(41, 5, 0.05);
  std::vector<double> s(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    s[k] = g.position(k).x() * g.position(k).x();
  }
  const auto grad = gradient(ScalarField2D(g, s));
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 1; i < g.nx - 1; ++i) {
      EXPECT_NEAR(grad.u(i, j), 2.0 * g.position(i, j).x(), 1e-12);
      EXPECT_EQ(grad.v(i, j), 0.0);
    }
  }
}

TEST(Operators, AreLinear)
{
  const GridSpec g = centred(9, 7, 0.4);
  const auto f = random_field(g, 1);
  const auto h = random_field(g, 2);
  const double a = 1.7;
  const double b = -0.3;
  const auto lhs_div = divergence(a * f + b * h);
  const auto rhs_div = a * divergence(f) + b * divergence(h);
  const auto lhs_curl = curl_z(a * f + b * h);
  const auto rhs_curl = a * curl_z(f) + b * curl_z(h);
  for (std::size_t k = 0; k < g.size(); ++k) {
    EXPECT_NEAR(lhs_div.values()[k], rhs_div.values()[k], 1e-12);
    EXPECT_NEAR(lhs_curl.values()[k], rhs_curl.values()[k], 1e-12);
  }
  const ScalarField2D s(g, std::vector<double>(f.u().begin(), f.u().end()));
  const ScalarField2D t(g, std::vector<double>(h.v().begin(), h.v().end()));
  const auto lhs_grad = gradient(a * s + b * t);
  const auto rhs_grad = a * gradient(s) + b * gradient(t);
  EXPECT_LT((lhs_grad - rhs_grad).max_norm(), 1e-12);
}

TEST(Operators, CurlOfGradientVanishesInInterior)
{
  auto interior_max = [](int n) {
      const GridSpec g = centred(n, n, 4.0 / (n - 1));
      std::vector<double> s(g.size());
      for (std::size_t k = 0; k < g.size(); ++k) {
        const Vec2 p = g.position(k);
        s[k] = std::sin(p.x()) * std::cos(0.7 * p.y()) + 0.1 * p.x() * p.x() * p.y();
      }
      const auto c = curl_z(gradient(ScalarField2D(g, s)));
      double m = 0.0;
      for (int j = 1; j < n - 1; ++j) {
        for (int i = 1; i < n - 1; ++i) {
          m = std::max(m, std::abs(c.values()[g.index(i, j)]));
        }
      }
      return m;
    };
  const double coarse = interior_max(17);
  const double fine = interior_max(33);
  EXPECT_LT(coarse, 1e-12);
  EXPECT_LT(fine, 1e-12);
}

TEST(RotateQuarter, MapsXToYAndSquaresToNegation)
{
  const GridSpec g = centred(4, 3, 1.0);
  const auto ex = sample(g, [](const Vec2 &) {return Vec2(1.0, 0.0);});
  const auto ey = rotate_quarter(ex);
  for (std::size_t k = 0; k < g.size(); ++k) {
    EXPECT_EQ(ey.at(k), Vec2(0.0, 1.0));
  }
  const auto f = random_field(g, 5);
  const auto twice = rotate_quarter(rotate_quarter(f));
  const auto once = rotate_quarter(f);
  for (std::size_t k = 0; k < g.size(); ++k) {
    EXPECT_EQ(twice.at(k), -f.at(k));
    EXPECT_EQ(once.at(k).norm(), f.at(k).norm());
  }
}

TEST(SumNorms, HandValuesAndLoopOracle)
{
  const GridSpec g = centred(3, 3, 1.0);
  EXPECT_EQ(sum_norms(VectorField2D(g)), 0.0);
  std::vector<double> u(g.size(), 0.0);
  std::vector<double> v(g.size(), 0.0);
  u[4] = 3.0;
  v[4] = 4.0;
  EXPECT_EQ(sum_norms(VectorField2D(g, u, v)), 5.0);

  const auto f = random_field(centred(10, 10, 0.3), 9);
  double want = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    want += std::sqrt(f.u()[k] * f.u()[k] + f.v()[k] * f.v()[k]);
  }
  EXPECT_NEAR(sum_norms(f), want, 1e-12 * want);
}

TEST(NormOfSum, CancellationLeavesDirectionUndefined)
{
  const GridSpec g{2, 2, 1.0, {0, 0}};
  const VectorField2D f(g, {1.0, -1.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 0.0});
  const VectorSum s = norm_of_sum(f);
  EXPECT_EQ(s.magnitude, 0.0);
  EXPECT_FALSE(s.direction.has_value());
}

TEST(NormOfSum, UniformFieldAndLoopOracle)
{
  const GridSpec g = centred(5, 4, 0.5);
  const VectorSum s = norm_of_sum(sample(g, [](const Vec2 &) {return Vec2(0.0, 2.0);}));
  EXPECT_NEAR(s.magnitude, 2.0 * static_cast<double>(g.size()), 1e-12);
  ASSERT_TRUE(s.direction.has_value());
  EXPECT_EQ(*s.direction, Vec2(0.0, 1.0));

  const auto f = random_field(centred(12, 7, 0.3), 4);
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    sx += f.u()[k];
    sy += f.v()[k];
  }
  const VectorSum r = norm_of_sum(f);
  EXPECT_NEAR(r.magnitude, std::hypot(sx, sy), 1e-12);
  EXPECT_NEAR(r.direction->x(), sx / std::hypot(sx, sy), 1e-12);
}

TEST(MomentSum, RigidRotationAboutOwnCentre)
{
  const GridSpec g = centred(9, 9, 0.5);
  const Vec2 c(0.5, -0.25);
  const auto f = sample(g, [&](const Vec2 & p) {return Vec2(-(p.y() - c.y()), p.x() - c.x());});
  double want = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    want += (g.position(k) - c).squaredNorm();
  }
  EXPECT_NEAR(moment_sum(f, c), want, 1e-12 * want);
  EXPECT_GT(moment_sum(f, c), 0.0);
}

TEST(MomentSum, UniformFieldAboutCentroidIsZero)
{
  const GridSpec g = centred(8, 6, 0.5);
  const auto f = sample(g, [](const Vec2 &) {return Vec2(0.3, -1.1);});
  EXPECT_NEAR(moment_sum(f, g.centre()), 0.0, 1e-12);
}

TEST(MomentSum, MatchesLoopOracle)
{
  const GridSpec g = centred(11, 6, 0.4);
  const auto f = random_field(g, 12);
  const Vec2 c(0.37, -0.81);
  double want = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double ax = g.origin.x() + i * g.spacing - c.x();
      const double ay = g.origin.y() + j * g.spacing - c.y();
      want += ax * f.v(i, j) - ay * f.u(i, j);
    }
  }
  EXPECT_NEAR(moment_sum(f, c), want, 1e-12 * std::abs(want) + 1e-12);
}

TEST(MomentSum, RadialGradientCarriesNoMoment)
{
  const GridSpec g = centred(21, 21, 0.3);
  std::vector<double> s(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    s[k] = std::exp(-g.position(k).squaredNorm());
  }
  const auto f = gradient(ScalarField2D(g, s));
  EXPECT_NEAR(moment_sum(f, g.centre()), 0.0, 1e-12 * sum_norms(f));
}

}  // namespace
}  // namespace tacforce
