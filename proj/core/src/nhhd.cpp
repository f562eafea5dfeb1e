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

#include "tacforce/nhhd.hpp"

#include "tacforce/error.hpp"
#include "tacforce/field_io.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>

namespace tacforce
{

namespace
{

// Kernel values h^2 G(dx h, dy h) for dx in [-(nx-1), nx-1], dy in [-(ny-1), ny-1].
class GreenTable
{
public:
  explicit GreenTable(const GridSpec & g)
  : width_(2 * g.nx - 1), nx_(g.nx), ny_(g.ny), values_(static_cast<std::size_t>(width_) * (2 * g.ny - 1))
  {
    const double h = g.spacing;
    const double scale = h * h / (2.0 * std::numbers::pi);
    for (int dy = -(ny_ - 1); dy < ny_; ++dy) {
      for (int dx = -(nx_ - 1); dx < nx_; ++dx) {
        double gval;
        if (dx == 0 && dy == 0) {
          gval = std::log(h) + kSelfTermOffset;
        } else {
          gval = std::log(h * std::hypot(static_cast<double>(dx), static_cast<double>(dy)));
        }
        values_[slot(dx, dy)] = scale * gval;
      }
    }
  }

  double operator()(int dx, int dy) const {return values_[slot(dx, dy)];}

private:
  std::size_t slot(int dx, int dy) const
  {
    return static_cast<std::size_t>(dy + ny_ - 1) * width_ + static_cast<std::size_t>(dx + nx_ - 1);
  }

  int width_;
  int nx_;
  int ny_;
  std::vector<double> values_;
};

std::vector<double> convolve_direct(const ScalarField2D & rhs)
{
  const GridSpec & g = rhs.grid();
  const GreenTable kernel(g);
  std::vector<double> out(g.size(), 0.0);
  const auto src = rhs.values();
  for (int pj = 0; pj < g.ny; ++pj) {
    for (int pi = 0; pi < g.nx; ++pi) {
      double acc = 0.0;
      for (int qj = 0; qj < g.ny; ++qj) {
        for (int qi = 0; qi < g.nx; ++qi) {
          acc += kernel(pi - qi, pj - qj) * src[g.index(qi, qj)];
        }
      }
      out[g.index(pi, pj)] = acc;
    }
  }
  return out;
}

// FFTW planning is not thread-safe; execution on distinct arrays is.
std::mutex & fftw_planner_mutex()
{
  static std::mutex m;
  return m;
}

struct FftwFree
{
  void operator()(void * p) const {fftw_free(p);}
};

template<typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template<typename T>
FftwBuffer<T> fftw_buffer(std::size_t n)
{
  auto * p = static_cast<T *>(fftw_malloc(sizeof(T) * n));
  if (p == nullptr) {
    throw SolverError("fftw_malloc failed");
  }
  return FftwBuffer<T>(p);
}

class FftwPlan
{
public:
  explicit FftwPlan(fftw_plan plan)
  : plan_(plan)
  {
    if (plan_ == nullptr) {
      throw SolverError("FFTW planning failed");
    }
  }
  ~FftwPlan()
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    fftw_destroy_plan(plan_);
  }
  FftwPlan(const FftwPlan &) = delete;
  FftwPlan & operator=(const FftwPlan &) = delete;

  fftw_plan get() const {return plan_;}

private:
  fftw_plan plan_;
};

std::vector<double> convolve_fft(const ScalarField2D & rhs)
{
  const GridSpec & g = rhs.grid();
  // Padding to 2n makes the circular convolution equal the linear one on the grid.
  const int px = 2 * g.nx;
  const int py = 2 * g.ny;
  const int pxc = px / 2 + 1;
  const std::size_t real_size = static_cast<std::size_t>(px) * py;
  const std::size_t spec_size = static_cast<std::size_t>(pxc) * py;

  auto kernel_real = fftw_buffer<double>(real_size);
  auto source_real = fftw_buffer<double>(real_size);
  auto kernel_spec = fftw_buffer<fftw_complex>(spec_size);
  auto source_spec = fftw_buffer<fftw_complex>(spec_size);

  std::unique_ptr<FftwPlan> forward;
  std::unique_ptr<FftwPlan> backward;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex());
    // Row-major with y as the slow axis: dims (py, px).
    forward = std::make_unique<FftwPlan>(
      fftw_plan_dft_r2c_2d(py, px, source_real.get(), source_spec.get(), FFTW_ESTIMATE));
    backward = std::make_unique<FftwPlan>(
      fftw_plan_dft_c2r_2d(py, px, source_spec.get(), source_real.get(), FFTW_ESTIMATE));
  }

  const GreenTable table(g);
  std::fill_n(kernel_real.get(), real_size, 0.0);
  std::fill_n(source_real.get(), real_size, 0.0);
  for (int dy = -(g.ny - 1); dy < g.ny; ++dy) {
    for (int dx = -(g.nx - 1); dx < g.nx; ++dx) {
      const int ix = (dx + px) % px;
      const int iy = (dy + py) % py;
      kernel_real[static_cast<std::size_t>(iy) * px + ix] = table(dx, dy);
    }
  }
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      source_real[static_cast<std::size_t>(j) * px + i] = rhs(i, j);
    }
  }

  fftw_execute_dft_r2c(forward->get(), kernel_real.get(), kernel_spec.get());
  fftw_execute_dft_r2c(forward->get(), source_real.get(), source_spec.get());
  for (std::size_t k = 0; k < spec_size; ++k) {
    const std::complex<double> a(kernel_spec[k][0], kernel_spec[k][1]);
    const std::complex<double> b(source_spec[k][0], source_spec[k][1]);
    const std::complex<double> c = a * b;
    source_spec[k][0] = c.real();
    source_spec[k][1] = c.imag();
  }
  fftw_execute_dft_c2r(backward->get(), source_spec.get(), source_real.get());

  const double norm = 1.0 / static_cast<double>(real_size);
  std::vector<double> out(g.size());
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      out[g.index(i, j)] = source_real[static_cast<std::size_t>(j) * px + i] * norm;
    }
  }
  return out;
}

}  // namespace

ScalarField2D solve_poisson_freespace(const ScalarField2D & rhs, const PoissonOptions & options)
{
  const GridSpec & g = rhs.grid();
  using Method = PoissonOptions::Method;
  Method method = options.method;
  if (method == Method::Auto) {
    method = g.size() <= options.direct_limit ? Method::Direct : Method::Fft;
  }
  if (method == Method::Direct) {
    if (g.size() > options.direct_limit) {
      throw SolverError(
              "grid of " + std::to_string(g.size()) + " cells exceeds the direct convolution limit of " +
              std::to_string(options.direct_limit) + "; enable the FFT path");
    }
    return ScalarField2D(g, convolve_direct(rhs));
  }
  return ScalarField2D(g, convolve_fft(rhs));
}

Decomposition decompose(const VectorField2D & f, const PoissonOptions & options)
{
  ScalarField2D D = solve_poisson_freespace(divergence(f), options);
  // lap(R) = -div(J f)
  ScalarField2D R = solve_poisson_freespace(-1.0 * divergence(rotate_quarter(f)), options);
  VectorField2D d = gradient(D);
  VectorField2D r = rotate_quarter(gradient(R));
  VectorField2D h = f - d - r;
  return Decomposition{std::move(d), std::move(r), std::move(h), std::move(D), std::move(R)};
}

std::vector<RotationCenter> locate_rotation_centers(const ScalarField2D & R, double significance)
{
  if (!(significance >= 0.0 && significance <= 1.0)) {
    throw InvalidArgument("significance must lie in [0, 1]");
  }
  const auto values = R.values();
  std::size_t imax = 0;
  std::size_t imin = 0;
  double peak = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] > values[imax]) {
      imax = k;
    }
    if (values[k] < values[imin]) {
      imin = k;
    }
    peak = std::max(peak, std::abs(values[k]));
  }
  std::vector<RotationCenter> out;
  if (peak == 0.0) {
    return out;
  }
  const double threshold = significance * peak;
  const GridSpec & g = R.grid();
  const bool same_cell = imax == imin;
  if (std::abs(values[imax]) >= threshold && (!same_cell || values[imax] > 0.0)) {
    out.push_back({g.position(imax), Polarity::Positive, values[imax], imax});
  }
  if (std::abs(values[imin]) >= threshold && (!same_cell || values[imin] < 0.0)) {
    out.push_back({g.position(imin), Polarity::Negative, values[imin], imin});
  }
  return out;
}

std::vector<std::filesystem::path> write_decomposition(
  const std::filesystem::path & dir, const std::string & stem, const Decomposition & dec)
{
  std::vector<std::filesystem::path> paths;
  auto put = [&](const std::string & suffix, const auto & field) {
      paths.push_back(dir / (stem + "_" + suffix + ".csv"));
      write_field(paths.back(), field);
    };
  put("d", dec.d);
  put("r", dec.r);
  put("h", dec.h);
  put("D", dec.D);
  put("R", dec.R);
  return paths;
}

}  // namespace tacforce
