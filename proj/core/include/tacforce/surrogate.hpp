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

#ifndef TACFORCE__SURROGATE_HPP_
#define TACFORCE__SURROGATE_HPP_

#include "tacforce/field.hpp"
#include "tacforce/wrench.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

namespace tacforce
{

/// Load applied to the sensor surface.
struct LoadTriple
{
  double f_n{0.0};                 ///< N, >= 0
  Vec2 f_t{0.0, 0.0};              ///< N
  double f_tau{0.0};               ///< N mm, counter-clockwise positive
  Vec2 contact_center{0.0, 0.0};   ///< mm
  double contact_radius{2.5};      ///< mm

  WrenchEstimate wrench() const;
};

/**
 * @brief Analytic elastomer stand-in.
 *
 * Gains map load to pattern amplitude. The model is pattern-faithful, not
 * physics-faithful: each load axis produces one of the three characteristic
 * displacement patterns.
 */
struct SurrogateConfig
{
  double k_n{0.02};          ///< mm / N
  double k_t{0.05};          ///< mm / N
  double k_tau{0.01};        ///< mm / (N mm)
  double falloff_sigma{12.0}; ///< mm, envelope of the shear pattern; >= 1e6 is effectively uniform
  double noise_sigma{0.0};   ///< mm, per component
  std::uint64_t seed{0};

  /// When set, pattern amplitudes saturate as s * tanh(a / s).
  std::optional<double> saturation;
  /// Reject loads with |f_t| > mu_max * f_n.
  bool physical_consistency{false};
  double mu_max{1.0};

  void validate() const;
};

/// Radial profile of the divergence and rotation patterns: peak 1 at r = radius, zero at r = 0.
double pattern_bump(double r, double radius);

VectorField2D gen_divergence_pattern(
  const SurrogateConfig & cfg, const Vec2 & center, double amplitude, double radius,
  const GridSpec & grid);

VectorField2D gen_unidirectional_pattern(
  const SurrogateConfig & cfg, const Vec2 & center, const Vec2 & direction, double amplitude,
  const GridSpec & grid);

/// Positive amplitude rotates counter-clockwise.
VectorField2D gen_rotational_pattern(
  const SurrogateConfig & cfg, const Vec2 & center, double amplitude, double radius,
  const GridSpec & grid);

/// Superposition of the three patterns plus seeded Gaussian noise.
VectorField2D render_load(const SurrogateConfig & cfg, const LoadTriple & load, const GridSpec & grid);

struct Range
{
  double min{0.0};
  double max{0.0};
};

/// Sampling ranges for a calibration campaign.
struct LoadRanges
{
  Range f_n{0.0, 20.0};
  Range f_t{0.0, 5.0};
  Range f_t_angle{0.0, 6.283185307179586};
  Range f_tau{-20.0, 20.0};
  /// Per-sample uniform offset of the contact centre from the grid centre, mm.
  double center_jitter{0.0};
  /// Drawn once per object.
  Range contact_radius{2.5, 2.5};
  Range falloff_sigma{12.0, 12.0};
  /// Per-object multiplicative gain perturbation, uniform in [-p, p].
  double gain_perturbation{0.0};
  /// Fraction of samples whose recorded wrench is corrupted.
  double outlier_fraction{0.0};
};

struct CalibrationSample
{
  VectorField2D field;
  LoadTriple load;        ///< load that produced the field
  WrenchEstimate truth;   ///< recorded wrench label (corrupted for outliers)
  int object_id{0};
  bool outlier{false};
};

std::vector<CalibrationSample> gen_calibration_dataset(
  const SurrogateConfig & cfg, int n_objects, int per_object, const LoadRanges & ranges,
  std::uint64_t seed, const GridSpec & grid);

/// Median of the per-cell displacement norm over every cell of every sample.
double median_field_magnitude(const std::vector<CalibrationSample> & samples);

/// Writes fields/sample_NNNN.csv and manifest.json under dir.
void write_dataset(const std::filesystem::path & dir, const std::vector<CalibrationSample> & samples);

/// Reads a directory written by write_dataset. Throws ParseError on a manifest/field mismatch.
std::vector<CalibrationSample> read_dataset(const std::filesystem::path & dir);

/// FNV-1a over manifest.json followed by every field file in manifest order.
std::uint64_t dataset_hash(const std::filesystem::path & dir);

}  // namespace tacforce

#endif  // TACFORCE__SURROGATE_HPP_
