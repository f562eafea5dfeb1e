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

#ifndef TACFORCE__GRASP_HPP_
#define TACFORCE__GRASP_HPP_

#include "tacforce/calib.hpp"
#include "tacforce/surrogate.hpp"
#include "tacforce/wrench.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace tacforce
{

struct FrictionModel
{
  double mu_static{0.8};
  double mu_dynamic{0.6};
  double mu_nominal{0.5};

  void validate() const;
};

enum class ContactPhase
{
  Stable,
  IncipientSlip,
  Slipping,
  Recovery,
};

std::string_view to_string(ContactPhase p);

/// Inside iff f_t <= mu * f_n; the boundary counts as inside.
bool cone_check(const WrenchEstimate & w, double mu);

struct PhaseOptions
{
  double mu{0.5};
  double band{0.1};
  int window{10};
};

/**
 * @brief Contact phase from the recent tangential/normal ratio history.
 *
 * With lo = mu - band/2 and hi = mu + band/2 and r the latest ratio:
 *
 *   Stable        -> Stable if r < lo; Slipping if the last window is all
 *                    above hi; IncipientSlip otherwise.
 *   IncipientSlip -> Slipping on a drop (window peak above hi and more than
 *                    band over r) or a full window above hi; Recovery if
 *                    r < lo; otherwise IncipientSlip.
 *   Slipping      -> Recovery if r < lo; otherwise Slipping.
 *   Recovery      -> IncipientSlip if r >= lo; Stable once a full window
 *                    sits below lo; otherwise Recovery.
 *
 * Only the last `window` samples are consulted.
 */
ContactPhase classify_phase(
  std::span<const double> ratio_history, const PhaseOptions & options, ContactPhase prev);

/// Runs classify_phase over a ratio trace from a Stable start.
std::vector<ContactPhase> replay_phases(
  std::span<const double> ratios, const PhaseOptions & options);

struct ControllerConfig
{
  bool enabled{true};
  double mu{0.5};
  double band{0.2};
  double step{0.1};        ///< mm per decision
  double period{0.05};     ///< s
  double d_min{0.0};       ///< mm
  double d_max{100.0};     ///< mm
  double eps{1e-3};        ///< N; contacts at or below this normal force hold the opening
  int window{10};

  void validate() const;
};

/**
 * Requested opening. Closes by one step when both ratios exceed mu + band/2,
 * opens by one step when both are below mu - band/2, holds otherwise. The
 * result is clamped to [d_min, d_max].
 */
double controller_step(
  const ControllerConfig & cfg, const WrenchEstimate & left, const WrenchEstimate & right,
  double d_g);

/// Piecewise-linear external load; constant beyond the first and last knots.
struct LoadSchedule
{
  std::vector<std::pair<double, double>> knots;   ///< (time s, load N), strictly increasing time

  double at(double t) const;
  void validate() const;
};

/**
 * @brief Two-finger parallel gripper holding an object against gravity.
 *
 * Each fingertip is an elastomer spring: f_n = max(0, k * (object_width -
 * d_g)). The external load is shared equally by the two contacts.
 */
struct PlantConfig
{
  FrictionModel friction{};
  double stiffness{2.0};                   ///< N/mm
  double object_width{20.0};               ///< mm
  double object_mass{0.5};                 ///< kg, inertia of the sliding object
  double slip_limit{5.0};                  ///< mm of slide before contact breaks
  std::array<double, 2> finger_gain{1.0, 1.0};  ///< per-finger stiffness scale

  void validate() const;
};

enum class SensorMode
{
  PlantTruth,
  Pipeline,
};

std::string_view to_string(SensorMode m);
SensorMode sensor_mode_from_string(std::string_view name);

/// Tactile sensor model used in Pipeline mode.
struct PipelineSensorConfig
{
  GridSpec grid{16, 16, 0.5, {-3.75, -3.75}};
  SurrogateConfig surrogate = [] {
      SurrogateConfig c;
      c.falloff_sigma = 1e6;   // uniform shear
      return c;
    }();
  /// Auto-calibration campaign: objects x per_object noiseless samples.
  int calibration_objects{2};
  int calibration_per_object{20};
  double max_normal{40.0};     ///< N, calibration range
  double max_tangential{20.0};  ///< N, calibration range
  std::uint64_t seed{0};
};

struct GraspScenario
{
  PlantConfig plant{};
  LoadSchedule schedule{};
  ControllerConfig controller{};
  double initial_opening{18.0};   ///< mm
  double duration{20.0};          ///< s
  double dt{0.005};               ///< s, plant integration step
  SensorMode mode{SensorMode::PlantTruth};
  PipelineSensorConfig sensor{};

  void validate() const;
};

/// One control period. Forces are the sensed values the controller saw.
struct GraspState
{
  double time{0.0};
  double d_g{0.0};
  WrenchEstimate f_left;
  WrenchEstimate f_right;
  std::optional<double> ratio_left;
  std::optional<double> ratio_right;
  ContactPhase phase_left{ContactPhase::Stable};
  ContactPhase phase_right{ContactPhase::Stable};
  double external_load{0.0};
  double object_velocity{0.0};       ///< mm/s, positive downward
  double object_displacement{0.0};   ///< mm
  bool slipping{false};
};

struct GraspResult
{
  std::vector<GraspState> trace;
  bool failed{false};
  std::optional<double> failure_time;
  /// Longest run of consecutive control periods with either ratio above mu + band/2.
  int longest_excursion{0};
};

/// Maps the true fingertip load to the wrench the controller sees.
using WrenchSensor = std::function<WrenchEstimate(const LoadTriple & load, int finger, long period)>;

WrenchSensor plant_truth_sensor();

/// Renders each load with the surrogate, extracts features and applies a
/// RANSAC model calibrated on a noiseless campaign.
WrenchSensor pipeline_sensor(const PipelineSensorConfig & cfg);

/// Deterministic closed- or open-loop holding simulation. The trace ends at
/// the duration or at the first period after contact breaks.
GraspResult simulate_holding(const GraspScenario & scenario, const WrenchSensor & sensor);

/// Convenience overload choosing the sensor from scenario.mode.
GraspResult simulate_holding(const GraspScenario & scenario);

GraspScenario scenario_from_json(const nlohmann::json & j);
nlohmann::ordered_json to_json(const GraspScenario & s);

/// CSV: t,d_g,f_n_l,f_t_l,f_n_r,f_t_r,ratio_l,ratio_r,phase_l,phase_r,slip_flag
void write_trace_csv(std::ostream & os, const std::vector<GraspState> & trace);

/// Ratio traces for both fingers with the [mu - band/2, mu + band/2] band shaded
/// and periods above the band highlighted.
void write_ratio_svg(
  std::ostream & os, const std::vector<GraspState> & trace, double mu, double band);

}  // namespace tacforce

#endif  // TACFORCE__GRASP_HPP_
