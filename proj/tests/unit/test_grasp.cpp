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

#include "tacforce/error.hpp"
#include "tacforce/grasp.hpp"

#include <gtest/gtest.h>

#include <sstream>

namespace tacforce
{
namespace
{

WrenchEstimate wrench(double fn, double ft)
{
  return WrenchEstimate{fn, ft, std::nullopt, 0.0};
}

TEST(Cone, BoundaryCountsAsInside)
{
  EXPECT_TRUE(cone_check(wrench(10.0, 5.0), 0.5));
  EXPECT_FALSE(cone_check(wrench(10.0, 5.0 + 1e-12), 0.5));
  EXPECT_TRUE(cone_check(wrench(0.0, 0.0), 0.5));
  EXPECT_FALSE(cone_check(wrench(0.0, 0.1), 0.5));
}

TEST(Controller, ClosesOpensAndHolds)
{
  const ControllerConfig cfg;
  EXPECT_DOUBLE_EQ(controller_step(cfg, wrench(10, 7), wrench(10, 7), 10.0), 9.9);
  EXPECT_DOUBLE_EQ(controller_step(cfg, wrench(10, 3), wrench(10, 3), 10.0), 10.1);
  EXPECT_EQ(controller_step(cfg, wrench(10, 5), wrench(10, 5), 10.0), 10.0);
  // Disagreeing fingers hold.
  EXPECT_EQ(controller_step(cfg, wrench(10, 7), wrench(10, 3), 10.0), 10.0);
  // No contact holds.
  EXPECT_EQ(controller_step(cfg, wrench(0.0, 0.0), wrench(10, 7), 10.0), 10.0);
}

TEST(Controller, RespectsLimits)
{
  ControllerConfig cfg;
  cfg.d_min = 5.0;
  cfg.d_max = 6.0;
  EXPECT_EQ(controller_step(cfg, wrench(10, 9), wrench(10, 9), 5.05), 5.0);
  EXPECT_EQ(controller_step(cfg, wrench(10, 1), wrench(10, 1), 5.95), 6.0);
}

TEST(Controller, IsMonotoneInRatio)
{
  const ControllerConfig cfg;
  double prev = controller_step(cfg, wrench(10, 0.0), wrench(10, 0.0), 12.0);
  for (double ft = 0.1; ft <= 10.0; ft += 0.1) {
    const double d = controller_step(cfg, wrench(10, ft), wrench(10, ft), 12.0);
    EXPECT_LE(d, prev);
    prev = d;
  }
}

TEST(Controller, BandIsAFixedPoint)
{
  const ControllerConfig cfg;
  for (double r = 0.41; r < 0.6; r += 0.01) {
    EXPECT_EQ(controller_step(cfg, wrench(20, 20 * r), wrench(20, 20 * r), 7.0), 7.0) << r;
  }
}

TEST(Phases, ScriptedExcursionAndReturn)
{
  const PhaseOptions opt{0.5, 0.1, 3};
  const std::vector<double> ratios{0.3, 0.3, 0.52, 0.7, 0.8, 0.9, 0.9, 0.4, 0.4, 0.4, 0.4};
  const auto p = replay_phases(ratios, opt);
  using P = ContactPhase;
  const std::vector<P> want{P::Stable, P::Stable, P::IncipientSlip, P::IncipientSlip,
    P::IncipientSlip, P::Slipping, P::Slipping, P::Recovery, P::Recovery, P::Stable, P::Stable};
  EXPECT_EQ(p, want);
}

TEST(Phases, SuddenDropFromPeakIsSlip)
{
  const PhaseOptions opt{0.5, 0.1, 10};
  const std::vector<double> ratios{0.3, 0.5, 0.62, 0.5};
  EXPECT_EQ(replay_phases(ratios, opt).back(), ContactPhase::Slipping);
}

TEST(Phases, ReplayIsDeterministic)
{
  std::vector<double> ratios;
  for (int k = 0; k < 200; ++k) {
    ratios.push_back(0.5 + 0.2 * std::sin(0.1 * k) + 0.05 * std::sin(1.3 * k));
  }
  EXPECT_EQ(replay_phases(ratios, {}), replay_phases(ratios, {}));
}

TEST(Phases, NamesAreStable)
{
  EXPECT_EQ(to_string(ContactPhase::Stable), "stable");
  EXPECT_EQ(to_string(ContactPhase::IncipientSlip), "incipient");
  EXPECT_EQ(to_string(ContactPhase::Slipping), "slipping");
  EXPECT_EQ(to_string(ContactPhase::Recovery), "recovery");
}

TEST(Schedule, InterpolatesAndClamps)
{
  LoadSchedule s{{{1.0, 2.0}, {3.0, 6.0}}};
  EXPECT_EQ(s.at(0.0), 2.0);
  EXPECT_EQ(s.at(2.0), 4.0);
  EXPECT_EQ(s.at(9.0), 6.0);
  LoadSchedule bad{{{1.0, 2.0}, {1.0, 6.0}}};
  EXPECT_THROW(bad.validate(), InvalidArgument);
}

GraspScenario ramp(bool controller)
{
  GraspScenario s = scenario_from_json(nlohmann::json::parse(R"({
    "schedule": [[0.0, 2.0], [20.0, 12.0]],
    "controller": {"band": 0.2, "d_max": 40.0},
    "initial_opening": 18.5
  })"));
  s.controller.enabled = controller;
  return s;
}

TEST(Holding, ControllerKeepsRampedObject)
{
  const auto r = simulate_holding(ramp(true));
  EXPECT_FALSE(r.failed);
  EXPECT_LE(r.longest_excursion, 2);
  EXPECT_EQ(r.trace.size(), 401u);
  for (const auto & st : r.trace) {
    EXPECT_FALSE(st.slipping) << st.time;
  }
}

TEST(Holding, OpenLoopDropsRampedObject)
{
  const auto r = simulate_holding(ramp(false));
  ASSERT_TRUE(r.failed);
  ASSERT_TRUE(r.failure_time.has_value());
  EXPECT_GT(*r.failure_time, 0.0);
  EXPECT_LT(*r.failure_time, 20.0);
  EXPECT_NEAR(r.trace.back().time, *r.failure_time, 0.05 + 1e-9);
}

TEST(Holding, IsDeterministic)
{
  const auto a = simulate_holding(ramp(true));
  const auto b = simulate_holding(ramp(true));
  std::ostringstream ta;
  std::ostringstream tb;
  write_trace_csv(ta, a.trace);
  write_trace_csv(tb, b.trace);
  EXPECT_EQ(ta.str(), tb.str());
}

TEST(Holding, ConstantLoadInsideBandIsAFixedPoint)
{
  GraspScenario s = ramp(true);
  // f_n = 2 * (20 - 17.5) = 5 N per finger, load 5 N shared: ratio 0.5.
  s.schedule = LoadSchedule{{{0.0, 5.0}}};
  s.initial_opening = 17.5;
  s.duration = 2.0;
  const auto r = simulate_holding(s);
  for (const auto & st : r.trace) {
    EXPECT_DOUBLE_EQ(st.d_g, 17.5);
  }
}

TEST(Scenario, JsonRoundTrip)
{
  GraspScenario s = ramp(true);
  s.plant.finger_gain = {1.0, 0.9};
  s.mode = SensorMode::Pipeline;
  const auto back = scenario_from_json(nlohmann::json::parse(to_json(s).dump()));
  EXPECT_EQ(to_json(back).dump(), to_json(s).dump());
}

TEST(Scenario, RejectsMalformedInput)
{
  EXPECT_THROW(scenario_from_json(nlohmann::json::parse(R"({"schedule": [[0, 1, 2]]})")),
    InvalidArgument);
  EXPECT_THROW(scenario_from_json(nlohmann::json::parse(R"({"duration": 1})")), InvalidArgument);
  EXPECT_THROW(
    scenario_from_json(nlohmann::json::parse(R"({"schedule": [[0, 1]], "mode": "oracle"})")),
    InvalidArgument);
}

TEST(Trace, CsvLeavesUndefinedRatiosEmpty)
{
  GraspState st;
  st.d_g = 18.0;
  std::ostringstream os;
  write_trace_csv(os, {st});
  const std::string out = os.str();
  EXPECT_EQ(out.substr(0, out.find('\n')),
    "t,d_g,f_n_l,f_t_l,f_n_r,f_t_r,ratio_l,ratio_r,phase_l,phase_r,slip_flag");
  EXPECT_NE(out.find(",,stable,stable,"), std::string::npos);
}

TEST(Trace, SvgIsWellFormed)
{
  const auto r = simulate_holding(ramp(false));
  std::ostringstream os;
  write_ratio_svg(os, r.trace, 0.5, 0.2);
  const std::string svg = os.str();
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_NE(svg.find("polyline"), std::string::npos);
}

TEST(Cone, WorkedExamples)
{
  EXPECT_TRUE(cone_check(wrench(10, 1), 0.5));
  EXPECT_TRUE(cone_check(wrench(10, 5), 0.5));
  EXPECT_FALSE(cone_check(wrench(10, 6), 0.5));
}

TEST(Phases, LowHistoryStaysStable)
{
  const std::vector<double> h(10, 0.1);
  EXPECT_EQ(classify_phase(h, {0.5, 0.1, 10}, ContactPhase::Stable), ContactPhase::Stable);
}

TEST(Phases, SlippingReturnsThroughRecoveryAfterAFullWindow)
{
  const PhaseOptions opt{0.5, 0.1, 4};
  std::vector<double> h{0.8, 0.8, 0.8, 0.8};
  ContactPhase p = ContactPhase::Slipping;
  std::vector<ContactPhase> seen;
  for (int k = 0; k < 4; ++k) {
    h.push_back(0.3);
    p = classify_phase(h, opt, p);
    seen.push_back(p);
  }
  using P = ContactPhase;
  EXPECT_EQ(seen, (std::vector<P>{P::Recovery, P::Recovery, P::Recovery, P::Stable}));
}

TEST(Holding, ConstantLoadInsideTheConeStaysStable)
{
  GraspScenario s = ramp(false);
  s.schedule = LoadSchedule{{{0.0, 2.0}}};
  s.initial_opening = 17.5;
  s.duration = 2.0;
  const auto r = simulate_holding(s);
  ASSERT_FALSE(r.failed);
  for (const auto & st : r.trace) {
    ASSERT_TRUE(st.ratio_left.has_value());
    EXPECT_DOUBLE_EQ(*st.ratio_left, 0.2);
    EXPECT_EQ(st.phase_left, ContactPhase::Stable);
    EXPECT_EQ(st.phase_right, ContactPhase::Stable);
  }
}

TEST(Holding, PipelineTracksPlantTruthOnABenignScenario)
{
  GraspScenario s = ramp(true);
  s.duration = 5.0;
  const auto truth = simulate_holding(s);
  s.mode = SensorMode::Pipeline;
  const auto pipe = simulate_holding(s);
  ASSERT_FALSE(truth.failed);
  ASSERT_FALSE(pipe.failed);
  ASSERT_EQ(truth.trace.size(), pipe.trace.size());
  double estimator = 0.0;
  double opening = 0.0;
  for (std::size_t k = 0; k < truth.trace.size(); ++k) {
    const auto & st = pipe.trace[k];
    const double actual = s.plant.stiffness * (s.plant.object_width - st.d_g);
    estimator = std::max(estimator, std::abs(st.f_left.f_n - actual));
    opening = std::max(opening, std::abs(st.d_g - truth.trace[k].d_g));
  }
  EXPECT_LT(estimator, 1e-3);
  EXPECT_LE(opening, 2.0 * s.controller.step + 1e-9);
}

}  // namespace
}  // namespace tacforce
