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

#include "tacforce/grasp.hpp"

#include "tacforce/error.hpp"
#include "tacforce/features.hpp"
#include "tacforce/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

namespace tacforce
{

namespace
{

constexpr double kGravityMm = 9806.65;   // mm/s^2 per (N/kg)

void require(bool ok, const std::string & what)
{
  if (!ok) {
    throw InvalidArgument(what);
  }
}

bool finite_positive(double x)
{
  return std::isfinite(x) && x > 0.0;
}

std::optional<double> ratio_of(const WrenchEstimate & w, double eps)
{
  if (!(w.f_n > eps)) {
    return std::nullopt;
  }
  return w.f_t / w.f_n;
}

std::string fmt(double x)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

}  // namespace

void FrictionModel::validate() const
{
  require(finite_positive(mu_static), "mu_static must be positive");
  require(finite_positive(mu_dynamic), "mu_dynamic must be positive");
  require(mu_dynamic < mu_static, "mu_dynamic must be below mu_static");
  require(finite_positive(mu_nominal), "mu_nominal must be positive");
}

std::string_view to_string(ContactPhase p)
{
  switch (p) {
    case ContactPhase::Stable:
      return "stable";
    case ContactPhase::IncipientSlip:
      return "incipient";
    case ContactPhase::Slipping:
      return "slipping";
    case ContactPhase::Recovery:
      return "recovery";
  }
  return "unknown";
}

bool cone_check(const WrenchEstimate & w, double mu)
{
  if (w.f_n <= 0.0) {
    return w.f_t <= 0.0;
  }
  return w.f_t <= mu * w.f_n;
}

ContactPhase classify_phase(
  std::span<const double> ratio_history, const PhaseOptions & options, ContactPhase prev)
{
  require(!ratio_history.empty(), "phase classification needs a nonempty ratio history");
  require(options.window >= 1, "phase window must be at least 1");
  require(options.band > 0.0, "band must be positive");

  const double lo = options.mu - 0.5 * options.band;
  const double hi = options.mu + 0.5 * options.band;
  const std::size_t w = std::min(ratio_history.size(), static_cast<std::size_t>(options.window));
  const auto recent = ratio_history.last(w);
  const bool full = w == static_cast<std::size_t>(options.window);
  const double r = recent.back();
  const double peak = *std::max_element(recent.begin(), recent.end());
  const bool all_above = full && std::all_of(recent.begin(), recent.end(), [hi](double x) {return x > hi;});
  const bool all_below = full && std::all_of(recent.begin(), recent.end(), [lo](double x) {return x < lo;});

  switch (prev) {
    case ContactPhase::Stable:
      if (r < lo) {
        return ContactPhase::Stable;
      }
      return all_above ? ContactPhase::Slipping : ContactPhase::IncipientSlip;
    case ContactPhase::IncipientSlip:
      if ((peak > hi && peak - r > options.band) || all_above) {
        return ContactPhase::Slipping;
      }
      return r < lo ? ContactPhase::Recovery : ContactPhase::IncipientSlip;
    case ContactPhase::Slipping:
      return r < lo ? ContactPhase::Recovery : ContactPhase::Slipping;
    case ContactPhase::Recovery:
      if (r >= lo) {
        return ContactPhase::IncipientSlip;
      }
      return all_below ? ContactPhase::Stable : ContactPhase::Recovery;
  }
  return prev;
}

std::vector<ContactPhase> replay_phases(std::span<const double> ratios, const PhaseOptions & options)
{
  std::vector<ContactPhase> out;
  out.reserve(ratios.size());
  ContactPhase phase = ContactPhase::Stable;
  for (std::size_t k = 0; k < ratios.size(); ++k) {
    phase = classify_phase(ratios.first(k + 1), options, phase);
    out.push_back(phase);
  }
  return out;
}

void ControllerConfig::validate() const
{
  require(finite_positive(mu), "controller mu must be positive");
  require(finite_positive(band), "controller band must be positive");
  require(finite_positive(step), "controller step must be positive");
  require(finite_positive(period), "controller period must be positive");
  require(std::isfinite(d_min) && std::isfinite(d_max) && d_min <= d_max,
    "controller limits need d_min <= d_max");
  require(eps >= 0.0, "controller eps must be non-negative");
  require(window >= 1, "controller window must be at least 1");
}

double controller_step(
  const ControllerConfig & cfg, const WrenchEstimate & left, const WrenchEstimate & right,
  double d_g)
{
  double d_r = d_g;
  const auto rl = ratio_of(left, cfg.eps);
  const auto rr = ratio_of(right, cfg.eps);
  if (rl && rr) {
    const double hi = cfg.mu + 0.5 * cfg.band;
    const double lo = cfg.mu - 0.5 * cfg.band;
    if (*rl > hi && *rr > hi) {
      d_r = d_g - cfg.step;
    } else if (*rl < lo && *rr < lo) {
      d_r = d_g + cfg.step;
    }
  }
  return std::clamp(d_r, cfg.d_min, cfg.d_max);
}

double LoadSchedule::at(double t) const
{
  if (knots.empty()) {
    return 0.0;
  }
  if (t <= knots.front().first) {
    return knots.front().second;
  }
  if (t >= knots.back().first) {
    return knots.back().second;
  }
  const auto it = std::upper_bound(
    knots.begin(), knots.end(), t, [](double v, const auto & k) {return v < k.first;});
  const auto & [t1, l1] = *it;
  const auto & [t0, l0] = *(it - 1);
  return l0 + (l1 - l0) * (t - t0) / (t1 - t0);
}

void LoadSchedule::validate() const
{
  for (std::size_t k = 0; k < knots.size(); ++k) {
    require(std::isfinite(knots[k].first) && std::isfinite(knots[k].second),
      "load schedule knots must be finite");
    require(knots[k].second >= 0.0, "load schedule values must be non-negative");
    if (k > 0) {
      require(knots[k].first > knots[k - 1].first, "load schedule times must increase");
    }
  }
}

void PlantConfig::validate() const
{
  friction.validate();
  require(finite_positive(stiffness), "plant stiffness must be positive");
  require(finite_positive(object_mass), "object mass must be positive");
  require(finite_positive(object_width), "object width must be positive");
  require(finite_positive(slip_limit), "slip limit must be positive");
  require(finite_positive(finger_gain[0]) && finite_positive(finger_gain[1]),
    "finger gains must be positive");
}

std::string_view to_string(SensorMode m)
{
  return m == SensorMode::PlantTruth ? "plant-truth" : "pipeline";
}

SensorMode sensor_mode_from_string(std::string_view name)
{
  if (name == "plant-truth") {
    return SensorMode::PlantTruth;
  }
  if (name == "pipeline") {
    return SensorMode::Pipeline;
  }
  throw InvalidArgument("unknown sensor mode '" + std::string(name) + "' (plant-truth, pipeline)");
}

void GraspScenario::validate() const
{
  plant.validate();
  schedule.validate();
  controller.validate();
  require(finite_positive(duration), "duration must be positive");
  require(finite_positive(dt), "dt must be positive");
  require(dt <= controller.period, "dt must not exceed the control period");
  require(std::isfinite(initial_opening), "initial opening must be finite");
  require(initial_opening >= controller.d_min && initial_opening <= controller.d_max,
    "initial opening lies outside the actuator limits");
}

WrenchSensor plant_truth_sensor()
{
  return [](const LoadTriple & load, int, long) {return load.wrench();};
}

WrenchSensor pipeline_sensor(const PipelineSensorConfig & cfg)
{
  cfg.grid.validate();
  cfg.surrogate.validate();
  require(cfg.calibration_objects >= 1 && cfg.calibration_per_object >= 1,
    "sensor calibration needs at least one sample");

  SurrogateConfig clean = cfg.surrogate;
  clean.noise_sigma = 0.0;
  LoadRanges ranges;
  ranges.f_n = {0.0, cfg.max_normal};
  ranges.f_t = {0.0, cfg.max_tangential};
  ranges.f_tau = {-5.0, 5.0};
  ranges.falloff_sigma = {clean.falloff_sigma, clean.falloff_sigma};
  const auto campaign = gen_calibration_dataset(
    clean, cfg.calibration_objects, cfg.calibration_per_object, ranges, cfg.seed, cfg.grid);

  std::vector<CvSample> samples;
  samples.reserve(campaign.size());
  for (const auto & s : campaign) {
    samples.push_back({compute_features(s.field), {}, s.truth, s.object_id});
  }
  auto model = std::make_shared<WrenchModel>(fit_wrench_model(samples, ModelSpec::ransac_linear()));

  return [cfg, model](const LoadTriple & load, int finger, long period) {
           SurrogateConfig sc = cfg.surrogate;
           sc.seed = cfg.surrogate.seed + 2 * static_cast<std::uint64_t>(period) +
             static_cast<std::uint64_t>(finger);
           LoadTriple centred = load;
           centred.contact_center = cfg.grid.centre();
           return model->predict(compute_features(render_load(sc, centred, cfg.grid)));
         };
}

GraspResult simulate_holding(const GraspScenario & scenario, const WrenchSensor & sensor)
{
  scenario.validate();
  const PlantConfig & plant = scenario.plant;
  const ControllerConfig & ctl = scenario.controller;
  const PhaseOptions phase_opts{ctl.mu, ctl.band, ctl.window};
  const double hi = ctl.mu + 0.5 * ctl.band;

  const auto substeps = std::max<long>(1, std::lround(ctl.period / scenario.dt));
  const double h = ctl.period / static_cast<double>(substeps);
  const auto periods = static_cast<long>(std::floor(scenario.duration / ctl.period + 1e-9));

  double d_g = scenario.initial_opening;
  double velocity = 0.0;
  double displacement = 0.0;
  bool slipping = false;

  auto normal_forces = [&](double opening) {
      std::array<double, 2> fn{};
      for (int f = 0; f < 2; ++f) {
        fn[f] = std::max(0.0, plant.stiffness * plant.finger_gain[f] * (plant.object_width - opening));
      }
      return fn;
    };
  auto sticks = [&](double load, const std::array<double, 2> & fn) {
      return 0.5 * load <= plant.friction.mu_static * fn[0] &&
             0.5 * load <= plant.friction.mu_static * fn[1];
    };

  GraspResult result;
  std::array<std::vector<double>, 2> history;
  std::array<ContactPhase, 2> phase{ContactPhase::Stable, ContactPhase::Stable};
  int excursion = 0;

  for (long p = 0; p <= periods; ++p) {
    const double t = static_cast<double>(p) * ctl.period;
    const double load = scenario.schedule.at(t);
    const auto fn = normal_forces(d_g);
    const bool slip_now = slipping || !sticks(load, fn);

    GraspState st;
    st.time = t;
    st.d_g = d_g;
    st.external_load = load;
    st.object_velocity = velocity;
    st.object_displacement = displacement;
    st.slipping = slip_now;

    std::array<WrenchEstimate, 2> sensed;
    for (int f = 0; f < 2; ++f) {
      LoadTriple truth;
      truth.f_n = fn[f];
      const double ft = slip_now ? plant.friction.mu_dynamic * fn[f] : 0.5 * load;
      truth.f_t = Vec2(0.0, -ft);
      sensed[f] = sensor(truth, f, p);
      const auto ratio = ratio_of(sensed[f], ctl.eps);
      if (ratio) {
        history[f].push_back(*ratio);
        phase[f] = classify_phase(history[f], phase_opts, phase[f]);
      }
      (f == 0 ? st.ratio_left : st.ratio_right) = ratio;
    }
    st.f_left = sensed[0];
    st.f_right = sensed[1];
    st.phase_left = phase[0];
    st.phase_right = phase[1];

    const bool above = (st.ratio_left && *st.ratio_left > hi) || (st.ratio_right && *st.ratio_right > hi);
    excursion = above ? excursion + 1 : 0;
    result.longest_excursion = std::max(result.longest_excursion, excursion);
    result.trace.push_back(st);

    if (result.failed || p == periods) {
      break;
    }
    if (ctl.enabled) {
      d_g = controller_step(ctl, sensed[0], sensed[1], d_g);
    }

    for (long s = 0; s < substeps; ++s) {
      const double ts = t + static_cast<double>(s + 1) * h;
      const double l = scenario.schedule.at(ts);
      const auto f = normal_forces(d_g);
      if (!slipping && !sticks(l, f)) {
        slipping = true;
      }
      if (!slipping) {
        continue;
      }
      const double friction = plant.friction.mu_dynamic * (f[0] + f[1]);
      velocity += (l - friction) / plant.object_mass * 1e3 * h;
      if (velocity <= 0.0) {
        velocity = 0.0;
        if (sticks(l, f)) {
          slipping = false;
        }
      }
      displacement += velocity * h;
      if (displacement > plant.slip_limit) {
        result.failed = true;
        result.failure_time = ts;
        break;
      }
    }
  }
  return result;
}

GraspResult simulate_holding(const GraspScenario & scenario)
{
  if (scenario.mode == SensorMode::Pipeline) {
    return simulate_holding(scenario, pipeline_sensor(scenario.sensor));
  }
  return simulate_holding(scenario, plant_truth_sensor());
}

GraspScenario scenario_from_json(const nlohmann::json & j)
{
  GraspScenario s;
  try {
    if (j.contains("plant")) {
      const auto & p = j.at("plant");
      s.plant.friction.mu_static = p.value("mu_static", s.plant.friction.mu_static);
      s.plant.friction.mu_dynamic = p.value("mu_dynamic", s.plant.friction.mu_dynamic);
      s.plant.friction.mu_nominal = p.value("mu_nominal", s.plant.friction.mu_nominal);
      s.plant.stiffness = p.value("stiffness", s.plant.stiffness);
      s.plant.object_width = p.value("object_width", s.plant.object_width);
      s.plant.object_mass = p.value("object_mass", s.plant.object_mass);
      s.plant.slip_limit = p.value("slip_limit", s.plant.slip_limit);
      if (p.contains("finger_gain")) {
        const Vec2 g = vec2_from_json(p.at("finger_gain"));
        s.plant.finger_gain = {g.x(), g.y()};
      }
    }
    s.controller.mu = s.plant.friction.mu_nominal;
    if (j.contains("controller")) {
      const auto & c = j.at("controller");
      s.controller.enabled = c.value("enabled", s.controller.enabled);
      s.controller.mu = c.value("mu", s.controller.mu);
      s.controller.band = c.value("band", s.controller.band);
      s.controller.step = c.value("step", s.controller.step);
      s.controller.period = c.value("period", s.controller.period);
      s.controller.d_min = c.value("d_min", s.controller.d_min);
      s.controller.d_max = c.value("d_max", s.controller.d_max);
      s.controller.eps = c.value("eps", s.controller.eps);
      s.controller.window = c.value("window", s.controller.window);
    }
    for (const auto & knot : j.at("schedule")) {
      if (!knot.is_array() || knot.size() != 2) {
        throw InvalidArgument("schedule entries must be [time, load] pairs");
      }
      s.schedule.knots.emplace_back(knot[0].get<double>(), knot[1].get<double>());
    }
    s.initial_opening = j.value("initial_opening", s.initial_opening);
    s.duration = j.value("duration", s.duration);
    s.dt = j.value("dt", s.dt);
    s.mode = sensor_mode_from_string(j.value("mode", std::string(to_string(s.mode))));
    if (j.contains("sensor")) {
      const auto & c = j.at("sensor");
      if (c.contains("grid")) {
        s.sensor.grid = grid_from_json(c.at("grid"));
      }
      if (c.contains("surrogate")) {
        s.sensor.surrogate = surrogate_from_json(c.at("surrogate"));
      }
      s.sensor.calibration_objects = c.value("calibration_objects", s.sensor.calibration_objects);
      s.sensor.calibration_per_object =
        c.value("calibration_per_object", s.sensor.calibration_per_object);
      s.sensor.max_normal = c.value("max_normal", s.sensor.max_normal);
      s.sensor.max_tangential = c.value("max_tangential", s.sensor.max_tangential);
      s.sensor.seed = c.value("seed", s.sensor.seed);
    }
  } catch (const nlohmann::json::exception & e) {
    throw InvalidArgument(std::string("malformed scenario: ") + e.what());
  }
  s.validate();
  return s;
}

nlohmann::ordered_json to_json(const GraspScenario & s)
{
  nlohmann::ordered_json j;
  j["plant"] = {
    {"mu_static", s.plant.friction.mu_static},
    {"mu_dynamic", s.plant.friction.mu_dynamic},
    {"mu_nominal", s.plant.friction.mu_nominal},
    {"stiffness", s.plant.stiffness},
    {"object_width", s.plant.object_width},
    {"object_mass", s.plant.object_mass},
    {"slip_limit", s.plant.slip_limit},
    {"finger_gain", {s.plant.finger_gain[0], s.plant.finger_gain[1]}},
  };
  nlohmann::ordered_json sched = nlohmann::ordered_json::array();
  for (const auto & [t, l] : s.schedule.knots) {
    sched.push_back({t, l});
  }
  j["schedule"] = sched;
  j["controller"] = {
    {"enabled", s.controller.enabled},
    {"mu", s.controller.mu},
    {"band", s.controller.band},
    {"step", s.controller.step},
    {"period", s.controller.period},
    {"d_min", s.controller.d_min},
    {"d_max", s.controller.d_max},
    {"eps", s.controller.eps},
    {"window", s.controller.window},
  };
  j["initial_opening"] = s.initial_opening;
  j["duration"] = s.duration;
  j["dt"] = s.dt;
  j["mode"] = to_string(s.mode);
  j["sensor"] = {
    {"grid", to_json(s.sensor.grid)},
    {"surrogate", to_json(s.sensor.surrogate)},
    {"calibration_objects", s.sensor.calibration_objects},
    {"calibration_per_object", s.sensor.calibration_per_object},
    {"max_normal", s.sensor.max_normal},
    {"max_tangential", s.sensor.max_tangential},
    {"seed", s.sensor.seed},
  };
  return j;
}

void write_trace_csv(std::ostream & os, const std::vector<GraspState> & trace)
{
  os << "t,d_g,f_n_l,f_t_l,f_n_r,f_t_r,ratio_l,ratio_r,phase_l,phase_r,slip_flag\n";
  auto opt = [](const std::optional<double> & r) {return r ? fmt(*r) : std::string();};
  for (const auto & s : trace) {
    os << fmt(s.time) << ',' << fmt(s.d_g) << ',' << fmt(s.f_left.f_n) << ',' << fmt(s.f_left.f_t)
       << ',' << fmt(s.f_right.f_n) << ',' << fmt(s.f_right.f_t) << ',' << opt(s.ratio_left) << ','
       << opt(s.ratio_right) << ',' << to_string(s.phase_left) << ',' << to_string(s.phase_right)
       << ',' << (s.slipping ? 1 : 0) << '\n';
  }
}

void write_ratio_svg(
  std::ostream & os, const std::vector<GraspState> & trace, double mu, double band)
{
  constexpr double kW = 800.0;
  constexpr double kH = 400.0;
  constexpr double kLeft = 60.0;
  constexpr double kRight = 20.0;
  constexpr double kTop = 20.0;
  constexpr double kBottom = 40.0;
  const double lo = mu - 0.5 * band;
  const double hi = mu + 0.5 * band;

  const double t0 = trace.empty() ? 0.0 : trace.front().time;
  const double t1 = trace.empty() ? 1.0 : std::max(trace.back().time, t0 + 1e-9);
  double ymax = 1.5 * hi;
  for (const auto & s : trace) {
    for (const auto & r : {s.ratio_left, s.ratio_right}) {
      if (r) {
        ymax = std::max(ymax, *r);
      }
    }
  }
  ymax = std::min(ymax * 1.05, 3.0 * hi);

  auto px = [&](double t) {return kLeft + (t - t0) / (t1 - t0) * (kW - kLeft - kRight);};
  auto py = [&](double r) {
      return kTop + (1.0 - std::clamp(r, 0.0, ymax) / ymax) * (kH - kTop - kBottom);
    };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
     << "\" viewBox=\"0 0 " << kW << ' ' << kH << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<rect x=\"" << fmt(kLeft) << "\" y=\"" << fmt(py(hi)) << "\" width=\"" << fmt(kW - kLeft - kRight)
     << "\" height=\"" << fmt(py(lo) - py(hi)) << "\" fill=\"#cfe3f7\" opacity=\"0.7\"/>\n";

  // Shade periods where either ratio sits above the band.
  const double cell = trace.size() > 1 ? px(trace[1].time) - px(trace[0].time) : 1.0;
  for (const auto & s : trace) {
    const bool above = (s.ratio_left && *s.ratio_left > hi) || (s.ratio_right && *s.ratio_right > hi);
    if (above) {
      os << "<rect x=\"" << fmt(px(s.time) - 0.5 * cell) << "\" y=\"" << fmt(kTop) << "\" width=\""
         << fmt(cell) << "\" height=\"" << fmt(kH - kTop - kBottom)
         << "\" fill=\"#f4b6b6\" opacity=\"0.6\"/>\n";
    }
  }

  for (int finger = 0; finger < 2; ++finger) {
    os << "<polyline fill=\"none\" stroke=\"" << (finger == 0 ? "#1f77b4" : "#ff7f0e")
       << "\" stroke-width=\"1.5\" points=\"";
    for (const auto & s : trace) {
      const auto & r = finger == 0 ? s.ratio_left : s.ratio_right;
      if (r) {
        os << fmt(px(s.time)) << ',' << fmt(py(*r)) << ' ';
      }
    }
    os << "\"/>\n";
  }

  os << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(py(mu)) << "\" x2=\"" << fmt(kW - kRight)
     << "\" y2=\"" << fmt(py(mu)) << "\" stroke=\"#555\" stroke-dasharray=\"4 3\"/>\n";
  os << "<rect x=\"" << fmt(kLeft) << "\" y=\"" << fmt(kTop) << "\" width=\"" << fmt(kW - kLeft - kRight)
     << "\" height=\"" << fmt(kH - kTop - kBottom) << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << fmt(kLeft) << "\" y=\"" << fmt(kH - 10) << "\" font-size=\"12\">t = "
     << fmt(t0) << " s</text>\n";
  os << "<text x=\"" << fmt(kW - kRight) << "\" y=\"" << fmt(kH - 10)
     << "\" font-size=\"12\" text-anchor=\"end\">t = " << fmt(t1) << " s</text>\n";
  os << "<text x=\"5\" y=\"" << fmt(py(hi) - 3) << "\" font-size=\"11\">" << fmt(hi) << "</text>\n";
  os << "<text x=\"5\" y=\"" << fmt(py(lo) + 12) << "\" font-size=\"11\">" << fmt(lo) << "</text>\n";
  os << "<text x=\"" << fmt(kW - kRight - 5) << "\" y=\"" << fmt(kTop + 15)
     << "\" font-size=\"12\" text-anchor=\"end\">f_t / f_n: left (blue), right (orange)</text>\n";
  os << "</svg>\n";
}

}  // namespace tacforce
