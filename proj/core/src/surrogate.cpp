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

#include "tacforce/surrogate.hpp"

#include "tacforce/error.hpp"
#include "tacforce/field_io.hpp"
#include "tacforce/json_io.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <random>

namespace tacforce
{

namespace
{

double saturate(const SurrogateConfig & cfg, double amplitude)
{
  if (!cfg.saturation) {
    return amplitude;
  }
  const double s = *cfg.saturation;
  return s * std::tanh(amplitude / s);
}

template<typename PerCell>
VectorField2D tabulate(const GridSpec & grid, PerCell && cell)
{
  grid.validate();
  std::vector<double> u(grid.size());
  std::vector<double> v(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const Vec2 w = cell(grid.position(k));
    u[k] = w.x();
    v[k] = w.y();
  }
  return VectorField2D(grid, std::move(u), std::move(v));
}

double draw(std::mt19937_64 & rng, const Range & r)
{
  if (r.max <= r.min) {
    return r.min;
  }
  return std::uniform_real_distribution<double>(r.min, r.max)(rng);
}

}  // namespace

WrenchEstimate LoadTriple::wrench() const
{
  WrenchEstimate w;
  w.f_n = f_n;
  w.f_t = f_t.norm();
  if (w.f_t > 0.0) {
    w.f_t_direction = f_t / w.f_t;
  }
  w.f_tau = f_tau;
  return w;
}

void SurrogateConfig::validate() const
{
  if (!(k_n > 0.0 && k_t > 0.0 && k_tau > 0.0)) {
    throw InvalidArgument("surrogate gains must be positive");
  }
  if (!(falloff_sigma > 0.0)) {
    throw InvalidArgument("falloff_sigma must be positive");
  }
  if (!(noise_sigma >= 0.0)) {
    throw InvalidArgument("noise_sigma must be non-negative");
  }
  if (saturation && !(*saturation > 0.0)) {
    throw InvalidArgument("saturation level must be positive");
  }
}

double pattern_bump(double r, double radius)
{
  const double s = r / radius;
  return s * std::exp(1.0 - s);
}

VectorField2D gen_divergence_pattern(
  const SurrogateConfig & cfg, const Vec2 & center, double amplitude, double radius,
  const GridSpec & grid)
{
  (void)cfg;
  if (!(radius > 0.0)) {
    throw InvalidArgument("pattern radius must be positive");
  }
  return tabulate(
    grid, [&](const Vec2 & p) -> Vec2 {
      const Vec2 arm = p - center;
      const double r = arm.norm();
      if (r == 0.0) {
        return Vec2::Zero();
      }
      return amplitude * pattern_bump(r, radius) / r * arm;
    });
}

VectorField2D gen_unidirectional_pattern(
  const SurrogateConfig & cfg, const Vec2 & center, const Vec2 & direction, double amplitude,
  const GridSpec & grid)
{
  if (std::abs(direction.norm() - 1.0) > 1e-9) {
    throw InvalidArgument("shear direction must be a unit vector");
  }
  const double two_sigma_sq = 2.0 * cfg.falloff_sigma * cfg.falloff_sigma;
  return tabulate(
    grid, [&](const Vec2 & p) -> Vec2 {
      return amplitude * std::exp(-(p - center).squaredNorm() / two_sigma_sq) * direction;
    });
}

VectorField2D gen_rotational_pattern(
  const SurrogateConfig & cfg, const Vec2 & center, double amplitude, double radius,
  const GridSpec & grid)
{
  (void)cfg;
  if (!(radius > 0.0)) {
    throw InvalidArgument("pattern radius must be positive");
  }
  return tabulate(
    grid, [&](const Vec2 & p) -> Vec2 {
      const Vec2 arm = p - center;
      const double r = arm.norm();
      if (r == 0.0) {
        return Vec2::Zero();
      }
      return amplitude * pattern_bump(r, radius) / r * Vec2(-arm.y(), arm.x());
    });
}

VectorField2D render_load(const SurrogateConfig & cfg, const LoadTriple & load, const GridSpec & grid)
{
  cfg.validate();
  if (!(load.f_n >= 0.0) || !load.f_t.allFinite() || !std::isfinite(load.f_tau)) {
    throw InvalidArgument("load must have f_n >= 0 and finite components");
  }
  if (cfg.physical_consistency && load.f_t.norm() > cfg.mu_max * load.f_n) {
    throw InvalidArgument("tangential load exceeds mu_max * f_n");
  }

  const double shear = load.f_t.norm();
  const Vec2 direction = shear > 0.0 ? Vec2(load.f_t / shear) : Vec2(1.0, 0.0);

  VectorField2D out =
    gen_divergence_pattern(cfg, load.contact_center, saturate(cfg, cfg.k_n * load.f_n),
      load.contact_radius, grid) +
    gen_unidirectional_pattern(cfg, load.contact_center, direction,
      saturate(cfg, cfg.k_t * shear), grid) +
    gen_rotational_pattern(cfg, load.contact_center, saturate(cfg, cfg.k_tau * load.f_tau),
      load.contact_radius, grid);

  if (cfg.noise_sigma > 0.0) {
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> noise(0.0, cfg.noise_sigma);
    std::vector<double> u(out.u().begin(), out.u().end());
    std::vector<double> v(out.v().begin(), out.v().end());
    for (std::size_t k = 0; k < u.size(); ++k) {
      u[k] += noise(rng);
      v[k] += noise(rng);
    }
    out = VectorField2D(grid, std::move(u), std::move(v));
  }
  return out;
}

std::vector<CalibrationSample> gen_calibration_dataset(
  const SurrogateConfig & cfg, int n_objects, int per_object, const LoadRanges & ranges,
  std::uint64_t seed, const GridSpec & grid)
{
  if (n_objects < 1 || per_object < 1) {
    throw InvalidArgument("need at least one object and one sample per object");
  }
  cfg.validate();
  grid.validate();

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  const Vec2 centre = grid.centre();

  std::vector<CalibrationSample> out;
  out.reserve(static_cast<std::size_t>(n_objects) * per_object);
  for (int obj = 0; obj < n_objects; ++obj) {
    SurrogateConfig object_cfg = cfg;
    const double radius = draw(rng, ranges.contact_radius);
    object_cfg.falloff_sigma = draw(rng, ranges.falloff_sigma);
    object_cfg.k_n *= 1.0 + ranges.gain_perturbation * unit(rng);
    object_cfg.k_t *= 1.0 + ranges.gain_perturbation * unit(rng);
    object_cfg.k_tau *= 1.0 + ranges.gain_perturbation * unit(rng);

    for (int k = 0; k < per_object; ++k) {
      LoadTriple load;
      load.f_n = draw(rng, ranges.f_n);
      const double shear = draw(rng, ranges.f_t);
      const double angle = draw(rng, ranges.f_t_angle);
      load.f_t = shear * Vec2(std::cos(angle), std::sin(angle));
      if (cfg.physical_consistency && shear > cfg.mu_max * load.f_n) {
        load.f_t *= cfg.mu_max * load.f_n / shear;
      }
      load.f_tau = draw(rng, ranges.f_tau);
      load.contact_center = centre + ranges.center_jitter * Vec2(unit(rng), unit(rng));
      load.contact_radius = radius;

      SurrogateConfig sample_cfg = object_cfg;
      sample_cfg.seed = rng();

      CalibrationSample s{render_load(sample_cfg, load, grid), load, load.wrench(), obj, false};
      const bool corrupt = coin(rng) < ranges.outlier_fraction;
      // Draws are consumed unconditionally so the clean samples do not depend on the outlier rate.
      const double jn = unit(rng);
      const double jt = unit(rng);
      const double jtau = unit(rng);
      if (corrupt) {
        s.outlier = true;
        auto kick = [](double j, const Range & r) {
            const double span = std::max(std::abs(r.max - r.min), std::abs(r.max));
            return (j < 0.0 ? -1.0 : 1.0) * (0.5 + 0.5 * std::abs(j)) * span;
          };
        s.truth.f_n += kick(jn, ranges.f_n);
        s.truth.f_t += kick(jt, ranges.f_t);
        s.truth.f_tau += kick(jtau, ranges.f_tau);
      }
      out.push_back(std::move(s));
    }
  }
  return out;
}

double median_field_magnitude(const std::vector<CalibrationSample> & samples)
{
  std::vector<double> norms;
  for (const auto & s : samples) {
    for (std::size_t k = 0; k < s.field.size(); ++k) {
      norms.push_back(std::hypot(s.field.u()[k], s.field.v()[k]));
    }
  }
  if (norms.empty()) {
    throw InvalidArgument("median field magnitude of an empty dataset");
  }
  const auto mid = norms.begin() + static_cast<std::ptrdiff_t>(norms.size() / 2);
  std::nth_element(norms.begin(), mid, norms.end());
  return *mid;
}

void write_dataset(const std::filesystem::path & dir, const std::vector<CalibrationSample> & samples)
{
  namespace fs = std::filesystem;
  const fs::path fields = dir / "fields";
  std::error_code ec;
  fs::create_directories(fields, ec);
  if (ec) {
    throw Error("cannot create '" + fields.string() + "': " + ec.message());
  }

  nlohmann::ordered_json manifest;
  manifest["format"] = "tacforce-dataset/1";
  manifest["samples"] = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < samples.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof(name), "sample_%04zu.csv", k);
    const fs::path rel = fs::path("fields") / name;
    write_field(dir / rel, samples[k].field);

    const auto & s = samples[k];
    nlohmann::ordered_json entry;
    entry["path"] = rel.generic_string();
    entry["object_id"] = s.object_id;
    entry["outlier"] = s.outlier;
    entry["load"] = to_json(s.load);
    entry["truth"] = {{"f_n", s.truth.f_n}, {"f_t", s.truth.f_t}, {"f_tau", s.truth.f_tau}};
    manifest["samples"].push_back(std::move(entry));
  }
  write_json(dir / "manifest.json", manifest);
}

std::vector<CalibrationSample> read_dataset(const std::filesystem::path & dir)
{
  const auto manifest_path = dir / "manifest.json";
  const nlohmann::json manifest = read_json(manifest_path);
  std::vector<CalibrationSample> out;
  try {
    const auto & list = manifest.at("samples");
    out.reserve(list.size());
    std::size_t index = 0;
    for (const auto & entry : list) {
      ++index;
      LoadTriple load = load_from_json(entry.at("load"));
      VectorField2D field = read_vector_field(dir / entry.at("path").get<std::string>());
      WrenchEstimate truth = load.wrench();
      truth.f_n = entry.at("truth").at("f_n").get<double>();
      truth.f_t = entry.at("truth").at("f_t").get<double>();
      truth.f_tau = entry.at("truth").at("f_tau").get<double>();
      if (!out.empty() && !(out.front().field.grid() == field.grid())) {
        throw ParseError(manifest_path.string(), 0,
                "sample " + std::to_string(index) + " grid differs from the first sample");
      }
      out.push_back(
        {std::move(field), load, truth, entry.at("object_id").get<int>(),
          entry.value("outlier", false)});
    }
  } catch (const nlohmann::json::exception & e) {
    throw ParseError(manifest_path.string(), 0, e.what());
  }
  return out;
}

std::uint64_t dataset_hash(const std::filesystem::path & dir)
{
  std::uint64_t h = 1469598103934665603ull;
  auto feed = [&h](const std::filesystem::path & p) {
      std::ifstream is(p, std::ios::binary);
      if (!is) {
        throw Error("cannot open '" + p.string() + "'");
      }
      for (std::istreambuf_iterator<char> it(is), end; it != end; ++it) {
        h ^= static_cast<unsigned char>(*it);
        h *= 1099511628211ull;
      }
    };
  feed(dir / "manifest.json");
  const nlohmann::json manifest = read_json(dir / "manifest.json");
  for (const auto & entry : manifest.at("samples")) {
    feed(dir / entry.at("path").get<std::string>());
  }
  return h;
}

}  // namespace tacforce
