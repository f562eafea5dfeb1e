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

#include "tacforce/json_io.hpp"

#include "tacforce/error.hpp"

#include <fstream>

namespace tacforce
{

nlohmann::json read_json(const std::filesystem::path & path)
{
  std::ifstream is(path);
  if (!is) {
    throw Error("cannot open '" + path.string() + "' for reading");
  }
  try {
    return nlohmann::json::parse(is);
  } catch (const nlohmann::json::parse_error & e) {
    // nlohmann reports a byte offset; recover the line for the message.
    std::ifstream again(path);
    std::size_t line = 1;
    std::size_t pos = 0;
    for (char c; pos < e.byte && again.get(c); ++pos) {
      if (c == '\n') {
        ++line;
      }
    }
    throw ParseError(path.string(), line, e.what());
  }
}

void write_json(const std::filesystem::path & path, const nlohmann::ordered_json & doc)
{
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw Error("cannot open '" + path.string() + "' for writing");
  }
  os << doc.dump(2) << '\n';
}

nlohmann::ordered_json to_json(const Vec2 & v)
{
  return nlohmann::ordered_json::array({v.x(), v.y()});
}

Vec2 vec2_from_json(const nlohmann::json & j)
{
  if (!j.is_array() || j.size() != 2) {
    throw InvalidArgument("expected a 2-element array");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

nlohmann::ordered_json to_json(const GridSpec & g)
{
  nlohmann::ordered_json j;
  j["nx"] = g.nx;
  j["ny"] = g.ny;
  j["spacing"] = g.spacing;
  j["origin"] = to_json(g.origin);
  return j;
}

GridSpec grid_from_json(const nlohmann::json & j)
{
  GridSpec g;
  g.nx = j.value("nx", g.nx);
  g.ny = j.value("ny", g.ny);
  g.spacing = j.value("spacing", g.spacing);
  if (j.contains("origin")) {
    g.origin = vec2_from_json(j.at("origin"));
  }
  g.validate();
  return g;
}

nlohmann::ordered_json to_json(const LoadTriple & load)
{
  nlohmann::ordered_json j;
  j["f_n"] = load.f_n;
  j["f_t"] = to_json(load.f_t);
  j["f_tau"] = load.f_tau;
  j["contact_center"] = to_json(load.contact_center);
  j["contact_radius"] = load.contact_radius;
  return j;
}

LoadTriple load_from_json(const nlohmann::json & j)
{
  LoadTriple load;
  load.f_n = j.at("f_n").get<double>();
  load.f_t = vec2_from_json(j.at("f_t"));
  load.f_tau = j.at("f_tau").get<double>();
  load.contact_center = vec2_from_json(j.at("contact_center"));
  load.contact_radius = j.at("contact_radius").get<double>();
  return load;
}

nlohmann::ordered_json to_json(const SurrogateConfig & cfg)
{
  nlohmann::ordered_json j;
  j["k_n"] = cfg.k_n;
  j["k_t"] = cfg.k_t;
  j["k_tau"] = cfg.k_tau;
  j["falloff_sigma"] = cfg.falloff_sigma;
  j["noise_sigma"] = cfg.noise_sigma;
  j["seed"] = cfg.seed;
  if (cfg.saturation) {
    j["saturation"] = *cfg.saturation;
  } else {
    j["saturation"] = nullptr;
  }
  j["physical_consistency"] = cfg.physical_consistency;
  j["mu_max"] = cfg.mu_max;
  return j;
}

SurrogateConfig surrogate_from_json(const nlohmann::json & j)
{
  SurrogateConfig cfg;
  cfg.k_n = j.value("k_n", cfg.k_n);
  cfg.k_t = j.value("k_t", cfg.k_t);
  cfg.k_tau = j.value("k_tau", cfg.k_tau);
  cfg.falloff_sigma = j.value("falloff_sigma", cfg.falloff_sigma);
  cfg.noise_sigma = j.value("noise_sigma", cfg.noise_sigma);
  cfg.seed = j.value("seed", cfg.seed);
  if (j.contains("saturation") && !j.at("saturation").is_null()) {
    cfg.saturation = j.at("saturation").get<double>();
  }
  cfg.physical_consistency = j.value("physical_consistency", cfg.physical_consistency);
  cfg.mu_max = j.value("mu_max", cfg.mu_max);
  cfg.validate();
  return cfg;
}

}  // namespace tacforce
