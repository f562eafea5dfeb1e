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

#include "common.hpp"

#include "tacforce/error.hpp"
#include "tacforce/json_io.hpp"

#include <cstdlib>

namespace tacforce::cli
{

std::filesystem::path resolve_output_dir(const std::string & flag, std::string_view subcommand)
{
  std::filesystem::path dir;
  if (!flag.empty()) {
    dir = flag;
  } else if (const char * root = std::getenv("TACFORCE_OUTPUT_ROOT"); root && *root) {
    dir = std::filesystem::path(root) / subcommand;
  } else {
    dir = std::filesystem::path("tacforce-out") / subcommand;
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw Error("cannot create output directory '" + dir.string() + "'");
  }
  return dir;
}

void write_run_record(
  const std::filesystem::path & dir, std::string_view subcommand,
  const nlohmann::ordered_json & config, const nlohmann::ordered_json & outputs)
{
  nlohmann::ordered_json doc;
  doc["tool"] = "tacforce";
  doc["version"] = "0.1.0";
  doc["subcommand"] = subcommand;
  doc["config"] = config;
  doc["outputs"] = outputs;
  write_json(dir / "run.json", doc);
}

GridSpec centred_grid(int nx, int ny, double spacing)
{
  GridSpec g{nx, ny, spacing, {-0.5 * spacing * (nx - 1), -0.5 * spacing * (ny - 1)}};
  g.validate();
  return g;
}

PoissonOptions::Method solver_method(const std::string & name)
{
  if (name == "direct") {
    return PoissonOptions::Method::Direct;
  }
  if (name == "fft") {
    return PoissonOptions::Method::Fft;
  }
  return PoissonOptions::Method::Auto;
}

void add_solver_option(CLI::App & sub, std::string & target)
{
  sub.add_option("--solver", target, "Poisson solver")
  ->check(CLI::IsMember({"auto", "direct", "fft"}))
  ->capture_default_str();
}

}  // namespace tacforce::cli
