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

#ifndef TACFORCE_TOOLS__COMMON_HPP_
#define TACFORCE_TOOLS__COMMON_HPP_

#include "tacforce/field.hpp"
#include "tacforce/nhhd.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <string_view>

namespace tacforce::cli
{

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDomain = 3;

/// Subcommand actions, run after a successful parse.
using Actions = std::map<const CLI::App *, std::function<int()>>;

void add_synth(CLI::App & app, Actions & actions);
void add_track(CLI::App & app, Actions & actions);
void add_decompose(CLI::App & app, Actions & actions);
void add_features(CLI::App & app, Actions & actions);
void add_calibrate(CLI::App & app, Actions & actions);
void add_evaluate(CLI::App & app, Actions & actions);
void add_grasp(CLI::App & app, Actions & actions);
void add_plot(CLI::App & app, Actions & actions);

/// --out when given, else $TACFORCE_OUTPUT_ROOT/<subcommand>, else tacforce-out/<subcommand>.
/// The directory is created.
std::filesystem::path resolve_output_dir(const std::string & flag, std::string_view subcommand);

/// Writes <dir>/run.json with the resolved configuration and the files produced.
void write_run_record(
  const std::filesystem::path & dir, std::string_view subcommand,
  const nlohmann::ordered_json & config, const nlohmann::ordered_json & outputs);

/// nx x ny grid centred on the origin.
GridSpec centred_grid(int nx, int ny, double spacing);

PoissonOptions::Method solver_method(const std::string & name);

/// Registers --solver on a subcommand.
void add_solver_option(CLI::App & sub, std::string & target);

}  // namespace tacforce::cli

#endif  // TACFORCE_TOOLS__COMMON_HPP_
