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

#include <iostream>

int main(int argc, char ** argv)
{
  using namespace tacforce;
  CLI::App app{"Contact wrench estimation from tactile displacement fields"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "tacforce 0.1.0");

  cli::Actions actions;
  cli::add_synth(app, actions);
  cli::add_track(app, actions);
  cli::add_decompose(app, actions);
  cli::add_features(app, actions);
  cli::add_calibrate(app, actions);
  cli::add_evaluate(app, actions);
  cli::add_grasp(app, actions);
  cli::add_plot(app, actions);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kExitOk : cli::kExitConfig;
  }

  try {
    for (const CLI::App * sub : app.get_subcommands()) {
      return actions.at(sub)();
    }
  } catch (const ParseError & e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitConfig;
  } catch (const InvalidArgument & e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitConfig;
  } catch (const FitError & e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitDomain;
  } catch (const SolverError & e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitDomain;
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitIo;
  }
  return cli::kExitOk;
}
