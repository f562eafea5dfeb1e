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
#include "tacforce/field_io.hpp"
#include "tacforce/grasp.hpp"
#include "tacforce/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

namespace tacforce::cli
{

namespace
{

std::vector<std::string> split_csv(const std::string & line)
{
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    cells.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') {
    cells.emplace_back();
  }
  return cells;
}

std::vector<GraspState> read_trace_csv(const std::filesystem::path & path)
{
  std::ifstream is(path);
  if (!is) {
    throw Error("cannot open '" + path.string() + "'");
  }
  std::string line;
  std::getline(is, line);
  std::vector<GraspState> trace;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) {
      continue;
    }
    const auto cells = split_csv(line);
    if (cells.size() != 11) {
      throw ParseError(path.string(), lineno, "expected 11 trace columns");
    }
    try {
      GraspState s;
      s.time = std::stod(cells[0]);
      s.d_g = std::stod(cells[1]);
      s.f_left.f_n = std::stod(cells[2]);
      s.f_left.f_t = std::stod(cells[3]);
      s.f_right.f_n = std::stod(cells[4]);
      s.f_right.f_t = std::stod(cells[5]);
      if (!cells[6].empty()) {
        s.ratio_left = std::stod(cells[6]);
      }
      if (!cells[7].empty()) {
        s.ratio_right = std::stod(cells[7]);
      }
      s.slipping = cells[10] == "1";
      trace.push_back(s);
    } catch (const std::logic_error &) {
      throw ParseError(path.string(), lineno, "cannot parse trace row");
    }
  }
  return trace;
}

void write_quiver_svg(std::ostream & os, const VectorField2D & f)
{
  const GridSpec & g = f.grid();
  constexpr double kCell = 20.0;
  const double w = kCell * (g.nx + 1);
  const double h = kCell * (g.ny + 1);
  const double peak = f.max_norm();
  const double scale = peak > 0.0 ? 0.9 * kCell / peak : 0.0;
  char buf[160];
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const std::size_t k = g.index(i, j);
      const double x0 = kCell * (i + 1);
      const double y0 = h - kCell * (j + 1);   // y up
      const double x1 = x0 + scale * f.u()[k];
      const double y1 = y0 - scale * f.v()[k];
      std::snprintf(buf, sizeof(buf),
        "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#1f4e79\"/>"
        "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"1\" fill=\"#1f4e79\"/>\n",
        x0, y0, x1, y1, x1, y1);
      os << buf;
    }
  }
  os << "</svg>\n";
}

}  // namespace

void add_grasp(CLI::App & app, Actions & actions)
{
  struct Opts
  {
    std::string scenario;
    bool plant_truth{false};
    bool pipeline{false};
    std::string controller;
    std::string expect{"hold"};
    std::string out;
  };
  auto o = std::make_shared<Opts>();
  auto * sub = app.add_subcommand("grasp", "Simulate a two-finger holding scenario");
  sub->add_option("scenario", o->scenario, "Scenario JSON")->required();
  auto * pt = sub->add_flag("--plant-truth", o->plant_truth, "Controller sees plant-truth wrenches");
  sub->add_flag("--pipeline", o->pipeline, "Controller sees wrenches estimated from fields")
  ->excludes(pt);
  sub->add_option("--controller", o->controller, "Override the scenario controller switch")
  ->check(CLI::IsMember({"on", "off"}));
  sub->add_option("--expect", o->expect, "Expected outcome; a mismatch exits with 3")
  ->check(CLI::IsMember({"hold", "fail"}))->capture_default_str();
  sub->add_option("-o,--out", o->out, "Output directory");

  actions[sub] = [o]() {
      GraspScenario sc = scenario_from_json(read_json(o->scenario));
      if (o->plant_truth) {
        sc.mode = SensorMode::PlantTruth;
      } else if (o->pipeline) {
        sc.mode = SensorMode::Pipeline;
      }
      if (!o->controller.empty()) {
        sc.controller.enabled = o->controller == "on";
      }
      const GraspResult result = simulate_holding(sc);

      const auto dir = resolve_output_dir(o->out, "grasp");
      {
        std::ofstream csv(dir / "trace.csv");
        write_trace_csv(csv, result.trace);
        std::ofstream svg(dir / "ratio.svg");
        write_ratio_svg(svg, result.trace, sc.controller.mu, sc.controller.band);
      }
      nlohmann::ordered_json summary;
      summary["held"] = !result.failed;
      summary["failure_time"] =
        result.failure_time ? nlohmann::ordered_json(*result.failure_time) : nlohmann::ordered_json();
      summary["longest_excursion_periods"] = result.longest_excursion;
      summary["periods"] = result.trace.size();
      write_run_record(dir, "grasp", to_json(sc),
        {{"trace", "trace.csv"}, {"plot", "ratio.svg"}, {"summary", summary}});
      std::cout << summary.dump(2) << '\n';

      const bool expected_hold = o->expect == "hold";
      if (result.failed == expected_hold) {
        std::cerr << (result.failed ? "grasp failed" : "grasp held") << " (expected "
                  << o->expect << ")\n";
        return kExitDomain;
      }
      return kExitOk;
    };
}

void add_plot(CLI::App & app, Actions & actions)
{
  struct Opts
  {
    std::string input;
    double mu{0.5};
    double band{0.2};
    std::string out;
  };
  auto o = std::make_shared<Opts>();
  auto * sub = app.add_subcommand("plot", "Render a grasp trace or a vector field as SVG");
  sub->add_option("input", o->input, "Trace CSV or vector field file")->required();
  sub->add_option("--mu", o->mu, "Nominal friction coefficient for the band")->capture_default_str();
  sub->add_option("--band", o->band, "Band width")->capture_default_str();
  sub->add_option("-o,--out", o->out, "Output directory");

  actions[sub] = [o]() {
      const std::filesystem::path input(o->input);
      std::ifstream probe(input);
      if (!probe) {
        throw Error("cannot open '" + o->input + "'");
      }
      std::string header;
      std::getline(probe, header);
      probe.close();

      const auto dir = resolve_output_dir(o->out, "plot");
      const auto svg_path = dir / (input.stem().string() + ".svg");
      std::ofstream svg(svg_path);
      std::string kind;
      if (header.rfind("t,d_g,", 0) == 0) {
        kind = "trace";
        write_ratio_svg(svg, read_trace_csv(input), o->mu, o->band);
      } else {
        kind = "field";
        write_quiver_svg(svg, read_vector_field(input));
      }
      write_run_record(dir, "plot",
        {{"input", o->input}, {"kind", kind}, {"mu", o->mu}, {"band", o->band}},
        {{"svg", svg_path.filename().string()}});
      std::cout << svg_path.string() << '\n';
      return kExitOk;
    };
}

}  // namespace tacforce::cli
