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
#include "tacforce/features.hpp"
#include "tacforce/field_io.hpp"
#include "tacforce/ingest.hpp"
#include "tacforce/json_io.hpp"
#include "tacforce/surrogate.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>

namespace tacforce::cli
{

namespace
{

std::string hex64(std::uint64_t h)
{
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

nlohmann::ordered_json features_json(const FeatureTriple & f)
{
  nlohmann::ordered_json j;
  j["s_n"] = f.s_n;
  j["s_t"] = f.s_t;
  j["s_t_direction"] = f.s_t_direction ? to_json(*f.s_t_direction) : nlohmann::ordered_json();
  j["s_tau"] = f.s_tau;
  return j;
}

/// Field files named by a manifest, a dataset directory or a single field file.
std::vector<std::filesystem::path> expand_field_inputs(const std::string & input)
{
  namespace fs = std::filesystem;
  fs::path manifest;
  if (fs::is_directory(input)) {
    manifest = fs::path(input) / "manifest.json";
  } else if (fs::path(input).extension() == ".json") {
    manifest = input;
  } else {
    return {fs::path(input)};
  }
  const nlohmann::json doc = read_json(manifest);
  const nlohmann::json & list = doc.is_array() ? doc : doc.at("samples");
  std::vector<fs::path> out;
  for (const auto & entry : list) {
    const fs::path p = entry.is_string() ? entry.get<std::string>() : entry.at("path").get<std::string>();
    out.push_back(p.is_absolute() ? p : manifest.parent_path() / p);
  }
  return out;
}

}  // namespace

void add_synth(CLI::App & app, Actions & actions)
{
  struct Opts
  {
    int objects{6};
    int per_object{50};
    std::uint64_t seed{0};
    int nx{24};
    int ny{24};
    double spacing{0.5};
    SurrogateConfig surrogate;
    LoadRanges ranges;
    double radius{2.5};
    double noise_rel{0.0};
    std::string out;
  };
  auto o = std::make_shared<Opts>();
  auto * sub = app.add_subcommand("synth", "Generate a synthetic calibration dataset");
  sub->add_option("--objects", o->objects, "Number of objects")->capture_default_str();
  sub->add_option("--per-object", o->per_object, "Samples per object")->capture_default_str();
  sub->add_option("--seed", o->seed, "Random seed")->capture_default_str();
  sub->add_option("--nx", o->nx, "Grid columns")->capture_default_str();
  sub->add_option("--ny", o->ny, "Grid rows")->capture_default_str();
  sub->add_option("--spacing", o->spacing, "Grid spacing, mm")->capture_default_str();
  sub->add_option("--k-n", o->surrogate.k_n, "Normal gain, mm/N")->capture_default_str();
  sub->add_option("--k-t", o->surrogate.k_t, "Shear gain, mm/N")->capture_default_str();
  sub->add_option("--k-tau", o->surrogate.k_tau, "Torsion gain, mm/(N mm)")->capture_default_str();
  sub->add_option("--falloff", o->surrogate.falloff_sigma, "Shear envelope sigma, mm")
  ->capture_default_str();
  sub->add_option("--radius", o->radius, "Contact radius, mm")->capture_default_str();
  sub->add_option("--noise", o->surrogate.noise_sigma, "Noise sigma per component, mm")
  ->capture_default_str();
  sub->add_option("--noise-rel", o->noise_rel,
    "Noise sigma as a fraction of the median noiseless field magnitude (overrides --noise)");
  sub->add_option("--saturation", o->surrogate.saturation, "Pattern amplitude saturation, mm");
  sub->add_option("--fn-max", o->ranges.f_n.max, "Normal load range upper bound, N")
  ->capture_default_str();
  sub->add_option("--ft-max", o->ranges.f_t.max, "Shear load range upper bound, N")
  ->capture_default_str();
  sub->add_option("--tau-max", o->ranges.f_tau.max, "Torsion range half width, N mm")
  ->capture_default_str();
  sub->add_option("--center-jitter", o->ranges.center_jitter, "Contact centre jitter, mm")
  ->capture_default_str();
  sub->add_option("--gain-perturbation", o->ranges.gain_perturbation,
    "Per-object relative gain perturbation")->capture_default_str();
  sub->add_option("--outlier-fraction", o->ranges.outlier_fraction,
    "Fraction of samples with corrupted labels")->capture_default_str();
  sub->add_option("-o,--out", o->out, "Dataset directory");

  actions[sub] = [o]() {
      const GridSpec grid = centred_grid(o->nx, o->ny, o->spacing);
      LoadRanges ranges = o->ranges;
      ranges.f_tau.min = -ranges.f_tau.max;
      ranges.contact_radius = {o->radius, o->radius};
      ranges.falloff_sigma = {o->surrogate.falloff_sigma, o->surrogate.falloff_sigma};
      SurrogateConfig cfg = o->surrogate;
      if (o->noise_rel > 0.0) {
        SurrogateConfig clean = cfg;
        clean.noise_sigma = 0.0;
        const auto preview = gen_calibration_dataset(clean, o->objects, o->per_object, ranges, o->seed, grid);
        cfg.noise_sigma = o->noise_rel * median_field_magnitude(preview);
      }
      const auto samples = gen_calibration_dataset(cfg, o->objects, o->per_object, ranges, o->seed, grid);
      const auto dir = resolve_output_dir(o->out, "synth");
      write_dataset(dir, samples);
      const std::string hash = hex64(dataset_hash(dir));

      nlohmann::ordered_json config;
      config["objects"] = o->objects;
      config["per_object"] = o->per_object;
      config["seed"] = o->seed;
      config["grid"] = to_json(grid);
      config["surrogate"] = to_json(cfg);
      config["ranges"] = {
        {"f_n", {ranges.f_n.min, ranges.f_n.max}},
        {"f_t", {ranges.f_t.min, ranges.f_t.max}},
        {"f_tau", {ranges.f_tau.min, ranges.f_tau.max}},
        {"contact_radius", o->radius},
        {"center_jitter", ranges.center_jitter},
        {"gain_perturbation", ranges.gain_perturbation},
        {"outlier_fraction", ranges.outlier_fraction},
      };
      write_run_record(dir, "synth", config,
        {{"manifest", (dir / "manifest.json").string()}, {"samples", samples.size()},
          {"hash", hash}});
      std::cout << hash << '\n';
      return kExitOk;
    };
}

void add_track(CLI::App & app, Actions & actions)
{
  struct Opts
  {
    std::string stream;
    std::optional<double> max_step;
    std::optional<double> epsilon;
    int nx{24};
    int ny{24};
    std::optional<double> spacing;
    std::string out;
  };
  auto o = std::make_shared<Opts>();
  auto * sub = app.add_subcommand("track", "Track a marker stream and grid its displacements");
  sub->add_option("stream", o->stream, "Directory of frame_idx,marker_x,marker_y CSV files")
  ->required();
  sub->add_option("--max-step", o->max_step, "Tracking gate, mm (default 0.3 x marker pitch)");
  sub->add_option("--epsilon", o->epsilon, "RBF shape parameter, mm (default marker pitch)");
  sub->add_option("--nx", o->nx, "Grid columns")->capture_default_str();
  sub->add_option("--ny", o->ny, "Grid rows")->capture_default_str();
  sub->add_option("--spacing", o->spacing, "Grid spacing, mm (default spans the first frame)");
  sub->add_option("-o,--out", o->out, "Output directory");

  actions[sub] = [o]() {
      const auto frames = read_marker_stream(o->stream);
      if (frames.empty()) {
        throw InvalidArgument("marker stream '" + o->stream + "' has no frames");
      }
      const MarkerSet & first = frames.begin()->second;
      const double pitch = marker_pitch(first);
      first.validate(1e-9);
      const double gate = o->max_step.value_or(0.3 * pitch);
      RbfOptions rbf;
      rbf.epsilon = o->epsilon.value_or(pitch);

      Vec2 lo = first.positions.front();
      Vec2 hi = lo;
      for (const auto & p : first.positions) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
      }
      GridSpec grid;
      grid.nx = o->nx;
      grid.ny = o->ny;
      grid.spacing = o->spacing.value_or(
        std::max((hi.x() - lo.x()) / (o->nx - 1), (hi.y() - lo.y()) / (o->ny - 1)));
      grid.origin = 0.5 * (lo + hi) - 0.5 * grid.spacing * Vec2(o->nx - 1, o->ny - 1);
      grid.validate();

      const auto dir = resolve_output_dir(o->out, "track");
      TrackState state = track_init(first);
      std::vector<long> frozen(state.size(), 0);
      nlohmann::ordered_json written = nlohmann::ordered_json::array();
      for (const auto & [idx, markers] : frames) {
        if (idx != frames.begin()->first) {
          const TrackState next = track_update(state, markers, gate);
          for (std::size_t t = 0; t < next.size(); ++t) {
            if (next.alive[t] && next.current_positions[t] == state.current_positions[t]) {
              ++frozen[t];
            }
          }
          state = next;
        }
        char name[32];
        std::snprintf(name, sizeof(name), "frame_%06ld.csv", idx);
        write_field(dir / name, rbf_interpolate(displacements(state), grid, rbf));
        written.push_back(name);
      }

      std::ofstream tracks(dir / "tracks.csv");
      tracks << "track,init_x,init_y,x,y,frozen_frames\n";
      for (std::size_t t = 0; t < state.size(); ++t) {
        tracks << t << ',' << format_double(state.init_positions[t].x()) << ','
               << format_double(state.init_positions[t].y()) << ','
               << format_double(state.current_positions[t].x()) << ','
               << format_double(state.current_positions[t].y()) << ',' << frozen[t] << '\n';
      }

      nlohmann::ordered_json config;
      config["stream"] = o->stream;
      config["max_step"] = gate;
      config["epsilon"] = rbf.epsilon;
      config["grid"] = to_json(grid);
      write_run_record(dir, "track", config, {{"fields", written}, {"tracks", "tracks.csv"}});
      std::cout << frames.size() << " frames, " << state.size() << " tracks\n";
      return kExitOk;
    };
}

void add_decompose(CLI::App & app, Actions & actions)
{
  struct Opts
  {
    std::string field;
    std::string stem;
    std::string solver{"auto"};
    double significance{kDefaultSignificance};
    std::string out;
  };
  auto o = std::make_shared<Opts>();
  auto * sub = app.add_subcommand("decompose", "Helmholtz-Hodge decomposition of one field file");
  sub->add_option("field", o->field, "Vector field file")->required();
  sub->add_option("--stem", o->stem, "Output file stem (default: input stem)");
  sub->add_option("--significance", o->significance, "Rotation centre threshold")
  ->capture_default_str();
  add_solver_option(*sub, o->solver);
  sub->add_option("-o,--out", o->out, "Output directory");

  actions[sub] = [o]() {
      const VectorField2D field = read_vector_field(std::filesystem::path(o->field));
      FeatureOptions fo;
      fo.significance = o->significance;
      fo.poisson.method = solver_method(o->solver);
      const FeatureDetail detail = compute_features_detailed(field, fo);
      const auto dir = resolve_output_dir(o->out, "decompose");
      const std::string stem =
        o->stem.empty() ? std::filesystem::path(o->field).stem().string() : o->stem;
      const auto paths = write_decomposition(dir, stem, detail.decomposition);

      const FeatureTriple & f = detail.features;
      const double scale = std::max({std::abs(f.s_n), std::abs(f.s_t), std::abs(f.s_tau)});
      nlohmann::ordered_json doc = features_json(f);
      doc["normalized"] = scale > 0.0 ?
        nlohmann::ordered_json::array({f.s_n / scale, f.s_t / scale, f.s_tau / scale}) :
        nlohmann::ordered_json::array({0.0, 0.0, 0.0});
      doc["rotation_centers"] = nlohmann::ordered_json::array();
      for (const auto & c : detail.centers) {
        doc["rotation_centers"].push_back(
          {{"position", to_json(c.position)},
            {"polarity", c.polarity == Polarity::Positive ? "positive" : "negative"},
            {"potential", c.potential_value}});
      }

      nlohmann::ordered_json written = nlohmann::ordered_json::array();
      for (const auto & p : paths) {
        written.push_back(p.filename().string());
      }
      write_run_record(dir, "decompose",
        {{"field", o->field}, {"solver", o->solver}, {"significance", o->significance}},
        {{"components", written}, {"features", doc}});
      std::cout << doc.dump(2) << '\n';
      return kExitOk;
    };
}

void add_features(CLI::App & app, Actions & actions)
{
  struct Opts
  {
    std::vector<std::string> inputs;
    std::string solver{"auto"};
    double significance{kDefaultSignificance};
    std::string out;
  };
  auto o = std::make_shared<Opts>();
  auto * sub = app.add_subcommand("features", "Feature triples for a batch of field files");
  sub->add_option("inputs", o->inputs,
    "Manifest JSON (list of field paths or dataset manifest), dataset directory or field file")
  ->required();
  sub->add_option("--significance", o->significance, "Rotation centre threshold")
  ->capture_default_str();
  add_solver_option(*sub, o->solver);
  sub->add_option("-o,--out", o->out, "Output directory");

  actions[sub] = [o]() {
      FeatureOptions fo;
      fo.significance = o->significance;
      fo.poisson.method = solver_method(o->solver);

      std::vector<std::filesystem::path> paths;
      for (const auto & input : o->inputs) {
        for (auto & p : expand_field_inputs(input)) {
          paths.push_back(std::move(p));
        }
      }

      const auto dir = resolve_output_dir(o->out, "features");
      std::ofstream csv(dir / "features.csv");
      csv << "path,s_n,s_t,dir_x,dir_y,s_tau\n";
      for (const auto & path : paths) {
        const FeatureTriple f = compute_features(read_vector_field(path), fo);
        csv << path.string() << ',' << format_double(f.s_n) << ',' << format_double(f.s_t) << ',';
        if (f.s_t_direction) {
          csv << format_double(f.s_t_direction->x()) << ',' << format_double(f.s_t_direction->y());
        } else {
          csv << ',';
        }
        csv << ',' << format_double(f.s_tau) << '\n';
      }
      write_run_record(dir, "features",
        {{"inputs", o->inputs}, {"solver", o->solver}, {"significance", o->significance}},
        {{"table", "features.csv"}, {"rows", paths.size()}});
      std::cout << paths.size() << " feature rows written to " << (dir / "features.csv").string()
                << '\n';
      return kExitOk;
    };
}

}  // namespace tacforce::cli
