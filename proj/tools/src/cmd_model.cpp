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

#include "tacforce/calib.hpp"
#include "tacforce/error.hpp"
#include "tacforce/features.hpp"
#include "tacforce/field_io.hpp"
#include "tacforce/json_io.hpp"
#include "tacforce/surrogate.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

namespace tacforce::cli
{

namespace
{

std::vector<int> parse_hidden(const std::string & text)
{
  std::vector<int> sizes;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      const int n = std::stoi(part, &used);
      if (used != part.size() || n < 1) {
        throw std::invalid_argument(part);
      }
      sizes.push_back(n);
    } catch (const std::logic_error &) {
      throw InvalidArgument("bad hidden layer list '" + text + "'");
    }
  }
  if (sizes.empty()) {
    throw InvalidArgument("hidden layer list is empty");
  }
  return sizes;
}

std::vector<CvSample> to_cv_samples(
  const std::vector<CalibrationSample> & samples, const FeatureOptions & fo, bool raw)
{
  std::vector<CvSample> out;
  out.reserve(samples.size());
  for (const auto & s : samples) {
    CvSample c{compute_features(s.field, fo), {}, s.truth, s.object_id};
    if (raw) {
      c.raw = flatten_field(s.field);
    }
    out.push_back(std::move(c));
  }
  return out;
}

nlohmann::ordered_json raw_model_json(const RawFieldModel & m)
{
  return {{"type", "raw-field"}, {"net", m.net.to_json()}};
}

}  // namespace

void add_calibrate(CLI::App & app, Actions & actions)
{
  struct Opts
  {
    std::string dataset;
    std::vector<std::string> models{"ransac"};
    std::string hidden{"512,128,10"};
    std::string feature_hidden{"10"};
    int folds{6};
    std::uint64_t seed{0};
    int max_iter{500};
    int raw_max_iter{200};
    int ransac_iters{200};
    std::string solver{"auto"};
    std::string out;
  };
  auto o = std::make_shared<Opts>();
  auto * sub = app.add_subcommand("calibrate", "Cross-validate and fit feature-to-wrench models");
  sub->add_option("dataset", o->dataset, "Dataset directory")->required();
  sub->add_option("--model", o->models, "Models: ransac, mlp, mlp-raw (repeatable)")
  ->check(CLI::IsMember({"ransac", "mlp", "mlp-raw"}))->capture_default_str();
  sub->add_option("--hidden", o->hidden, "Hidden layers of the raw-field network")
  ->capture_default_str();
  sub->add_option("--feature-hidden", o->feature_hidden, "Hidden layers of the per-axis network")
  ->capture_default_str();
  sub->add_option("--folds", o->folds, "Cross-validation folds")->capture_default_str();
  sub->add_option("--seed", o->seed, "Random seed")->capture_default_str();
  sub->add_option("--max-iter", o->max_iter, "L-BFGS iterations, per-axis networks")
  ->capture_default_str();
  sub->add_option("--raw-max-iter", o->raw_max_iter, "L-BFGS iterations, raw-field network")
  ->capture_default_str();
  sub->add_option("--ransac-iters", o->ransac_iters, "RANSAC hypotheses")->capture_default_str();
  add_solver_option(*sub, o->solver);
  sub->add_option("-o,--out", o->out, "Output directory");

  actions[sub] = [o]() {
      const auto samples = read_dataset(o->dataset);
      FeatureOptions fo;
      fo.poisson.method = solver_method(o->solver);
      bool need_raw = false;
      for (const auto & m : o->models) {
        need_raw = need_raw || m == "mlp-raw";
      }
      const auto cv = to_cv_samples(samples, fo, need_raw);
      const auto dir = resolve_output_dir(o->out, "calibrate");

      std::vector<CvReport> reports;
      nlohmann::ordered_json model_files = nlohmann::ordered_json::array();
      nlohmann::ordered_json folds = nlohmann::ordered_json::object();
      for (const auto & name : o->models) {
        ModelSpec spec;
        switch (model_kind_from_string(name)) {
          case ModelKind::RansacLinear:
            spec = ModelSpec::ransac_linear();
            spec.ransac.iters = o->ransac_iters;
            spec.ransac.seed = o->seed;
            break;
          case ModelKind::MlpFeatures:
            spec = ModelSpec::mlp_features();
            spec.mlp.hidden = parse_hidden(o->feature_hidden);
            spec.mlp.max_iter = o->max_iter;
            spec.mlp.seed = o->seed;
            break;
          case ModelKind::MlpRaw:
            spec = ModelSpec::mlp_raw(parse_hidden(o->hidden));
            spec.mlp.max_iter = o->raw_max_iter;
            spec.mlp.seed = o->seed;
            break;
        }
        reports.push_back(cross_validate(cv, spec, o->folds));
        folds[reports.back().method] = reports.back().fold_objects;

        const std::string file = "model_" + name + ".json";
        if (spec.kind == ModelKind::MlpRaw) {
          write_json(dir / file, raw_model_json(fit_raw_model(cv, spec)));
        } else {
          write_json(dir / file, fit_wrench_model(cv, spec).to_json());
        }
        model_files.push_back(file);
      }

      std::ofstream csv(dir / "report.csv");
      write_report_csv(csv, reports);
      csv.close();
      write_report_csv(std::cout, reports);

      nlohmann::ordered_json config;
      config["dataset"] = o->dataset;
      config["models"] = o->models;
      config["hidden"] = o->hidden;
      config["feature_hidden"] = o->feature_hidden;
      config["folds"] = o->folds;
      config["seed"] = o->seed;
      config["max_iter"] = o->max_iter;
      config["raw_max_iter"] = o->raw_max_iter;
      config["ransac_iters"] = o->ransac_iters;
      config["solver"] = o->solver;
      write_run_record(dir, "calibrate", config,
        {{"report", "report.csv"}, {"models", model_files}, {"fold_objects", folds}});
      return kExitOk;
    };
}

void add_evaluate(CLI::App & app, Actions & actions)
{
  struct Opts
  {
    std::string dataset;
    std::string model;
    std::string solver{"auto"};
    std::string out;
  };
  auto o = std::make_shared<Opts>();
  auto * sub = app.add_subcommand("evaluate", "Apply a fitted model to a dataset");
  sub->add_option("dataset", o->dataset, "Dataset directory")->required();
  sub->add_option("--model-file", o->model, "Model JSON written by calibrate")->required();
  add_solver_option(*sub, o->solver);
  sub->add_option("-o,--out", o->out, "Output directory");

  actions[sub] = [o]() {
      const nlohmann::json doc = read_json(o->model);
      const auto samples = read_dataset(o->dataset);
      FeatureOptions fo;
      fo.poisson.method = solver_method(o->solver);

      std::vector<WrenchEstimate> predictions;
      predictions.reserve(samples.size());
      const std::string type = doc.value("type", std::string());
      if (type == "raw-field") {
        const RawFieldModel model{MLPModel::from_json(doc.at("net"))};
        for (const auto & s : samples) {
          if (2 * static_cast<int>(s.field.size()) != model.net.input_dim()) {
            throw InvalidArgument("dataset grid does not match the raw-field model input");
          }
          predictions.push_back(model.predict(s.field));
        }
      } else if (type == "wrench") {
        const WrenchModel model = WrenchModel::from_json(doc);
        for (const auto & s : samples) {
          predictions.push_back(model.predict(compute_features(s.field, fo)));
        }
      } else {
        throw InvalidArgument("'" + o->model + "' is not a tacforce model file");
      }

      const auto dir = resolve_output_dir(o->out, "evaluate");
      std::ofstream csv(dir / "predictions.csv");
      csv << "sample,object_id,f_n,f_t,f_tau,true_f_n,true_f_t,true_f_tau\n";
      std::array<std::vector<double>, 3> pred;
      std::array<std::vector<double>, 3> truth;
      for (std::size_t k = 0; k < samples.size(); ++k) {
        const auto & w = predictions[k];
        const auto & t = samples[k].truth;
        csv << k << ',' << samples[k].object_id << ',' << format_double(w.f_n) << ','
            << format_double(w.f_t) << ',' << format_double(w.f_tau) << ',' << format_double(t.f_n)
            << ',' << format_double(t.f_t) << ',' << format_double(t.f_tau) << '\n';
        for (Axis a : kAllAxes) {
          pred[static_cast<std::size_t>(a)].push_back(w.axis(a));
          truth[static_cast<std::size_t>(a)].push_back(t.axis(a));
        }
      }
      nlohmann::ordered_json summary;
      for (Axis a : kAllAxes) {
        const auto i = static_cast<std::size_t>(a);
        summary[std::string(to_string(a))] = rmse(pred[i], truth[i]);
      }
      write_run_record(dir, "evaluate",
        {{"dataset", o->dataset}, {"model_file", o->model}, {"solver", o->solver}},
        {{"predictions", "predictions.csv"}, {"rmse", summary}});
      std::cout << summary.dump(2) << '\n';
      return kExitOk;
    };
}

}  // namespace tacforce::cli
