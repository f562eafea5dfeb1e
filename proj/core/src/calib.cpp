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

#include "tacforce/calib.hpp"

#include "tacforce/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <set>

namespace tacforce
{

namespace
{

double median(std::vector<double> v)
{
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
  }
  return m;
}

struct Line
{
  double slope;
  double intercept;
};

std::optional<Line> line_through(const XYPair & a, const XYPair & b)
{
  if (a.x == b.x) {
    return std::nullopt;
  }
  const double slope = (b.y - a.y) / (b.x - a.x);
  return Line{slope, a.y - slope * a.x};
}

}  // namespace

std::size_t LinearModel::inlier_count() const
{
  return static_cast<std::size_t>(std::count(inlier_mask.begin(), inlier_mask.end(), true));
}

LinearModel least_squares_fit(std::span<const XYPair> pairs)
{
  if (pairs.size() < 2) {
    throw InvalidArgument("a line fit needs at least 2 points");
  }
  const double n = static_cast<double>(pairs.size());
  double mx = 0.0;
  double my = 0.0;
  for (const auto & p : pairs) {
    mx += p.x;
    my += p.y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto & p : pairs) {
    sxx += (p.x - mx) * (p.x - mx);
    sxy += (p.x - mx) * (p.y - my);
  }
  if (!(sxx > 0.0)) {
    throw InvalidArgument("a line fit needs at least 2 distinct x values");
  }
  LinearModel m;
  m.slope = sxy / sxx;
  m.intercept = my - m.slope * mx;
  m.inlier_mask.assign(pairs.size(), true);
  return m;
}

LinearModel ransac_fit(std::span<const XYPair> pairs, const RansacOptions & options)
{
  const std::size_t n = pairs.size();
  const LinearModel prelim = least_squares_fit(pairs);

  double tol = 0.0;
  if (options.inlier_tol) {
    tol = *options.inlier_tol;
  } else {
    std::vector<double> residual(n);
    double scale = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      residual[k] = pairs[k].y - prelim.predict(pairs[k].x);
      scale = std::max(scale, std::abs(pairs[k].y));
    }
    const double centre = median(residual);
    for (double & r : residual) {
      r = std::abs(r - centre);
    }
    // Floor keeps exactly collinear data (MAD = 0) from rejecting rounding noise.
    tol = std::max(1.5 * median(residual), 1e-9 * (1.0 + scale));
  }
  if (!(tol >= 0.0)) {
    throw InvalidArgument("RANSAC inlier tolerance must be non-negative");
  }
  const std::size_t min_inliers = options.min_inliers.value_or((n + 1) / 2);

  std::size_t best_count = 0;
  double best_error = std::numeric_limits<double>::infinity();
  std::vector<bool> best_mask(n, false);
  std::vector<bool> mask(n);

  auto score = [&](const Line & line) {
      std::size_t count = 0;
      double error = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double r = pairs[k].y - (line.slope * pairs[k].x + line.intercept);
        mask[k] = std::abs(r) <= tol;
        if (mask[k]) {
          ++count;
          error += r * r;
        }
      }
      if (count > best_count || (count == best_count && error < best_error)) {
        best_count = count;
        best_error = error;
        best_mask = mask;
      }
    };

  const std::size_t all_pairs = n * (n - 1) / 2;
  if (all_pairs <= static_cast<std::size_t>(std::max(options.iters, 0))) {
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        if (auto line = line_through(pairs[a], pairs[b])) {
          score(*line);
        }
      }
    }
  } else {
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (int it = 0; it < options.iters; ++it) {
      const std::size_t a = pick(rng);
      std::size_t b = pick(rng);
      while (b == a) {
        b = pick(rng);
      }
      if (auto line = line_through(pairs[a], pairs[b])) {
        score(*line);
      }
    }
  }

  if (best_count < std::max<std::size_t>(min_inliers, 2)) {
    throw FitError(
            "RANSAC consensus of " + std::to_string(best_count) + " is below the minimum of " +
            std::to_string(std::max<std::size_t>(min_inliers, 2)));
  }

  std::vector<XYPair> inliers;
  for (std::size_t k = 0; k < n; ++k) {
    if (best_mask[k]) {
      inliers.push_back(pairs[k]);
    }
  }
  LinearModel out = least_squares_fit(inliers);
  out.inlier_mask = std::move(best_mask);
  return out;
}

double rmse(std::span<const double> predictions, std::span<const double> truths)
{
  if (predictions.empty() || predictions.size() != truths.size()) {
    throw InvalidArgument("rmse needs two non-empty sequences of equal length");
  }
  double acc = 0.0;
  for (std::size_t k = 0; k < predictions.size(); ++k) {
    const double d = predictions[k] - truths[k];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(predictions.size()));
}

double predict_axis(const AxisModel & model, double feature)
{
  if (const auto * lin = std::get_if<LinearModel>(&model)) {
    return lin->predict(feature);
  }
  const auto & net = std::get<MLPModel>(model);
  Eigen::VectorXd x(1);
  x(0) = feature;
  return net.predict(x)(0);
}

double feature_for_axis(const FeatureTriple & f, Axis axis)
{
  switch (axis) {
    case Axis::Normal:
      return f.s_n;
    case Axis::Tangential:
      return f.s_t;
    case Axis::Torsion:
      return f.s_tau;
  }
  return 0.0;
}

WrenchEstimate WrenchModel::predict(const FeatureTriple & features) const
{
  WrenchEstimate w;
  w.f_n = std::max(0.0, predict_axis(axes[0], features.s_n));
  w.f_t = std::max(0.0, predict_axis(axes[1], features.s_t));
  w.f_tau = predict_axis(axes[2], features.s_tau);
  if (w.f_t > 0.0) {
    w.f_t_direction = features.s_t_direction;
  }
  return w;
}

nlohmann::ordered_json WrenchModel::to_json() const
{
  nlohmann::ordered_json j;
  j["type"] = "wrench";
  for (Axis a : kAllAxes) {
    const AxisModel & m = axes[static_cast<std::size_t>(a)];
    if (const auto * lin = std::get_if<LinearModel>(&m)) {
      j[std::string(to_string(a))] = {{"type", "linear"}, {"slope", lin->slope},
        {"intercept", lin->intercept}};
    } else {
      j[std::string(to_string(a))] = std::get<MLPModel>(m).to_json();
    }
  }
  return j;
}

WrenchModel WrenchModel::from_json(const nlohmann::json & j)
{
  WrenchModel w;
  try {
    for (Axis a : kAllAxes) {
      const auto & m = j.at(std::string(to_string(a)));
      const std::string type = m.at("type").get<std::string>();
      if (type == "linear") {
        LinearModel lin;
        lin.slope = m.at("slope").get<double>();
        lin.intercept = m.at("intercept").get<double>();
        if (!std::isfinite(lin.slope) || !std::isfinite(lin.intercept)) {
          throw InvalidArgument("linear model parameters must be finite");
        }
        w.axes[static_cast<std::size_t>(a)] = lin;
      } else if (type == "mlp") {
        w.axes[static_cast<std::size_t>(a)] = MLPModel::from_json(m);
      } else {
        throw InvalidArgument("unknown model type '" + type + "'");
      }
    }
  } catch (const nlohmann::json::exception & e) {
    throw InvalidArgument(std::string("malformed wrench model: ") + e.what());
  }
  return w;
}

Eigen::VectorXd flatten_field(const VectorField2D & field)
{
  const auto n = static_cast<Eigen::Index>(field.size());
  Eigen::VectorXd x(2 * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    x(k) = field.u()[static_cast<std::size_t>(k)];
    x(n + k) = field.v()[static_cast<std::size_t>(k)];
  }
  return x;
}

WrenchEstimate RawFieldModel::predict(const VectorField2D & field) const
{
  const Eigen::VectorXd y = net.predict(flatten_field(field));
  WrenchEstimate w;
  w.f_n = std::max(0.0, y(0));
  w.f_t = std::max(0.0, y(1));
  w.f_tau = y(2);
  return w;
}

std::string_view to_string(ModelKind kind)
{
  switch (kind) {
    case ModelKind::RansacLinear:
      return "ransac";
    case ModelKind::MlpFeatures:
      return "mlp";
    case ModelKind::MlpRaw:
      return "mlp-raw";
  }
  return "unknown";
}

ModelKind model_kind_from_string(std::string_view name)
{
  for (ModelKind k : {ModelKind::RansacLinear, ModelKind::MlpFeatures, ModelKind::MlpRaw}) {
    if (to_string(k) == name) {
      return k;
    }
  }
  throw InvalidArgument("unknown model '" + std::string(name) + "' (ransac, mlp, mlp-raw)");
}

ModelSpec ModelSpec::ransac_linear()
{
  ModelSpec s;
  s.kind = ModelKind::RansacLinear;
  return s;
}

ModelSpec ModelSpec::mlp_features()
{
  ModelSpec s;
  s.kind = ModelKind::MlpFeatures;
  s.mlp.hidden = {10};
  return s;
}

ModelSpec ModelSpec::mlp_raw(std::vector<int> hidden)
{
  ModelSpec s;
  s.kind = ModelKind::MlpRaw;
  s.mlp.hidden = std::move(hidden);
  s.mlp.max_iter = 200;
  return s;
}

std::string ModelSpec::name() const
{
  if (!label.empty()) {
    return label;
  }
  switch (kind) {
    case ModelKind::RansacLinear:
      return "decomposition+ransac";
    case ModelKind::MlpFeatures:
      return "decomposition+mlp";
    case ModelKind::MlpRaw:
      return "raw+mlp";
  }
  return "model";
}

WrenchModel fit_wrench_model(std::span<const CvSample> samples, const ModelSpec & spec)
{
  if (spec.kind == ModelKind::MlpRaw) {
    throw InvalidArgument("fit_wrench_model needs a feature model; use fit_raw_model");
  }
  if (samples.empty()) {
    throw InvalidArgument("no calibration samples");
  }
  WrenchModel out;
  for (Axis a : kAllAxes) {
    const auto idx = static_cast<std::size_t>(a);
    if (spec.kind == ModelKind::RansacLinear) {
      std::vector<XYPair> pairs;
      pairs.reserve(samples.size());
      for (const auto & s : samples) {
        pairs.push_back({feature_for_axis(s.features, a), s.truth.axis(a)});
      }
      RansacOptions opts = spec.ransac;
      opts.seed = spec.ransac.seed + idx;
      out.axes[idx] = ransac_fit(pairs, opts);
    } else {
      const auto n = static_cast<Eigen::Index>(samples.size());
      Eigen::MatrixXd x(1, n);
      Eigen::MatrixXd y(1, n);
      for (Eigen::Index k = 0; k < n; ++k) {
        x(0, k) = feature_for_axis(samples[static_cast<std::size_t>(k)].features, a);
        y(0, k) = samples[static_cast<std::size_t>(k)].truth.axis(a);
      }
      MlpFitOptions opts = spec.mlp;
      opts.seed = spec.mlp.seed + idx;
      out.axes[idx] = mlp_fit(x, y, opts).model;
    }
  }
  return out;
}

RawFieldModel fit_raw_model(std::span<const CvSample> samples, const ModelSpec & spec)
{
  if (samples.empty() || samples.front().raw.size() == 0) {
    throw InvalidArgument("raw-field model needs flattened field inputs");
  }
  const auto n = static_cast<Eigen::Index>(samples.size());
  const Eigen::Index dim = samples.front().raw.size();
  Eigen::MatrixXd x(dim, n);
  Eigen::MatrixXd y(3, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto & s = samples[static_cast<std::size_t>(k)];
    if (s.raw.size() != dim) {
      throw InvalidArgument("raw-field inputs differ in length");
    }
    x.col(k) = s.raw;
    y(0, k) = s.truth.f_n;
    y(1, k) = s.truth.f_t;
    y(2, k) = s.truth.f_tau;
  }
  return RawFieldModel{mlp_fit(x, y, spec.mlp).model};
}

CvReport cross_validate(std::span<const CvSample> samples, const ModelSpec & spec, int folds)
{
  if (folds < 2) {
    throw InvalidArgument("cross validation needs at least 2 folds");
  }
  std::set<int> ids;
  for (const auto & s : samples) {
    ids.insert(s.object_id);
  }
  if (static_cast<int>(ids.size()) < folds) {
    throw InvalidArgument(
            "cross validation with " + std::to_string(folds) + " folds needs as many objects, got " +
            std::to_string(ids.size()));
  }

  CvReport report;
  report.method = spec.name();
  report.fold_objects.resize(static_cast<std::size_t>(folds));
  std::map<int, int> fold_of;
  int next = 0;
  for (int id : ids) {
    fold_of[id] = next;
    report.fold_objects[static_cast<std::size_t>(next)].push_back(id);
    next = (next + 1) % folds;
  }

  for (int f = 0; f < folds; ++f) {
    std::vector<CvSample> train;
    std::vector<const CvSample *> test;
    for (const auto & s : samples) {
      if (fold_of[s.object_id] == f) {
        test.push_back(&s);
      } else {
        train.push_back(s);
      }
    }
    if (test.empty() || train.empty()) {
      throw InvalidArgument("fold " + std::to_string(f) + " has no samples");
    }

    std::array<std::vector<double>, 3> pred;
    std::array<std::vector<double>, 3> truth;
    if (spec.kind == ModelKind::MlpRaw) {
      const RawFieldModel model = fit_raw_model(train, spec);
      for (const CvSample * s : test) {
        const Eigen::VectorXd y = model.net.predict(s->raw);
        const WrenchEstimate w{std::max(0.0, y(0)), std::max(0.0, y(1)), std::nullopt, y(2)};
        for (Axis a : kAllAxes) {
          pred[static_cast<std::size_t>(a)].push_back(w.axis(a));
          truth[static_cast<std::size_t>(a)].push_back(s->truth.axis(a));
        }
      }
    } else {
      const WrenchModel model = fit_wrench_model(train, spec);
      for (const CvSample * s : test) {
        const WrenchEstimate w = model.predict(s->features);
        for (Axis a : kAllAxes) {
          pred[static_cast<std::size_t>(a)].push_back(w.axis(a));
          truth[static_cast<std::size_t>(a)].push_back(s->truth.axis(a));
        }
      }
    }
    for (std::size_t a = 0; a < 3; ++a) {
      report.axes[a].per_fold.push_back(rmse(pred[a], truth[a]));
    }
  }

  for (auto & axis : report.axes) {
    const double n = static_cast<double>(axis.per_fold.size());
    axis.mean = std::accumulate(axis.per_fold.begin(), axis.per_fold.end(), 0.0) / n;
    double var = 0.0;
    for (double r : axis.per_fold) {
      var += (r - axis.mean) * (r - axis.mean);
    }
    axis.stdv = std::sqrt(var / (n - 1.0));
  }
  return report;
}

void write_report_csv(std::ostream & os, std::span<const CvReport> reports)
{
  os << "axis,statistic";
  for (const auto & r : reports) {
    os << ',' << r.method;
  }
  os << '\n';
  char buf[64];
  for (Axis a : kAllAxes) {
    for (const char * stat : {"mean", "stdv"}) {
      os << to_string(a) << ',' << stat;
      for (const auto & r : reports) {
        const AxisStats & s = r.axes[static_cast<std::size_t>(a)];
        std::snprintf(buf, sizeof(buf), "%.6g", stat[0] == 'm' ? s.mean : s.stdv);
        os << ',' << buf;
      }
      os << '\n';
    }
  }
}

}  // namespace tacforce
