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

#include "tacforce/ingest.hpp"

#include "tacforce/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

namespace tacforce
{

void MarkerSet::validate(double min_separation) const
{
  for (std::size_t a = 0; a < positions.size(); ++a) {
    if (!positions[a].allFinite()) {
      throw InvalidArgument("marker " + std::to_string(a) + " has a non-finite position");
    }
    for (std::size_t b = a + 1; b < positions.size(); ++b) {
      if ((positions[a] - positions[b]).norm() < min_separation) {
        throw InvalidArgument(
                "markers " + std::to_string(a) + " and " + std::to_string(b) +
                " are closer than the minimum separation");
      }
    }
  }
}

TrackState track_init(const MarkerSet & first_frame)
{
  TrackState s;
  s.init_positions = first_frame.positions;
  s.current_positions = first_frame.positions;
  s.alive.assign(first_frame.positions.size(), true);
  return s;
}

TrackState track_update(const TrackState & state, const MarkerSet & detections, double max_step)
{
  if (state.current_positions.size() != state.size() || state.alive.size() != state.size()) {
    throw InvalidArgument("track state lists differ in length");
  }
  TrackState next = state;
  if (detections.positions.empty()) {
    return next;
  }
  for (std::size_t t = 0; t < next.size(); ++t) {
    if (!next.alive[t]) {
      continue;
    }
    const Vec2 & last = state.current_positions[t];
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_k = 0;
    for (std::size_t k = 0; k < detections.positions.size(); ++k) {
      const double dist = (detections.positions[k] - last).norm();
      if (dist < best) {
        best = dist;
        best_k = k;
      }
    }
    if (best <= max_step) {
      next.current_positions[t] = detections.positions[best_k];
    }
  }
  return next;
}

std::vector<DisplacementSample> displacements(const TrackState & state)
{
  std::vector<DisplacementSample> out;
  out.reserve(state.size());
  for (std::size_t t = 0; t < state.size(); ++t) {
    if (state.alive[t]) {
      out.push_back({state.init_positions[t], state.current_positions[t] - state.init_positions[t]});
    }
  }
  return out;
}

namespace
{

struct RbfWeights
{
  Eigen::VectorXd wu;
  Eigen::VectorXd wv;
};

void check_samples(const std::vector<DisplacementSample> & samples)
{
  if (samples.size() < 3) {
    throw InvalidArgument("RBF interpolation needs at least 3 samples");
  }
  for (std::size_t a = 0; a < samples.size(); ++a) {
    if (!samples[a].position.allFinite() || !samples[a].vector.allFinite()) {
      throw InvalidArgument("sample " + std::to_string(a) + " is not finite");
    }
    for (std::size_t b = a + 1; b < samples.size(); ++b) {
      if (samples[a].position == samples[b].position) {
        throw SolverError(
                "singular RBF system: samples " + std::to_string(a) + " and " + std::to_string(b) +
                " share the position (" + std::to_string(samples[a].position.x()) + ", " +
                std::to_string(samples[a].position.y()) + ")");
      }
    }
  }
  Vec2 mean = Vec2::Zero();
  for (const auto & s : samples) {
    mean += s.position;
  }
  mean /= static_cast<double>(samples.size());
  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  for (const auto & s : samples) {
    const Vec2 d = s.position - mean;
    cov += d * d.transpose();
  }
  const Eigen::Vector2d ev = Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(cov).eigenvalues();
  if (ev(0) <= 1e-12 * ev(1)) {
    throw InvalidArgument("RBF sample positions are collinear");
  }
}

double kernel(const Vec2 & a, const Vec2 & b, double epsilon)
{
  const double s = (a - b).norm() / epsilon;
  return std::exp(-s * s);
}

RbfWeights solve_weights(const std::vector<DisplacementSample> & samples, const RbfOptions & options)
{
  if (!(options.epsilon > 0.0)) {
    throw InvalidArgument("RBF epsilon must be positive");
  }
  check_samples(samples);
  const auto n = static_cast<Eigen::Index>(samples.size());
  const double ridge = options.ridge.value_or(1e-8 * static_cast<double>(n));
  if (!(ridge >= 0.0)) {
    throw InvalidArgument("RBF ridge must be non-negative");
  }
  Eigen::MatrixXd K(n, n);
  Eigen::VectorXd bu(n);
  Eigen::VectorXd bv(n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      K(a, b) = kernel(samples[a].position, samples[b].position, options.epsilon);
    }
    K(a, a) += ridge;
    bu(a) = samples[a].vector.x();
    bv(a) = samples[a].vector.y();
  }
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
  if (!lu.isInvertible()) {
    throw SolverError("singular RBF system; increase the ridge or reduce epsilon");
  }
  return {lu.solve(bu), lu.solve(bv)};
}

}  // namespace

std::vector<Vec2> rbf_evaluate(
  const std::vector<DisplacementSample> & samples, const std::vector<Vec2> & points,
  const RbfOptions & options)
{
  const RbfWeights w = solve_weights(samples, options);
  std::vector<Vec2> out(points.size(), Vec2::Zero());
  for (std::size_t p = 0; p < points.size(); ++p) {
    for (std::size_t s = 0; s < samples.size(); ++s) {
      const double k = kernel(points[p], samples[s].position, options.epsilon);
      out[p] += k * Vec2(w.wu(s), w.wv(s));
    }
  }
  return out;
}

VectorField2D rbf_interpolate(
  const std::vector<DisplacementSample> & samples, const GridSpec & grid, const RbfOptions & options)
{
  grid.validate();
  std::vector<Vec2> centres(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    centres[k] = grid.position(k);
  }
  const std::vector<Vec2> values = rbf_evaluate(samples, centres, options);
  std::vector<double> u(grid.size());
  std::vector<double> v(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    u[k] = values[k].x();
    v[k] = values[k].y();
  }
  return VectorField2D(grid, std::move(u), std::move(v));
}

double marker_pitch(const MarkerSet & markers)
{
  const auto & p = markers.positions;
  if (p.size() < 2) {
    throw InvalidArgument("marker pitch needs at least 2 markers");
  }
  std::vector<double> nearest(p.size(), std::numeric_limits<double>::infinity());
  for (std::size_t a = 0; a < p.size(); ++a) {
    for (std::size_t b = 0; b < p.size(); ++b) {
      if (a != b) {
        nearest[a] = std::min(nearest[a], (p[a] - p[b]).norm());
      }
    }
  }
  const auto mid = nearest.begin() + static_cast<std::ptrdiff_t>(nearest.size() / 2);
  std::nth_element(nearest.begin(), mid, nearest.end());
  return *mid;
}

std::map<long, MarkerSet> read_marker_stream(const std::filesystem::path & dir)
{
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) {
    throw Error("'" + dir.string() + "' is not a directory");
  }
  std::vector<fs::path> files;
  for (const auto & entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  std::map<long, MarkerSet> frames;
  for (const auto & file : files) {
    std::ifstream is(file);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') {
        line.pop_back();
      }
      if (line.empty() || line.rfind("frame_idx", 0) == 0) {
        continue;
      }
      std::stringstream ss(line);
      std::string a;
      std::string b;
      std::string c;
      if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c)) {
        throw ParseError(file.string(), lineno, "expected frame_idx,marker_x,marker_y");
      }
      try {
        std::size_t used = 0;
        const long frame = std::stol(a, &used);
        const double x = std::stod(b);
        const double y = std::stod(c);
        frames[frame].positions.emplace_back(x, y);
      } catch (const std::logic_error &) {
        throw ParseError(file.string(), lineno, "cannot parse marker row '" + line + "'");
      }
    }
  }
  return frames;
}

}  // namespace tacforce
