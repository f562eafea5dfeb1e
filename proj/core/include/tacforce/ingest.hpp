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

#ifndef TACFORCE__INGEST_HPP_
#define TACFORCE__INGEST_HPP_

#include "tacforce/field.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <vector>

namespace tacforce
{

/// Marker centroids detected in one camera frame, mm.
struct MarkerSet
{
  std::vector<Vec2> positions;

  /// Throws InvalidArgument on non-finite points or two points closer than min_separation.
  void validate(double min_separation) const;
};

/// Per-marker tracks anchored at the first frame.
struct TrackState
{
  std::vector<Vec2> init_positions;
  std::vector<Vec2> current_positions;
  std::vector<bool> alive;

  std::size_t size() const {return init_positions.size();}
};

TrackState track_init(const MarkerSet & first_frame);

/// Median nearest-neighbour distance; the default tracking gate is 0.3 of this.
double marker_pitch(const MarkerSet & markers);

/**
 * Moves every alive track to its nearest detection when that detection is
 * within max_step of the track's current position; otherwise the track keeps
 * its position. Matching is per track (no global assignment), so one
 * detection may serve several tracks.
 */
TrackState track_update(const TrackState & state, const MarkerSet & detections, double max_step);

struct DisplacementSample
{
  Vec2 position;  ///< anchor (initial) position
  Vec2 vector;    ///< current - initial
};

std::vector<DisplacementSample> displacements(const TrackState & state);

struct RbfOptions
{
  double epsilon{1.0};                ///< Gaussian shape parameter, mm
  /// Ridge term added to the kernel diagonal; defaults to 1e-8 * n.
  std::optional<double> ridge;
};

/// Component-wise Gaussian RBF interpolation exp(-(r/epsilon)^2) onto the cell centres.
/// Needs >= 3 non-collinear samples; duplicate positions raise SolverError naming them.
VectorField2D rbf_interpolate(
  const std::vector<DisplacementSample> & samples, const GridSpec & grid, const RbfOptions & options);

/// Evaluates the same interpolant at arbitrary points (used to check the interpolation condition).
std::vector<Vec2> rbf_evaluate(
  const std::vector<DisplacementSample> & samples, const std::vector<Vec2> & points,
  const RbfOptions & options);

/// Reads a directory of per-frame CSVs (frame_idx,marker_x,marker_y), sorted by file name.
/// The key is the frame index written in the file.
std::map<long, MarkerSet> read_marker_stream(const std::filesystem::path & dir);

}  // namespace tacforce

#endif  // TACFORCE__INGEST_HPP_
