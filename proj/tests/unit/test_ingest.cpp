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

#include "random_fields.hpp"

#include "tacforce/error.hpp"
#include "tacforce/ingest.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

namespace tacforce
{
namespace
{

MarkerSet lattice(int n, double pitch)
{
  MarkerSet m;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      m.positions.emplace_back(pitch * i, pitch * j);
    }
  }
  return m;
}

TEST(Tracking, FollowsSmallMotion)
{
  const MarkerSet first = lattice(5, 1.0);
  MarkerSet next = first;
  for (auto & p : next.positions) {
    p += Vec2(0.1, -0.05);
  }
  const auto s = track_update(track_init(first), next, 0.3);
  for (std::size_t t = 0; t < s.size(); ++t) {
    EXPECT_EQ(s.current_positions[t], next.positions[t]);
  }
  const auto d = displacements(s);
  ASSERT_EQ(d.size(), first.positions.size());
  EXPECT_LT((d[3].vector - Vec2(0.1, -0.05)).norm(), 1e-15);
  EXPECT_EQ(d[3].position, first.positions[3]);
}

TEST(Tracking, IsIndependentOfDetectionOrder)
{
  const MarkerSet first = lattice(4, 1.0);
  MarkerSet moved = first;
  for (std::size_t k = 0; k < moved.positions.size(); ++k) {
    moved.positions[k] += Vec2(0.02 * static_cast<double>(k % 3), 0.01);
  }
  MarkerSet shuffled = moved;
  std::mt19937_64 rng(6);
  std::shuffle(shuffled.positions.begin(), shuffled.positions.end(), rng);
  const auto a = track_update(track_init(first), moved, 0.3);
  const auto b = track_update(track_init(first), shuffled, 0.3);
  EXPECT_EQ(a.current_positions, b.current_positions);
}

TEST(Tracking, TeleportingMarkerIsFrozen)
{
  const MarkerSet first = lattice(3, 1.0);
  MarkerSet next = first;
  next.positions[4] += Vec2(5.0, 5.0);
  auto s = track_update(track_init(first), next, 0.3);
  EXPECT_EQ(s.current_positions[4], first.positions[4]);
  // Its neighbours must not grab the far detection either.
  EXPECT_EQ(s.current_positions[5], first.positions[5]);
  // It resumes once a detection comes back within the gate.
  next.positions[4] = first.positions[4] + Vec2(0.1, 0.0);
  s = track_update(s, next, 0.3);
  EXPECT_EQ(s.current_positions[4], next.positions[4]);
}

TEST(Tracking, EmptyFrameKeepsState)
{
  const auto init = track_init(lattice(2, 1.0));
  const auto s = track_update(init, MarkerSet{}, 0.3);
  EXPECT_EQ(s.current_positions, init.current_positions);
}

TEST(Markers, ValidateCatchesDuplicatesAndNonFinite)
{
  MarkerSet m = lattice(2, 1.0);
  EXPECT_NO_THROW(m.validate(0.5));
  m.positions.push_back(m.positions[0] + Vec2(0.1, 0.0));
  EXPECT_THROW(m.validate(0.5), InvalidArgument);
  MarkerSet bad;
  bad.positions.emplace_back(std::nan(""), 0.0);
  EXPECT_THROW(bad.validate(0.1), InvalidArgument);
}

TEST(Markers, PitchOfLattice)
{
  EXPECT_DOUBLE_EQ(marker_pitch(lattice(6, 0.75)), 0.75);
  EXPECT_THROW(marker_pitch(lattice(1, 1.0)), InvalidArgument);
}

std::vector<DisplacementSample> sample_linear_field(const MarkerSet & m, const Eigen::Matrix2d & a)
{
  std::vector<DisplacementSample> out;
  for (const auto & p : m.positions) {
    out.push_back({p, a * p});
  }
  return out;
}

TEST(Rbf, ReproducesSamplesAtTheirSites)
{
  const MarkerSet m = lattice(6, 1.0);
  Eigen::Matrix2d a;
  a << 0.01, -0.02, 0.03, 0.005;
  const auto samples = sample_linear_field(m, a);
  const auto at = rbf_evaluate(samples, m.positions, {1.0, 0.0});
  for (std::size_t k = 0; k < at.size(); ++k) {
    EXPECT_LT((at[k] - samples[k].vector).norm(), 1e-9);
  }
}

TEST(Rbf, RecoversLinearFieldInsideTheHull)
{
  const MarkerSet m = lattice(9, 1.0);
  Eigen::Matrix2d a;
  a << 0.02, 0.01, -0.01, 0.03;
  const auto samples = sample_linear_field(m, a);
  const GridSpec g{9, 9, 0.5, {2.0, 2.0}};
  const auto f = rbf_interpolate(samples, g, {1.0, std::nullopt});
  const double scale = (a * Vec2(8.0, 8.0)).norm();
  for (std::size_t k = 0; k < g.size(); ++k) {
    EXPECT_LT((f.at(k) - a * g.position(k)).norm(), 0.02 * scale) << k;
  }
}

TEST(Rbf, RejectsDegenerateSamples)
{
  std::vector<DisplacementSample> two{{{0.0, 0.0}, {0.0, 0.0}}, {{1.0, 0.0}, {0.0, 0.0}}};
  EXPECT_THROW(rbf_evaluate(two, {}, {}), InvalidArgument);
  std::vector<DisplacementSample> line{
    {{0.0, 0.0}, {0.0, 0.0}}, {{1.0, 0.0}, {0.0, 0.0}}, {{2.0, 0.0}, {0.0, 0.0}}};
  EXPECT_THROW(rbf_evaluate(line, {}, {}), InvalidArgument);
  std::vector<DisplacementSample> dup{
    {{0.0, 0.0}, {0.0, 0.0}}, {{1.0, 0.0}, {0.0, 0.0}}, {{0.0, 1.0}, {0.0, 0.0}},
    {{1.0, 0.0}, {1.0, 0.0}}};
  try {
    rbf_evaluate(dup, {}, {});
    FAIL() << "duplicate positions accepted";
  } catch (const SolverError & e) {
    EXPECT_NE(std::string(e.what()).find("samples 1 and 3"), std::string::npos);
  }
  EXPECT_THROW(rbf_evaluate(dup, {}, {0.0, std::nullopt}), InvalidArgument);
}

TEST(MarkerStream, ReadsFramesFromCsvFiles)
{
  const auto dir = std::filesystem::temp_directory_path() / "tacforce_markers";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "a.csv") << "frame_idx,marker_x,marker_y\n0,0.0,0.0\n0,1.0,0.0\n1,0.1,0.0\n";
  std::ofstream(dir / "b.csv") << "1,1.1,0.0\r\n";
  const auto frames = read_marker_stream(dir);
  ASSERT_EQ(frames.size(), 2u);
  EXPECT_EQ(frames.at(0).positions.size(), 2u);
  EXPECT_EQ(frames.at(1).positions[1], Vec2(1.1, 0.0));

  std::ofstream(dir / "c.csv") << "2,abc,0.0\n";
  try {
    read_marker_stream(dir);
    FAIL() << "bad row accepted";
  } catch (const ParseError & e) {
    EXPECT_NE(std::string(e.what()).find("c.csv"), std::string::npos);
  }
  EXPECT_THROW(read_marker_stream(dir / "missing"), Error);
}

TEST(Tracking, StationaryDetectionsLeaveStateUnchanged)
{
  const MarkerSet first = lattice(4, 1.0);
  const auto init = track_init(first);
  for (const auto & d : displacements(init)) {
    EXPECT_EQ(d.vector, Vec2(0.0, 0.0));
  }
  const auto s = track_update(init, first, 0.5);
  EXPECT_EQ(s.current_positions, init.current_positions);
  EXPECT_EQ(s.alive, init.alive);
}

TEST(Tracking, DisplacementsAccumulateOverUpdates)
{
  const MarkerSet first = lattice(4, 1.0);
  auto s = track_init(first);
  MarkerSet frame = first;
  for (int k = 0; k < 5; ++k) {
    for (auto & p : frame.positions) {
      p += Vec2(0.1, 0.0);
    }
    s = track_update(s, frame, 0.5);
  }
  for (const auto & d : displacements(s)) {
    EXPECT_LT((d.vector - Vec2(0.5, 0.0)).norm(), 1e-12);
  }
}

TEST(Tracking, RandomWalkWithinGateIsReplayedExactly)
{
  const MarkerSet first = lattice(5, 1.0);
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> step(-0.05, 0.05);
  auto s = track_init(first);
  MarkerSet frame = first;
  for (int k = 0; k < 30; ++k) {
    for (auto & p : frame.positions) {
      p += Vec2(step(rng), step(rng));
    }
    s = track_update(s, frame, 0.2);
  }
  const auto d = displacements(s);
  for (std::size_t m = 0; m < d.size(); ++m) {
    EXPECT_EQ(d[m].vector, frame.positions[m] - first.positions[m]);
  }
}

TEST(Rbf, ZeroSamplesGiveZeroField)
{
  std::vector<DisplacementSample> samples;
  for (const auto & p : lattice(4, 1.0).positions) {
    samples.push_back({p, {0.0, 0.0}});
  }
  EXPECT_EQ(rbf_interpolate(samples, GridSpec{5, 5, 0.75, {0.0, 0.0}}, {}).max_norm(), 0.0);
}

}  // namespace
}  // namespace tacforce
