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

#ifndef TACFORCE__WRENCH_HPP_
#define TACFORCE__WRENCH_HPP_

#include "tacforce/field.hpp"

#include <array>
#include <optional>
#include <string_view>

namespace tacforce
{

/// The three regressed axes: normal (N), tangential magnitude (N), torsion (N mm).
enum class Axis
{
  Normal = 0,
  Tangential = 1,
  Torsion = 2,
};

inline constexpr std::array<Axis, 3> kAllAxes{Axis::Normal, Axis::Tangential, Axis::Torsion};

inline std::string_view to_string(Axis a)
{
  switch (a) {
    case Axis::Normal:
      return "normal";
    case Axis::Tangential:
      return "tangential";
    case Axis::Torsion:
      return "torsion";
  }
  return "unknown";
}

struct WrenchEstimate
{
  double f_n{0.0};
  double f_t{0.0};
  std::optional<Vec2> f_t_direction;
  double f_tau{0.0};

  double axis(Axis a) const
  {
    switch (a) {
      case Axis::Normal:
        return f_n;
      case Axis::Tangential:
        return f_t;
      case Axis::Torsion:
        return f_tau;
    }
    return 0.0;
  }
};

}  // namespace tacforce

#endif  // TACFORCE__WRENCH_HPP_
