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

#ifndef TACFORCE__JSON_IO_HPP_
#define TACFORCE__JSON_IO_HPP_

#include "tacforce/field.hpp"
#include "tacforce/surrogate.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>

namespace tacforce
{

// JSON helpers shared by the dataset, model and scenario formats.

nlohmann::json read_json(const std::filesystem::path & path);
void write_json(const std::filesystem::path & path, const nlohmann::ordered_json & doc);

nlohmann::ordered_json to_json(const Vec2 & v);
Vec2 vec2_from_json(const nlohmann::json & j);

nlohmann::ordered_json to_json(const GridSpec & g);
GridSpec grid_from_json(const nlohmann::json & j);

nlohmann::ordered_json to_json(const LoadTriple & load);
LoadTriple load_from_json(const nlohmann::json & j);

nlohmann::ordered_json to_json(const SurrogateConfig & cfg);
/// Missing keys keep their defaults.
SurrogateConfig surrogate_from_json(const nlohmann::json & j);

}  // namespace tacforce

#endif  // TACFORCE__JSON_IO_HPP_
