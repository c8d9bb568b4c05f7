/*
 * Copyright 2026 The microscope authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

// Tree serialization.
//   JSON:   {"base": b, "dim": d, "height": h, "levels": [[packed, ...], ...]}
//   binary: "BTRE", then little-endian u64 base, dim, height and per level a
//           u64 count followed by that many u64 packed addresses.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "microscope/tree.hpp"

namespace microscope {

nlohmann::json tree_to_json(const CodedTree& t);
CodedTree tree_from_json(const nlohmann::json& j);

std::vector<std::uint8_t> tree_to_binary(const CodedTree& t);
CodedTree tree_from_binary(const std::vector<std::uint8_t>& bytes);

/// Format chosen by extension: ".json" is JSON, anything else binary.
void save_tree(const CodedTree& t, const std::string& path);
CodedTree load_tree(const std::string& path);

}  // namespace microscope
