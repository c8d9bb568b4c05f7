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

// JSON views of the result types. Every top-level document carries
// "schema": 1.

#include <json.hpp>

#include "microscope/constructions.hpp"
#include "microscope/dimension.hpp"
#include "microscope/gallery.hpp"
#include "microscope/largeness.hpp"
#include "microscope/tree.hpp"

namespace microscope {

inline constexpr int kSchemaVersion = 1;

nlohmann::json to_json(const VertexAddress& a);
nlohmann::json to_json(const DimensionEstimate& e);
nlohmann::json to_json(const LargenessReport& r);
nlohmann::json to_json(const ExtractedSubtree& ex, int base, double s);
nlohmann::json to_json(const TreeSequenceLimit& l);
nlohmann::json to_json(const MicrosetCandidate& c);
nlohmann::json to_json(const PkReport& r, std::size_t max_packings = 64);
nlohmann::json to_json(const SingletonReport& r);
nlohmann::json to_json(const Spectrum& s, bool with_windows = false);
nlohmann::json to_json(const DeltaConstruction& c);
nlohmann::json tree_summary(const CodedTree& t);

}  // namespace microscope
