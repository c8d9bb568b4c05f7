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

// Seeded invariant suite over randomly generated trees. The report depends
// only on the options, never on timing or worker count.

#include <cstdint>

#include <json.hpp>

namespace microscope {

struct VerifyOptions {
  std::uint64_t seed = 0;
  /// Locally large trees fed to the extraction check.
  int large_trees = 200;
  int random_trees = 40;
  int workers = 1;
};

nlohmann::json verify_suite(const VerifyOptions& opt = {});
bool verify_passed(const nlohmann::json& report);

}  // namespace microscope
