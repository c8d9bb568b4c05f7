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

// Seeded random trees for property checks.

#include <cstdint>
#include <random>

#include "microscope/tree.hpp"

namespace microscope {

/// Every vertex keeps each child independently with probability keep, and
/// at least one child, down to the given height.
CodedTree random_tidy_tree(const TreeParams& params, int height, double keep, std::mt19937_64& rng);

/// A sparse random tree repaired top-down until every vertex a with
/// h(a) + m <= height has some n <= m with #T(a, n) >= b^(s n). Repairs only
/// add vertices, so earlier vertices stay large.
CodedTree random_locally_large_tree(const TreeParams& params, int height, double s, int m, std::mt19937_64& rng);

}  // namespace microscope
