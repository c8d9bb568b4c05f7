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

// Local and global largeness of tidy trees, and the left-to-right extraction
// of a large subtree with its s-weight bookkeeping.
//
// Counts are compared against base^(s n). When s n is an integer the
// comparison is exact; otherwise it is done on logarithms with a relative
// tolerance of 1e-12, ties counting as large (and as small).

#include <cstdint>
#include <optional>
#include <vector>

#include "microscope/tree.hpp"

namespace microscope {

bool count_at_least_power(std::uint64_t count, int base, double s, int n);
bool count_at_most_power(std::uint64_t count, int base, double s, int n);

struct LargenessParams {
  double s = 0.0;
  int m = 1;
  double C = 1.0;

  void validate() const;
};

struct Witness {
  VertexAddress vertex;
  int n = 0;
  std::uint64_t count = 0;
};

struct LargenessReport {
  bool verdict = true;
  std::vector<Witness> witnesses;
  std::optional<VertexAddress> failing;
};

LargenessReport is_locally_large(const CodedTree& t, double s, int m);
LargenessReport is_locally_small(const CodedTree& t, double s, int m);

bool is_globally_large(const CodedTree& t, double s, double C);
bool is_globally_small(const CodedTree& t, double s, double C);
/// First level n in [1, h(T)] breaking the global inequality, if any.
std::optional<int> global_failure(const CodedTree& t, double s, double C, bool large);

struct Graft {
  VertexAddress leaf;
  int n = 0;
  std::uint64_t leaves_added = 0;
};

struct ExtractedSubtree {
  CodedTree tree;  // prefix closed; leaves have heights in [N - m, N]
  std::vector<Graft> grafts;
  double weight = 0.0;
  int N = 0;
};

ExtractedSubtree extract_large_subtree(const CodedTree& t, double s, int m, int N);
/// Rebuilds T^N from its grafting log, checking each graft lands on a leaf.
CodedTree replay_grafts(const CodedTree& t, const std::vector<Graft>& grafts);
/// Leaf weight after collapsing the grafted blocks one at a time, newest
/// first: front() is W(T^N), back() the weight of the bare root.
std::vector<double> collapse_weights(const ExtractedSubtree& ex, int base, double s);

/// Largest s for which t is locally (s, m)-large.
double local_large_exponent(const CodedTree& t, int m);

}  // namespace microscope
