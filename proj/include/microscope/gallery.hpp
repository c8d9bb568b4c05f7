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

// Windows of a coded tree read as minisets, searches for sparse and dense
// microset candidates, the two-cube property P(k) with its packing count,
// and the empirical spectrum of window exponents.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "microscope/dimension.hpp"
#include "microscope/tree.hpp"

namespace microscope {

struct SamplePolicy {
  /// Admit the root window (the set itself).
  bool include_root = false;
  /// Above this many windows a seeded uniform sample of this size is used.
  std::uint64_t budget = 1'000'000;
  std::uint64_t seed = 0;
  int workers = 1;

  int min_height() const { return include_root ? 0 : 1; }
};

struct Window {
  VertexAddress address;
  std::uint64_t count = 0;
  double exponent = 0.0;
};

struct WindowSet {
  std::vector<Window> windows;  // (height, address) order
  std::uint64_t total = 0;
  bool sampled = false;
};

/// Depth-m windows with heights in [policy.min_height(), h(T) - m].
WindowSet collect_windows(const CodedTree& t, int m, const SamplePolicy& policy = {});

struct Miniset {
  VertexAddress address;
  std::uint64_t lambda = 1;  // base^h(a)
  CodedTree tree;
};

std::vector<Miniset> enumerate_minisets(const CodedTree& t, int n, const SamplePolicy& policy = {});

/// Some occupied cube of the tree's deepest level avoids the boundary of
/// [0,1]^d.
bool meets_interior(const CodedTree& t);

struct WindowStep {
  VertexAddress address;
  int depth = 0;
  double epsilon = 0.0;
};

struct MicrosetCandidate {
  std::vector<WindowStep> windows;  // strictly increasing heights
  std::vector<std::uint64_t> scaling;
  CodedTree limit{TreeParams(2, 1), {{0}}};
  TreeSequenceLimit stabilization;
  bool interior = false;
  double exponent = 0.0;
  /// Extremal window exponent the search measured against.
  double target = 0.0;
  double epsilon = 0.0;
  /// Per-level counts of the final window.
  std::vector<ScaleCount> counts;
  std::vector<DimensionEstimate> estimates;
  bool sampled = false;
};

/// Windows whose counts stay below base^((s + 2 eps) n) for all n <= M,
/// s the lower window estimate, along the schedule eps_j = max(2^-j, eps).
MicrosetCandidate min_microset_search(const CodedTree& t, double epsilon, int M, const SamplePolicy& policy = {});
/// Densest windows per height; the last realizes the Assouad window estimate.
MicrosetCandidate max_microset_search(const CodedTree& t, int M, const SamplePolicy& policy = {});

/// True when the counts of the final window obey the search bound.
bool certificate_holds(const MicrosetCandidate& c, int base, bool sparse);

/// Grid levels per halving step of P(k): the largest j with base^j <= 2^k, so
/// that a depth-j cube is at least 2^-k times its window. Zero when no level
/// is coarse enough.
int pk_step_depth(int base, int k);

struct Packing {
  VertexAddress window;
  int m = 0;
  std::vector<VertexAddress> cubes;
  double R = 0.0;
  double r = 0.0;
  bool disjoint = false;
  /// 2^m >= (R/r)^(1/k) / 2, the doubling bound.
  bool bound_holds = false;
};

struct PkReport {
  int k = 2;
  int step_depth = 1;
  int h_lo = 0;
  int h_hi = 0;
  bool verdict = true;
  std::uint64_t windows_tested = 0;
  std::uint64_t windows_passed = 0;
  std::optional<VertexAddress> failing;
  std::vector<Packing> packings;
  double lower_bound = 0.5;

  /// Every reported packing is pairwise interior-disjoint.
  bool packings_sound() const;
  /// Every reported packing meets the doubling bound.
  bool bounds_hold() const;
};

/// A window passes when two of its descendants pk_step_depth levels down lie
/// at least one cube apart along some axis. Windows are occupied vertices
/// with height in [h_lo, h_hi] and room for one step below; h_hi < 0 means as
/// deep as possible.
PkReport check_property_Pk(const CodedTree& t, int k, int h_lo = 0, int h_hi = -1, const SamplePolicy& policy = {});

struct SingletonReport {
  bool singleton_candidate = false;
  std::optional<int> passing_k;
  double lower_bound = 0.0;
  /// One failing window per tested k.
  std::vector<WindowStep> witnesses;
  std::vector<PkReport> reports;
};

SingletonReport singleton_microset_detect(const CodedTree& t, int k_max, int h_lo = 0, int h_hi = -1,
                                          const SamplePolicy& policy = {});

struct Cluster {
  double lo = 0.0;
  double hi = 0.0;
  double center = 0.0;
  std::uint64_t count = 0;
  double fraction = 0.0;
};

struct Spectrum {
  int M = 0;
  double bin_width = 0.02;
  WindowSet windows;
  std::vector<std::uint64_t> histogram;  // bin i covers [i w, (i + 1) w)
  std::vector<Cluster> clusters;

  std::string histogram_csv() const;
};

Spectrum dimension_spectrum(const CodedTree& t, int M, const SamplePolicy& policy = {}, double bin_width = 0.02);

}  // namespace microscope
