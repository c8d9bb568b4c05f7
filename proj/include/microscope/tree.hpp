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

// Coded b-adic trees: a compact subset of [0,1]^d seen through the nested
// grid of cubes of side b^-n. Level n holds the packed addresses of the
// occupied cubes of side b^-n, sorted ascending.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "microscope/rational.hpp"

namespace microscope {

struct TreeParams {
  int base = 2;
  int dim = 1;

  TreeParams() = default;
  TreeParams(int base_, int dim_);

  std::uint64_t arity() const;
  /// Deepest level whose packed addresses still fit in 63 bits.
  int max_height() const;
  /// b^n along one axis; throws Overflow past 2^62.
  std::int64_t axis_extent(int n) const;

  friend bool operator==(const TreeParams&, const TreeParams&) = default;
};

/// A vertex: its height and its digit string packed base-arity, first digit
/// most significant. The root is {0, 0}.
struct VertexAddress {
  int height = 0;
  std::uint64_t packed = 0;

  static VertexAddress root() { return {}; }
  static VertexAddress from_digits(const TreeParams& p, std::span<const std::uint64_t> digits);
  std::vector<std::uint64_t> digits(const TreeParams& p) const;
  VertexAddress parent(const TreeParams& p) const;
  VertexAddress child(const TreeParams& p, std::uint64_t digit) const;

  friend bool operator==(const VertexAddress&, const VertexAddress&) = default;
  /// Lexicographic digit order (prefix first), i.e. left to right.
  friend bool lex_less(const TreeParams& p, const VertexAddress& a, const VertexAddress& b);
};

/// Per-axis cube indices of a packed address at the given height.
std::vector<std::int64_t> axis_indices(const TreeParams& p, int height, std::uint64_t packed);
std::uint64_t pack_axis_indices(const TreeParams& p, int height, std::span<const std::int64_t> idx);

/// Geometric cube of an address: corner = index * b^-h per axis, side b^-h.
struct DyadicCube {
  VertexAddress address;
  std::vector<Rational> corner;
  Rational side;

  static DyadicCube of(const TreeParams& p, const VertexAddress& a);
};

class CodedTree {
 public:
  /// Validates prefix closure and, unless allow_untidy, tidiness.
  CodedTree(TreeParams params, std::vector<std::vector<std::uint64_t>> levels, bool allow_untidy = false);

  const TreeParams& params() const { return params_; }
  int height() const { return static_cast<int>(levels_.size()) - 1; }
  bool is_tidy() const { return tidy_; }

  std::span<const std::uint64_t> level(int n) const;
  std::uint64_t level_count(int n) const;
  std::uint64_t leaf_count() const { return leaves_; }
  bool contains(const VertexAddress& a) const;

  /// Index range in level(h(a)+n) of the descendants of a at relative depth n.
  std::pair<std::size_t, std::size_t> descendant_range(const VertexAddress& a, int n) const;
  std::uint64_t descendant_count(const VertexAddress& a, int n) const;
  /// Leaves of the tree in left-to-right order (only differs from the last
  /// level for untidy trees).
  std::vector<VertexAddress> leaves() const;

  const std::vector<std::vector<std::uint64_t>>& levels() const { return levels_; }

  friend bool operator==(const CodedTree& a, const CodedTree& b) {
    return a.params_ == b.params_ && a.levels_ == b.levels_;
  }

 private:
  TreeParams params_;
  std::vector<std::vector<std::uint64_t>> levels_;
  bool tidy_ = true;
  std::uint64_t leaves_ = 0;
};

/// Axis-aligned closed box with coordinates of type T.
template <class T>
struct BasicBox {
  std::vector<T> lo;
  std::vector<T> hi;
};
using RationalBox = BasicBox<Rational>;
using RealBox = BasicBox<double>;

// ---- construction -------------------------------------------------------

CodedTree tree_from_levels(const TreeParams& params, std::vector<std::vector<std::uint64_t>> levels);
CodedTree full_tree(const TreeParams& params, int height);
/// Point set to tree, with boundary canonicalization: a point on an interior
/// grid face marks the lower cube when neither open side meets the set, both
/// cubes when both do, and the occupied side otherwise.
CodedTree tree_from_point_set(const TreeParams& params, std::span<const std::vector<Rational>> points, int depth);
/// Union of closed boxes clipped to [0,1]^d. Degenerate axes follow the point
/// rule; a nondegenerate extent marks the cubes whose open interior it meets.
CodedTree tree_from_boxes(const TreeParams& params, std::span<const RationalBox> boxes, int depth);
/// Floating boxes are snapped to the grid within 1e-7 cube widths.
CodedTree tree_from_boxes(const TreeParams& params, std::span<const RealBox> boxes, int depth);

// ---- queries --------------------------------------------------------------

/// T(a,n) re-rooted at a; height min(n, h(T) - h(a)).
CodedTree subtree(const CodedTree& t, const VertexAddress& a, int n);
CodedTree truncate(const CodedTree& t, int n);
std::uint64_t level_count(const CodedTree& t, int n);
std::uint64_t leaf_count(const CodedTree& t);
/// Throws the matching error when the tree breaks prefix closure or tidiness.
void validate(const CodedTree& t, bool require_tidy = true);

struct TreeSequenceLimit {
  std::vector<CodedTree> inputs;
  /// stable_from[n] = I(n): first index from which all depth-n truncations
  /// agree with the last tree; nullopt where the last two trees disagree.
  std::vector<std::optional<std::size_t>> stable_from;
  int stabilized_depth = -1;
  /// Truncation of the last tree at stabilized_depth.
  std::optional<CodedTree> limit;
  std::vector<int> not_stabilized;
};

TreeSequenceLimit tree_limit(std::span<const CodedTree> seq);

/// Exact Hausdorff distance between the unions of level-n cubes. Computed on
/// rationals for d = 1; for d >= 2 by branch and bound to 1e-12.
double hausdorff_distance_at_resolution(const CodedTree& a, const CodedTree& b, int n);

}  // namespace microscope
