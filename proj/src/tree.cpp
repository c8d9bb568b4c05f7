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
#include "microscope/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "microscope/error.hpp"

namespace microscope {
namespace {

std::uint64_t checked_pow(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > (std::numeric_limits<std::uint64_t>::max() >> 1) / base) {
      throw Error(ErrorCode::Overflow, "address space exceeds 63 bits");
    }
    r *= base;
  }
  return r;
}

// Position on the depth-D grid, in units of b^-D. Off-grid values lie
// strictly inside (floor, floor + 1).
struct GridPos {
  std::int64_t floor = 0;
  bool on_grid = true;

  bool less_than(std::int64_t i) const { return floor < i; }
  bool greater_than(std::int64_t i) const { return on_grid ? floor > i : floor >= i; }
  bool equals(std::int64_t i) const { return on_grid && floor == i; }
};

GridPos to_grid(const Rational& x, std::int64_t scale) {
  auto [f, exact] = x.scaled_floor(scale);
  return {f, exact};
}

GridPos to_grid(double x, std::int64_t scale) {
  const double v = x * static_cast<double>(scale);
  if (!std::isfinite(v) || std::abs(v) > 4.0e18) throw Error(ErrorCode::Overflow, "coordinate out of range");
  const double r = std::round(v);
  if (std::abs(v - r) <= 1e-7) return {static_cast<std::int64_t>(r), true};
  return {static_cast<std::int64_t>(std::floor(v)), false};
}

struct GridBox {
  std::vector<GridPos> lo;
  std::vector<GridPos> hi;
  std::vector<bool> degenerate;
};

template <class T>
bool coord_equal(const T& a, const T& b, std::int64_t scale);

template <>
bool coord_equal<Rational>(const Rational& a, const Rational& b, std::int64_t) {
  return a == b;
}

template <>
bool coord_equal<double>(const double& a, const double& b, std::int64_t scale) {
  return std::abs(a - b) * static_cast<double>(scale) <= 1e-7;
}

// Clips to [0, S]^d; returns false when the box misses the unit cube.
template <class T>
bool to_grid_box(const BasicBox<T>& box, int dim, std::int64_t scale, GridBox& out) {
  if (static_cast<int>(box.lo.size()) != dim || static_cast<int>(box.hi.size()) != dim) {
    throw Error(ErrorCode::InvalidArgument, "box dimension does not match tree params");
  }
  out.lo.assign(dim, {});
  out.hi.assign(dim, {});
  out.degenerate.assign(dim, false);
  for (int j = 0; j < dim; ++j) {
    GridPos lo = to_grid(box.lo[j], scale);
    GridPos hi = to_grid(box.hi[j], scale);
    bool degenerate = coord_equal(box.lo[j], box.hi[j], scale);
    if (!degenerate && box.hi[j] < box.lo[j]) throw Error(ErrorCode::InvalidArgument, "box with hi < lo");
    if (hi.less_than(0) || lo.greater_than(scale)) return false;
    if (lo.less_than(0)) lo = {0, true};
    if (hi.greater_than(scale)) hi = {scale, true};
    if (hi.equals(0) || lo.equals(scale)) degenerate = true;
    if (degenerate) hi = lo;
    out.lo[j] = lo;
    out.hi[j] = hi;
    out.degenerate[j] = degenerate;
  }
  return true;
}

bool near_in_other_axes(const GridBox& a, const GridBox& b, int axis) {
  for (std::size_t k = 0; k < a.lo.size(); ++k) {
    if (static_cast<int>(k) == axis) continue;
    if (b.lo[k].floor > a.hi[k].floor + 1) return false;
    if (b.hi[k].floor + 1 < a.lo[k].floor) return false;
  }
  return true;
}

// Does any box meet the open slab (i - 1, i) (lower) or (i, i + 1) along axis?
bool side_occupied(std::span<const GridBox> boxes, const GridBox& self, int axis, std::int64_t lo_line) {
  const std::int64_t hi_line = lo_line + 1;
  for (const GridBox& b : boxes) {
    if (!(b.lo[axis].less_than(hi_line) && b.hi[axis].greater_than(lo_line))) continue;
    if (near_in_other_axes(self, b, axis)) return true;
  }
  return false;
}

std::vector<std::int64_t> axis_range(std::span<const GridBox> boxes, const GridBox& box, int axis,
                                     std::int64_t scale) {
  std::vector<std::int64_t> out;
  const GridPos lo = box.lo[axis];
  const GridPos hi = box.hi[axis];
  if (box.degenerate[axis]) {
    if (!lo.on_grid) {
      out.push_back(lo.floor);
    } else if (lo.floor == 0) {
      out.push_back(0);
    } else if (lo.floor == scale) {
      out.push_back(scale - 1);
    } else {
      const std::int64_t i = lo.floor;
      bool lower = side_occupied(boxes, box, axis, i - 1);
      bool upper = side_occupied(boxes, box, axis, i);
      if (lower || !upper) out.push_back(i - 1);
      if (upper) out.push_back(i);
    }
    return out;
  }
  std::int64_t first = lo.floor;
  std::int64_t last = hi.on_grid ? hi.floor - 1 : hi.floor;
  first = std::max<std::int64_t>(first, 0);
  last = std::min<std::int64_t>(last, scale - 1);
  for (std::int64_t i = first; i <= last; ++i) out.push_back(i);
  return out;
}

CodedTree tree_from_grid_boxes(const TreeParams& params, std::vector<GridBox> boxes, int depth) {
  const std::int64_t scale = params.axis_extent(depth);
  std::vector<std::uint64_t> cubes;
  std::vector<std::vector<std::int64_t>> ranges(params.dim);
  std::vector<std::int64_t> idx(params.dim);
  for (const GridBox& box : boxes) {
    bool empty = false;
    for (int j = 0; j < params.dim; ++j) {
      ranges[j] = axis_range(boxes, box, j, scale);
      if (ranges[j].empty()) empty = true;
    }
    if (empty) continue;
    if (params.dim == 1) {
      for (std::int64_t i : ranges[0]) cubes.push_back(static_cast<std::uint64_t>(i));
      continue;
    }
    // odometer over the product of per-axis index sets
    std::vector<std::size_t> pos(params.dim, 0);
    while (true) {
      for (int j = 0; j < params.dim; ++j) idx[j] = ranges[j][pos[j]];
      cubes.push_back(pack_axis_indices(params, depth, idx));
      int j = 0;
      while (j < params.dim && ++pos[j] == ranges[j].size()) pos[j++] = 0;
      if (j == params.dim) break;
    }
  }
  if (cubes.empty()) throw Error(ErrorCode::EmptyRoot, "set does not meet the unit cube");
  std::sort(cubes.begin(), cubes.end());
  cubes.erase(std::unique(cubes.begin(), cubes.end()), cubes.end());
  std::vector<std::vector<std::uint64_t>> levels(depth + 1);
  levels[depth] = std::move(cubes);
  const std::uint64_t arity = params.arity();
  for (int n = depth; n > 0; --n) {
    auto& up = levels[n - 1];
    up.reserve(levels[n].size());
    for (std::uint64_t v : levels[n]) {
      std::uint64_t parent = v / arity;
      if (up.empty() || up.back() != parent) up.push_back(parent);
    }
  }
  return CodedTree(params, std::move(levels));
}

template <class T>
CodedTree boxes_to_tree(const TreeParams& params, std::span<const BasicBox<T>> boxes, int depth) {
  if (depth < 0 || depth > params.max_height()) throw Error(ErrorCode::DepthOutOfRange, "depth " + std::to_string(depth));
  const std::int64_t scale = params.axis_extent(depth);
  std::vector<GridBox> grid;
  grid.reserve(boxes.size());
  GridBox g;
  for (const auto& b : boxes) {
    if (to_grid_box(b, params.dim, scale, g)) grid.push_back(g);
  }
  return tree_from_grid_boxes(params, std::move(grid), depth);
}

}  // namespace

// ---- TreeParams / addresses ------------------------------------------------

TreeParams::TreeParams(int base_, int dim_) : base(base_), dim(dim_) {
  if (base < 2) throw Error(ErrorCode::InvalidArgument, "base must be >= 2");
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "dim must be >= 1");
  if (std::pow(static_cast<double>(base), dim) > 4294967296.0) {
    throw Error(ErrorCode::InvalidArgument, "arity b^d too large");
  }
}

std::uint64_t TreeParams::arity() const { return checked_pow(static_cast<std::uint64_t>(base), dim); }

int TreeParams::max_height() const {
  const std::uint64_t a = arity();
  std::uint64_t v = 1;
  int h = 0;
  while (v <= (std::numeric_limits<std::uint64_t>::max() >> 1) / a) {
    v *= a;
    ++h;
  }
  return h;
}

std::int64_t TreeParams::axis_extent(int n) const {
  return static_cast<std::int64_t>(checked_pow(static_cast<std::uint64_t>(base), n));
}

VertexAddress VertexAddress::from_digits(const TreeParams& p, std::span<const std::uint64_t> digits) {
  const std::uint64_t a = p.arity();
  if (static_cast<int>(digits.size()) > p.max_height()) throw Error(ErrorCode::DepthOutOfRange, "address too long");
  VertexAddress v;
  for (std::uint64_t d : digits) {
    if (d >= a) throw Error(ErrorCode::InvalidArgument, "digit out of range");
    v.packed = v.packed * a + d;
  }
  v.height = static_cast<int>(digits.size());
  return v;
}

std::vector<std::uint64_t> VertexAddress::digits(const TreeParams& p) const {
  const std::uint64_t a = p.arity();
  std::vector<std::uint64_t> out(height);
  std::uint64_t v = packed;
  for (int k = height - 1; k >= 0; --k) {
    out[k] = v % a;
    v /= a;
  }
  return out;
}

VertexAddress VertexAddress::parent(const TreeParams& p) const {
  if (height == 0) throw Error(ErrorCode::InvalidArgument, "root has no parent");
  return {height - 1, packed / p.arity()};
}

VertexAddress VertexAddress::child(const TreeParams& p, std::uint64_t digit) const {
  return {height + 1, packed * p.arity() + digit};
}

bool lex_less(const TreeParams& p, const VertexAddress& a, const VertexAddress& b) {
  const int m = std::min(a.height, b.height);
  const std::uint64_t ar = p.arity();
  const std::uint64_t pa = a.packed / checked_pow(ar, a.height - m);
  const std::uint64_t pb = b.packed / checked_pow(ar, b.height - m);
  if (pa != pb) return pa < pb;
  return a.height < b.height;
}

std::vector<std::int64_t> axis_indices(const TreeParams& p, int height, std::uint64_t packed) {
  std::vector<std::int64_t> idx(p.dim, 0);
  if (p.dim == 1) {
    idx[0] = static_cast<std::int64_t>(packed);
    return idx;
  }
  const std::uint64_t a = p.arity();
  std::vector<std::uint64_t> digits(height);
  for (int k = height - 1; k >= 0; --k) {
    digits[k] = packed % a;
    packed /= a;
  }
  for (int k = 0; k < height; ++k) {
    std::uint64_t d = digits[k];
    for (int j = 0; j < p.dim; ++j) {
      idx[j] = idx[j] * p.base + static_cast<std::int64_t>(d % p.base);
      d /= p.base;
    }
  }
  return idx;
}

std::uint64_t pack_axis_indices(const TreeParams& p, int height, std::span<const std::int64_t> idx) {
  if (p.dim == 1) return static_cast<std::uint64_t>(idx[0]);
  const std::uint64_t a = p.arity();
  std::uint64_t packed = 0;
  std::int64_t place = p.axis_extent(height - 1 < 0 ? 0 : height - 1);
  for (int k = 0; k < height; ++k) {
    std::uint64_t digit = 0;
    std::uint64_t weight = 1;
    for (int j = 0; j < p.dim; ++j) {
      digit += static_cast<std::uint64_t>((idx[j] / place) % p.base) * weight;
      weight *= static_cast<std::uint64_t>(p.base);
    }
    packed = packed * a + digit;
    place /= p.base;
  }
  return packed;
}

DyadicCube DyadicCube::of(const TreeParams& p, const VertexAddress& a) {
  DyadicCube c;
  c.address = a;
  const std::int64_t extent = p.axis_extent(a.height);
  c.side = Rational(1, extent);
  for (std::int64_t i : axis_indices(p, a.height, a.packed)) c.corner.emplace_back(i, extent);
  return c;
}

// ---- CodedTree -------------------------------------------------------------

CodedTree::CodedTree(TreeParams params, std::vector<std::vector<std::uint64_t>> levels, bool allow_untidy)
    : params_(params), levels_(std::move(levels)) {
  if (levels_.empty() || levels_[0].size() != 1 || levels_[0][0] != 0) {
    throw Error(ErrorCode::EmptyRoot, "level 0 must hold exactly the root");
  }
  if (height() > params_.max_height()) throw Error(ErrorCode::DepthOutOfRange, "tree too deep for packed addresses");
  const std::uint64_t a = params_.arity();
  std::uint64_t limit = 1;
  tidy_ = true;
  leaves_ = 0;
  for (int n = 0; n <= height(); ++n) {
    auto& lvl = levels_[n];
    if (!std::is_sorted(lvl.begin(), lvl.end())) std::sort(lvl.begin(), lvl.end());
    lvl.erase(std::unique(lvl.begin(), lvl.end()), lvl.end());
    if (n > 0) limit *= a;
    if (!lvl.empty() && lvl.back() >= limit) {
      throw Error(ErrorCode::InvalidArgument, "address out of range at level " + std::to_string(n));
    }
    if (n == 0) continue;
    if (lvl.empty()) throw Error(ErrorCode::NotTidy, "level " + std::to_string(n) + " is empty");
    // parents of level n, in order, must be a subset (prefix closure) of
    // level n-1 and for tidiness cover all of it
    const auto& up = levels_[n - 1];
    std::size_t j = 0;
    std::size_t covered = 0;
    std::uint64_t last_parent = std::numeric_limits<std::uint64_t>::max();
    for (std::uint64_t v : lvl) {
      const std::uint64_t parent = v / a;
      if (parent == last_parent) continue;
      last_parent = parent;
      while (j < up.size() && up[j] < parent) ++j;
      if (j == up.size() || up[j] != parent) {
        throw Error(ErrorCode::PrefixViolation,
                    "vertex " + std::to_string(v) + " at level " + std::to_string(n) + " has no parent");
      }
      ++covered;
    }
    if (covered != up.size()) {
      tidy_ = false;
      leaves_ += up.size() - covered;
    }
  }
  leaves_ += levels_.back().size();
  if (!tidy_ && !allow_untidy) throw Error(ErrorCode::NotTidy, "tree has a leaf above its height");
}

std::span<const std::uint64_t> CodedTree::level(int n) const {
  if (n < 0 || n > height()) throw Error(ErrorCode::DepthOutOfRange, "level " + std::to_string(n));
  return levels_[n];
}

std::uint64_t CodedTree::level_count(int n) const { return level(n).size(); }

bool CodedTree::contains(const VertexAddress& a) const {
  if (a.height < 0 || a.height > height()) return false;
  const auto& lvl = levels_[a.height];
  return std::binary_search(lvl.begin(), lvl.end(), a.packed);
}

std::pair<std::size_t, std::size_t> CodedTree::descendant_range(const VertexAddress& a, int n) const {
  const int target = a.height + n;
  if (n < 0 || target > height()) throw Error(ErrorCode::DepthOutOfRange, "window exceeds tree height");
  const std::uint64_t span = checked_pow(params_.arity(), n);
  const auto& lvl = levels_[target];
  auto lo = std::lower_bound(lvl.begin(), lvl.end(), a.packed * span);
  auto hi = std::lower_bound(lo, lvl.end(), (a.packed + 1) * span);
  return {static_cast<std::size_t>(lo - lvl.begin()), static_cast<std::size_t>(hi - lvl.begin())};
}

std::uint64_t CodedTree::descendant_count(const VertexAddress& a, int n) const {
  auto [lo, hi] = descendant_range(a, n);
  return hi - lo;
}

std::vector<VertexAddress> CodedTree::leaves() const {
  std::vector<VertexAddress> out;
  const std::uint64_t a = params_.arity();
  for (int n = 0; n <= height(); ++n) {
    for (std::uint64_t v : levels_[n]) {
      bool leaf = true;
      if (n < height()) {
        const auto& down = levels_[n + 1];
        auto it = std::lower_bound(down.begin(), down.end(), v * a);
        leaf = it == down.end() || *it >= (v + 1) * a;
      }
      if (leaf) out.push_back({n, v});
    }
  }
  std::sort(out.begin(), out.end(), [&](const VertexAddress& x, const VertexAddress& y) { return lex_less(params_, x, y); });
  return out;
}

// ---- construction ------------------------------------------------------------

CodedTree tree_from_levels(const TreeParams& params, std::vector<std::vector<std::uint64_t>> levels) {
  return CodedTree(params, std::move(levels));
}

CodedTree full_tree(const TreeParams& params, int height) {
  if (height < 0 || height > params.max_height()) throw Error(ErrorCode::DepthOutOfRange, "height");
  std::vector<std::vector<std::uint64_t>> levels(height + 1);
  std::uint64_t count = 1;
  for (int n = 0; n <= height; ++n) {
    levels[n].resize(count);
    std::iota(levels[n].begin(), levels[n].end(), std::uint64_t{0});
    count *= params.arity();
  }
  return CodedTree(params, std::move(levels));
}

CodedTree tree_from_point_set(const TreeParams& params, std::span<const std::vector<Rational>> points, int depth) {
  if (points.empty()) throw Error(ErrorCode::EmptyRoot, "empty point set");
  std::vector<RationalBox> boxes;
  boxes.reserve(points.size());
  for (const auto& pt : points) {
    if (static_cast<int>(pt.size()) != params.dim) throw Error(ErrorCode::InvalidArgument, "point dimension mismatch");
    for (const Rational& x : pt) {
      if (x < Rational(0) || x > Rational(1)) throw Error(ErrorCode::PointOutOfRange, "point outside [0,1]^d: " + x.to_string());
    }
    boxes.push_back({pt, pt});
  }
  return tree_from_boxes(params, boxes, depth);
}

CodedTree tree_from_boxes(const TreeParams& params, std::span<const RationalBox> boxes, int depth) {
  return boxes_to_tree<Rational>(params, boxes, depth);
}

CodedTree tree_from_boxes(const TreeParams& params, std::span<const RealBox> boxes, int depth) {
  return boxes_to_tree<double>(params, boxes, depth);
}

// ---- queries -------------------------------------------------------------------

CodedTree subtree(const CodedTree& t, const VertexAddress& a, int n) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "negative subtree height");
  if (!t.contains(a)) throw Error(ErrorCode::VertexNotOccupied, "vertex not in tree");
  const int h = std::min(n, t.height() - a.height);
  const std::uint64_t ar = t.params().arity();
  std::vector<std::vector<std::uint64_t>> levels(h + 1);
  std::uint64_t offset = a.packed;
  for (int k = 0; k <= h; ++k) {
    auto [lo, hi] = t.descendant_range(a, k);
    auto src = t.level(a.height + k);
    levels[k].reserve(hi - lo);
    for (std::size_t i = lo; i < hi; ++i) levels[k].push_back(src[i] - offset);
    offset *= ar;
  }
  return CodedTree(t.params(), std::move(levels), !t.is_tidy());
}

CodedTree truncate(const CodedTree& t, int n) { return subtree(t, VertexAddress::root(), n); }

std::uint64_t level_count(const CodedTree& t, int n) { return t.level_count(n); }

std::uint64_t leaf_count(const CodedTree& t) { return t.leaf_count(); }

void validate(const CodedTree& t, bool require_tidy) {
  // Re-running the constructor checks is the validation.
  CodedTree copy(t.params(), t.levels(), !require_tidy);
  (void)copy;
}

TreeSequenceLimit tree_limit(std::span<const CodedTree> seq) {
  if (seq.empty()) throw Error(ErrorCode::InvalidArgument, "empty tree sequence");
  for (const auto& t : seq) {
    if (!(t.params() == seq.front().params())) throw Error(ErrorCode::MixedParams, "trees with different params");
  }
  TreeSequenceLimit out;
  out.inputs.assign(seq.begin(), seq.end());
  const CodedTree& last = seq.back();
  auto agree = [&](const CodedTree& t, int n) {
    if (t.height() < n) return false;
    for (int k = 0; k <= n; ++k) {
      if (t.levels()[k] != last.levels()[k]) return false;
    }
    return true;
  };
  const int H = last.height();
  out.stable_from.assign(H + 1, std::nullopt);
  for (int n = 0; n <= H; ++n) {
    if (seq.size() >= 2 && !agree(seq[seq.size() - 2], n)) {
      out.not_stabilized.push_back(n);
      continue;
    }
    std::size_t i = seq.size() - 1;
    while (i > 0 && agree(seq[i - 1], n)) --i;
    out.stable_from[n] = i;
    if (out.stabilized_depth == n - 1) out.stabilized_depth = n;
  }
  if (out.stabilized_depth >= 0) out.limit = truncate(last, out.stabilized_depth);
  return out;
}

// ---- Hausdorff distance -------------------------------------------------------

namespace {

// Closed runs [first, last + 1] of consecutive cube indices, in cube units.
std::vector<std::pair<std::int64_t, std::int64_t>> runs_1d(std::span<const std::uint64_t> level) {
  std::vector<std::pair<std::int64_t, std::int64_t>> runs;
  for (std::uint64_t v : level) {
    const auto i = static_cast<std::int64_t>(v);
    if (!runs.empty() && runs.back().second == i) {
      runs.back().second = i + 1;
    } else {
      runs.emplace_back(i, i + 1);
    }
  }
  return runs;
}

// Distance (doubled units) from doubled coordinate x to a union of runs.
std::int64_t dist_to_runs(std::int64_t x2, const std::vector<std::pair<std::int64_t, std::int64_t>>& runs) {
  auto it = std::upper_bound(runs.begin(), runs.end(), x2,
                             [](std::int64_t v, const auto& r) { return v < 2 * r.first; });
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  if (it != runs.end()) best = std::min(best, 2 * it->first - x2);
  if (it != runs.begin()) {
    const auto& r = *std::prev(it);
    best = std::min(best, x2 <= 2 * r.second ? std::int64_t{0} : x2 - 2 * r.second);
  }
  return best;
}

std::int64_t directed_1d(const std::vector<std::pair<std::int64_t, std::int64_t>>& a,
                         const std::vector<std::pair<std::int64_t, std::int64_t>>& b) {
  std::int64_t best = 0;
  for (const auto& r : a) {
    best = std::max(best, dist_to_runs(2 * r.first, b));
    best = std::max(best, dist_to_runs(2 * r.second, b));
  }
  for (std::size_t k = 0; k + 1 < b.size(); ++k) {
    const std::int64_t mid2 = b[k].second + b[k + 1].first;
    auto it = std::upper_bound(a.begin(), a.end(), mid2,
                               [](std::int64_t v, const auto& r) { return v < 2 * r.first; });
    if (it == a.begin()) continue;
    const auto& r = *std::prev(it);
    if (mid2 <= 2 * r.second) best = std::max(best, dist_to_runs(mid2, b));
  }
  return best;
}

struct CubeSet {
  const TreeParams* params;
  int level;
  std::vector<std::vector<std::int64_t>> cubes;  // per-cube axis indices
  std::span<const std::uint64_t> packed;

  bool has(std::span<const std::int64_t> idx) const {
    const std::int64_t extent = params->axis_extent(level);
    for (std::int64_t i : idx) {
      if (i < 0 || i >= extent) return false;
    }
    return std::binary_search(packed.begin(), packed.end(), pack_axis_indices(*params, level, idx));
  }

  double distance(std::span<const double> x) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : cubes) {
      double s = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) {
        const double lo = static_cast<double>(c[j]);
        const double d = x[j] < lo ? lo - x[j] : (x[j] > lo + 1.0 ? x[j] - lo - 1.0 : 0.0);
        s += d * d;
        if (s >= best * best) break;
      }
      best = std::min(best, std::sqrt(s));
    }
    return best;
  }
};

double directed_nd(const CubeSet& a, const CubeSet& b, double tol) {
  const std::size_t d = static_cast<std::size_t>(a.params->dim);
  struct Region {
    std::vector<double> corner;
    double side;
    double upper;
  };
  double lower = 0.0;
  std::vector<Region> stack;
  std::vector<double> center(d);
  auto eval = [&](const std::vector<double>& corner, double side) {
    for (std::size_t j = 0; j < d; ++j) center[j] = corner[j] + side / 2;
    const double g = b.distance(center);
    lower = std::max(lower, g);
    return g + side * std::sqrt(static_cast<double>(d)) / 2;
  };
  for (const auto& c : a.cubes) {
    if (b.has(c)) continue;
    std::vector<double> corner(c.begin(), c.end());
    double ub = eval(corner, 1.0);
    stack.push_back({corner, 1.0, ub});
  }
  while (!stack.empty()) {
    Region r = std::move(stack.back());
    stack.pop_back();
    if (r.upper <= lower + tol) continue;
    const double half = r.side / 2;
    for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
      std::vector<double> corner = r.corner;
      for (std::size_t j = 0; j < d; ++j) {
        if (mask & (std::size_t{1} << j)) corner[j] += half;
      }
      double ub = eval(corner, half);
      if (ub > lower + tol) stack.push_back({std::move(corner), half, ub});
    }
  }
  return lower;
}

}  // namespace

double hausdorff_distance_at_resolution(const CodedTree& a, const CodedTree& b, int n) {
  if (!(a.params() == b.params())) throw Error(ErrorCode::MixedParams, "trees with different params");
  if (n < 0 || n > std::min(a.height(), b.height())) throw Error(ErrorCode::DepthOutOfRange, "resolution exceeds tree height");
  const TreeParams& p = a.params();
  const std::int64_t extent = p.axis_extent(n);
  if (a.levels()[n] == b.levels()[n]) return 0.0;
  if (p.dim == 1) {
    auto ra = runs_1d(a.level(n));
    auto rb = runs_1d(b.level(n));
    const std::int64_t num = std::max(directed_1d(ra, rb), directed_1d(rb, ra));
    return Rational(num, 2 * extent).to_double();
  }
  auto make = [&](const CodedTree& t) {
    CubeSet s{&p, n, {}, t.level(n)};
    for (std::uint64_t v : t.level(n)) s.cubes.push_back(axis_indices(p, n, v));
    return s;
  };
  CubeSet sa = make(a);
  CubeSet sb = make(b);
  const double tol = 1e-12 * static_cast<double>(extent);
  const double units = std::max(directed_nd(sa, sb, tol), directed_nd(sb, sa, tol));
  return units / static_cast<double>(extent);
}

}  // namespace microscope
