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
#include "microscope/largeness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "microscope/error.hpp"

namespace microscope {
namespace {

constexpr double kRelTol = 1e-12;

std::optional<std::uint64_t> exact_power(int base, double exponent) {
  const double r = std::round(exponent);
  if (std::abs(exponent - r) > kRelTol * std::max(1.0, std::abs(exponent)) || r < 0 || r > 63) {
    return std::nullopt;
  }
  std::uint64_t v = 1;
  for (int i = 0; i < static_cast<int>(r); ++i) {
    if (v > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(base)) return std::nullopt;
    v *= static_cast<std::uint64_t>(base);
  }
  return v;
}

// +1 count above, 0 tie (within tolerance), -1 below.
int compare_power(std::uint64_t count, int base, double s, int n) {
  const double exponent = s * n;
  if (auto p = exact_power(base, exponent)) {
    return count > *p ? 1 : (count == *p ? 0 : -1);
  }
  const double lhs = std::log(static_cast<double>(count));
  const double rhs = exponent * std::log(static_cast<double>(base));
  const double tol = kRelTol * std::max(1.0, std::abs(rhs));
  if (lhs > rhs + tol) return 1;
  if (lhs < rhs - tol) return -1;
  return 0;
}

void require_tidy(const CodedTree& t) {
  if (!t.is_tidy()) throw Error(ErrorCode::NotTidy, "operation requires a tidy tree");
}

LargenessReport local_check(const CodedTree& t, double s, int m, bool large) {
  require_tidy(t);
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "m must be >= 1");
  if (s < 0) throw Error(ErrorCode::InvalidArgument, "s must be >= 0");
  LargenessReport report;
  for (int h = 0; h + m <= t.height(); ++h) {
    for (std::uint64_t v : t.level(h)) {
      const VertexAddress a{h, v};
      bool found = false;
      for (int n = 1; n <= m; ++n) {
        const std::uint64_t count = t.descendant_count(a, n);
        const int cmp = compare_power(count, t.params().base, s, n);
        if (large ? cmp >= 0 : cmp <= 0) {
          report.witnesses.push_back({a, n, count});
          found = true;
          break;
        }
      }
      if (!found) {
        report.verdict = false;
        report.failing = a;
        return report;
      }
    }
  }
  return report;
}

}  // namespace

bool count_at_least_power(std::uint64_t count, int base, double s, int n) {
  return compare_power(count, base, s, n) >= 0;
}

bool count_at_most_power(std::uint64_t count, int base, double s, int n) {
  return compare_power(count, base, s, n) <= 0;
}

void LargenessParams::validate() const {
  if (!(s >= 0)) throw Error(ErrorCode::InvalidArgument, "s must be >= 0");
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "m must be >= 1");
  if (!(C > 0)) throw Error(ErrorCode::InvalidArgument, "C must be > 0");
}

LargenessReport is_locally_large(const CodedTree& t, double s, int m) { return local_check(t, s, m, true); }

LargenessReport is_locally_small(const CodedTree& t, double s, int m) { return local_check(t, s, m, false); }

std::optional<int> global_failure(const CodedTree& t, double s, double C, bool large) {
  require_tidy(t);
  if (!(C > 0)) throw Error(ErrorCode::InvalidArgument, "C must be > 0");
  const double logb = std::log(static_cast<double>(t.params().base));
  for (int n = 1; n <= t.height(); ++n) {
    const std::uint64_t count = t.level_count(n);
    int cmp;
    if (C == 1.0) {
      cmp = compare_power(count, t.params().base, s, n);
    } else {
      const double lhs = std::log(static_cast<double>(count));
      const double rhs = std::log(C) + s * n * logb;
      const double tol = kRelTol * std::max(1.0, std::abs(rhs));
      cmp = lhs > rhs + tol ? 1 : (lhs < rhs - tol ? -1 : 0);
    }
    if (large ? cmp < 0 : cmp > 0) return n;
  }
  return std::nullopt;
}

bool is_globally_large(const CodedTree& t, double s, double C) { return !global_failure(t, s, C, true); }

bool is_globally_small(const CodedTree& t, double s, double C) { return !global_failure(t, s, C, false); }

ExtractedSubtree extract_large_subtree(const CodedTree& t, double s, int m, int N) {
  require_tidy(t);
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "m must be >= 1");
  if (N <= m || N > t.height()) {
    throw Error(ErrorCode::HeightTooSmall, "need m < N <= h(T), got m=" + std::to_string(m) + " N=" +
                                               std::to_string(N) + " h=" + std::to_string(t.height()));
  }
  LargenessReport pre = is_locally_large(t, s, m);
  if (!pre.verdict) {
    const auto& a = *pre.failing;
    throw Error(ErrorCode::NotLocallyLarge,
                "vertex at height " + std::to_string(a.height) + " address " + std::to_string(a.packed));
  }
  const int base = t.params().base;
  std::vector<std::vector<std::uint64_t>> levels(N + 1);
  levels[0].push_back(0);
  ExtractedSubtree out{CodedTree(t.params(), {{0}}), {}, 0.0, N};
  long double weight = 0.0L;

  // Depth-first, leftmost leaf first: the leaves of a fresh graft are the
  // next leaves to the right of everything already finished.
  std::vector<VertexAddress> stack{VertexAddress::root()};
  while (!stack.empty()) {
    const VertexAddress a = stack.back();
    stack.pop_back();
    int chosen = 0;
    std::uint64_t count = 0;
    for (int n = 1; n <= m && a.height + n <= N; ++n) {
      count = t.descendant_count(a, n);
      if (count_at_least_power(count, base, s, n)) {
        chosen = n;
        break;
      }
    }
    if (chosen == 0) {
      weight += std::pow(static_cast<long double>(base), -static_cast<long double>(s) * a.height);
      continue;
    }
    out.grafts.push_back({a, chosen, count});
    for (int k = 1; k <= chosen; ++k) {
      auto [lo, hi] = t.descendant_range(a, k);
      auto lvl = t.level(a.height + k);
      levels[a.height + k].insert(levels[a.height + k].end(), lvl.begin() + lo, lvl.begin() + hi);
    }
    auto [lo, hi] = t.descendant_range(a, chosen);
    auto lvl = t.level(a.height + chosen);
    for (std::size_t i = hi; i > lo; --i) stack.push_back({a.height + chosen, lvl[i - 1]});
  }
  while (levels.size() > 1 && levels.back().empty()) levels.pop_back();
  out.tree = CodedTree(t.params(), std::move(levels), true);
  out.weight = static_cast<double>(weight);
  return out;
}

CodedTree replay_grafts(const CodedTree& t, const std::vector<Graft>& grafts) {
  int top = 0;
  for (const auto& g : grafts) top = std::max(top, g.leaf.height + g.n);
  std::vector<std::set<std::uint64_t>> levels(top + 1);
  levels[0].insert(0);
  const std::uint64_t arity = t.params().arity();
  for (const auto& g : grafts) {
    if (g.leaf.height > top || !levels[g.leaf.height].count(g.leaf.packed)) {
      throw Error(ErrorCode::VertexNotOccupied, "graft root not in the replayed tree");
    }
    if (g.leaf.height < top) {
      const auto& below = levels[g.leaf.height + 1];
      auto it = below.lower_bound(g.leaf.packed * arity);
      if (it != below.end() && *it < (g.leaf.packed + 1) * arity) {
        throw Error(ErrorCode::InvalidArgument, "graft root is not a leaf");
      }
    }
    for (int k = 1; k <= g.n; ++k) {
      auto [lo, hi] = t.descendant_range(g.leaf, k);
      auto lvl = t.level(g.leaf.height + k);
      levels[g.leaf.height + k].insert(lvl.begin() + lo, lvl.begin() + hi);
    }
  }
  std::vector<std::vector<std::uint64_t>> out;
  for (const auto& l : levels) out.emplace_back(l.begin(), l.end());
  return CodedTree(t.params(), std::move(out), true);
}

std::vector<double> collapse_weights(const ExtractedSubtree& ex, int base, double s) {
  std::vector<double> out{ex.weight};
  long double w = ex.weight;
  const long double b = base;
  for (auto it = ex.grafts.rbegin(); it != ex.grafts.rend(); ++it) {
    w += std::pow(b, -static_cast<long double>(s) * it->leaf.height) -
         static_cast<long double>(it->leaves_added) * std::pow(b, -static_cast<long double>(s) * (it->leaf.height + it->n));
    out.push_back(static_cast<double>(w));
  }
  return out;
}

double local_large_exponent(const CodedTree& t, int m) {
  require_tidy(t);
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "m must be >= 1");
  if (t.height() < m) throw Error(ErrorCode::HeightTooSmall, "tree shorter than window m");
  const double logb = std::log(static_cast<double>(t.params().base));
  double best = std::numeric_limits<double>::infinity();
  for (int h = 0; h + m <= t.height(); ++h) {
    for (std::uint64_t v : t.level(h)) {
      const VertexAddress a{h, v};
      double local = 0.0;
      for (int n = 1; n <= m; ++n) {
        local = std::max(local, std::log(static_cast<double>(t.descendant_count(a, n))) / (n * logb));
      }
      best = std::min(best, local);
    }
  }
  return best;
}

}  // namespace microscope
