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
#include "microscope/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <unordered_set>

#include "microscope/error.hpp"
#include "microscope/largeness.hpp"
#include "parallel.hpp"

namespace microscope {
namespace {

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

struct Slot {
  int height;
  std::size_t index;
};

// Vertices with heights in [lo, hi], all of them or a seeded uniform sample.
std::vector<Slot> pick_vertices(const CodedTree& t, int lo, int hi, const SamplePolicy& policy, std::uint64_t& total,
                                bool& sampled) {
  std::vector<std::uint64_t> prefix{0};
  for (int h = lo; h <= hi; ++h) prefix.push_back(prefix.back() + t.level_count(h));
  total = prefix.back();
  std::vector<std::uint64_t> picks;
  sampled = total > policy.budget;
  if (sampled) {
    // Floyd's sampling of budget distinct indices
    std::mt19937_64 rng(policy.seed);
    std::unordered_set<std::uint64_t> chosen;
    for (std::uint64_t j = total - policy.budget; j < total; ++j) {
      const std::uint64_t r = std::uniform_int_distribution<std::uint64_t>(0, j)(rng);
      if (!chosen.insert(r).second) chosen.insert(j);
    }
    picks.assign(chosen.begin(), chosen.end());
    std::sort(picks.begin(), picks.end());
  }
  std::vector<Slot> out;
  if (!sampled) {
    out.reserve(total);
    for (int h = lo; h <= hi; ++h)
      for (std::size_t i = 0; i < t.level_count(h); ++i) out.push_back({h, i});
    return out;
  }
  std::size_t level = 0;
  for (std::uint64_t g : picks) {
    while (prefix[level + 1] <= g) ++level;
    out.push_back({lo + static_cast<int>(level), static_cast<std::size_t>(g - prefix[level])});
  }
  return out;
}

VertexAddress slot_address(const CodedTree& t, const Slot& s) { return {s.height, t.level(s.height)[s.index]}; }

std::vector<ScaleCount> profile(const CodedTree& t, const VertexAddress& a, int m) {
  std::vector<ScaleCount> out;
  for (int n = 1; n <= m; ++n) out.push_back({n, t.descendant_count(a, n)});
  return out;
}

// Relative per-axis indices of the depth-m descendants of a.
template <class Fn>
void for_each_descendant(const CodedTree& t, const VertexAddress& a, int m, Fn&& fn) {
  const TreeParams& p = t.params();
  const auto [first, last] = t.descendant_range(a, m);
  const auto level = t.level(a.height + m);
  const auto corner = axis_indices(p, a.height, a.packed);
  const std::int64_t span = p.axis_extent(m);
  std::vector<std::int64_t> rel(p.dim);
  for (std::size_t i = first; i < last; ++i) {
    const auto idx = axis_indices(p, a.height + m, level[i]);
    for (int j = 0; j < p.dim; ++j) rel[j] = idx[j] - corner[j] * span;
    if (!fn(level[i], rel)) return;
  }
}

bool window_meets_interior(const CodedTree& t, const VertexAddress& a, int m) {
  const std::int64_t span = t.params().axis_extent(m);
  bool found = false;
  for_each_descendant(t, a, m, [&](std::uint64_t, const std::vector<std::int64_t>& rel) {
    found = std::all_of(rel.begin(), rel.end(), [&](std::int64_t x) { return x >= 1 && x <= span - 2; });
    return !found;
  });
  return found;
}

bool certifies(const CodedTree& t, const VertexAddress& a, int M, double bound) {
  for (int n = 1; n <= M; ++n)
    if (!count_at_most_power(t.descendant_count(a, n), t.params().base, bound, n)) return false;
  return true;
}

double worst_rate(const CodedTree& t, const VertexAddress& a, int M) {
  double worst = 0.0;
  for (int n = 1; n <= M; ++n) worst = std::max(worst, count_exponent(t.descendant_count(a, n), t.params().base, n));
  return worst;
}

MicrosetCandidate assemble(const CodedTree& t, std::vector<WindowStep> steps, int M, bool sampled) {
  MicrosetCandidate c;
  std::vector<CodedTree> trees;
  for (const auto& s : steps) {
    trees.push_back(subtree(t, s.address, M));
    c.scaling.push_back(ipow(static_cast<std::uint64_t>(t.params().base), s.address.height));
  }
  c.stabilization = tree_limit(trees);
  c.limit = trees.back();
  c.interior = meets_interior(c.limit);
  const VertexAddress last = steps.back().address;
  c.counts = profile(t, last, M);
  c.exponent = count_exponent(c.counts.back().count, t.params().base, M);
  c.estimates.push_back(box_estimate(c.limit, 1, M));
  c.windows = std::move(steps);
  c.sampled = sampled;
  return c;
}

// Index of the preferred window: interior first, then by count, then order.
template <class Better>
std::optional<std::size_t> pick(const CodedTree& t, const std::vector<Window>& ws, int M, Better&& better,
                                const std::vector<char>& admissible) {
  std::optional<std::size_t> best;
  bool best_interior = false;
  for (std::size_t i = 0; i < ws.size(); ++i) {
    if (!admissible[i]) continue;
    if (best && !better(ws[i].count, ws[*best].count) && !(ws[i].count == ws[*best].count && !best_interior))
      continue;
    const bool interior = window_meets_interior(t, ws[i].address, M);
    if (!best || better(ws[i].count, ws[*best].count) || (interior && !best_interior)) {
      best = i;
      best_interior = interior;
    }
  }
  return best;
}

void check_search_depth(const CodedTree& t, int M, const SamplePolicy& policy) {
  if (M < 1 || M + policy.min_height() > t.height())
    throw Error(ErrorCode::NoQualifyingWindow,
                "no depth-" + std::to_string(M) + " window with h(a) >= " + std::to_string(policy.min_height()));
}

bool cubes_separated(const TreeParams& p, int height, const std::vector<VertexAddress>& cubes) {
  std::unordered_set<std::uint64_t> set;
  for (const auto& c : cubes)
    if (!set.insert(c.packed).second) return false;
  const std::int64_t extent = p.axis_extent(height);
  const int offsets = static_cast<int>(std::pow(3, p.dim));
  std::vector<std::int64_t> nb(p.dim);
  for (const auto& c : cubes) {
    const auto idx = axis_indices(p, height, c.packed);
    for (int o = 0; o < offsets; ++o) {
      int code = o;
      bool self = true, inside = true;
      for (int j = 0; j < p.dim; ++j) {
        const int delta = code % 3 - 1;
        code /= 3;
        self = self && delta == 0;
        nb[j] = idx[j] + delta;
        inside = inside && nb[j] >= 0 && nb[j] < extent;
      }
      if (self || !inside) continue;
      if (set.count(pack_axis_indices(p, height, nb))) return false;
    }
  }
  return true;
}

// Two depth-k descendants of a at index distance >= 2 along some axis.
std::optional<std::pair<VertexAddress, VertexAddress>> spread_pair(const CodedTree& t, const VertexAddress& a, int k) {
  const int d = t.params().dim;
  std::vector<std::int64_t> lo(d, INT64_MAX), hi(d, INT64_MIN);
  std::vector<std::uint64_t> lo_at(d), hi_at(d);
  for_each_descendant(t, a, k, [&](std::uint64_t packed, const std::vector<std::int64_t>& rel) {
    for (int j = 0; j < d; ++j) {
      if (rel[j] < lo[j]) lo[j] = rel[j], lo_at[j] = packed;
      if (rel[j] > hi[j]) hi[j] = rel[j], hi_at[j] = packed;
    }
    return true;
  });
  for (int j = 0; j < d; ++j)
    if (hi[j] - lo[j] >= 2) return std::make_pair(VertexAddress{a.height + k, lo_at[j]}, VertexAddress{a.height + k, hi_at[j]});
  return std::nullopt;
}

Packing pack(const CodedTree& t, const VertexAddress& a, int step, int k) {
  const TreeParams& p = t.params();
  Packing out;
  out.window = a;
  std::vector<VertexAddress> cubes{a};
  while (cubes.front().height + step <= t.height()) {
    std::vector<VertexAddress> next;
    bool ok = true;
    for (const auto& c : cubes) {
      const auto pair = spread_pair(t, c, step);
      if (!pair) {
        ok = false;
        break;
      }
      next.push_back(pair->first);
      next.push_back(pair->second);
    }
    if (!ok) break;
    cubes = std::move(next);
    ++out.m;
  }
  out.cubes = cubes;
  out.R = std::pow(static_cast<double>(p.base), -a.height);
  out.r = std::pow(static_cast<double>(p.base), -t.height());
  out.disjoint = cubes_separated(p, cubes.front().height, cubes);
  const double rhs = 0.5 * std::pow(out.R / out.r, 1.0 / k);
  out.bound_holds = std::ldexp(1.0, out.m) >= rhs * (1.0 - 1e-12);
  return out;
}

constexpr std::uint64_t kPackingCubeBudget = std::uint64_t{1} << 22;

}  // namespace

int pk_step_depth(int base, int k) {
  if (base < 2 || k < 1) throw Error(ErrorCode::InvalidArgument, "need base >= 2 and k >= 1");
  const std::uint64_t limit = std::uint64_t{1} << std::min(k, 62);
  const auto b = static_cast<std::uint64_t>(base);
  int j = 0;
  for (std::uint64_t power = b; power <= limit; power *= b) {
    ++j;
    if (power > limit / b) break;
  }
  return j;
}

WindowSet collect_windows(const CodedTree& t, int m, const SamplePolicy& policy) {
  if (m < 0 || m > t.height()) throw Error(ErrorCode::DepthOutOfRange, "window depth beyond tree height");
  WindowSet ws;
  const int lo = policy.min_height(), hi = t.height() - m;
  if (hi < lo) return ws;
  const auto slots = pick_vertices(t, lo, hi, policy, ws.total, ws.sampled);
  ws.windows.resize(slots.size());
  const int base = t.params().base;
  if (!ws.sampled) {
    std::vector<std::size_t> start{0};
    for (int h = lo; h <= hi; ++h) start.push_back(start.back() + t.level_count(h));
    detail::parallel_for(static_cast<std::size_t>(hi - lo + 1), policy.workers, [&](std::size_t k) {
      const int h = lo + static_cast<int>(k);
      const auto counts = window_counts(t, h, m);
      const auto level = t.level(h);
      for (std::size_t i = 0; i < counts.size(); ++i)
        ws.windows[start[k] + i] = {{h, level[i]}, counts[i], count_exponent(counts[i], base, m)};
    });
    return ws;
  }
  detail::parallel_for(slots.size(), policy.workers, [&](std::size_t i) {
    const VertexAddress a = slot_address(t, slots[i]);
    const std::uint64_t c = t.descendant_count(a, m);
    ws.windows[i] = {a, c, count_exponent(c, base, m)};
  });
  return ws;
}

std::vector<Miniset> enumerate_minisets(const CodedTree& t, int n, const SamplePolicy& policy) {
  const WindowSet ws = collect_windows(t, n, policy);
  std::vector<Miniset> out;
  out.reserve(ws.windows.size());
  for (const auto& w : ws.windows)
    out.push_back({w.address, ipow(static_cast<std::uint64_t>(t.params().base), w.address.height),
                   subtree(t, w.address, n)});
  return out;
}

bool meets_interior(const CodedTree& t) { return window_meets_interior(t, VertexAddress::root(), t.height()); }

MicrosetCandidate min_microset_search(const CodedTree& t, double epsilon, int M, const SamplePolicy& policy) {
  if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must be positive");
  check_search_depth(t, M, policy);
  const WindowSet ws = collect_windows(t, M, policy);
  double s = ws.windows.front().exponent;
  for (const auto& w : ws.windows) s = std::min(s, w.exponent);
  const auto fewer = [](std::uint64_t a, std::uint64_t b) { return a < b; };

  std::vector<char> ok(ws.windows.size());
  detail::parallel_for(ws.windows.size(), policy.workers,
                       [&](std::size_t i) { ok[i] = certifies(t, ws.windows[i].address, M, s + 2 * epsilon); });
  const auto final_idx = pick(t, ws.windows, M, fewer, ok);
  if (!final_idx) {
    double best = worst_rate(t, ws.windows.front().address, M);
    for (const auto& w : ws.windows) best = std::min(best, worst_rate(t, w.address, M));
    throw Error(ErrorCode::NoQualifyingWindow, "best achieved exponent " + std::to_string(best) + " exceeds bound " +
                                                   std::to_string(s + 2 * epsilon));
  }
  const VertexAddress final_at = ws.windows[*final_idx].address;

  std::vector<WindowStep> steps;
  int prev = policy.min_height() - 1;
  for (int j = 1; std::ldexp(1.0, -j) > epsilon; ++j) {
    const double eps_j = std::ldexp(1.0, -j);
    bool found = false;
    for (int h = prev + 1; h < final_at.height && !found; ++h) {
      std::vector<char> adm(ws.windows.size(), 0);
      bool any = false;
      for (std::size_t i = 0; i < ws.windows.size(); ++i) {
        if (ws.windows[i].address.height != h) continue;
        adm[i] = certifies(t, ws.windows[i].address, M, s + 2 * eps_j);
        any = any || adm[i];
      }
      if (!any) continue;
      steps.push_back({ws.windows[*pick(t, ws.windows, M, fewer, adm)].address, M, eps_j});
      prev = h;
      found = true;
    }
    if (!found) break;
  }
  steps.push_back({final_at, M, epsilon});
  MicrosetCandidate c = assemble(t, std::move(steps), M, ws.sampled);
  c.target = s;
  c.epsilon = epsilon;
  return c;
}

MicrosetCandidate max_microset_search(const CodedTree& t, int M, const SamplePolicy& policy) {
  check_search_depth(t, M, policy);
  const WindowSet ws = collect_windows(t, M, policy);
  const auto more = [](std::uint64_t a, std::uint64_t b) { return a > b; };
  const std::vector<char> all(ws.windows.size(), 1);
  const VertexAddress final_at = ws.windows[*pick(t, ws.windows, M, more, all)].address;
  std::vector<WindowStep> steps;
  for (int h = policy.min_height(); h < final_at.height; ++h) {
    std::vector<char> adm(ws.windows.size(), 0);
    bool any = false;
    for (std::size_t i = 0; i < ws.windows.size(); ++i)
      if (ws.windows[i].address.height == h) adm[i] = any = true;
    if (any) steps.push_back({ws.windows[*pick(t, ws.windows, M, more, adm)].address, M, 0.0});
  }
  steps.push_back({final_at, M, 0.0});
  MicrosetCandidate c = assemble(t, std::move(steps), M, ws.sampled);
  double s = 0.0;
  for (const auto& w : ws.windows) s = std::max(s, w.exponent);
  c.target = s;
  return c;
}

bool certificate_holds(const MicrosetCandidate& c, int base, bool sparse) {
  if (c.counts.empty()) return false;
  if (sparse) {
    for (const auto& sc : c.counts)
      if (!count_at_most_power(sc.count, base, c.target + 2 * c.epsilon, sc.n)) return false;
    return true;
  }
  const auto& last = c.counts.back();
  return count_at_least_power(last.count, base, std::max(0.0, c.target - 2 * c.epsilon), last.n);
}

bool PkReport::packings_sound() const {
  return std::all_of(packings.begin(), packings.end(), [](const Packing& p) { return p.disjoint; });
}

bool PkReport::bounds_hold() const {
  return std::all_of(packings.begin(), packings.end(), [](const Packing& p) { return p.bound_holds; });
}

PkReport check_property_Pk(const CodedTree& t, int k, int h_lo, int h_hi, const SamplePolicy& policy) {
  if (k < 2) throw Error(ErrorCode::InvalidArgument, "k must be >= 2");
  const int step = pk_step_depth(t.params().base, k);
  if (step < 1)
    throw Error(ErrorCode::InvalidArgument, "no grid level of base " + std::to_string(t.params().base) +
                                                " is coarse enough for k = " + std::to_string(k));
  const int deepest = t.height() - step;
  const int lo = std::max(h_lo, 0);
  const int hi = h_hi < 0 ? deepest : std::min(h_hi, deepest);
  if (deepest < lo || hi < lo)
    throw Error(ErrorCode::KTooLargeForDepth, "k = " + std::to_string(k) + " leaves no window below height " +
                                                  std::to_string(t.height()));
  PkReport rep;
  rep.k = k;
  rep.step_depth = step;
  rep.h_lo = lo;
  rep.h_hi = hi;
  rep.lower_bound = 1.0 / k;
  std::uint64_t total = 0;
  bool sampled = false;
  const auto slots = pick_vertices(t, lo, hi, policy, total, sampled);
  std::vector<char> pass(slots.size());
  detail::parallel_for(slots.size(), policy.workers,
                       [&](std::size_t i) { pass[i] = spread_pair(t, slot_address(t, slots[i]), step).has_value(); });
  std::uint64_t cubes = 0;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    ++rep.windows_tested;
    const VertexAddress a = slot_address(t, slots[i]);
    if (!pass[i]) {
      rep.verdict = false;
      if (!rep.failing) rep.failing = a;
      continue;
    }
    ++rep.windows_passed;
    if (cubes < kPackingCubeBudget) {
      rep.packings.push_back(pack(t, a, step, k));
      cubes += rep.packings.back().cubes.size();
    }
  }
  return rep;
}

SingletonReport singleton_microset_detect(const CodedTree& t, int k_max, int h_lo, int h_hi,
                                          const SamplePolicy& policy) {
  if (k_max < 2) throw Error(ErrorCode::InvalidArgument, "k_max must be >= 2");
  SingletonReport out;
  for (int k = 2; k <= k_max; ++k) {
    if (pk_step_depth(t.params().base, k) < 1) continue;
    PkReport rep;
    try {
      rep = check_property_Pk(t, k, h_lo, h_hi, policy);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::KTooLargeForDepth) throw;
      break;
    }
    rep.packings.clear();
    if (rep.verdict) {
      out.passing_k = k;
      out.lower_bound = 1.0 / k;
      out.reports.push_back(std::move(rep));
      return out;
    }
    out.witnesses.push_back({*rep.failing, k, 0.0});
    out.reports.push_back(std::move(rep));
  }
  out.singleton_candidate = !out.witnesses.empty();
  return out;
}

Spectrum dimension_spectrum(const CodedTree& t, int M, const SamplePolicy& policy, double bin_width) {
  if (M < 1 || M > t.height() - 1) throw Error(ErrorCode::DepthOutOfRange, "window depth must lie in [1, h(T) - 1]");
  if (!(bin_width > 0.0)) throw Error(ErrorCode::InvalidArgument, "bin width must be positive");
  Spectrum sp;
  sp.M = M;
  sp.bin_width = bin_width;
  sp.windows = collect_windows(t, M, policy);
  const auto bin_of = [&](double x) { return static_cast<std::size_t>(std::floor(x / bin_width + 1e-9)); };
  sp.histogram.assign(bin_of(t.params().dim) + 1, 0);
  std::vector<double> sums(sp.histogram.size(), 0.0);
  for (const auto& w : sp.windows.windows) {
    const std::size_t b = std::min(bin_of(w.exponent), sp.histogram.size() - 1);
    ++sp.histogram[b];
    sums[b] += w.exponent;
  }
  const double n = static_cast<double>(sp.windows.windows.size());
  for (std::size_t b = 0; b < sp.histogram.size();) {
    if (!sp.histogram[b]) {
      ++b;
      continue;
    }
    Cluster c;
    c.lo = b * bin_width;
    double sum = 0.0;
    while (b < sp.histogram.size() && sp.histogram[b]) {
      c.count += sp.histogram[b];
      sum += sums[b];
      ++b;
    }
    c.hi = b * bin_width;
    c.center = sum / c.count;
    c.fraction = c.count / n;
    sp.clusters.push_back(c);
  }
  return sp;
}

std::string Spectrum::histogram_csv() const {
  std::ostringstream os;
  os.precision(10);
  os << "bin_lo,bin_hi,count\n";
  for (std::size_t b = 0; b < histogram.size(); ++b)
    os << b * bin_width << ',' << (b + 1) * bin_width << ',' << histogram[b] << '\n';
  return os.str();
}

}  // namespace microscope
