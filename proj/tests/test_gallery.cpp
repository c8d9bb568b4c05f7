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
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "microscope/constructions.hpp"
#include "microscope/error.hpp"
#include "microscope/gallery.hpp"
#include "microscope/generators.hpp"
#include "oracles.hpp"

using namespace microscope;

namespace {

const double kLog23 = std::log(2.0) / std::log(3.0);

/// Some axis of the depth-k descendants of (h, v) spans two or more cells.
bool brute_spread(const CodedTree& t, int h, std::uint64_t v, int k) {
  const TreeParams& p = t.params();
  const std::uint64_t div = oracle::ipow(p.arity(), k);
  std::vector<std::int64_t> lo(p.dim, INT64_MAX), hi(p.dim, INT64_MIN);
  for (std::uint64_t u : t.level(h + k)) {
    if (u / div != v) continue;
    const auto idx = axis_indices(p, k, u % div);
    for (int j = 0; j < p.dim; ++j) {
      lo[j] = std::min(lo[j], idx[j]);
      hi[j] = std::max(hi[j], idx[j]);
    }
  }
  for (int j = 0; j < p.dim; ++j)
    if (hi[j] - lo[j] >= 2) return true;
  return false;
}

/// Largest j with b^j <= 2^k.
int halving_depth(int base, int k) {
  int j = 0;
  while (std::pow(base, j + 1) <= std::ldexp(1.0, k)) ++j;
  return j;
}

}  // namespace

TEST_CASE("window collection matches the level scan") {
  const CodedTree t = canonical_set("reciprocal", 9);
  for (int m = 1; m <= 5; ++m) {
    const WindowSet w = collect_windows(t, m);
    std::uint64_t total = 0;
    for (int h = 1; h + m <= 9; ++h) total += t.level_count(h);
    CHECK(w.total == total);
    CHECK_FALSE(w.sampled);
    REQUIRE(w.windows.size() == total);
    for (const Window& x : w.windows) {
      CHECK(x.count == oracle::descendants(t, x.address.height, x.address.packed, m));
      CHECK(x.exponent == doctest::Approx(count_exponent(x.count, 2, m)));
    }
    SamplePolicy root;
    root.include_root = true;
    CHECK(collect_windows(t, m, root).total == total + 1);
  }
}

TEST_CASE("sampling is seeded, sorted and a subset") {
  const CodedTree t = full_tree(TreeParams(2, 2), 6);
  const WindowSet all = collect_windows(t, 2);
  SamplePolicy pol;
  pol.budget = 100;
  pol.seed = 42;
  const WindowSet a = collect_windows(t, 2, pol);
  const WindowSet b = collect_windows(t, 2, pol);
  CHECK(a.sampled);
  CHECK(a.total == all.total);
  REQUIRE(a.windows.size() == 100);
  for (std::size_t i = 0; i < a.windows.size(); ++i) CHECK(a.windows[i].address == b.windows[i].address);
  for (std::size_t i = 1; i < a.windows.size(); ++i) {
    const auto& x = a.windows[i - 1].address;
    const auto& y = a.windows[i].address;
    CHECK((x.height < y.height || (x.height == y.height && x.packed < y.packed)));
  }
  pol.seed = 43;
  const WindowSet c = collect_windows(t, 2, pol);
  bool differs = false;
  for (std::size_t i = 0; i < c.windows.size(); ++i) differs = differs || !(c.windows[i].address == a.windows[i].address);
  CHECK(differs);
  pol.workers = 4;
  pol.seed = 42;
  const WindowSet d = collect_windows(t, 2, pol);
  for (std::size_t i = 0; i < a.windows.size(); ++i) CHECK(d.windows[i].address == a.windows[i].address);
}

TEST_CASE("minisets of self-similar trees are subtrees") {
  const CodedTree c = canonical_set("cantor_thirds", 7);
  const auto minis = enumerate_minisets(c, 3);
  CHECK(minis.size() == collect_windows(c, 3).total);
  for (const Miniset& m : minis) {
    CHECK(m.lambda == oracle::ipow(3, m.address.height));
    CHECK(m.tree == subtree(c, m.address, 3));
  }
}

TEST_CASE("interior test") {
  const std::vector<std::vector<Rational>> origin{{Rational(0)}};
  CHECK_FALSE(meets_interior(tree_from_point_set(TreeParams(2, 1), origin, 6)));
  CHECK_FALSE(meets_interior(canonical_set("cantor_thirds", 1)));
  CHECK(meets_interior(canonical_set("cantor_thirds", 2)));
  CHECK(meets_interior(full_tree(TreeParams(2, 2), 2)));
}

TEST_CASE("sparse and dense searches on the Cantor tree") {
  const CodedTree c = canonical_set("cantor_thirds", 10);
  const MicrosetCandidate lo = min_microset_search(c, 0.05, 5);
  CHECK(lo.exponent == doctest::Approx(kLog23).epsilon(1e-12));
  CHECK(lo.target == doctest::Approx(kLog23).epsilon(1e-12));
  CHECK(certificate_holds(lo, 3, true));
  CHECK(lo.interior);
  for (std::size_t i = 1; i < lo.windows.size(); ++i) {
    CHECK(lo.windows[i - 1].address.height < lo.windows[i].address.height);
    CHECK(lo.windows[i - 1].epsilon > lo.windows[i].epsilon);
  }
  CHECK(lo.windows.back().epsilon == 0.05);
  CHECK(lo.scaling.size() == lo.windows.size());
  const MicrosetCandidate hi = max_microset_search(c, 5);
  CHECK(hi.exponent == hi.target);
  CHECK(hi.exponent == doctest::Approx(kLog23).epsilon(1e-12));
  CHECK(certificate_holds(hi, 3, false));
}

TEST_CASE("searches on a two-value dimension set") {
  const DeltaSpec d = delta_from_json(nlohmann::json::parse(R"j({"pieces": ["log(2)/log(3)", 0.5], "inf": 0.5,
      "sup": "log(2)/log(3)", "alpha": [1, 3], "scaffold_dim": "log(2)/log(3)"})j"));
  const CodedTree t = build_delta_set(d, TreeParams(3, 1), 12).tree;
  const MicrosetCandidate lo = min_microset_search(t, 0.05, 7);
  CHECK(std::abs(lo.exponent - 0.5) <= 0.05);
  CHECK(certificate_holds(lo, 3, true));
  const MicrosetCandidate hi = max_microset_search(t, 7);
  CHECK(std::abs(hi.exponent - kLog23) <= 0.05);
  // two children in base 3 already exceed 3^(s + 2 eps) at the first level
  try {
    (void)min_microset_search(t, 0.025, 6);
    FAIL("expected no qualifying window");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoQualifyingWindow);
    CHECK(std::string(e.what()).find("best achieved exponent") != std::string::npos);
  }
}

TEST_CASE("dense search finds an interval window") {
  const TreeParams p(2, 1);
  const std::vector<RationalBox> parts{{{Rational(0)}, {Rational(0)}}, {{Rational(1, 2)}, {Rational(1)}}};
  const CodedTree t = tree_from_boxes(p, parts, 10);
  CHECK(max_microset_search(t, 4).exponent == doctest::Approx(1.0));
  const MicrosetCandidate full = min_microset_search(full_tree(TreeParams(2, 2), 6), 0.05, 3);
  CHECK(full.exponent == doctest::Approx(2.0));
  CHECK(full.limit == full_tree(TreeParams(2, 2), 3));
}

TEST_CASE("search certificates on random trees") {
  std::mt19937_64 rng(31);
  int searched = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const TreeParams p = trial % 3 == 0 ? TreeParams(2, 2) : TreeParams(2 + trial % 2, 1);
    const int height = 6 + static_cast<int>(rng() % 4);
    const CodedTree t = random_tidy_tree(p, height, 0.55, rng);
    const int M = 2 + static_cast<int>(rng() % (height - 3));
    SamplePolicy pol;
    const double sparse = lower_window_estimate(t, M, {1, pol.min_height()}).value;
    const double dense = assouad_window_estimate(t, M, {1, pol.min_height()}).value;
    try {
      const MicrosetCandidate c = min_microset_search(t, 0.05, M);
      ++searched;
      CHECK(c.target == doctest::Approx(sparse).epsilon(1e-12));
      CHECK(certificate_holds(c, p.base, true));
      for (const auto& sc : c.counts)
        if (sc.n >= 1 && sc.n <= M)
          CHECK(static_cast<double>(sc.count) <= std::pow(p.base, (sparse + 0.1) * sc.n) * (1 + 1e-9));
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NoQualifyingWindow);
    }
    const MicrosetCandidate d = max_microset_search(t, M);
    CHECK(d.exponent == doctest::Approx(dense).epsilon(1e-12));
  }
  CHECK(searched > 20);
}

TEST_CASE("P(k) agrees with the span oracle") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 30; ++trial) {
    const TreeParams p = trial % 3 == 0 ? TreeParams(2, 2) : TreeParams(2 + trial % 2, 1);
    const int height = 5 + static_cast<int>(rng() % 3);
    const CodedTree t = random_tidy_tree(p, height, 0.35, rng);
    for (int k = 2; k <= 4; ++k) {
      const int j = halving_depth(p.base, k);
      bool want = true;
      std::uint64_t tested = 0;
      for (int h = 0; h + j <= height; ++h)
        for (std::uint64_t v : t.level(h)) {
          ++tested;
          want = want && brute_spread(t, h, v, j);
        }
      const PkReport r = check_property_Pk(t, k);
      CHECK(r.step_depth == j);
      CHECK(r.verdict == want);
      CHECK(r.windows_tested == tested);
      CHECK(r.packings_sound());
      if (r.verdict) CHECK(r.bounds_hold());
      CHECK(r.lower_bound == doctest::Approx(1.0 / k));
    }
  }
}

TEST_CASE("a single path fails P(k) at the root") {
  const CodedTree path = tree_from_levels(TreeParams(2, 1), {{0}, {1}, {2}, {5}, {10}, {21}, {42}});
  for (int k = 2; k <= 5; ++k) {
    const PkReport r = check_property_Pk(path, k);
    CHECK_FALSE(r.verdict);
    CHECK(r.failing == std::optional<VertexAddress>(VertexAddress::root()));
  }
}

TEST_CASE("P(k) on canonical sets") {
  const CodedTree c = canonical_set("cantor_thirds", 10);
  const PkReport r = check_property_Pk(c, 2);
  CHECK(r.verdict);
  CHECK(r.windows_passed == r.windows_tested);
  CHECK(r.packings_sound());
  CHECK(r.bounds_hold());
  for (const Packing& pk : r.packings) CHECK(std::pow(2.0, pk.m) >= 0.5 * std::sqrt(pk.R / pk.r));
  CHECK(check_property_Pk(full_tree(TreeParams(2, 2), 6), 2).verdict);
  const PkReport rec = check_property_Pk(canonical_set("reciprocal", 10), 2);
  CHECK_FALSE(rec.verdict);
  CHECK(rec.failing.has_value());
  CHECK_THROWS_AS(check_property_Pk(c, 20), Error);
  CHECK_THROWS_AS(check_property_Pk(full_tree(TreeParams(5, 1), 4), 2), Error);
  CHECK_THROWS_AS(check_property_Pk(c, 1), Error);
}

TEST_CASE("halving steps per base") {
  for (int base : {2, 3, 4, 5, 7, 10})
    for (int k = 1; k <= 40; ++k) CHECK(pk_step_depth(base, k) == halving_depth(base, k));
  CHECK(pk_step_depth(2, 5) == 5);
  CHECK(pk_step_depth(3, 2) == 1);
  CHECK(pk_step_depth(3, 4) == 2);
  CHECK(pk_step_depth(5, 2) == 0);
}

TEST_CASE("singleton detection") {
  const SingletonReport rec = singleton_microset_detect(canonical_set("reciprocal", 14), 6);
  CHECK(rec.singleton_candidate);
  CHECK_FALSE(rec.passing_k.has_value());
  CHECK(rec.witnesses.size() == 5);
  const SingletonReport cantor = singleton_microset_detect(canonical_set("cantor_thirds", 8), 6);
  CHECK_FALSE(cantor.singleton_candidate);
  CHECK(cantor.passing_k == std::optional<int>(2));
  CHECK(cantor.lower_bound == doctest::Approx(0.5));
}

TEST_CASE("P(k) is monotone in k") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 25; ++trial) {
    const TreeParams p = trial % 3 == 0 ? TreeParams(2, 2) : TreeParams(2 + trial % 2, 1);
    const int height = 8 + static_cast<int>(rng() % 3);
    const CodedTree t = random_tidy_tree(p, height, 0.3 + 0.05 * (trial % 8), rng);
    bool prev = false;
    for (int k = 2; k <= 5; ++k) {
      const bool now = check_property_Pk(t, k, 0, height - 5).verdict;
      CHECK((!prev || now));
      prev = now;
    }
  }
}

TEST_CASE("spectrum histogram and clusters") {
  const CodedTree c = canonical_set("cantor_thirds", 10);
  const Spectrum s = dimension_spectrum(c, 4);
  const std::uint64_t sum = std::accumulate(s.histogram.begin(), s.histogram.end(), std::uint64_t{0});
  CHECK(sum == s.windows.windows.size());
  REQUIRE(s.clusters.size() == 1);
  CHECK(s.clusters[0].center == doctest::Approx(kLog23).epsilon(1e-12));
  CHECK(s.clusters[0].fraction == doctest::Approx(1.0));
  CHECK(s.clusters[0].lo <= kLog23);
  CHECK(kLog23 < s.clusters[0].hi);
  CHECK(s.histogram_csv().rfind("bin_lo,bin_hi,count", 0) == 0);
  const Spectrum r = dimension_spectrum(canonical_set("reciprocal", 12), 6);
  double total = 0;
  for (const Cluster& cl : r.clusters) total += cl.fraction;
  CHECK(total == doctest::Approx(1.0));
  CHECK(r.clusters.front().lo == 0.0);
}
