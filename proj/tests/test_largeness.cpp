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
#include <random>

#include "microscope/constructions.hpp"
#include "microscope/error.hpp"
#include "microscope/generators.hpp"
#include "microscope/largeness.hpp"
#include "oracles.hpp"

using namespace microscope;

namespace {

const double kLog23 = std::log(2.0) / std::log(3.0);

bool brute_locally_large(const CodedTree& t, double s, int m) {
  for (int h = 0; h + m <= t.height(); ++h) {
    for (std::uint64_t v : t.level(h)) {
      bool ok = false;
      for (int n = 1; n <= m && !ok; ++n)
        ok = static_cast<double>(oracle::descendants(t, h, v, n)) >= std::pow(t.params().base, s * n) * (1 - 1e-12);
      if (!ok) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("power comparisons are exact on integer exponents") {
  CHECK(count_at_least_power(8, 2, 1.5, 2));
  CHECK_FALSE(count_at_least_power(7, 2, 1.5, 2));
  CHECK(count_at_most_power(8, 2, 1.5, 2));
  CHECK(count_at_least_power(2, 3, kLog23, 1));
  CHECK(count_at_most_power(2, 3, kLog23, 1));
  CHECK(count_at_least_power(1, 2, 0.0, 7));
  CHECK_FALSE(count_at_least_power(2, 2, 0.5, 3));  // 2 < 2^1.5
  CHECK(count_at_least_power(3, 2, 0.5, 3));
}

TEST_CASE("canonical trees are large and small at their dimension") {
  const CodedTree c = canonical_set("cantor_thirds", 8);
  CHECK(is_locally_large(c, kLog23, 1).verdict);
  CHECK(is_locally_small(c, kLog23, 1).verdict);
  CHECK_FALSE(is_locally_large(c, 0.7, 3).verdict);
  CHECK(is_globally_large(c, kLog23, 1.0));
  CHECK(is_globally_small(c, kLog23, 1.0));
  CHECK(global_failure(c, 0.7, 1.0, true) == std::optional<int>(1));
  CHECK(local_large_exponent(c, 3) == doctest::Approx(kLog23).epsilon(1e-12));
  const CodedTree full = full_tree(TreeParams(2, 2), 5);
  CHECK(is_locally_large(full, 2.0, 1).verdict);
  const LargenessReport r = is_locally_large(full, 2.5, 2);
  CHECK_FALSE(r.verdict);
  REQUIRE(r.failing.has_value());
  CHECK(*r.failing == VertexAddress::root());
}

TEST_CASE("local largeness agrees with brute force") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    const TreeParams p = trial % 4 == 0 ? TreeParams(2, 2) : TreeParams(2 + trial % 2, 1);
    const CodedTree t = random_tidy_tree(p, 3 + static_cast<int>(rng() % 5), 0.5, rng);
    const double s = 0.1 * static_cast<double>(rng() % 12);
    const int m = 1 + static_cast<int>(rng() % 3);
    if (t.height() < m) continue;
    CHECK(is_locally_large(t, s, m).verdict == brute_locally_large(t, s, m));
  }
}

TEST_CASE("generated trees are locally large and obey the level bound") {
  std::mt19937_64 rng(23);
  const double svals[] = {0.3, 0.5, kLog23};
  for (int trial = 0; trial < 45; ++trial) {
    const double s = svals[trial % 3];
    const int m = 1 + trial % 3;
    const TreeParams p = trial % 5 == 4 ? TreeParams(3, 1) : TreeParams(2, 1);
    const int height = m + 2 + static_cast<int>(rng() % 10);
    const CodedTree t = random_locally_large_tree(p, height, s, m, rng);
    REQUIRE(brute_locally_large(t, s, m));
    for (int N = m; N <= height; ++N)
      CHECK(static_cast<double>(t.level_count(N)) >= std::pow(p.base, s * (N - m)) * (1 - 1e-12));
  }
}

TEST_CASE("extraction keeps weight at least one and replays") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 30; ++trial) {
    const double s = trial % 2 ? 0.5 : kLog23;
    const int m = 1 + trial % 3;
    const TreeParams p(2 + trial % 2, 1);
    const int height = m + 3 + static_cast<int>(rng() % 6);
    const CodedTree t = random_locally_large_tree(p, height, s, m, rng);
    const ExtractedSubtree ex = extract_large_subtree(t, s, m, height);
    CHECK(ex.N == height);
    CHECK(ex.weight >= 1.0 - 1e-12);
    CHECK(replay_grafts(t, ex.grafts) == ex.tree);
    double w = 0;
    for (const VertexAddress& leaf : ex.tree.leaves()) {
      CHECK(leaf.height >= height - m);
      CHECK(leaf.height <= height);
      CHECK(t.contains(leaf));
      w += std::pow(p.base, -s * leaf.height);
    }
    CHECK(w == doctest::Approx(ex.weight).epsilon(1e-9));
    const auto collapse = collapse_weights(ex, p.base, s);
    CHECK(collapse.front() == doctest::Approx(ex.weight));
    CHECK(collapse.back() == doctest::Approx(1.0));
    for (std::size_t i = 1; i < collapse.size(); ++i) CHECK(collapse[i] <= collapse[i - 1] * (1 + 1e-12));
  }
}

TEST_CASE("extraction preconditions") {
  const CodedTree c = canonical_set("cantor_thirds", 6);
  auto code = [](auto fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Io;
  };
  CHECK(code([&] { extract_large_subtree(c, 0.9, 2, 6); }) == ErrorCode::NotLocallyLarge);
  CHECK(code([&] { extract_large_subtree(c, 0.5, 2, 2); }) == ErrorCode::HeightTooSmall);
  CHECK(code([&] { extract_large_subtree(c, 0.5, 2, 7); }) == ErrorCode::HeightTooSmall);
  const CodedTree untidy(TreeParams(2, 1), {{0}, {0, 1}, {0}}, true);
  CHECK(code([&] { is_locally_large(untidy, 0.5, 1); }) == ErrorCode::NotTidy);
  CHECK(code([&] { is_locally_large(c, 0.5, 0); }) == ErrorCode::InvalidArgument);
  LargenessParams bad;
  bad.C = 0;
  CHECK(code([&] { bad.validate(); }) == ErrorCode::InvalidArgument);
}
