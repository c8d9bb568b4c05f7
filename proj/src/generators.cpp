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
#include "microscope/generators.hpp"

#include <algorithm>
#include <iterator>
#include <set>

#include "microscope/error.hpp"
#include "microscope/largeness.hpp"

namespace microscope {
namespace {

using Levels = std::vector<std::set<std::uint64_t>>;

std::uint64_t pick(std::mt19937_64& rng, std::uint64_t n) { return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng); }

void extend_down(Levels& lv, int h, std::uint64_t v, std::uint64_t arity, std::mt19937_64& rng) {
  const int top = static_cast<int>(lv.size()) - 1;
  for (int g = h; g < top; ++g) {
    const std::uint64_t lo = v * arity;
    auto it = lv[g + 1].lower_bound(lo);
    if (it != lv[g + 1].end() && *it < lo + arity) {
      v = *it;
      continue;
    }
    v = lo + pick(rng, arity);
    lv[g + 1].insert(v);
  }
}

void insert_with_ancestors(Levels& lv, int h, std::uint64_t v, std::uint64_t arity) {
  for (int g = h; g >= 0; --g) {
    if (!lv[g].insert(v).second) break;
    v /= arity;
  }
}

std::uint64_t count_below(const Levels& lv, int h, std::uint64_t a, int n, std::uint64_t span) {
  const auto& level = lv[h + n];
  return static_cast<std::uint64_t>(std::distance(level.lower_bound(a * span), level.lower_bound((a + 1) * span)));
}

CodedTree freeze(const TreeParams& params, const Levels& lv) {
  std::vector<std::vector<std::uint64_t>> levels;
  for (const auto& s : lv) levels.emplace_back(s.begin(), s.end());
  return CodedTree(params, std::move(levels));
}

}  // namespace

CodedTree random_tidy_tree(const TreeParams& params, int height, double keep, std::mt19937_64& rng) {
  if (height < 0 || height > params.max_height()) throw Error(ErrorCode::DepthOutOfRange, "height out of range");
  const std::uint64_t arity = params.arity();
  std::bernoulli_distribution coin(std::clamp(keep, 0.0, 1.0));
  std::vector<std::vector<std::uint64_t>> levels{{0}};
  for (int h = 0; h < height; ++h) {
    std::vector<std::uint64_t> next;
    for (std::uint64_t v : levels[h]) {
      const std::size_t before = next.size();
      for (std::uint64_t c = 0; c < arity; ++c)
        if (coin(rng)) next.push_back(v * arity + c);
      if (next.size() == before) next.push_back(v * arity + pick(rng, arity));
    }
    levels.push_back(std::move(next));
  }
  return CodedTree(params, std::move(levels));
}

CodedTree random_locally_large_tree(const TreeParams& params, int height, double s, int m, std::mt19937_64& rng) {
  LargenessParams{s, m, 1.0}.validate();
  if (s > params.dim) throw Error(ErrorCode::InvalidArgument, "s exceeds the ambient dimension");
  if (m > height) throw Error(ErrorCode::HeightTooSmall, "m exceeds the height");
  const std::uint64_t arity = params.arity();
  const CodedTree seed = random_tidy_tree(params, height, 0.15, rng);
  Levels lv(height + 1);
  for (int h = 0; h <= height; ++h) lv[h].insert(seed.level(h).begin(), seed.level(h).end());

  std::vector<std::uint64_t> span(m + 1, 1);
  for (int n = 1; n <= m; ++n) span[n] = span[n - 1] * arity;
  const int base = params.base;
  for (int h = 0; h + m <= height; ++h) {
    const std::vector<std::uint64_t> snapshot(lv[h].begin(), lv[h].end());
    for (std::uint64_t a : snapshot) {
      bool large = false;
      for (int n = 1; n <= m && !large; ++n) large = count_at_least_power(count_below(lv, h, a, n, span[n]), base, s, n);
      if (large) continue;
      const int n = 1 + static_cast<int>(pick(rng, static_cast<std::uint64_t>(m)));
      while (!count_at_least_power(count_below(lv, h, a, n, span[n]), base, s, n)) {
        const std::uint64_t v = a * span[n] + pick(rng, span[n]);
        if (lv[h + n].count(v)) continue;
        insert_with_ancestors(lv, h + n, v, arity);
        extend_down(lv, h + n, v, arity, rng);
      }
    }
  }
  return freeze(params, lv);
}

}  // namespace microscope
