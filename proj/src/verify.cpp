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
#include "microscope/verify.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <string>

#include "microscope/constructions.hpp"
#include "microscope/dimension.hpp"
#include "microscope/error.hpp"
#include "microscope/gallery.hpp"
#include "microscope/generators.hpp"
#include "microscope/largeness.hpp"
#include "microscope/report_json.hpp"
#include "microscope/tree_io.hpp"
#include "parallel.hpp"

namespace microscope {
namespace {

using nlohmann::json;

// One case: returns an empty string when it holds, else a description.
using CaseFn = std::function<std::string(std::mt19937_64&, int)>;

json run_check(const std::string& name, int cases, std::uint64_t seed, int id, int workers, const CaseFn& fn) {
  std::vector<std::string> result(static_cast<std::size_t>(cases));
  detail::parallel_for(result.size(), workers, [&](std::size_t i) {
    std::seed_seq seq{seed, static_cast<std::uint64_t>(id), static_cast<std::uint64_t>(i)};
    std::mt19937_64 rng(seq);
    try {
      result[i] = fn(rng, static_cast<int>(i));
    } catch (const Error& e) {
      result[i] = std::string("error: ") + e.what();
    }
  });
  json failures = json::array();
  for (std::size_t i = 0; i < result.size(); ++i)
    if (!result[i].empty()) failures.push_back({{"case", i}, {"detail", result[i]}});
  const std::size_t violations = failures.size();
  if (failures.size() > 10) failures.erase(failures.begin() + 10, failures.end());
  return {{"name", name}, {"cases", cases}, {"violations", violations}, {"failures", failures}};
}

int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

TreeParams random_params(std::mt19937_64& rng) {
  switch (uniform(rng, 0, 3)) {
    case 0: return TreeParams(3, 1);
    case 1: return TreeParams(2, 2);
    default: return TreeParams(2, 1);
  }
}

std::string largeness_case(std::mt19937_64& rng, int i) {
  const double svals[] = {0.3, 0.5, std::log(2.0) / std::log(3.0)};
  const double s = svals[i % 3];
  const int m = 1 + (i / 3) % 3;
  const TreeParams p = (i % 7 == 6) ? TreeParams(2, 2) : (i % 5 == 4 ? TreeParams(3, 1) : TreeParams(2, 1));
  const int height = uniform(rng, m + 1, p.dim == 2 ? 10 : 16);
  const CodedTree t = random_locally_large_tree(p, height, s, m, rng);
  if (!is_locally_large(t, s, m).verdict) return "generator produced a tree that is not locally large";
  for (int N = 0; N <= height; ++N)
    if (N >= m && !count_at_least_power(t.level_count(N), p.base, s, N - m))
      return "level " + std::to_string(N) + " has " + std::to_string(t.level_count(N)) + " vertices";
  const ExtractedSubtree ex = extract_large_subtree(t, s, m, height);
  if (!(ex.weight >= 1.0 - 1e-12)) return "extracted weight " + std::to_string(ex.weight) + " < 1";
  if (!(replay_grafts(t, ex.grafts) == ex.tree)) return "graft replay differs from the extracted tree";
  const auto w = collapse_weights(ex, p.base, s);
  for (std::size_t k = 1; k < w.size(); ++k)
    if (w[k] > w[k - 1] * (1 + 1e-12)) return "collapse increased the weight";
  if (std::abs(w.back() - 1.0) > 1e-12) return "collapse does not end at the root";
  return {};
}

std::string ordering_case(std::mt19937_64& rng, int) {
  const TreeParams p = random_params(rng);
  const int height = uniform(rng, 2, p.dim == 2 ? 8 : 12);
  const CodedTree t = random_tidy_tree(p, height, std::uniform_real_distribution<double>(0.2, 0.9)(rng), rng);
  const int m = uniform(rng, 1, height);
  const double lo = lower_window_estimate(t, m).value;
  const double hi = assouad_window_estimate(t, m).value;
  const double root = std::min<double>(count_exponent(t.level_count(m), p.base, m), p.dim);
  if (!(lo <= root && root <= hi)) return "lower " + std::to_string(lo) + ", root " + std::to_string(root) + ", upper " + std::to_string(hi);
  return {};
}

std::string pk_case(std::mt19937_64& rng, int) {
  const TreeParams p = random_params(rng);
  const int height = uniform(rng, 7, p.dim == 2 ? 8 : 12);
  const CodedTree t = random_tidy_tree(p, height, std::uniform_real_distribution<double>(0.2, 0.8)(rng), rng);
  const int top = height - 5;
  bool prev = false;
  for (int k = 2; k <= 5; ++k) {
    const PkReport r = check_property_Pk(t, k, 0, top);
    if (prev && !r.verdict) return "P(" + std::to_string(k - 1) + ") holds but P(" + std::to_string(k) + ") fails";
    if (!r.packings_sound()) return "overlapping packing at k = " + std::to_string(k);
    const PkReport full = check_property_Pk(t, k);
    if (full.verdict && !full.bounds_hold()) return "doubling bound fails at k = " + std::to_string(k);
    prev = r.verdict;
  }
  return {};
}

std::string certificate_case(std::mt19937_64& rng, int) {
  const TreeParams p = random_params(rng);
  const int height = uniform(rng, 6, p.dim == 2 ? 8 : 12);
  const CodedTree t = random_tidy_tree(p, height, std::uniform_real_distribution<double>(0.3, 0.9)(rng), rng);
  const int M = uniform(rng, 2, height - 2);
  try {
    const MicrosetCandidate c = min_microset_search(t, 0.05, M);
    if (!certificate_holds(c, p.base, true)) return "search returned a window breaking its bound";
    if (c.exponent < c.target - 1e-12) return "candidate below the sparsest window";
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoQualifyingWindow) throw;
  }
  const MicrosetCandidate d = max_microset_search(t, M);
  if (std::abs(d.exponent - d.target) > 1e-12) return "densest candidate misses the densest window";
  return {};
}

std::string roundtrip_case(std::mt19937_64& rng, int) {
  const TreeParams p = random_params(rng);
  const CodedTree t = random_tidy_tree(p, uniform(rng, 0, 8), 0.5, rng);
  if (!(tree_from_json(json::parse(tree_to_json(t).dump())) == t)) return "JSON round trip changed the tree";
  if (!(tree_from_binary(tree_to_binary(t)) == t)) return "binary round trip changed the tree";
  return {};
}

std::string k_family_case(std::mt19937_64& rng, int) {
  const double sup = std::uniform_real_distribution<double>(0.2, 0.95)(rng);
  const HomothetySystem q = corner_system(1, sup);
  const double s = std::uniform_real_distribution<double>(0.0, sup)(rng);
  const int n = uniform(rng, 1, 16);
  const HomothetySystem k = build_K({q, s, n});
  const double got = similarity_dimension(k).value;
  if (std::abs(got - s) > 1e-9) return "dimension " + std::to_string(got) + " for s = " + std::to_string(s);
  return {};
}

}  // namespace

json verify_suite(const VerifyOptions& opt) {
  json checks = json::array();
  checks.push_back(run_check("locally_large_extraction", opt.large_trees, opt.seed, 1, opt.workers, largeness_case));
  checks.push_back(run_check("window_ordering", opt.random_trees, opt.seed, 2, opt.workers, ordering_case));
  checks.push_back(run_check("pk_monotone_and_sound", opt.random_trees, opt.seed, 3, opt.workers, pk_case));
  checks.push_back(run_check("search_certificates", opt.random_trees, opt.seed, 4, opt.workers, certificate_case));
  checks.push_back(run_check("tree_io_roundtrip", opt.random_trees, opt.seed, 5, opt.workers, roundtrip_case));
  checks.push_back(run_check("k_family_dimension", opt.random_trees, opt.seed, 6, opt.workers, k_family_case));
  bool ok = true;
  for (const auto& c : checks) ok = ok && c["violations"].get<std::size_t>() == 0;
  return {{"schema", kSchemaVersion}, {"seed", opt.seed}, {"checks", checks}, {"passed", ok}};
}

bool verify_passed(const json& report) { return report.value("passed", false); }

}  // namespace microscope
