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
// Acceptance suite: one line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "microscope/constructions.hpp"
#include "microscope/dimension.hpp"
#include "microscope/gallery.hpp"
#include "microscope/generators.hpp"
#include "microscope/largeness.hpp"
#include "microscope/verify.hpp"

using namespace microscope;
using nlohmann::json;

namespace {

const double kLog23 = std::log(2.0) / std::log(3.0);

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Outcome exact_counts() {
  const CodedTree t = canonical_set("cantor_thirds", 12);
  Outcome o;
  const DimensionEstimate box = box_estimate(t, 1, 12);
  const double vals[] = {box.value, assouad_window_estimate(t, 8).value, lower_window_estimate(t, 8).value};
  double worst = 0;
  for (double v : vals) worst = std::max(worst, std::abs(v - kLog23));
  for (int n = 0; n <= 12; ++n) o.pass = o.pass && t.level_count(n) == (std::uint64_t{1} << n);
  o.pass = o.pass && worst <= 1e-9;
  o.detail = "box " + fmt("%.12f", vals[0]) + ", assouad " + fmt("%.12f", vals[1]) + ", lower " +
             fmt("%.12f", vals[2]) + ", max error " + fmt("%.1e", worst);
  return o;
}

Outcome large_trees() {
  const double svals[] = {0.3, 0.5, kLog23};
  std::mt19937_64 rng(2026);
  int violations = 0;
  double min_weight = 1e300;
  for (int i = 0; i < 200; ++i) {
    const double s = svals[i % 3];
    const int m = 1 + (i / 3) % 3;
    const TreeParams p = i % 4 == 3 ? TreeParams(3, 1) : TreeParams(2, 1);
    const int height = m + 1 + static_cast<int>(rng() % (16 - m));
    const CodedTree t = random_locally_large_tree(p, height, s, m, rng);
    if (!is_locally_large(t, s, m).verdict) ++violations;
    for (int N = m; N <= height; ++N)
      if (static_cast<double>(t.level_count(N)) < std::pow(p.base, s * (N - m)) * (1 - 1e-12)) ++violations;
    const ExtractedSubtree ex = extract_large_subtree(t, s, m, height);
    min_weight = std::min(min_weight, ex.weight);
    if (!(ex.weight >= 1.0 - 1e-12)) ++violations;
  }
  return {violations == 0, "200 trees, " + std::to_string(violations) + " violations, least W(T^N) " + fmt("%.6f", min_weight)};
}

Outcome miniset_zero() {
  const CodedTree c = canonical_set("cantor_thirds", 8);
  const CodedTree z = miniset_tree(c, Rational(4), {Rational(-4, 3)}, 8);
  const std::vector<std::vector<Rational>> origin{{Rational(0)}};
  const bool same = z == tree_from_point_set(c.params(), origin, 8);
  return {same, same ? "(4C - 4/3) meets [0,1] in the tree of {0}" : "miniset differs from the tree of {0}"};
}

Outcome reciprocal() {
  const CodedTree t = canonical_set("reciprocal", 14);
  const double box = box_estimate(t, 1, 14).value;
  const double lower = lower_window_estimate(t, 8).value;
  const SingletonReport s = singleton_microset_detect(t, 6);
  Outcome o;
  o.pass = box >= 0.40 && box <= 0.60 && lower == 0.0 && s.singleton_candidate;
  o.detail = "box proxy " + fmt("%.4f", box) + ", lower " + fmt("%.4f", lower) + ", " +
             (s.singleton_candidate ? "singleton-candidate" : "no singleton") + " with k_max 6";
  return o;
}

Outcome k_family() {
  HomothetySystem q;
  q.separation = Separation::Strong;
  q.maps = {{Scalar::of(Rational(1, 4)), {Scalar::of(Rational(0))}},
            {Scalar::of(Rational(1, 4)), {Scalar::of(Rational(3, 4))}}};
  const TreeParams p(2, 1);
  const CodedTree top = attractor_tree(q, p, 10);
  Outcome o;
  double worst_slack = 1e300, worst_dim = 0;
  for (double s : {0.1, 0.25, 0.4}) {
    for (int n : {2, 4, 8}) {
      const HomothetySystem k = build_K({q, s, n});
      const double dist = hausdorff_distance_at_resolution(attractor_tree(k, p, 10), top, 10);
      const double bound = 1.0 / n + 2 * std::ldexp(1.0, -10);
      worst_slack = std::min(worst_slack, bound - dist);
      worst_dim = std::max(worst_dim, std::abs(similarity_dimension(k).value - s));
    }
  }
  o.pass = worst_slack >= 0 && worst_dim <= 1e-12;
  o.detail = "9 pairs, least slack to the bound " + fmt("%.6f", worst_slack) + ", dimension error " + fmt("%.1e", worst_dim);
  return o;
}

Outcome bracket() {
  const struct {
    const char* system;
    int base;
  } suite[] = {
      {R"({"dim":1,"separation":"strong","maps":[{"ratio":"1/3","translation":[0]},{"ratio":"1/3","translation":["2/3"]}]})", 3},
      {R"({"dim":1,"separation":"strong","maps":[{"ratio":"1/4","translation":[0]},{"ratio":"1/4","translation":["3/4"]}]})", 2},
      {R"({"dim":1,"separation":"strong","maps":[{"ratio":"1/4","translation":[0]},{"ratio":"1/4","translation":["3/8"]},{"ratio":"1/4","translation":["3/4"]}]})", 2},
      {R"({"dim":1,"separation":"open_set","maps":[{"ratio":"1/3","translation":[0]},{"ratio":"1/3","translation":["1/3"]}]})", 3},
      {R"({"dim":2,"separation":"open_set","maps":[{"ratio":"1/2","translation":[0,0]},{"ratio":"1/2","translation":["1/2",0]},{"ratio":"1/2","translation":[0,"1/2"]}]})", 2},
      {R"({"dim":1,"separation":"strong","maps":[{"ratio":"1/5","translation":[0]},{"ratio":"1/5","translation":["2/5"]},{"ratio":"1/5","translation":["4/5"]}]})", 5},
      {R"({"dim":1,"separation":"open_set","maps":[{"ratio":"1/4","translation":[0]},{"ratio":"1/4","translation":["1/2"]},{"ratio":"1/4","translation":["3/4"]}]})", 4},
      {R"({"dim":1,"separation":"strong","maps":[{"ratio":"1/3","translation":[0]},{"ratio":"1/3","translation":["2/3"]}]})", 2},
      {R"({"dim":2,"separation":"strong","maps":[{"ratio":"1/4","translation":[0,0]},{"ratio":"1/4","translation":["3/4",0]},{"ratio":"1/4","translation":[0,"3/4"]}]})", 2},
      {R"({"dim":1,"separation":"strong","maps":[{"ratio":"2/5","translation":[0]},{"ratio":"2/5","translation":["3/5"]}]})", 2},
  };
  Outcome o;
  double worst_min = 0, worst_max = 0;
  int ordering = 0;
  for (const auto& c : suite) {
    const HomothetySystem s = system_from_json(json::parse(c.system));
    s.validate();
    const CodedTree t = attractor_tree(s, TreeParams(c.base, s.dim), 12);
    const double lower = lower_window_estimate(t, 8).value;
    const double upper = assouad_window_estimate(t, 8).value;
    const double root = count_exponent(t.level_count(8), c.base, 8);
    if (!(lower <= root && root <= upper)) ++ordering;
    worst_min = std::max(worst_min, std::abs(min_microset_search(t, 0.025, 8).exponent - lower));
    worst_max = std::max(worst_max, std::abs(max_microset_search(t, 8).exponent - upper));
  }
  o.pass = worst_min <= 0.05 && worst_max <= 0.05 && ordering == 0;
  o.detail = "10 systems, |min - lower| <= " + fmt("%.4f", worst_min) + ", |max - assouad| <= " + fmt("%.4f", worst_max) +
             ", ordering breaks " + std::to_string(ordering);
  return o;
}

Outcome spectrum() {
  const DeltaSpec d = delta_from_json(json::parse(R"j({"pieces": ["log(2)/log(3)", 0.5], "inf": 0.5,
      "sup": "log(2)/log(3)", "alpha": [1, 3], "scaffold_dim": "log(2)/log(3)"})j"));
  const DeltaConstruction c = build_delta_set(d, TreeParams(3, 1), 12);
  const Spectrum s = dimension_spectrum(c.tree, 6, {}, 0.02);
  std::vector<double> allowed{kLog23, 0.5};
  allowed.insert(allowed.end(), c.scaffold_values.begin(), c.scaffold_values.end());
  auto near = [](double x, double y) { return std::abs(x - y) <= 0.05; };
  Outcome o;
  std::ostringstream centers;
  for (double target : {kLog23, 0.5}) {
    bool hit = false;
    for (const Cluster& cl : s.clusters) hit = hit || near(cl.center, target);
    o.pass = o.pass && hit;
  }
  int stray = 0;
  for (const Cluster& cl : s.clusters) {
    centers << " " << fmt("%.3f", cl.center) << " (" << fmt("%.0f", 100 * cl.fraction) << "%)";
    if (cl.fraction < 0.05) continue;
    bool ok = false;
    for (double a : allowed) ok = ok || near(cl.center, a);
    if (!ok) ++stray;
  }
  o.pass = o.pass && stray == 0;
  o.detail = std::to_string(s.windows.windows.size()) + " windows, clusters" + centers.str() + ", " +
             std::to_string(stray) + " heavy clusters off the set";
  return o;
}

Outcome packing() {
  const CodedTree c = canonical_set("cantor_thirds", 10);
  const PkReport r = check_property_Pk(c, 2);
  Outcome o;
  int bad = 0;
  for (const Packing& p : r.packings)
    if (!(p.disjoint && std::ldexp(1.0, p.m) >= 0.5 * std::sqrt(p.R / p.r) * (1 - 1e-12))) ++bad;
  o.pass = r.verdict && r.windows_passed == r.windows_tested && r.packings.size() == r.windows_tested && bad == 0;
  // monotonicity in k over canonical and random trees
  std::vector<CodedTree> trees{c, canonical_set("reciprocal", 12), full_tree(TreeParams(2, 2), 8)};
  std::mt19937_64 rng(8);
  for (int i = 0; i < 30; ++i)
    trees.push_back(random_tidy_tree(i % 3 ? TreeParams(2 + i % 2, 1) : TreeParams(2, 2), 10, 0.3 + 0.02 * i, rng));
  int breaks = 0;
  for (const CodedTree& t : trees) {
    bool prev = false;
    for (int k = 2; k <= 6; ++k) {
      const bool now = check_property_Pk(t, k, 0, t.height() - 6).verdict;
      if (prev && !now) ++breaks;
      prev = now;
    }
  }
  o.pass = o.pass && breaks == 0;
  o.detail = std::to_string(r.windows_passed) + "/" + std::to_string(r.windows_tested) + " windows pass P(2), " +
             std::to_string(bad) + " packings off the bound, " + std::to_string(breaks) + " monotonicity breaks on " +
             std::to_string(trees.size()) + " trees";
  return o;
}

Outcome determinism() {
  VerifyOptions opt;
  opt.seed = 0;
  const std::string a = verify_suite(opt).dump(2);
  const std::string b = verify_suite(opt).dump(2);
  opt.workers = 4;
  const std::string c = verify_suite(opt).dump(2);
  const bool passed = verify_passed(json::parse(a));
  return {a == b && a == c && passed, std::string(a == b && a == c ? "byte-identical" : "reports differ") + " over 3 runs (" +
                                          std::to_string(a.size()) + " bytes), suite " + (passed ? "passed" : "failed")};
}

}  // namespace

int main() {
  const struct {
    int id;
    const char* name;
    double budget_s;
    std::function<Outcome()> run;
  } criteria[] = {
      {1, "exact self-similar counts", 1.0, exact_counts},
      {2, "locally large trees and extraction", 30.0, large_trees},
      {3, "miniset of the Cantor set", 120.0, miniset_zero},
      {4, "reciprocal sequence", 120.0, reciprocal},
      {5, "K(s, n) approximation", 120.0, k_family},
      {6, "microset bracket", 120.0, bracket},
      {7, "dimension spectrum", 120.0, spectrum},
      {8, "packing count", 120.0, packing},
      {9, "determinism", 120.0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_s) {
      o.pass = false;
      o.detail += ", over the time budget";
    }
    if (!o.pass) ++failed;
    std::printf("[%s] criterion %d %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
  }
  std::printf("%d of 9 criteria passed\n", 9 - failed);
  return failed == 0 ? 0 : 1;
}
