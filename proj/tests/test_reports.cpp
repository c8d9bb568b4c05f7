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

#include <random>

#include "microscope/constructions.hpp"
#include "microscope/error.hpp"
#include "microscope/generators.hpp"
#include "microscope/report_json.hpp"
#include "microscope/reports.hpp"
#include "microscope/verify.hpp"

using namespace microscope;
using nlohmann::json;

TEST_CASE("dims report") {
  const CodedTree c = canonical_set("cantor_thirds", 9);
  const json j = dims_report(c, {});
  CHECK(j["schema"] == kSchemaVersion);
  CHECK(j["tree"]["leaves"] == 512);
  for (const char* key : {"box", "assouad", "lower"}) {
    CHECK(j.contains(key));
    CHECK(j[key]["value"].get<double>() == doctest::Approx(std::log(2.0) / std::log(3.0)));
  }
  CHECK(j["assouad"]["window_depth"] == 8);
  const std::string csv = dims_csv(c, {});
  CHECK(csv.rfind("estimate,n,count,log_ratio", 0) == 0);
}

TEST_CASE("largeness report") {
  const CodedTree c = canonical_set("cantor_thirds", 6);
  LargenessOptions opt;
  opt.s = 0.6;
  opt.m = 2;
  opt.extract_height = 6;
  const json j = largeness_report(c, opt);
  CHECK(j["locally_large"]["verdict"] == true);
  CHECK(j["globally_large"]["verdict"] == true);
  CHECK(j["extraction"]["weight"].get<double>() >= 1.0);
  opt.s = 0.7;
  opt.extract_height.reset();
  const json k = largeness_report(c, opt);
  CHECK(k["locally_large"]["verdict"] == false);
  CHECK(k["globally_large"]["failing_level"] == 1);
}

TEST_CASE("gallery options parse") {
  const GalleryOptions o =
      gallery_options_from_json(json::parse(R"({"M": 4, "eps": 0.1, "min": true, "seed": 9, "include_root": true})"));
  CHECK(o.M == 4);
  CHECK(o.epsilon == 0.1);
  CHECK(o.min);
  CHECK_FALSE(o.max);
  CHECK(o.policy.seed == 9);
  CHECK(o.policy.include_root);
  CHECK_THROWS_AS(gallery_options_from_json(json::parse(R"({"M": "six"})")), Error);
}

TEST_CASE("gallery invariants hold on canonical and random trees") {
  GalleryOptions opt;
  opt.min = opt.max = opt.pk = opt.spectrum = opt.verify = true;
  opt.M = 4;
  for (const char* name : {"cantor_thirds", "reciprocal"}) {
    const json j = gallery_report(canonical_set(name, 10), opt);
    CHECK(j["invariants_ok"] == true);
    for (const char* key : {"min", "max", "pk", "singleton", "spectrum", "invariants"}) CHECK(j.contains(key));
  }
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    const CodedTree t = random_tidy_tree(TreeParams(2, 1 + trial % 2), 8, 0.6, rng);
    const json j = gallery_report(t, opt);
    INFO(j["invariants"].dump());
    CHECK(j["invariants_ok"] == true);
  }
}

TEST_CASE("verify suite is deterministic across worker counts") {
  VerifyOptions a;
  a.large_trees = 12;
  a.random_trees = 6;
  a.seed = 5;
  VerifyOptions b = a;
  b.workers = 3;
  const json ra = verify_suite(a);
  CHECK(ra.dump() == verify_suite(a).dump());
  CHECK(ra.dump() == verify_suite(b).dump());
  CHECK(verify_passed(ra));
  VerifyOptions c = a;
  c.seed = 6;
  CHECK(verify_suite(c)["seed"] == 6);
}
