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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "microscope/microscope.h"

using nlohmann::json;

namespace {

std::string take(char* s) {
  std::string out(s);
  ms_string_free(s);
  return out;
}

struct TreeHandle {
  ms_tree_t* p = nullptr;
  ~TreeHandle() { ms_tree_free(p); }
};

struct SystemHandle {
  ms_system_t* p = nullptr;
  ~SystemHandle() { ms_system_free(p); }
};

}  // namespace

TEST_CASE("version and status names") {
  CHECK(std::strlen(ms_version()) > 0);
  CHECK(std::string(ms_status_name(MS_OK)) == "Ok");
  CHECK(std::string(ms_status_name(MS_ERR_INVALID_S)) == "InvalidS");
  CHECK(std::string(ms_status_name(MS_ERR_INTERNAL)) == "Internal");
}

TEST_CASE("trees through the handle interface") {
  TreeHandle t;
  REQUIRE(ms_canonical("cantor_thirds", 6, 0, 0, &t.p) == MS_OK);
  int h = 0;
  std::uint64_t n = 0;
  CHECK(ms_tree_height(t.p, &h) == MS_OK);
  CHECK(h == 6);
  CHECK(ms_tree_level_count(t.p, 3, &n) == MS_OK);
  CHECK(n == 8);
  CHECK(ms_tree_level_count(t.p, 7, &n) == MS_ERR_DEPTH_OUT_OF_RANGE);
  CHECK(ms_tree_leaf_count(t.p, &n) == MS_OK);
  CHECK(n == 64);

  char* text = nullptr;
  REQUIRE(ms_tree_to_json(t.p, &text) == MS_OK);
  const std::string js = take(text);
  TreeHandle back;
  REQUIRE(ms_tree_from_json(js.c_str(), &back.p) == MS_OK);
  int same = 0;
  CHECK(ms_tree_equal(t.p, back.p, &same) == MS_OK);
  CHECK(same == 1);

  const auto path = (std::filesystem::temp_directory_path() / "ms_capi_tree.bin").string();
  CHECK(ms_tree_save(t.p, path.c_str()) == MS_OK);
  TreeHandle loaded;
  CHECK(ms_tree_load(path.c_str(), &loaded.p) == MS_OK);
  CHECK(ms_tree_equal(t.p, loaded.p, &same) == MS_OK);
  CHECK(same == 1);
  std::filesystem::remove(path);

  double d = -1;
  CHECK(ms_hausdorff_distance(t.p, back.p, 6, &d) == MS_OK);
  CHECK(d == 0.0);
  CHECK(ms_tree_summary(t.p, &text) == MS_OK);
  CHECK(json::parse(take(text))["leaves"] == 64);
}

TEST_CASE("errors carry a code and a message") {
  TreeHandle t;
  CHECK(ms_canonical("nope", 3, 0, 0, &t.p) == MS_ERR_UNKNOWN_NAME);
  CHECK(t.p == nullptr);
  CHECK(std::string(ms_last_error()).find("nope") != std::string::npos);
  CHECK(ms_tree_from_json("{\"base\": 2,", &t.p) == MS_ERR_SPEC_PARSE);
  CHECK(ms_tree_from_json(R"({"base": 2, "dim": 1, "height": 1, "levels": [[0], [0, 3]]})", &t.p) ==
        MS_ERR_INVALID_ARGUMENT);
  CHECK(ms_tree_load("/nonexistent/x.json", &t.p) == MS_ERR_IO);
  CHECK(ms_tree_height(nullptr, nullptr) == MS_ERR_INVALID_ARGUMENT);
}

TEST_CASE("systems, attractors and the K family") {
  SystemHandle q;
  REQUIRE(ms_system_from_json(R"({"dim": 1, "separation": "strong",
      "maps": [{"ratio": "1/4", "translation": [0]}, {"ratio": "1/4", "translation": ["3/4"]}]})",
                              &q.p) == MS_OK);
  double dim = 0;
  int upper = -1;
  CHECK(ms_similarity_dimension(q.p, &dim, &upper) == MS_OK);
  CHECK(dim == doctest::Approx(0.5));
  CHECK(upper == 0);
  SystemHandle k;
  REQUIRE(ms_construct_k(q.p, 0.25, 8, &k.p) == MS_OK);
  CHECK(ms_similarity_dimension(k.p, &dim, nullptr) == MS_OK);
  CHECK(dim == doctest::Approx(0.25).epsilon(1e-12));
  SystemHandle bad;
  CHECK(ms_construct_k(q.p, 0.75, 8, &bad.p) == MS_ERR_INVALID_S);
  TreeHandle a, b;
  REQUIRE(ms_attractor(q.p, 2, 10, &a.p) == MS_OK);
  REQUIRE(ms_attractor(k.p, 2, 10, &b.p) == MS_OK);
  double d = 0;
  CHECK(ms_hausdorff_distance(a.p, b.p, 10, &d) == MS_OK);
  CHECK(d <= 1.0 / 8 + 2.0 / 1024);
  char* text = nullptr;
  CHECK(ms_system_to_json(k.p, &text) == MS_OK);
  CHECK(json::parse(take(text))["maps"].size() == 4);
  SystemHandle corner;
  CHECK(ms_corner_system(2, 1.5, &corner.p) == MS_OK);
  CHECK(ms_similarity_dimension(corner.p, &dim, nullptr) == MS_OK);
  CHECK(dim == doctest::Approx(1.5));
}

TEST_CASE("dimension sets and minisets") {
  TreeHandle t;
  char* report = nullptr;
  REQUIRE(ms_delta_build(R"({"pieces": [0.5]})", 2, 1, 8, &t.p, &report) == MS_OK);
  CHECK(json::parse(take(report))["scaffold_values"][0] == 0.5);
  TreeHandle none;
  CHECK(ms_delta_build(R"({"pieces": [0.5], "inf": 0.25})", 2, 1, 8, &none.p, nullptr) == MS_ERR_INF_NOT_ATTAINED);

  TreeHandle c, z;
  REQUIRE(ms_canonical("cantor_thirds", 8, 0, 0, &c.p) == MS_OK);
  const char* shift[] = {"-4/3"};
  REQUIRE(ms_miniset(c.p, "4", shift, 8, &z.p) == MS_OK);
  std::uint64_t leaves = 0;
  CHECK(ms_tree_leaf_count(z.p, &leaves) == MS_OK);
  CHECK(leaves == 1);
  TreeHandle small;
  CHECK(ms_miniset(c.p, "1/2", shift, 8, &small.p) == MS_ERR_LAMBDA_TOO_SMALL);
}

TEST_CASE("report documents") {
  TreeHandle t;
  REQUIRE(ms_canonical("reciprocal", 10, 0, 0, &t.p) == MS_OK);
  char* out = nullptr;
  REQUIRE(ms_dims(t.p, 1, -1, -1, 1, &out) == MS_OK);
  const json dims = json::parse(take(out));
  CHECK(dims["schema"] == 1);
  CHECK(dims["lower"]["value"] == 0.0);
  REQUIRE(ms_dims_csv(t.p, 1, -1, -1, 1, &out) == MS_OK);
  CHECK(take(out).find("estimate,n,count") == 0);
  REQUIRE(ms_largeness(t.p, 0.1, 2, 1.0, 0, &out) == MS_OK);
  CHECK(json::parse(take(out))["locally_large"]["verdict"] == false);
  REQUIRE(ms_gallery(t.p, R"({"pk": true, "kmax": 4, "verify": true})", &out) == MS_OK);
  const json g = json::parse(take(out));
  CHECK(g["singleton"]["verdict"] == "singleton-candidate");
  CHECK(g["invariants_ok"] == true);
  CHECK(ms_gallery(t.p, "{\"M\": ", &out) == MS_ERR_SPEC_PARSE);
  REQUIRE(ms_spectrum_csv(t.p, R"({"M": 4})", &out) == MS_OK);
  CHECK(take(out).find("bin_lo") == 0);
  REQUIRE(ms_verify_suite(3, 6, 3, 1, &out) == MS_OK);
  const std::string first = take(out);
  REQUIRE(ms_verify_suite(3, 6, 3, 2, &out) == MS_OK);
  CHECK(take(out) == first);
}
