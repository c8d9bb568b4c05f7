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
#include "microscope/microscope.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "microscope/constructions.hpp"
#include "microscope/dimension.hpp"
#include "microscope/error.hpp"
#include "microscope/reports.hpp"
#include "microscope/report_json.hpp"
#include "microscope/tree_io.hpp"
#include "microscope/verify.hpp"

struct ms_tree {
  microscope::CodedTree tree;
};

struct ms_system {
  microscope::HomothetySystem system;
};

namespace {

using microscope::Error;
using microscope::ErrorCode;
using nlohmann::json;

thread_local std::string last_error;

template <class Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return MS_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return static_cast<int>(e.code());
  } catch (const json::exception& e) {
    last_error = std::string("SpecParse: ") + e.what();
    return MS_ERR_SPEC_PARSE;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return MS_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return MS_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) throw Error(ErrorCode::InvalidArgument, std::string(what) + " is null");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

json parse(const char* text) {
  require(text, "json text");
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::SpecParse, e.what());
  }
}

microscope::TreeParams params_or(int base, int dim, microscope::TreeParams fallback) {
  return microscope::TreeParams(base > 0 ? base : fallback.base, dim > 0 ? dim : fallback.dim);
}

}  // namespace

extern "C" {

const char* ms_version(void) { return "0.1.0"; }

const char* ms_last_error(void) { return last_error.c_str(); }

const char* ms_status_name(int status) {
  if (status == MS_OK) return "Ok";
  if (status == MS_ERR_INTERNAL) return "Internal";
  if (status < 1 || status > static_cast<int>(ErrorCode::Io)) return "Unknown";
  return microscope::error_code_name(static_cast<ErrorCode>(status)).data();
}

void ms_string_free(char* s) { std::free(s); }

int ms_tree_load(const char* path, ms_tree_t** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new ms_tree{microscope::load_tree(path)};
  });
}

int ms_tree_save(const ms_tree_t* t, const char* path) {
  return guarded([&] {
    require(t, "tree");
    require(path, "path");
    microscope::save_tree(t->tree, path);
  });
}

int ms_tree_from_json(const char* text, ms_tree_t** out) {
  return guarded([&] {
    require(out, "out");
    *out = new ms_tree{microscope::tree_from_json(parse(text))};
  });
}

int ms_tree_to_json(const ms_tree_t* t, char** out) {
  return guarded([&] {
    require(t, "tree");
    require(out, "out");
    *out = dup(microscope::tree_to_json(t->tree).dump());
  });
}

void ms_tree_free(ms_tree_t* t) { delete t; }

int ms_tree_height(const ms_tree_t* t, int* out) {
  return guarded([&] {
    require(t, "tree");
    require(out, "out");
    *out = t->tree.height();
  });
}

int ms_tree_level_count(const ms_tree_t* t, int n, uint64_t* out) {
  return guarded([&] {
    require(t, "tree");
    require(out, "out");
    *out = t->tree.level_count(n);
  });
}

int ms_tree_leaf_count(const ms_tree_t* t, uint64_t* out) {
  return guarded([&] {
    require(t, "tree");
    require(out, "out");
    *out = t->tree.leaf_count();
  });
}

int ms_tree_equal(const ms_tree_t* a, const ms_tree_t* b, int* out) {
  return guarded([&] {
    require(a, "tree a");
    require(b, "tree b");
    require(out, "out");
    *out = a->tree == b->tree ? 1 : 0;
  });
}

int ms_tree_summary(const ms_tree_t* t, char** out) {
  return guarded([&] {
    require(t, "tree");
    require(out, "out");
    json j = microscope::tree_summary(t->tree);
    j["schema"] = microscope::kSchemaVersion;
    *out = dup(j.dump());
  });
}

int ms_hausdorff_distance(const ms_tree_t* a, const ms_tree_t* b, int n, double* out) {
  return guarded([&] {
    require(a, "tree a");
    require(b, "tree b");
    require(out, "out");
    *out = microscope::hausdorff_distance_at_resolution(a->tree, b->tree, n);
  });
}

int ms_canonical(const char* name, int depth, int base, int dim, ms_tree_t** out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    const auto natural = microscope::canonical_params(name, dim > 0 ? dim : 1);
    *out = new ms_tree{microscope::canonical_set(name, depth, params_or(base, dim, natural))};
  });
}

int ms_system_from_json(const char* text, ms_system_t** out) {
  return guarded([&] {
    require(out, "out");
    *out = new ms_system{microscope::system_from_json(parse(text))};
  });
}

int ms_system_to_json(const ms_system_t* s, char** out) {
  return guarded([&] {
    require(s, "system");
    require(out, "out");
    *out = dup(microscope::system_to_json(s->system).dump());
  });
}

void ms_system_free(ms_system_t* s) { delete s; }

int ms_corner_system(int dim, double target, ms_system_t** out) {
  return guarded([&] {
    require(out, "out");
    *out = new ms_system{microscope::corner_system(dim, target)};
  });
}

int ms_similarity_dimension(const ms_system_t* s, double* value, int* upper_bound_only) {
  return guarded([&] {
    require(s, "system");
    require(value, "value");
    const auto d = microscope::similarity_dimension(s->system);
    *value = d.value;
    if (upper_bound_only) *upper_bound_only = d.upper_bound_only ? 1 : 0;
  });
}

int ms_attractor(const ms_system_t* s, int base, int depth, ms_tree_t** out) {
  return guarded([&] {
    require(s, "system");
    require(out, "out");
    *out = new ms_tree{microscope::attractor_tree(s->system, microscope::TreeParams(base, s->system.dim), depth)};
  });
}

int ms_construct_k(const ms_system_t* q_inf, double s, int n, ms_system_t** out) {
  return guarded([&] {
    require(q_inf, "system");
    require(out, "out");
    *out = new ms_system{microscope::build_K({q_inf->system, s, n})};
  });
}

int ms_delta_build(const char* delta_json, int base, int dim, int depth, ms_tree_t** out, char** report) {
  return guarded([&] {
    require(out, "out");
    const auto spec = microscope::delta_from_json(parse(delta_json));
    auto built = microscope::build_delta_set(spec, params_or(base, dim, microscope::TreeParams(2, 1)), depth);
    if (report) {
      json j = microscope::to_json(built);
      j["schema"] = microscope::kSchemaVersion;
      j["spec"] = microscope::delta_to_json(spec);
      *report = dup(j.dump());
    }
    *out = new ms_tree{std::move(built.tree)};
  });
}

int ms_miniset(const ms_tree_t* t, const char* lambda, const char* const* shift, int depth, ms_tree_t** out) {
  return guarded([&] {
    require(t, "tree");
    require(lambda, "lambda");
    require(out, "out");
    const int d = t->tree.params().dim;
    std::vector<microscope::Rational> sh;
    for (int j = 0; j < d; ++j) {
      require(shift, "shift");
      require(shift[j], "shift coordinate");
      sh.push_back(microscope::Rational::parse(shift[j]));
    }
    *out = new ms_tree{microscope::miniset_tree(t->tree, microscope::Rational::parse(lambda), sh, depth)};
  });
}

int ms_dims(const ms_tree_t* t, int n0, int n1, int m, int workers, char** out) {
  return guarded([&] {
    require(t, "tree");
    require(out, "out");
    *out = dup(microscope::dims_report(t->tree, {n0 > 0 ? n0 : 1, n1, m, workers}).dump());
  });
}

int ms_dims_csv(const ms_tree_t* t, int n0, int n1, int m, int workers, char** out) {
  return guarded([&] {
    require(t, "tree");
    require(out, "out");
    *out = dup(microscope::dims_csv(t->tree, {n0 > 0 ? n0 : 1, n1, m, workers}));
  });
}

int ms_largeness(const ms_tree_t* t, double s, int m, double C, int extract_height, char** out) {
  return guarded([&] {
    require(t, "tree");
    require(out, "out");
    microscope::LargenessOptions o{s, m, C, std::nullopt};
    if (extract_height > 0) o.extract_height = extract_height;
    *out = dup(microscope::largeness_report(t->tree, o).dump());
  });
}

int ms_gallery(const ms_tree_t* t, const char* options_json, char** out) {
  return guarded([&] {
    require(t, "tree");
    require(out, "out");
    const json opts = options_json ? parse(options_json) : json::object();
    *out = dup(microscope::gallery_report(t->tree, microscope::gallery_options_from_json(opts)).dump());
  });
}

int ms_spectrum_csv(const ms_tree_t* t, const char* options_json, char** out) {
  return guarded([&] {
    require(t, "tree");
    require(out, "out");
    const json opts = options_json ? parse(options_json) : json::object();
    *out = dup(microscope::spectrum_csv(t->tree, microscope::gallery_options_from_json(opts)));
  });
}

int ms_verify_suite(uint64_t seed, int large_trees, int random_trees, int workers, char** out) {
  return guarded([&] {
    require(out, "out");
    microscope::VerifyOptions o;
    o.seed = seed;
    if (large_trees >= 0) o.large_trees = large_trees;
    if (random_trees >= 0) o.random_trees = random_trees;
    o.workers = workers;
    *out = dup(microscope::verify_suite(o).dump());
  });
}

}  // extern "C"
