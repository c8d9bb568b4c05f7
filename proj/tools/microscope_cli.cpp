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
// Command-line front end. Everything goes through the C interface.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "microscope/microscope.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInput = 2;

enum class Level { Debug, Info, Warn, Error };

Level log_level() {
  const char* env = std::getenv("MICROSCOPE_LOG");
  const std::string v = env ? env : "warn";
  if (v == "debug") return Level::Debug;
  if (v == "info") return Level::Info;
  if (v == "error") return Level::Error;
  return Level::Warn;
}

void log(Level l, const std::string& msg) {
  static const Level threshold = log_level();
  static const char* names[] = {"debug", "info", "warn", "error"};
  if (l >= threshold) std::cerr << "[" << names[static_cast<int>(l)] << "] " << msg << "\n";
}

struct Failure {
  int exit_code;
  std::string message;
};

void check(int status) {
  if (status != MS_OK) throw Failure{kExitInput, ms_last_error()};
}

std::string take(char* s) {
  std::string out(s ? s : "");
  ms_string_free(s);
  return out;
}

struct TreeDeleter {
  void operator()(ms_tree_t* t) const { ms_tree_free(t); }
};
struct SystemDeleter {
  void operator()(ms_system_t* s) const { ms_system_free(s); }
};
using Tree = std::unique_ptr<ms_tree_t, TreeDeleter>;
using System = std::unique_ptr<ms_system_t, SystemDeleter>;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitInput, "Io: cannot open " + path};
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{kExitInput, "Io: cannot write " + path};
  out << text;
}

void emit(const json& j, const std::string& out_path) {
  const std::string text = j.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_text(out_path, text);
  }
}

Tree load(const std::string& path) {
  ms_tree_t* t = nullptr;
  check(ms_tree_load(path.c_str(), &t));
  return Tree(t);
}

System system_from_file(const std::string& path) {
  ms_system_t* s = nullptr;
  check(ms_system_from_json(read_file(path).c_str(), &s));
  return System(s);
}

json summary(const ms_tree_t* t) {
  char* s = nullptr;
  check(ms_tree_summary(t, &s));
  return json::parse(take(s));
}

struct BuildArgs {
  std::string canonical, system, delta, out, report;
  int depth = 8, base = 0, dim = 0;
};

int cmd_build(const BuildArgs& a) {
  const int sources = !a.canonical.empty() + !a.system.empty() + !a.delta.empty();
  if (sources != 1) throw Failure{kExitInput, "give exactly one of --canonical, --system, --delta"};
  ms_tree_t* raw = nullptr;
  json extra;
  if (!a.canonical.empty()) {
    check(ms_canonical(a.canonical.c_str(), a.depth, a.base, a.dim, &raw));
  } else if (!a.system.empty()) {
    System s = system_from_file(a.system);
    check(ms_attractor(s.get(), a.base > 0 ? a.base : 2, a.depth, &raw));
  } else {
    char* rep = nullptr;
    check(ms_delta_build(read_file(a.delta).c_str(), a.base, a.dim, a.depth, &raw, &rep));
    extra = json::parse(take(rep));
  }
  Tree t(raw);
  check(ms_tree_save(t.get(), a.out.c_str()));
  json j = summary(t.get());
  j["path"] = a.out;
  if (!extra.is_null()) {
    j["construction"] = extra;
    if (!a.report.empty()) emit(extra, a.report);
  }
  log(Level::Info, "wrote " + a.out);
  emit(j, "");
  return kExitOk;
}

struct DimsArgs {
  std::string tree, csv, out;
  int n0 = 1, n1 = -1, m = -1, workers = 1;
};

int cmd_dims(const DimsArgs& a) {
  Tree t = load(a.tree);
  char* s = nullptr;
  check(ms_dims(t.get(), a.n0, a.n1, a.m, a.workers, &s));
  const json j = json::parse(take(s));
  if (!a.csv.empty()) {
    check(ms_dims_csv(t.get(), a.n0, a.n1, a.m, a.workers, &s));
    write_text(a.csv, take(s));
  }
  emit(j, a.out);
  return kExitOk;
}

struct GalleryArgs {
  std::string tree, csv, out;
  json options = json::object();
  bool verify = false;
};

int cmd_gallery(GalleryArgs a) {
  Tree t = load(a.tree);
  a.options["verify"] = a.verify;
  log(Level::Info, "gallery seed " + a.options["seed"].dump());
  const std::string opts = a.options.dump();
  char* s = nullptr;
  check(ms_gallery(t.get(), opts.c_str(), &s));
  const json j = json::parse(take(s));
  if (!a.csv.empty()) {
    check(ms_spectrum_csv(t.get(), opts.c_str(), &s));
    write_text(a.csv, take(s));
  }
  emit(j, a.out);
  if (a.verify && !j.value("invariants_ok", false)) {
    log(Level::Error, "invariant violation");
    return kExitViolation;
  }
  return kExitOk;
}

struct LargenessArgs {
  std::string tree, out;
  double s = 0.5, C = 1.0;
  int m = 1, extract = 0;
};

int cmd_largeness(const LargenessArgs& a) {
  Tree t = load(a.tree);
  char* s = nullptr;
  check(ms_largeness(t.get(), a.s, a.m, a.C, a.extract, &s));
  emit(json::parse(take(s)), a.out);
  return kExitOk;
}

struct ConstructArgs {
  std::string system, out;
  std::optional<double> sup;
  double s = 0.0;
  int n = 1, dim = 1, depth = 0, base = 2;
};

int cmd_construct_k(const ConstructArgs& a) {
  if (a.system.empty() == !a.sup) throw Failure{kExitInput, "give exactly one of --system, --sup"};
  System q;
  if (!a.system.empty()) {
    q = system_from_file(a.system);
  } else {
    ms_system_t* raw = nullptr;
    check(ms_corner_system(a.dim, *a.sup, &raw));
    q.reset(raw);
  }
  ms_system_t* raw = nullptr;
  check(ms_construct_k(q.get(), a.s, a.n, &raw));
  System k(raw);
  char* text = nullptr;
  check(ms_system_to_json(q.get(), &text));
  const json qj = json::parse(take(text));
  check(ms_system_to_json(k.get(), &text));
  const json kj = json::parse(take(text));
  double top = 0, dim_k = 0;
  check(ms_similarity_dimension(q.get(), &top, nullptr));
  check(ms_similarity_dimension(k.get(), &dim_k, nullptr));
  const double maps = static_cast<double>(qj["maps"].size());
  json j = {{"schema", 1},
            {"s", a.s},
            {"n", a.n},
            {"k", maps > 1 ? std::lround(std::log(static_cast<double>(kj["maps"].size())) / std::log(maps)) : 0},
            {"q_inf", qj},
            {"q_inf_dimension", top},
            {"system", kj},
            {"similarity_dimension", dim_k}};
  if (a.depth > 0) {
    ms_tree_t* tk = nullptr;
    ms_tree_t* tq = nullptr;
    check(ms_attractor(k.get(), a.base, a.depth, &tk));
    Tree hold_k(tk);
    check(ms_attractor(q.get(), a.base, a.depth, &tq));
    Tree hold_q(tq);
    double dist = 0;
    check(ms_hausdorff_distance(tk, tq, a.depth, &dist));
    const double rd = std::sqrt(static_cast<double>(qj.value("dim", 1)));
    const double bound = rd / a.n + 2 * rd * std::pow(static_cast<double>(a.base), -a.depth);
    j["hausdorff"] = {{"depth", a.depth}, {"base", a.base}, {"distance", dist}, {"bound", bound}, {"within_bound", dist <= bound}};
  }
  emit(j, a.out);
  return kExitOk;
}

struct VerifyArgs {
  std::string out;
  std::uint64_t seed = 0;
  int trees = 200, random_trees = 40, workers = 1;
};

int cmd_verify_suite(const VerifyArgs& a) {
  log(Level::Info, "verify-suite seed " + std::to_string(a.seed));
  char* s = nullptr;
  check(ms_verify_suite(a.seed, a.trees, a.random_trees, a.workers, &s));
  const json j = json::parse(take(s));
  emit(j, a.out);
  return j.value("passed", false) ? kExitOk : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-depth microsets, dimension estimates and constructions on coded b-adic trees"};
  app.set_version_flag("--version", std::string(ms_version()));
  app.require_subcommand(1);

  BuildArgs build;
  auto* b = app.add_subcommand("build", "Build a tree from a canonical name, a homothety system or a dimension set");
  b->add_option("--canonical", build.canonical, "cantor_thirds, unit_cube or reciprocal");
  b->add_option("--system", build.system, "Homothety system JSON");
  b->add_option("--delta", build.delta, "Dimension set JSON");
  b->add_option("--depth", build.depth, "Tree depth")->check(CLI::Range(0, 62));
  b->add_option("--base", build.base, "Grid base (natural when omitted)");
  b->add_option("--dim", build.dim, "Ambient dimension");
  b->add_option("-o,--out", build.out, "Tree file (.json or binary)")->required();
  b->add_option("--report", build.report, "Construction report JSON");

  DimsArgs dims;
  auto* d = app.add_subcommand("dims", "Box, Assouad and lower window estimates");
  d->add_option("--tree", dims.tree, "Tree file")->required();
  d->add_option("--n0", dims.n0, "First box-counting level");
  d->add_option("--n1", dims.n1, "Last box-counting level (tree height by default)");
  d->add_option("-m,--window", dims.m, "Window depth (min(8, height) by default)");
  d->add_option("--csv", dims.csv, "Diagnostics table");
  d->add_option("--workers", dims.workers, "Worker threads")->check(CLI::PositiveNumber);
  d->add_option("-o,--out", dims.out, "Report path (stdout by default)");

  GalleryArgs gal;
  int M = 6, k = 2, kmax = 6, h_lo = 0, h_hi = -1, workers = 1;
  double eps = 0.05, bin_width = 0.02;
  std::uint64_t seed = 0, budget = 1000000;
  bool want_min = false, want_max = false, want_pk = false, want_spectrum = false, windows = false, root = false;
  auto* g = app.add_subcommand("gallery", "Microset searches, property P(k) and the window spectrum");
  g->add_option("--tree", gal.tree, "Tree file")->required();
  g->add_option("-M,--window", M, "Window depth");
  g->add_option("--eps", eps, "Search tolerance");
  g->add_flag("--min", want_min, "Sparse microset search");
  g->add_flag("--max", want_max, "Dense microset search");
  g->add_flag("--pk", want_pk, "Property P(k) and singleton detection");
  g->add_option("--k", k, "k for the P(k) report");
  g->add_option("--kmax", kmax, "Largest k tried by singleton detection");
  g->add_option("--h-lo", h_lo, "Lowest window height for P(k)");
  g->add_option("--h-hi", h_hi, "Highest window height for P(k)");
  g->add_flag("--spectrum", want_spectrum, "Histogram of window exponents");
  g->add_flag("--windows", windows, "List every window in the spectrum");
  g->add_option("--bin-width", bin_width, "Histogram bin width");
  g->add_option("--seed", seed, "Sampling seed");
  g->add_option("--budget", budget, "Window budget before sampling");
  g->add_flag("--include-root", root, "Admit the root window");
  g->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  g->add_option("--csv", gal.csv, "Histogram CSV");
  g->add_flag("--verify", gal.verify, "Check invariants; exit 1 on violation");
  g->add_option("-o,--out", gal.out, "Report path (stdout by default)");

  LargenessArgs large;
  auto* l = app.add_subcommand("largeness", "Local and global largeness, optional subtree extraction");
  l->add_option("--tree", large.tree, "Tree file")->required();
  l->add_option("--s", large.s, "Exponent s")->required();
  l->add_option("-m", large.m, "Window bound m")->required();
  l->add_option("--C", large.C, "Global constant C");
  l->add_option("--extract", large.extract, "Extract a large subtree of this height");
  l->add_option("-o,--out", large.out, "Report path (stdout by default)");

  ConstructArgs con;
  auto* c = app.add_subcommand("construct-k", "Build K(s, n) from a top-dimensional system");
  c->add_option("--system", con.system, "Top-dimensional system JSON");
  c->add_option("--sup", con.sup, "Corner system of this dimension instead of --system");
  c->add_option("--dim", con.dim, "Ambient dimension for --sup");
  c->add_option("--s", con.s, "Target dimension")->required();
  c->add_option("--n", con.n, "Closeness parameter")->required();
  c->add_option("--depth", con.depth, "Also compare attractor trees at this depth");
  c->add_option("--base", con.base, "Grid base for the comparison");
  c->add_option("-o,--out", con.out, "Report path (stdout by default)");

  VerifyArgs ver;
  auto* v = app.add_subcommand("verify-suite", "Seeded invariant suite over random trees");
  v->add_option("--seed", ver.seed, "Seed");
  v->add_option("--trees", ver.trees, "Locally large trees");
  v->add_option("--random-trees", ver.random_trees, "Random trees per remaining check");
  v->add_option("--workers", ver.workers, "Worker threads")->check(CLI::PositiveNumber);
  v->add_option("-o,--out", ver.out, "Report path (stdout by default)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*b) return cmd_build(build);
    if (*d) return cmd_dims(dims);
    if (*g) {
      gal.options = {{"M", M},         {"eps", eps},         {"min", want_min},    {"max", want_max},
                     {"pk", want_pk},  {"k", k},             {"kmax", kmax},       {"h_lo", h_lo},
                     {"h_hi", h_hi},   {"spectrum", want_spectrum}, {"with_windows", windows},
                     {"bin_width", bin_width}, {"seed", seed}, {"budget", budget}, {"include_root", root},
                     {"workers", workers}};
      return cmd_gallery(gal);
    }
    if (*l) return cmd_largeness(large);
    if (*c) return cmd_construct_k(con);
    if (*v) return cmd_verify_suite(ver);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
