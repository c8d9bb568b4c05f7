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
#include "microscope/report_json.hpp"

namespace microscope {

using nlohmann::json;

json to_json(const VertexAddress& a) { return {{"height", a.height}, {"index", a.packed}}; }

namespace {

json counts_json(const std::vector<ScaleCount>& counts) {
  json out = json::array();
  for (const auto& c : counts) out.push_back({c.n, c.count});
  return out;
}

}  // namespace

json to_json(const DimensionEstimate& e) {
  json j = {{"kind", estimate_kind_name(e.kind)}, {"value", e.value}, {"n0", e.n0}, {"n1", e.n1},
            {"counts", counts_json(e.counts)}, {"low_confidence", e.low_confidence}};
  if (e.window_depth) j["window_depth"] = e.window_depth;
  if (e.slope) j["slope"] = *e.slope;
  if (e.address) j["address"] = to_json(*e.address);
  if (e.windows_scanned) j["windows_scanned"] = e.windows_scanned;
  return j;
}

json to_json(const LargenessReport& r) {
  json w = json::array();
  for (const auto& x : r.witnesses) w.push_back({{"vertex", to_json(x.vertex)}, {"n", x.n}, {"count", x.count}});
  json j = {{"verdict", r.verdict}, {"witnesses", w}};
  j["failing"] = r.failing ? to_json(*r.failing) : json(nullptr);
  return j;
}

json to_json(const ExtractedSubtree& ex, int base, double s) {
  json grafts = json::array();
  for (const auto& g : ex.grafts)
    grafts.push_back({{"leaf", to_json(g.leaf)}, {"n", g.n}, {"leaves_added", g.leaves_added}});
  return {{"N", ex.N},
          {"weight", ex.weight},
          {"leaves", ex.tree.leaf_count()},
          {"level_counts", [&] {
             json c = json::array();
             for (int n = 0; n <= ex.tree.height(); ++n) c.push_back(ex.tree.level_count(n));
             return c;
           }()},
          {"grafts", grafts},
          {"collapse_weights", collapse_weights(ex, base, s)}};
}

json to_json(const TreeSequenceLimit& l) {
  json stable = json::array();
  for (const auto& x : l.stable_from) stable.push_back(x ? json(*x) : json(nullptr));
  return {{"stable_from", stable}, {"stabilized_depth", l.stabilized_depth}, {"not_stabilized", l.not_stabilized}};
}

json to_json(const MicrosetCandidate& c) {
  json steps = json::array();
  for (std::size_t i = 0; i < c.windows.size(); ++i)
    steps.push_back({{"address", to_json(c.windows[i].address)},
                     {"depth", c.windows[i].depth},
                     {"epsilon", c.windows[i].epsilon},
                     {"scaling", c.scaling[i]}});
  json est = json::array();
  for (const auto& e : c.estimates) est.push_back(to_json(e));
  json levels = json::array();
  for (int n = 0; n <= c.limit.height(); ++n) levels.push_back(c.limit.level_count(n));
  return {{"exponent", c.exponent},   {"target", c.target},
          {"epsilon", c.epsilon},     {"interior", c.interior},
          {"windows", steps},         {"counts", counts_json(c.counts)},
          {"limit_level_counts", levels}, {"stabilization", to_json(c.stabilization)},
          {"estimates", est},         {"mode", c.sampled ? "sampled" : "exhaustive"}};
}

json to_json(const PkReport& r, std::size_t max_packings) {
  json packs = json::array();
  for (std::size_t i = 0; i < r.packings.size() && i < max_packings; ++i) {
    const auto& p = r.packings[i];
    packs.push_back({{"window", to_json(p.window)}, {"m", p.m}, {"count", std::uint64_t{1} << p.m},
                     {"R", p.R}, {"r", p.r}, {"disjoint", p.disjoint}, {"bound_holds", p.bound_holds}});
  }
  json j = {{"k", r.k},
            {"step_depth", r.step_depth},
            {"heights", {r.h_lo, r.h_hi}},
            {"verdict", r.verdict},
            {"windows_tested", r.windows_tested},
            {"windows_passed", r.windows_passed},
            {"lower_bound", r.lower_bound},
            {"packings_reported", r.packings.size()},
            {"packings_sound", r.packings_sound()},
            {"bounds_hold", r.bounds_hold()},
            {"packings", packs}};
  j["failing"] = r.failing ? to_json(*r.failing) : json(nullptr);
  return j;
}

json to_json(const SingletonReport& r) {
  json w = json::array();
  for (const auto& x : r.witnesses) w.push_back({{"k", x.depth}, {"window", to_json(x.address)}});
  json reps = json::array();
  for (const auto& x : r.reports) reps.push_back(to_json(x, 0));
  json j = {{"verdict", r.singleton_candidate ? "singleton-candidate" : (r.passing_k ? "lower-bound" : "undecided")},
            {"witnesses", w},
            {"reports", reps}};
  if (r.passing_k) {
    j["k"] = *r.passing_k;
    j["lower_bound"] = r.lower_bound;
  }
  return j;
}

json to_json(const Spectrum& s, bool with_windows) {
  json clusters = json::array();
  for (const auto& c : s.clusters)
    clusters.push_back({{"lo", c.lo}, {"hi", c.hi}, {"center", c.center}, {"count", c.count}, {"fraction", c.fraction}});
  json j = {{"window_depth", s.M},
            {"bin_width", s.bin_width},
            {"windows", s.windows.windows.size()},
            {"total_windows", s.windows.total},
            {"mode", s.windows.sampled ? "sampled" : "exhaustive"},
            {"histogram", s.histogram},
            {"clusters", clusters}};
  if (with_windows) {
    json ws = json::array();
    for (const auto& w : s.windows.windows)
      ws.push_back({{"address", to_json(w.address)}, {"count", w.count}, {"exponent", w.exponent}});
    j["window_list"] = ws;
  }
  return j;
}

json to_json(const DeltaConstruction& c) {
  json pieces = json::array();
  for (const auto& p : c.pieces)
    pieces.push_back({{"index", p.index}, {"piece", p.piece}, {"s", p.s}, {"n", p.n}, {"alpha", p.alpha},
                      {"copies", p.copies}});
  json j = {{"q_inf", system_to_json(c.q_inf)}, {"glued", pieces}, {"scaffold_values", c.scaffold_values}};
  if (c.scaffold) j["scaffold"] = system_to_json(*c.scaffold);
  return j;
}

json tree_summary(const CodedTree& t) {
  json levels = json::array();
  for (int n = 0; n <= t.height(); ++n) levels.push_back(t.level_count(n));
  return {{"base", t.params().base}, {"dim", t.params().dim}, {"height", t.height()},
          {"leaves", t.leaf_count()}, {"level_counts", levels}};
}

}  // namespace microscope
