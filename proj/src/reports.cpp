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
#include "microscope/reports.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "microscope/dimension.hpp"
#include "microscope/error.hpp"
#include "microscope/largeness.hpp"
#include "microscope/report_json.hpp"

namespace microscope {
namespace {

using nlohmann::json;

int default_window(const CodedTree& t, int m) { return m > 0 ? m : std::max(1, std::min(8, t.height())); }

json invariant(const std::string& name, bool ok, const std::string& detail = {}) {
  json j = {{"name", name}, {"ok", ok}};
  if (!detail.empty()) j["detail"] = detail;
  return j;
}

std::string num(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

}  // namespace

json dims_report(const CodedTree& t, const DimsOptions& opt) {
  if (t.height() < 1) throw Error(ErrorCode::DepthOutOfRange, "tree has no levels below the root");
  const int n1 = opt.n1 > 0 ? opt.n1 : t.height();
  const int m = default_window(t, opt.m);
  const ScanOptions scan{opt.workers, 0};
  const auto box = box_estimate(t, opt.n0, n1);
  return {{"schema", kSchemaVersion},
          {"tree", tree_summary(t)},
          {"box", to_json(box)},
          {"assouad", to_json(assouad_window_estimate(t, m, scan))},
          {"lower", to_json(lower_window_estimate(t, m, scan))}};
}

std::string dims_csv(const CodedTree& t, const DimsOptions& opt) {
  const int n1 = opt.n1 > 0 ? opt.n1 : t.height();
  const int m = default_window(t, opt.m);
  const ScanOptions scan{opt.workers, 0};
  // prefix every data row with its estimate name
  auto tag = [&](const std::string& name, const DimensionEstimate& e) {
    std::istringstream in(estimate_csv(e, t.params().base));
    std::string line, res;
    std::getline(in, line);
    while (std::getline(in, line)) res += name + "," + line + "\n";
    return res;
  };
  std::string csv = "estimate,n,count,log_ratio\n";
  csv += tag("box", box_estimate(t, opt.n0, n1));
  csv += tag("assouad", assouad_window_estimate(t, m, scan));
  csv += tag("lower", lower_window_estimate(t, m, scan));
  return csv;
}

json largeness_report(const CodedTree& t, const LargenessOptions& opt) {
  LargenessParams{opt.s, opt.m, opt.C}.validate();
  json j = {{"schema", kSchemaVersion},
            {"s", opt.s},
            {"m", opt.m},
            {"C", opt.C},
            {"locally_large", to_json(is_locally_large(t, opt.s, opt.m))},
            {"locally_small", to_json(is_locally_small(t, opt.s, opt.m))}};
  const auto gl = global_failure(t, opt.s, opt.C, true);
  const auto gs = global_failure(t, opt.s, opt.C, false);
  j["globally_large"] = {{"verdict", !gl}, {"failing_level", gl ? json(*gl) : json(nullptr)}};
  j["globally_small"] = {{"verdict", !gs}, {"failing_level", gs ? json(*gs) : json(nullptr)}};
  if (t.height() >= opt.m) j["local_large_exponent"] = local_large_exponent(t, opt.m);
  if (opt.extract_height) j["extraction"] = to_json(extract_large_subtree(t, opt.s, opt.m, *opt.extract_height), t.params().base, opt.s);
  return j;
}

GalleryOptions gallery_options_from_json(const json& j) {
  GalleryOptions o;
  try {
    o.M = j.value("M", o.M);
    o.epsilon = j.value("eps", o.epsilon);
    o.min = j.value("min", o.min);
    o.max = j.value("max", o.max);
    o.pk = j.value("pk", o.pk);
    o.k = j.value("k", o.k);
    o.k_max = j.value("kmax", o.k_max);
    o.h_lo = j.value("h_lo", o.h_lo);
    o.h_hi = j.value("h_hi", o.h_hi);
    o.spectrum = j.value("spectrum", o.spectrum);
    o.with_windows = j.value("with_windows", o.with_windows);
    o.bin_width = j.value("bin_width", o.bin_width);
    o.verify = j.value("verify", o.verify);
    o.policy.include_root = j.value("include_root", o.policy.include_root);
    o.policy.budget = j.value("budget", o.policy.budget);
    o.policy.seed = j.value("seed", o.policy.seed);
    o.policy.workers = j.value("workers", o.policy.workers);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SpecParse, e.what());
  }
  return o;
}

json gallery_report(const CodedTree& t, const GalleryOptions& opt) {
  json j = {{"schema", kSchemaVersion},
            {"tree", tree_summary(t)},
            {"window_depth", opt.M},
            {"seed", opt.policy.seed},
            {"include_root", opt.policy.include_root}};
  const int base = t.params().base;
  std::optional<MicrosetCandidate> lo, hi;
  if (opt.min || opt.verify) {
    try {
      lo = min_microset_search(t, opt.epsilon, opt.M, opt.policy);
      if (opt.min) j["min"] = to_json(*lo);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoQualifyingWindow) throw;
      if (opt.min) j["min"] = {{"error", e.what()}};
    }
  }
  if (opt.max || opt.verify) {
    hi = max_microset_search(t, opt.M, opt.policy);
    if (opt.max) j["max"] = to_json(*hi);
  }
  if (opt.pk) {
    j["pk"] = to_json(check_property_Pk(t, opt.k, opt.h_lo, opt.h_hi, opt.policy));
    j["singleton"] = to_json(singleton_microset_detect(t, opt.k_max, opt.h_lo, opt.h_hi, opt.policy));
  }
  std::optional<Spectrum> sp;
  if (opt.spectrum || opt.verify) {
    sp = dimension_spectrum(t, opt.M, opt.policy, opt.bin_width);
    if (opt.spectrum) j["spectrum"] = to_json(*sp, opt.with_windows);
  }
  if (!opt.verify) return j;

  json inv = json::array();
  const ScanOptions all{opt.policy.workers, 0};
  const ScanOptions family{opt.policy.workers, opt.policy.min_height()};
  const double lower = lower_window_estimate(t, opt.M, all).value;
  const double upper = assouad_window_estimate(t, opt.M, all).value;
  const double root = std::min<double>(count_exponent(t.level_count(opt.M), base, opt.M), t.params().dim);
  inv.push_back(invariant("window_ordering", lower <= root && root <= upper,
                          num(lower) + " <= " + num(root) + " <= " + num(upper)));
  if (!sp->windows.sampled && !sp->windows.windows.empty()) {
    double wmin = sp->windows.windows.front().exponent, wmax = wmin;
    for (const auto& w : sp->windows.windows) {
      wmin = std::min(wmin, w.exponent);
      wmax = std::max(wmax, w.exponent);
    }
    const double flo = lower_window_estimate(t, opt.M, family).value;
    const double fhi = assouad_window_estimate(t, opt.M, family).value;
    inv.push_back(invariant("bracket_matches_estimators", wmin == flo && wmax == fhi,
                            "windows [" + num(wmin) + ", " + num(wmax) + "], estimators [" + num(flo) + ", " + num(fhi) + "]"));
  }
  if (lo) inv.push_back(invariant("min_certificate_recount", certificate_holds(*lo, base, true)));
  if (hi) inv.push_back(invariant("max_matches_densest_window", hi->exponent == hi->target));
  const double slack = 2.0 * std::log(4.0) / std::log(static_cast<double>(base)) / opt.M;
  for (const auto* c : {lo ? &*lo : nullptr, hi ? &*hi : nullptr}) {
    if (!c || !c->interior) continue;
    inv.push_back(invariant("interior_candidate_above_lower", lower <= c->exponent + slack,
                            num(lower) + " <= " + num(c->exponent) + " + " + num(slack)));
  }
  bool prev = false, mono = true, sound = true;
  const int top = opt.h_hi >= 0 ? opt.h_hi : t.height() - std::max(opt.k_max, 2);
  for (int k = 2; k <= opt.k_max && top >= opt.h_lo && k + top <= t.height(); ++k) {
    const PkReport r = check_property_Pk(t, k, opt.h_lo, top, opt.policy);
    if (prev && !r.verdict) mono = false;
    sound = sound && r.packings_sound();
    prev = r.verdict;
  }
  inv.push_back(invariant("pk_monotone_in_k", mono));
  inv.push_back(invariant("packings_disjoint", sound));
  bool ok = true;
  for (const auto& x : inv) ok = ok && x["ok"].get<bool>();
  j["invariants"] = inv;
  j["invariants_ok"] = ok;
  return j;
}

std::string spectrum_csv(const CodedTree& t, const GalleryOptions& opt) {
  return dimension_spectrum(t, opt.M, opt.policy, opt.bin_width).histogram_csv();
}

}  // namespace microscope
