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
#include "microscope/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "microscope/error.hpp"
#include "parallel.hpp"

namespace microscope {
namespace {

std::uint64_t ipow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

std::vector<ScaleCount> window_profile(const CodedTree& t, const VertexAddress& a, int m) {
  std::vector<ScaleCount> out;
  for (int n = 1; n <= m; ++n) out.push_back({n, t.descendant_count(a, n)});
  return out;
}

DimensionEstimate window_estimate(const CodedTree& t, int m, const ScanOptions& opt, bool densest) {
  if (m < 1 || m > t.height()) throw Error(ErrorCode::HeightTooSmall, "window depth must lie in [1, h(T)]");
  const auto ext = scan_window_extremes(t, m, opt);
  if (ext.windows == 0) throw Error(ErrorCode::HeightTooSmall, "no window of the requested depth");
  DimensionEstimate e;
  e.kind = densest ? EstimateKind::AssouadWindow : EstimateKind::LowerWindow;
  e.window_depth = m;
  e.n0 = 1;
  e.n1 = m;
  e.address = densest ? ext.max_at : ext.min_at;
  e.value = std::min<double>(count_exponent(densest ? ext.max_count : ext.min_count, t.params().base, m),
                             t.params().dim);
  e.counts = window_profile(t, *e.address, m);
  e.windows_scanned = ext.windows;
  e.low_confidence = m < 4;
  return e;
}

}  // namespace

std::string estimate_kind_name(EstimateKind k) {
  switch (k) {
    case EstimateKind::BoxUpperProxy: return "box_upper_proxy";
    case EstimateKind::BoxSlope: return "box_slope";
    case EstimateKind::AssouadWindow: return "assouad_window";
    case EstimateKind::LowerWindow: return "lower_window";
    case EstimateKind::Similarity: return "similarity";
  }
  return "";
}

std::vector<std::uint64_t> window_counts(const CodedTree& t, int h, int m) {
  if (h < 0 || m < 0 || h + m > t.height()) throw Error(ErrorCode::DepthOutOfRange, "window beyond tree height");
  const auto top = t.level(h);
  const auto bottom = t.level(h + m);
  const std::uint64_t span = ipow(t.params().arity(), m);
  std::vector<std::uint64_t> counts(top.size(), 0);
  std::size_t i = 0;
  for (std::uint64_t v : bottom) {
    const std::uint64_t anc = v / span;
    while (top[i] < anc) ++i;
    ++counts[i];
  }
  return counts;
}

WindowExtremes scan_window_extremes(const CodedTree& t, int m, const ScanOptions& opt) {
  const int lo = std::max(opt.min_height, 0);
  const int hi = t.height() - m;
  WindowExtremes out;
  if (hi < lo) return out;
  std::vector<WindowExtremes> per(static_cast<std::size_t>(hi - lo + 1));
  detail::parallel_for(per.size(), opt.workers, [&](std::size_t k) {
    const int h = lo + static_cast<int>(k);
    const auto counts = window_counts(t, h, m);
    const auto level = t.level(h);
    auto& r = per[k];
    r.windows = counts.size();
    std::size_t imin = 0, imax = 0;
    for (std::size_t i = 1; i < counts.size(); ++i) {
      if (counts[i] < counts[imin]) imin = i;
      if (counts[i] > counts[imax]) imax = i;
    }
    if (counts.empty()) return;
    r.min_at = {h, level[imin]};
    r.max_at = {h, level[imax]};
    r.min_count = counts[imin];
    r.max_count = counts[imax];
  });
  bool first = true;
  for (const auto& r : per) {
    if (r.windows == 0) continue;
    if (first || r.min_count < out.min_count) {
      out.min_count = r.min_count;
      out.min_at = r.min_at;
    }
    if (first || r.max_count > out.max_count) {
      out.max_count = r.max_count;
      out.max_at = r.max_at;
    }
    first = false;
    out.windows += r.windows;
  }
  return out;
}

double count_exponent(std::uint64_t count, int base, int n) {
  if (count <= 1 || n <= 0) return 0.0;
  return std::log(static_cast<double>(count)) / (n * std::log(static_cast<double>(base)));
}

double window_exponent(const CodedTree& t, const VertexAddress& a, int m) {
  return count_exponent(t.descendant_count(a, m), t.params().base, m);
}

DimensionEstimate box_estimate(const CodedTree& t, int n0, int n1) {
  if (n0 < 1 || n0 > n1 || n1 > t.height()) throw Error(ErrorCode::DepthOutOfRange, "need 1 <= n0 <= n1 <= h(T)");
  DimensionEstimate e;
  e.kind = EstimateKind::BoxUpperProxy;
  e.n0 = n0;
  e.n1 = n1;
  const double lb = std::log(static_cast<double>(t.params().base));
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int n = n0; n <= n1; ++n) {
    const std::uint64_t c = t.level_count(n);
    e.counts.push_back({n, c});
    const double x = n * lb, y = std::log(static_cast<double>(c));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  e.value = std::min<double>(count_exponent(t.level_count(n1), t.params().base, n1), t.params().dim);
  const double k = n1 - n0 + 1;
  const double denom = k * sxx - sx * sx;
  e.slope = denom > 0 ? (k * sxy - sx * sy) / denom : e.value;
  e.low_confidence = n1 - n0 + 1 < 4;
  return e;
}

DimensionEstimate assouad_window_estimate(const CodedTree& t, int m, const ScanOptions& opt) {
  return window_estimate(t, m, opt, true);
}

DimensionEstimate lower_window_estimate(const CodedTree& t, int m, const ScanOptions& opt) {
  return window_estimate(t, m, opt, false);
}

SimilarityDimension similarity_dimension(const HomothetySystem& ifs) {
  ifs.validate();
  if (!ifs.equicontractive()) throw Error(ErrorCode::NotEquicontractive, "maps have different ratios");
  SimilarityDimension out;
  out.upper_bound_only = ifs.separation == Separation::None;
  const double c = ifs.maps.front().ratio.value;
  const double a = static_cast<double>(ifs.maps.size());
  if (c == 0.0 || a == 1.0) return out;
  out.value = std::clamp(std::log(a) / -std::log(c), 0.0, static_cast<double>(ifs.dim));
  return out;
}

std::string estimate_csv(const DimensionEstimate& e, int base) {
  std::ostringstream os;
  os.precision(17);
  os << "n,count,log_ratio\n";
  for (const auto& sc : e.counts) os << sc.n << ',' << sc.count << ',' << count_exponent(sc.count, base, sc.n) << '\n';
  return os.str();
}

}  // namespace microscope
