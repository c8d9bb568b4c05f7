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
#pragma once

// Finite-scale box, Assouad and lower dimension estimates read off covering
// counts of a coded tree. Balls are replaced by b-adic windows T(a, m).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "microscope/homothety.hpp"
#include "microscope/tree.hpp"

namespace microscope {

enum class EstimateKind { BoxUpperProxy, BoxSlope, AssouadWindow, LowerWindow, Similarity };

std::string estimate_kind_name(EstimateKind k);

struct ScaleCount {
  int n = 0;
  std::uint64_t count = 0;
};

struct DimensionEstimate {
  EstimateKind kind = EstimateKind::BoxUpperProxy;
  double value = 0.0;
  int n0 = 0;
  int n1 = 0;
  int window_depth = 0;
  /// Per-scale counts; for window estimates those of the extremal window.
  std::vector<ScaleCount> counts;
  std::optional<double> slope;
  std::optional<VertexAddress> address;
  std::uint64_t windows_scanned = 0;
  bool low_confidence = false;
};

struct ScanOptions {
  int workers = 1;
  /// First window height considered; 0 admits the root.
  int min_height = 0;
};

/// Descendant counts at relative depth m of the vertices of level h, in
/// level order.
std::vector<std::uint64_t> window_counts(const CodedTree& t, int h, int m);

struct WindowExtremes {
  VertexAddress min_at;
  VertexAddress max_at;
  std::uint64_t min_count = 0;
  std::uint64_t max_count = 0;
  std::uint64_t windows = 0;
};

/// Sparsest and densest depth-m windows over heights [min_height, h(T)-m];
/// ties go to the first window in (height, address) order.
WindowExtremes scan_window_extremes(const CodedTree& t, int m, const ScanOptions& opt = {});

/// log_b(count) / n, clamped below at 0.
double count_exponent(std::uint64_t count, int base, int n);
double window_exponent(const CodedTree& t, const VertexAddress& a, int m);

DimensionEstimate box_estimate(const CodedTree& t, int n0, int n1);
DimensionEstimate assouad_window_estimate(const CodedTree& t, int m, const ScanOptions& opt = {});
DimensionEstimate lower_window_estimate(const CodedTree& t, int m, const ScanOptions& opt = {});

struct SimilarityDimension {
  double value = 0.0;
  /// No separation declared: the value only bounds the dimension above.
  bool upper_bound_only = false;
};

SimilarityDimension similarity_dimension(const HomothetySystem& ifs);

/// Table "n,count,log_ratio" of the diagnostics.
std::string estimate_csv(const DimensionEstimate& e, int base);

}  // namespace microscope
