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

// Whole-command reports: the documents the command line prints.

#include <optional>
#include <string>

#include <json.hpp>

#include "microscope/gallery.hpp"
#include "microscope/tree.hpp"

namespace microscope {

struct DimsOptions {
  int n0 = 1;
  int n1 = -1;  // h(T) when negative
  int m = -1;   // min(8, h(T)) when negative
  int workers = 1;
};

nlohmann::json dims_report(const CodedTree& t, const DimsOptions& opt);
/// CSV of the box estimate counts followed by the window diagnostics.
std::string dims_csv(const CodedTree& t, const DimsOptions& opt);

struct LargenessOptions {
  double s = 0.5;
  int m = 1;
  double C = 1.0;
  std::optional<int> extract_height;
};

nlohmann::json largeness_report(const CodedTree& t, const LargenessOptions& opt);

struct GalleryOptions {
  int M = 6;
  double epsilon = 0.05;
  bool min = false;
  bool max = false;
  bool pk = false;
  int k = 2;
  int k_max = 6;
  int h_lo = 0;
  int h_hi = -1;
  bool spectrum = false;
  bool with_windows = false;
  double bin_width = 0.02;
  bool verify = false;
  SamplePolicy policy;
};

GalleryOptions gallery_options_from_json(const nlohmann::json& j);
/// Runs the requested searches; with verify, adds an "invariants" block and
/// "invariants_ok".
nlohmann::json gallery_report(const CodedTree& t, const GalleryOptions& opt);
std::string spectrum_csv(const CodedTree& t, const GalleryOptions& opt);

}  // namespace microscope
