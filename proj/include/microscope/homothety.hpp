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

// Equicontractive systems of homotheties x -> c x + t on [0,1]^d and their
// attractors rendered as coded trees.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "microscope/rational.hpp"
#include "microscope/tree.hpp"

namespace microscope {

/// A real coefficient, carried exactly when it is a (small) rational.
struct Scalar {
  double value = 0.0;
  std::optional<Rational> exact;

  static Scalar of(const Rational& r) { return {r.to_double(), r}; }
  /// Snaps to p/q with q <= 1000 when that reproduces v within 1e-12.
  static Scalar of(double v);

  friend bool operator==(const Scalar& a, const Scalar& b) { return a.value == b.value && a.exact == b.exact; }
};

enum class Separation { None, OpenSet, Strong };

struct Homothety {
  Scalar ratio;
  std::vector<Scalar> translation;

  friend bool operator==(const Homothety&, const Homothety&) = default;
};

struct HomothetySystem {
  int dim = 1;
  std::vector<Homothety> maps;
  Separation separation = Separation::None;

  bool equicontractive() const;
  bool exact() const;
  /// Every map sends [0,1]^d into itself and the declared separation holds.
  void validate() const;
  /// Some map fixes 0 and some map fixes 1 along every axis.
  bool spans_cube() const;

  friend bool operator==(const HomothetySystem&, const HomothetySystem&) = default;
};

/// Number, "p/q", decimal string or "log(a)/log(b)".
double parse_real(const nlohmann::json& j);
Scalar parse_scalar(const nlohmann::json& j);

nlohmann::json system_to_json(const HomothetySystem& s);
HomothetySystem system_from_json(const nlohmann::json& j);

std::string separation_name(Separation s);

/// 2^d maps fixing the corners of [0,1]^d, with the common ratio giving
/// similarity dimension target (ratio 0 when target is 0).
HomothetySystem corner_system(int dim, double target);

/// Cylinder boxes of the attractor: every word is expanded until its scale
/// drops to b^-depth and then emits the image of [0,1]^d. Ratio-0 maps emit
/// points. Exact arithmetic is used when the system is rational.
CodedTree attractor_tree(const HomothetySystem& ifs, const TreeParams& params, int depth);

}  // namespace microscope
