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

// Sets built from homothety systems: the K(s, n) family approximating a
// top-dimensional system, sets whose microsets realize a prescribed set of
// dimensions, a few canonical examples, and rescaled windows (minisets).

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "microscope/homothety.hpp"
#include "microscope/rational.hpp"
#include "microscope/tree.hpp"

namespace microscope {

struct KFamilySpec {
  HomothetySystem q_inf;
  double s = 0.0;
  int n = 1;
};

/// Smallest k >= 1 with c^k <= 1/n.
int closeness_generations(double c, int n);
/// Dimension of q_inf (its top value).
double top_dimension(const HomothetySystem& q_inf);

/// a^k maps of ratio a^(-k/s) anchored at the images f_w(0), |w| = k.
HomothetySystem build_K(const KFamilySpec& spec);

/// Closed interval [lo, hi]; a point when lo == hi.
struct DeltaPiece {
  double lo = 0.0;
  double hi = 0.0;
};

struct DeltaSpec {
  std::vector<DeltaPiece> pieces;
  double inf = 0.0;
  double sup = 0.0;
  /// Strictly increasing glue generations; empty means 4^i while visible.
  std::vector<int> alpha;
  /// Dimension of the scaffold system; defaults to inf.
  std::optional<double> scaffold_dim;

  void validate(int dim) const;
  bool singleton() const;
};

DeltaSpec delta_from_json(const nlohmann::json& j);
nlohmann::json delta_to_json(const DeltaSpec& d);

/// r-th sample of a piece: lo, hi, then dyadic refinement of the interval.
double delta_sample(const DeltaPiece& p, int r);

struct GluedPiece {
  int index = 0;  // i in Q_i, from 1
  int piece = 0;  // index into DeltaSpec::pieces
  double s = 0.0;
  int n = 0;
  int alpha = 0;  // 0 when the copy sits on the accumulation sequence
  std::uint64_t copies = 0;
};

struct DeltaConstruction {
  CodedTree tree;
  HomothetySystem q_inf;
  std::optional<HomothetySystem> scaffold;
  std::vector<GluedPiece> pieces;
  /// Dimensions contributed by the scaffold rather than by glued copies.
  std::vector<double> scaffold_values;
};

DeltaConstruction build_delta_set(const DeltaSpec& spec, const TreeParams& params, int depth);

/// cantor_thirds (base 3), unit_cube, reciprocal ({0} and 1/n, n <= b^depth).
CodedTree canonical_set(std::string_view name, int depth, std::optional<TreeParams> params = std::nullopt);
TreeParams canonical_params(std::string_view name, int dim = 1);

/// (lambda U + t) intersected with [0,1]^d, where U is the union of the
/// deepest cubes of t, rasterized at depth.
CodedTree miniset_tree(const CodedTree& t, const Rational& lambda, const std::vector<Rational>& shift, int depth);

}  // namespace microscope
