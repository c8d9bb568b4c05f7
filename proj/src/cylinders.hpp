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

// Cylinder enumeration shared by attractor and construction builders.

#include <cmath>
#include <cstddef>
#include <vector>

#include "microscope/error.hpp"
#include "microscope/homothety.hpp"

namespace microscope::detail {

constexpr std::size_t kBoxBudget = std::size_t{1} << 26;

template <class Num>
struct Affine {
  std::vector<Num> offset;
  Num scale;

  BasicBox<Num> image_of_cube() const {
    BasicBox<Num> b{offset, offset};
    for (auto& x : b.hi) x = x + scale;
    return b;
  }

  BasicBox<Num> image_of(const BasicBox<Num>& box) const {
    BasicBox<Num> b{offset, offset};
    for (std::size_t j = 0; j < offset.size(); ++j) {
      b.lo[j] = offset[j] + scale * box.lo[j];
      b.hi[j] = offset[j] + scale * box.hi[j];
    }
    return b;
  }
};

template <class Num>
Num num_of(const Scalar& s);

template <>
inline double num_of<double>(const Scalar& s) { return s.value; }

template <>
inline Rational num_of<Rational>(const Scalar& s) {
  if (!s.exact) throw Error(ErrorCode::InvalidArgument, "coefficient is not rational");
  return *s.exact;
}

inline bool at_most(double a, double b) { return a <= b * (1.0 + 1e-9); }
inline bool at_most(const Rational& a, const Rational& b) { return a <= b; }
inline bool is_zero(double a) { return a == 0.0; }
inline bool is_zero(const Rational& a) { return a == Rational(0); }

/// Bounding box of the attractor: the fixed points t / (1 - c) of the maps
/// span it along every axis.
template <class Num>
BasicBox<Num> attractor_hull(const HomothetySystem& sys) {
  BasicBox<Num> hull{std::vector<Num>(sys.dim, Num(1)), std::vector<Num>(sys.dim, Num(0))};
  for (const auto& m : sys.maps) {
    const Num c = num_of<Num>(m.ratio);
    for (int j = 0; j < sys.dim; ++j) {
      const Num fix = num_of<Num>(m.translation[j]) / (Num(1) - c);
      if (fix < hull.lo[j]) hull.lo[j] = fix;
      if (hull.hi[j] < fix) hull.hi[j] = fix;
    }
  }
  return hull;
}

/// Rough a^g size check before any expansion.
inline void check_generation_budget(const HomothetySystem& sys, double outer_scale, double thresh) {
  double cmax = 0.0;
  for (const auto& m : sys.maps) cmax = std::max(cmax, m.ratio.value);
  if (cmax <= 0.0 || outer_scale <= thresh) return;
  const double g = std::ceil(std::log(thresh / outer_scale) / std::log(cmax) - 1e-9);
  if (g * std::log(static_cast<double>(sys.maps.size())) > std::log(static_cast<double>(kBoxBudget)))
    throw Error(ErrorCode::DepthTooDeepForRatio,
                "about " + std::to_string(g) + " generations of " + std::to_string(sys.maps.size()) +
                    " maps exceed the cylinder budget");
}

/// Appends outer o w(hull) for every minimal word w whose composed scale
/// is at most thresh; ratio-0 maps contribute their fixed image point.
template <class Num>
void emit_cylinders(const HomothetySystem& sys, const Affine<Num>& outer, const Num& thresh,
                    std::vector<BasicBox<Num>>& out) {
  const BasicBox<Num> hull = attractor_hull<Num>(sys);
  std::vector<Affine<Num>> stack{outer};
  std::size_t visited = 0;
  while (!stack.empty()) {
    Affine<Num> cur = std::move(stack.back());
    stack.pop_back();
    if (++visited > kBoxBudget || out.size() > kBoxBudget)
      throw Error(ErrorCode::DepthTooDeepForRatio, "cylinder budget exhausted");
    if (at_most(cur.scale, thresh)) {
      out.push_back(cur.image_of(hull));
      continue;
    }
    for (auto it = sys.maps.rbegin(); it != sys.maps.rend(); ++it) {
      Affine<Num> next{cur.offset, cur.scale * num_of<Num>(it->ratio)};
      for (std::size_t j = 0; j < next.offset.size(); ++j)
        next.offset[j] = cur.offset[j] + cur.scale * num_of<Num>(it->translation[j]);
      if (is_zero(next.scale)) {
        out.push_back(BasicBox<Num>{next.offset, next.offset});
      } else {
        stack.push_back(std::move(next));
      }
    }
  }
}

}  // namespace microscope::detail
