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
#include "microscope/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "cylinders.hpp"
#include "microscope/error.hpp"

namespace microscope {
namespace {

using nlohmann::json;
using detail::Affine;

constexpr double kTol = 1e-12;

bool in_union(const std::vector<DeltaPiece>& pieces, double x) {
  for (const auto& p : pieces)
    if (x >= p.lo - kTol && x <= p.hi + kTol) return true;
  return false;
}

template <class Num>
Affine<Num> compose(const Affine<Num>& outer, const Homothety& h) {
  Affine<Num> r{outer.offset, outer.scale * detail::num_of<Num>(h.ratio)};
  for (std::size_t j = 0; j < r.offset.size(); ++j)
    r.offset[j] = outer.offset[j] + outer.scale * detail::num_of<Num>(h.translation[j]);
  return r;
}

// Glues copies of Q_i into the scaffold: inside the all-first-map cylinder of
// generation alpha_{i-1}, every other word of generation alpha_i carries Q_i.
template <class Num>
class ScaffoldBuilder {
 public:
  ScaffoldBuilder(const HomothetySystem& scaffold, const std::vector<int>& alpha,
                  const std::vector<HomothetySystem>& q, Num thresh)
      : scaffold_(scaffold), alpha_(alpha), q_(q), thresh_(thresh) {}

  std::vector<BasicBox<Num>> run() {
    Affine<Num> id{std::vector<Num>(scaffold_.dim, Num(0)), Num(1)};
    expand(id, 0);
    return std::move(out_);
  }

 private:
  void expand(const Affine<Num>& region, std::size_t level) {
    if (level >= alpha_.size()) {
      detail::emit_cylinders(scaffold_, region, thresh_, out_);
      return;
    }
    const int prev = level == 0 ? 0 : alpha_[level - 1];
    words(region, alpha_[level] - prev, true, level);
  }

  void words(const Affine<Num>& cur, int remaining, bool all_first, std::size_t level) {
    if (detail::at_most(cur.scale, thresh_)) {
      out_.push_back(cur.image_of_cube());
      return;
    }
    if (remaining == 0) {
      if (all_first) {
        expand(cur, level + 1);
      } else {
        detail::emit_cylinders(q_[level], cur, thresh_, out_);
      }
      return;
    }
    for (std::size_t u = 0; u < scaffold_.maps.size(); ++u)
      words(compose(cur, scaffold_.maps[u]), remaining - 1, all_first && u == 0, level);
    if (out_.size() > detail::kBoxBudget) throw Error(ErrorCode::DepthTooDeepForRatio, "construction budget exhausted");
  }

  const HomothetySystem& scaffold_;
  const std::vector<int>& alpha_;
  const std::vector<HomothetySystem>& q_;
  Num thresh_;
  std::vector<BasicBox<Num>> out_;
};

// Copies 2^(-i^i) Q_i + (2^-i, 0, ..., 0) accumulating at the origin.
template <class Num>
std::vector<BasicBox<Num>> accumulation_boxes(const std::vector<HomothetySystem>& q, int dim, Num thresh) {
  std::vector<BasicBox<Num>> out;
  out.push_back({std::vector<Num>(dim, Num(0)), std::vector<Num>(dim, Num(0))});
  for (std::size_t k = 0; k < q.size(); ++k) {
    const int i = static_cast<int>(k) + 1;
    std::vector<Num> offset(dim, Num(0));
    offset[0] = Num(1) / Num(std::int64_t{1} << i);
    if (i <= 3) {
      const int e = i == 1 ? 1 : (i == 2 ? 4 : 27);
      Affine<Num> copy{offset, Num(1) / Num(std::int64_t{1} << e)};
      detail::emit_cylinders(q[k], copy, thresh, out);
    } else {
      // far below resolution: a sliver at the anchor
      Affine<Num> copy{offset, thresh / Num(4)};
      out.push_back(copy.image_of_cube());
    }
  }
  return out;
}

bool all_exact(const std::vector<HomothetySystem>& systems) {
  return std::all_of(systems.begin(), systems.end(), [](const HomothetySystem& s) { return s.exact(); });
}

json piece_to_json(const DeltaPiece& p) {
  if (p.lo == p.hi) return p.lo;
  return json::array({p.lo, p.hi});
}

}  // namespace

int closeness_generations(double c, int n) {
  if (!(c > 0.0 && c < 1.0)) throw Error(ErrorCode::InvalidArgument, "ratio must lie in (0,1)");
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "closeness parameter n must be >= 1");
  int k = 1;
  double ck = c;
  while (ck > 1.0 / n * (1.0 + kTol)) {
    ck *= c;
    ++k;
  }
  return k;
}

double top_dimension(const HomothetySystem& q_inf) {
  q_inf.validate();
  if (!q_inf.equicontractive()) throw Error(ErrorCode::NotEquicontractive, "Q_inf maps have different ratios");
  const double c = q_inf.maps.front().ratio.value;
  if (c == 0.0 || q_inf.maps.size() < 2) return 0.0;
  return std::log(static_cast<double>(q_inf.maps.size())) / -std::log(c);
}

HomothetySystem build_K(const KFamilySpec& spec) {
  const double sup = top_dimension(spec.q_inf);
  if (!(spec.s >= -kTol && spec.s <= sup + kTol))
    throw Error(ErrorCode::InvalidS, "s = " + std::to_string(spec.s) + " outside [0, " + std::to_string(sup) + "]");
  if (std::abs(spec.s - sup) <= kTol) return spec.q_inf;
  const auto& maps = spec.q_inf.maps;
  const double c = maps.front().ratio.value;
  const int k = closeness_generations(c, spec.n);
  const double a = static_cast<double>(maps.size());
  if (k * std::log(a) > std::log(1 << 20)) throw Error(ErrorCode::InvalidArgument, "a^k exceeds 2^20 maps");
  const Scalar ratio = spec.s <= kTol ? Scalar::of(Rational(0)) : Scalar::of(std::pow(a, -k / spec.s));

  HomothetySystem out;
  out.dim = spec.q_inf.dim;
  out.separation = Separation::Strong;
  const bool exact = spec.q_inf.exact();
  // anchors f_{i1} o ... o f_{ik}(0), words in lexicographic order
  std::function<void(int, std::vector<Scalar>, Scalar)> walk = [&](int depth, std::vector<Scalar> at, Scalar scale) {
    if (depth == k) {
      out.maps.push_back({ratio, std::move(at)});
      return;
    }
    for (const auto& m : maps) {
      std::vector<Scalar> next(at.size());
      for (std::size_t j = 0; j < at.size(); ++j) {
        next[j] = exact ? Scalar::of(*at[j].exact + *scale.exact * *m.translation[j].exact)
                        : Scalar{at[j].value + scale.value * m.translation[j].value, std::nullopt};
      }
      walk(depth + 1, std::move(next), exact ? Scalar::of(*scale.exact * *m.ratio.exact)
                                             : Scalar{scale.value * m.ratio.value, std::nullopt});
    }
  };
  walk(0, std::vector<Scalar>(out.dim, Scalar::of(Rational(0))), Scalar::of(Rational(1)));
  out.validate();
  return out;
}

void DeltaSpec::validate(int dim) const {
  if (pieces.empty()) throw Error(ErrorCode::InvalidArgument, "empty dimension set");
  double lo = pieces.front().lo, hi = pieces.front().hi;
  for (const auto& p : pieces) {
    if (!(p.lo >= 0.0 && p.lo <= p.hi && p.hi <= dim + kTol))
      throw Error(ErrorCode::InvalidArgument, "piece outside [0, d] or with lo > hi");
    lo = std::min(lo, p.lo);
    hi = std::max(hi, p.hi);
  }
  if (std::abs(inf - lo) > kTol || !in_union(pieces, inf))
    throw Error(ErrorCode::InfNotAttained, "inf is not the least point of the pieces");
  if (std::abs(sup - hi) > kTol || !in_union(pieces, sup))
    throw Error(ErrorCode::InfNotAttained, "sup is not the greatest point of the pieces");
  for (std::size_t i = 0; i < alpha.size(); ++i)
    if (alpha[i] < 1 || (i > 0 && alpha[i] <= alpha[i - 1]))
      throw Error(ErrorCode::InvalidArgument, "alpha must be strictly increasing positive integers");
  if (scaffold_dim) {
    if (inf <= 0.0) throw Error(ErrorCode::InvalidArgument, "scaffold dimension needs inf > 0");
    if (!(*scaffold_dim > 0.0 && *scaffold_dim < dim) || !in_union(pieces, *scaffold_dim))
      throw Error(ErrorCode::InvalidArgument, "scaffold dimension must lie in the set and in (0, d)");
  }
}

bool DeltaSpec::singleton() const {
  return std::all_of(pieces.begin(), pieces.end(),
                     [&](const DeltaPiece& p) { return std::abs(p.lo - inf) <= kTol && std::abs(p.hi - inf) <= kTol; });
}

DeltaSpec delta_from_json(const json& j) {
  DeltaSpec d;
  try {
    for (const auto& p : j.at("pieces")) {
      if (p.is_array()) {
        if (p.size() != 2) throw Error(ErrorCode::SpecParse, "interval pieces need two endpoints");
        d.pieces.push_back({parse_real(p[0]), parse_real(p[1])});
      } else {
        const double x = parse_real(p);
        d.pieces.push_back({x, x});
      }
    }
    if (d.pieces.empty()) throw Error(ErrorCode::SpecParse, "no pieces");
    double lo = d.pieces.front().lo, hi = d.pieces.front().hi;
    for (const auto& p : d.pieces) {
      lo = std::min(lo, p.lo);
      hi = std::max(hi, p.hi);
    }
    d.inf = j.contains("inf") ? parse_real(j["inf"]) : lo;
    d.sup = j.contains("sup") ? parse_real(j["sup"]) : hi;
    if (j.contains("alpha")) d.alpha = j["alpha"].get<std::vector<int>>();
    if (j.contains("scaffold_dim")) d.scaffold_dim = parse_real(j["scaffold_dim"]);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SpecParse, e.what());
  }
  return d;
}

json delta_to_json(const DeltaSpec& d) {
  json pieces = json::array();
  for (const auto& p : d.pieces) pieces.push_back(piece_to_json(p));
  json j = {{"pieces", pieces}, {"inf", d.inf}, {"sup", d.sup}, {"alpha", d.alpha}};
  if (d.scaffold_dim) j["scaffold_dim"] = *d.scaffold_dim;
  return j;
}

double delta_sample(const DeltaPiece& p, int r) {
  if (p.lo == p.hi || r == 0) return p.lo;
  if (r == 1) return p.hi;
  // van der Corput point of r - 1 in base 2
  unsigned q = static_cast<unsigned>(r - 1);
  double f = 0.0, w = 0.5;
  while (q) {
    if (q & 1u) f += w;
    q >>= 1;
    w *= 0.5;
  }
  return p.lo + (p.hi - p.lo) * f;
}

DeltaConstruction build_delta_set(const DeltaSpec& spec, const TreeParams& params, int depth) {
  spec.validate(params.dim);
  if (depth < 1 || depth > params.max_height()) throw Error(ErrorCode::DepthOutOfRange, "depth out of range");
  const int d = params.dim;
  DeltaConstruction out{full_tree(params, 0), corner_system(d, spec.sup), std::nullopt, {}, {}};
  if (spec.singleton()) {
    out.tree = attractor_tree(out.q_inf, params, depth);
    out.scaffold_values.push_back(spec.sup);
    return out;
  }

  const double thresh = std::pow(static_cast<double>(params.base), -depth);
  const Rational thresh_exact(1, params.axis_extent(depth));
  const std::size_t np = spec.pieces.size();
  std::vector<HomothetySystem> q;
  auto add_q = [&](int i, int alpha, std::uint64_t copies) {
    const std::size_t j = static_cast<std::size_t>(i - 1) % np;
    const int r = (i - 1) / static_cast<int>(np);
    const double s = delta_sample(spec.pieces[j], r);
    const int n = static_cast<int>(j) + 1;
    q.push_back(build_K({out.q_inf, std::min(s, spec.sup), n}));
    out.pieces.push_back({i, static_cast<int>(j), s, n, alpha, copies});
  };

  std::vector<BasicBox<Rational>> exact_boxes;
  std::vector<RealBox> real_boxes;
  if (spec.inf > 0.0) {
    const double sdim = spec.scaffold_dim.value_or(spec.inf);
    if (!(sdim < d)) throw Error(ErrorCode::InvalidArgument, "scaffold needs dimension below d");
    HomothetySystem scaffold = corner_system(d, sdim);
    const double c0 = scaffold.maps.front().ratio.value;
    std::vector<int> alpha = spec.alpha;
    if (alpha.empty()) {
      for (int a = 1; std::pow(c0, a) >= thresh * (1 - 1e-9); a *= 4) alpha.push_back(a);
    }
    int visible = 0;
    for (int a : alpha)
      if (std::pow(c0, a) >= thresh * (1 - 1e-9)) ++visible;
    if (visible < 2)
      throw Error(ErrorCode::DepthTooShallowForAlpha,
                  std::to_string(visible) + " glue level(s) visible at depth " + std::to_string(depth));
    const double b = static_cast<double>(scaffold.maps.size());
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      const int prev = i == 0 ? 0 : alpha[i - 1];
      add_q(static_cast<int>(i) + 1, alpha[i], static_cast<std::uint64_t>(std::pow(b, alpha[i] - prev)) - 1);
    }
    out.scaffold_values.push_back(sdim);
    bool done = false;
    if (scaffold.exact() && all_exact(q)) {
      try {
        exact_boxes = ScaffoldBuilder<Rational>(scaffold, alpha, q, thresh_exact).run();
        done = true;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::Overflow) throw;
      }
    }
    if (!done) real_boxes = ScaffoldBuilder<double>(scaffold, alpha, q, thresh).run();
    out.scaffold = std::move(scaffold);
  } else {
    for (int i = 1; std::ldexp(1.0, -i) >= thresh; ++i) add_q(i, 0, 1);
    out.scaffold_values.push_back(0.0);
    bool done = false;
    if (all_exact(q)) {
      try {
        exact_boxes = accumulation_boxes<Rational>(q, d, thresh_exact);
        done = true;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::Overflow) throw;
      }
    }
    if (!done) real_boxes = accumulation_boxes<double>(q, d, thresh);
  }
  out.tree = exact_boxes.empty() ? tree_from_boxes(params, real_boxes, depth) : tree_from_boxes(params, exact_boxes, depth);
  return out;
}

TreeParams canonical_params(std::string_view name, int dim) {
  if (name == "cantor_thirds") return TreeParams(3, 1);
  if (name == "unit_cube") return TreeParams(2, dim);
  if (name == "reciprocal") return TreeParams(2, 1);
  throw Error(ErrorCode::UnknownName, "unknown canonical set '" + std::string(name) + "'");
}

CodedTree canonical_set(std::string_view name, int depth, std::optional<TreeParams> params) {
  const TreeParams p = params.value_or(canonical_params(name));
  if (depth < 0 || depth > p.max_height()) throw Error(ErrorCode::DepthOutOfRange, "depth out of range");
  if (name == "unit_cube") return full_tree(p, depth);
  if (p.dim != 1) throw Error(ErrorCode::InvalidArgument, std::string(name) + " lives in dimension 1");
  if (name == "cantor_thirds") {
    if (depth == 0) return full_tree(p, 0);
    HomothetySystem cantor;
    cantor.separation = Separation::Strong;
    cantor.maps = {{Scalar::of(Rational(1, 3)), {Scalar::of(Rational(0))}},
                   {Scalar::of(Rational(1, 3)), {Scalar::of(Rational(2, 3))}}};
    return attractor_tree(cantor, p, depth);
  }
  if (name == "reciprocal") {
    const std::int64_t count = p.axis_extent(depth);
    std::vector<std::vector<Rational>> pts;
    pts.reserve(static_cast<std::size_t>(count) + 1);
    pts.push_back({Rational(0)});
    for (std::int64_t n = 1; n <= count; ++n) pts.push_back({Rational(1, n)});
    return tree_from_point_set(p, pts, depth);
  }
  throw Error(ErrorCode::UnknownName, "unknown canonical set '" + std::string(name) + "'");
}

CodedTree miniset_tree(const CodedTree& t, const Rational& lambda, const std::vector<Rational>& shift, int depth) {
  if (lambda < Rational(1)) throw Error(ErrorCode::LambdaTooSmall, "scaling must be >= 1");
  const TreeParams& p = t.params();
  if (static_cast<int>(shift.size()) != p.dim) throw Error(ErrorCode::InvalidArgument, "shift dimension mismatch");
  std::vector<RationalBox> boxes;
  for (const VertexAddress& leaf : t.leaves()) {
    const DyadicCube cube = DyadicCube::of(p, leaf);
    RationalBox b;
    for (int j = 0; j < p.dim; ++j) {
      b.lo.push_back(lambda * cube.corner[j] + shift[j]);
      b.hi.push_back(lambda * (cube.corner[j] + cube.side) + shift[j]);
    }
    boxes.push_back(std::move(b));
  }
  try {
    return tree_from_boxes(p, boxes, depth);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::EmptyRoot) throw Error(ErrorCode::EmptyMiniset, "window misses the unit cube");
    throw;
  }
}

}  // namespace microscope
