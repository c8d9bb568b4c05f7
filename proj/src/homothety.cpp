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
#include "microscope/homothety.hpp"

#include <algorithm>
#include <cmath>
#include <regex>

#include "cylinders.hpp"
#include "microscope/error.hpp"

namespace microscope {
namespace {

using nlohmann::json;

bool close(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }

json scalar_to_json(const Scalar& s) {
  if (s.exact) {
    if (s.exact->den() == 1) return s.exact->num();
    return s.exact->to_string();
  }
  return s.value;
}

// Boxes f_i([0,1]^d) in doubles; exactness is not needed for separation.
std::vector<RealBox> image_boxes(const HomothetySystem& s) {
  std::vector<RealBox> out;
  for (const auto& m : s.maps) {
    RealBox b;
    for (const auto& t : m.translation) {
      b.lo.push_back(t.value);
      b.hi.push_back(t.value + m.ratio.value);
    }
    out.push_back(std::move(b));
  }
  return out;
}

bool boxes_meet(const RealBox& a, const RealBox& b, bool open) {
  for (std::size_t j = 0; j < a.lo.size(); ++j) {
    const double lo = std::max(a.lo[j], b.lo[j]);
    const double hi = std::min(a.hi[j], b.hi[j]);
    if (open ? hi <= lo + 1e-12 : hi < lo - 1e-12) return false;
  }
  return true;
}

}  // namespace

Scalar Scalar::of(double v) {
  if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "non-finite coefficient");
  if (v == 0.0) return {0.0, Rational(0)};
  if (auto r = Rational::approximate(v, 1000, 1e-12 * std::abs(v)); r && *r != Rational(0)) return {r->to_double(), r};
  return {v, std::nullopt};
}

bool HomothetySystem::equicontractive() const {
  for (const auto& m : maps)
    if (!close(m.ratio.value, maps.front().ratio.value)) return false;
  return true;
}

bool HomothetySystem::exact() const {
  for (const auto& m : maps) {
    if (!m.ratio.exact) return false;
    for (const auto& t : m.translation)
      if (!t.exact) return false;
  }
  return true;
}

void HomothetySystem::validate() const {
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "ambient dimension must be >= 1");
  if (maps.empty()) throw Error(ErrorCode::InvalidArgument, "system has no maps");
  for (const auto& m : maps) {
    if (m.translation.size() != static_cast<std::size_t>(dim))
      throw Error(ErrorCode::InvalidArgument, "translation length differs from dimension");
    if (!(m.ratio.value >= 0.0 && m.ratio.value < 1.0))
      throw Error(ErrorCode::InvalidArgument, "ratio must lie in [0,1)");
    for (const auto& t : m.translation)
      if (t.value < -1e-12 || t.value + m.ratio.value > 1.0 + 1e-12)
        throw Error(ErrorCode::InvalidArgument, "map does not send [0,1]^d into itself");
  }
  if (separation == Separation::None) return;
  const auto boxes = image_boxes(*this);
  for (std::size_t i = 0; i < boxes.size(); ++i)
    for (std::size_t j = i + 1; j < boxes.size(); ++j)
      if (boxes_meet(boxes[i], boxes[j], separation == Separation::OpenSet))
        throw Error(ErrorCode::InvalidArgument,
                    "images of maps " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
}

bool HomothetySystem::spans_cube() const {
  for (int j = 0; j < dim; ++j) {
    bool low = false, high = false;
    for (const auto& m : maps) {
      low = low || m.translation[j].value == 0.0;
      high = high || close(m.translation[j].value + m.ratio.value, 1.0);
    }
    if (!low || !high) return false;
  }
  return true;
}

double parse_real(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_string()) throw Error(ErrorCode::SpecParse, "expected a number or numeric string");
  const std::string text = j.get<std::string>();
  static const std::regex logs(R"(\s*log\(\s*([0-9.]+)\s*\)\s*/\s*log\(\s*([0-9.]+)\s*\)\s*)");
  std::smatch m;
  if (std::regex_match(text, m, logs)) {
    const double num = std::stod(m[1].str()), den = std::stod(m[2].str());
    if (num <= 0 || den <= 0 || den == 1.0) throw Error(ErrorCode::SpecParse, "bad logarithm ratio '" + text + "'");
    return std::log(num) / std::log(den);
  }
  try {
    return Rational::parse(text).to_double();
  } catch (const Error&) {
    throw Error(ErrorCode::SpecParse, "cannot read number '" + text + "'");
  }
}

Scalar parse_scalar(const json& j) {
  if (j.is_string()) {
    const std::string text = j.get<std::string>();
    if (text.find("log") == std::string::npos) {
      try {
        return Scalar::of(Rational::parse(text));
      } catch (const Error&) {
        throw Error(ErrorCode::SpecParse, "cannot read number '" + text + "'");
      }
    }
  }
  return Scalar::of(parse_real(j));
}

std::string separation_name(Separation s) {
  switch (s) {
    case Separation::None: return "none";
    case Separation::OpenSet: return "open_set";
    case Separation::Strong: return "strong";
  }
  return "none";
}

json system_to_json(const HomothetySystem& s) {
  json maps = json::array();
  for (const auto& m : s.maps) {
    json t = json::array();
    for (const auto& x : m.translation) t.push_back(scalar_to_json(x));
    maps.push_back({{"ratio", scalar_to_json(m.ratio)}, {"translation", t}});
  }
  return {{"dim", s.dim}, {"separation", separation_name(s.separation)}, {"maps", maps}};
}

HomothetySystem system_from_json(const json& j) {
  HomothetySystem s;
  try {
    s.dim = j.value("dim", 1);
    const std::string sep = j.value("separation", std::string("none"));
    if (sep == "none") s.separation = Separation::None;
    else if (sep == "open_set") s.separation = Separation::OpenSet;
    else if (sep == "strong") s.separation = Separation::Strong;
    else throw Error(ErrorCode::SpecParse, "unknown separation '" + sep + "'");
    for (const auto& m : j.at("maps")) {
      Homothety h;
      h.ratio = parse_scalar(m.at("ratio"));
      const auto& t = m.at("translation");
      if (t.is_array()) {
        for (const auto& x : t) h.translation.push_back(parse_scalar(x));
      } else {
        h.translation.push_back(parse_scalar(t));
      }
      s.maps.push_back(std::move(h));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SpecParse, e.what());
  }
  s.validate();
  return s;
}

HomothetySystem corner_system(int dim, double target) {
  if (dim < 1 || dim > 6) throw Error(ErrorCode::InvalidArgument, "corner systems need 1 <= d <= 6");
  if (!(target >= 0.0 && target <= dim)) throw Error(ErrorCode::InvalidS, "target dimension outside [0, d]");
  const double maps = std::ldexp(1.0, dim);
  const Scalar ratio = target == 0.0 ? Scalar::of(Rational(0)) : Scalar::of(std::pow(maps, -1.0 / target));
  HomothetySystem s;
  s.dim = dim;
  s.separation = ratio.value < 0.5 ? Separation::Strong : Separation::OpenSet;
  const Scalar far = ratio.exact ? Scalar::of(Rational(1) - *ratio.exact) : Scalar::of(1.0 - ratio.value);
  for (int corner = 0; corner < (1 << dim); ++corner) {
    Homothety h;
    h.ratio = ratio;
    for (int j = 0; j < dim; ++j) h.translation.push_back((corner >> j) & 1 ? far : Scalar::of(Rational(0)));
    s.maps.push_back(std::move(h));
  }
  return s;
}

CodedTree attractor_tree(const HomothetySystem& ifs, const TreeParams& params, int depth) {
  ifs.validate();
  if (ifs.dim != params.dim) throw Error(ErrorCode::MixedParams, "system and tree dimensions differ");
  if (depth < 1 || depth > params.max_height()) throw Error(ErrorCode::DepthOutOfRange, "depth out of range");
  detail::check_generation_budget(ifs, 1.0, std::pow(static_cast<double>(params.base), -depth));
  if (ifs.exact()) {
    try {
      std::vector<RationalBox> boxes;
      detail::Affine<Rational> id{std::vector<Rational>(ifs.dim, Rational(0)), Rational(1)};
      detail::emit_cylinders(ifs, id, Rational(1, params.axis_extent(depth)), boxes);
      return tree_from_boxes(params, boxes, depth);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Overflow) throw;
    }
  }
  std::vector<RealBox> boxes;
  detail::Affine<double> id{std::vector<double>(ifs.dim, 0.0), 1.0};
  detail::emit_cylinders(ifs, id, std::pow(static_cast<double>(params.base), -depth), boxes);
  return tree_from_boxes(params, boxes, depth);
}

}  // namespace microscope
