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
#include "microscope/rational.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

#include "microscope/error.hpp"

namespace microscope {
namespace {

__int128 wide_gcd(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

constexpr __int128 kMax = std::numeric_limits<std::int64_t>::max();

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  *this = from_wide(num, den);
}

Rational Rational::from_wide(__int128 num, __int128 den) {
  if (den == 0) throw Error(ErrorCode::InvalidArgument, "rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  __int128 g = wide_gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num > kMax || num < -kMax || den > kMax) {
    throw Error(ErrorCode::Overflow, "rational arithmetic exceeds 64-bit range");
  }
  Rational r;
  r.num_ = static_cast<std::int64_t>(num);
  r.den_ = static_cast<std::int64_t>(den);
  return r;
}

Rational operator+(const Rational& a, const Rational& b) {
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                             static_cast<__int128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.num_,
                             static_cast<__int128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  return Rational::from_wide(static_cast<__int128>(a.num_) * b.den_,
                             static_cast<__int128>(a.den_) * b.num_);
}

Rational Rational::operator-() const {
  Rational r;
  r.num_ = -num_;
  r.den_ = den_;
  return r;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
  __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::pair<std::int64_t, bool> Rational::scaled_floor(std::int64_t scale) const {
  __int128 p = static_cast<__int128>(num_) * scale;
  __int128 q = p / den_;
  __int128 rem = p % den_;
  if (rem < 0) q -= 1;  // floor toward -inf
  if (q > kMax || q < -kMax) throw Error(ErrorCode::Overflow, "scaled coordinate exceeds 64-bit range");
  return {static_cast<std::int64_t>(q), rem == 0};
}

std::string Rational::to_string() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(std::string_view text) {
  auto fail = [&] { return Error(ErrorCode::SpecParse, "not a rational number: '" + std::string(text) + "'"); };
  if (text.empty()) throw fail();
  auto slash = text.find('/');
  auto parse_int = [&](std::string_view s) -> std::int64_t {
    if (s.empty()) throw fail();
    std::string buf(s);
    char* end = nullptr;
    long long v = std::strtoll(buf.c_str(), &end, 10);
    if (*end != '\0') throw fail();
    return v;
  };
  if (slash != std::string_view::npos) {
    return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
  }
  auto dot = text.find('.');
  if (dot == std::string_view::npos) return Rational(parse_int(text));
  std::string_view whole = text.substr(0, dot);
  std::string_view frac = text.substr(dot + 1);
  if (frac.size() > 18) throw fail();
  bool negative = !whole.empty() && whole.front() == '-';
  std::int64_t w = (whole.empty() || whole == "-" || whole == "+") ? 0 : parse_int(whole);
  std::int64_t den = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
  std::int64_t f = frac.empty() ? 0 : parse_int(frac);
  if (f < 0) throw fail();
  Rational r = Rational(std::llabs(w)) + Rational(f, den);
  return negative ? -r : r;
}

std::optional<Rational> Rational::approximate(double value, std::int64_t max_den, double tol) {
  if (!std::isfinite(value)) return std::nullopt;
  for (std::int64_t q = 1; q <= max_den; ++q) {
    double p = std::round(value * static_cast<double>(q));
    if (std::abs(p) > 9.0e15) return std::nullopt;
    if (std::abs(p / static_cast<double>(q) - value) <= tol) {
      return Rational(static_cast<std::int64_t>(p), q);
    }
  }
  return std::nullopt;
}

}  // namespace microscope
