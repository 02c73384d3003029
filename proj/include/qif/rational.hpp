// Copyright 2026 The qifdyn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QIF_RATIONAL_HPP_
#define QIF_RATIONAL_HPP_

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "qif/errors.hpp"

namespace qif {

// Exact rational scalar. Stored in lowest terms with a positive denominator;
// add/mul/div/compare never round.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

/// Parses "a/b", an integer, or a decimal literal ("0.5" becomes 1/2 exactly).
Rat rat_parse(std::string_view text);

/// "a/b", or just "a" when the denominator is 1.
std::string rat_str(const Rat& value);

/// Fixed-point decimal with `digits` fractional digits, round half away from zero.
std::string rat_decimal(const Rat& value, int digits);

double rat_double(const Rat& value);

// Scalar that is either an exact rational, an inexact real (Shannon
// quantities), or an infinity. The only products ever taken with an infinite
// value are by rational weights, with 0 * inf = 0. Negative infinity can only
// arise from subtraction (e.g. a leakage whose belief-side uncertainty is
// infinite); it is never a measure value itself.
class XVal {
 public:
  XVal() : kind_(Kind::Exact), rational_(0) {}

  static XVal exact(Rat value);
  static XVal real(double value);
  static XVal infinity();
  static XVal neg_infinity();

  /// Accepts "inf", "-inf", or anything rat_parse accepts.
  static XVal parse(std::string_view text);

  bool is_exact() const { return kind_ == Kind::Exact; }
  bool is_real() const { return kind_ == Kind::Real; }
  bool is_inf() const { return kind_ == Kind::PosInf; }
  bool is_neg_inf() const { return kind_ == Kind::NegInf; }
  bool is_finite() const { return kind_ == Kind::Exact || kind_ == Kind::Real; }

  /// Only valid when is_exact().
  const Rat& exact_value() const;

  /// Finite values as double; infinities map to +/-HUGE_VAL.
  double as_double() const;

  XVal operator+(const XVal& other) const;
  XVal operator-(const XVal& other) const;
  XVal negated() const;

  /// Multiplication by an exact rational weight; weight 0 annihilates
  /// infinities (the 0 * inf = 0 convention).
  XVal scaled(const Rat& weight) const;

  bool operator==(const XVal& other) const;
  bool operator!=(const XVal& other) const { return !(*this == other); }
  bool operator<(const XVal& other) const;
  bool operator<=(const XVal& other) const;
  bool operator>(const XVal& other) const { return other < *this; }
  bool operator>=(const XVal& other) const { return other <= *this; }

  /// decimals < 0: exact values print as rationals, reals as shortest
  /// round-trip decimals. decimals >= 0: fixed-point with that many digits.
  std::string str(int decimals = -1) const;

 private:
  enum class Kind { Exact, Real, PosInf, NegInf };

  Kind kind_;
  Rat rational_;
  double real_ = 0.0;
};

}  // namespace qif

#endif  // QIF_RATIONAL_HPP_
