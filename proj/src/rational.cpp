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

#include "qif/rational.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace qif {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

Int parse_int(std::string_view digits, std::string_view original) {
  if (digits.empty()) fail(Errc::Parse, "empty integer in '" + std::string(original) + "'");
  for (char c : digits) {
    if (c < '0' || c > '9') {
      fail(Errc::Parse, "invalid rational literal '" + std::string(original) + "'");
    }
  }
  // cpp_int's string constructor would read a leading 0 as an octal prefix
  while (digits.size() > 1 && digits.front() == '0') digits.remove_prefix(1);
  return Int(std::string(digits));
}

}  // namespace

Rat rat_parse(std::string_view text) {
  std::string_view s = trim(text);
  std::string_view original = text;
  if (s.empty()) fail(Errc::Parse, "empty rational literal");

  bool negative = false;
  if (s.front() == '+' || s.front() == '-') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }

  auto slash = s.find('/');
  if (slash != std::string_view::npos) {
    Int num = parse_int(s.substr(0, slash), original);
    Int den = parse_int(s.substr(slash + 1), original);
    if (den == 0) fail(Errc::Parse, "zero denominator in '" + std::string(original) + "'");
    Rat r(num, den);
    return negative ? Rat(-r) : r;
  }

  auto dot = s.find('.');
  if (dot != std::string_view::npos) {
    std::string_view int_part = s.substr(0, dot);
    std::string_view frac_part = s.substr(dot + 1);
    if (int_part.empty() && frac_part.empty()) {
      fail(Errc::Parse, "invalid rational literal '" + std::string(original) + "'");
    }
    Int ip = int_part.empty() ? Int(0) : parse_int(int_part, original);
    Int fp = frac_part.empty() ? Int(0) : parse_int(frac_part, original);
    Int scale = 1;
    for (size_t i = 0; i < frac_part.size(); ++i) scale *= 10;
    Rat r(ip * scale + fp, scale);
    return negative ? Rat(-r) : r;
  }

  Int value = parse_int(s, original);
  Rat r(value);
  return negative ? Rat(-r) : r;
}

std::string rat_str(const Rat& value) {
  Int num = boost::multiprecision::numerator(value);
  Int den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string rat_decimal(const Rat& value, int digits) {
  if (digits < 0) digits = 0;
  Int num = boost::multiprecision::numerator(value);
  Int den = boost::multiprecision::denominator(value);
  bool negative = num < 0;
  if (negative) num = -num;
  Int scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  // Round half away from zero.
  Int scaled = (num * scale * 2 + den) / (den * 2);
  Int whole = scaled / scale;
  Int frac = scaled % scale;
  std::string out = negative && scaled != 0 ? "-" : "";
  out += whole.str();
  if (digits > 0) {
    std::string f = frac.str();
    out += "." + std::string(digits - f.size(), '0') + f;
  }
  return out;
}

double rat_double(const Rat& value) { return value.convert_to<double>(); }

XVal XVal::exact(Rat value) {
  XVal v;
  v.kind_ = Kind::Exact;
  v.rational_ = std::move(value);
  return v;
}

XVal XVal::real(double value) {
  XVal v;
  v.kind_ = Kind::Real;
  v.real_ = value;
  return v;
}

XVal XVal::infinity() {
  XVal v;
  v.kind_ = Kind::PosInf;
  return v;
}

XVal XVal::neg_infinity() {
  XVal v;
  v.kind_ = Kind::NegInf;
  return v;
}

XVal XVal::parse(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  if (s == "inf" || s == "+inf") return infinity();
  if (s == "-inf") return neg_infinity();
  return exact(rat_parse(s));
}

const Rat& XVal::exact_value() const {
  if (kind_ != Kind::Exact) fail(Errc::InvalidArgument, "value is not exact");
  return rational_;
}

double XVal::as_double() const {
  switch (kind_) {
    case Kind::Exact:
      return rat_double(rational_);
    case Kind::Real:
      return real_;
    case Kind::PosInf:
      return std::numeric_limits<double>::infinity();
    case Kind::NegInf:
      return -std::numeric_limits<double>::infinity();
  }
  return 0.0;
}

XVal XVal::operator+(const XVal& other) const {
  if (kind_ == Kind::PosInf || other.kind_ == Kind::PosInf) {
    if (kind_ == Kind::NegInf || other.kind_ == Kind::NegInf) {
      fail(Errc::InvalidArgument, "inf + -inf is undefined");
    }
    return infinity();
  }
  if (kind_ == Kind::NegInf || other.kind_ == Kind::NegInf) return neg_infinity();
  if (kind_ == Kind::Exact && other.kind_ == Kind::Exact) {
    return exact(rational_ + other.rational_);
  }
  return real(as_double() + other.as_double());
}

XVal XVal::operator-(const XVal& other) const { return *this + other.negated(); }

XVal XVal::negated() const {
  switch (kind_) {
    case Kind::Exact:
      return exact(Rat(-rational_));
    case Kind::Real:
      return real(-real_);
    case Kind::PosInf:
      return neg_infinity();
    case Kind::NegInf:
      return infinity();
  }
  return XVal();
}

XVal XVal::scaled(const Rat& weight) const {
  if (weight == 0) return exact(Rat(0));
  switch (kind_) {
    case Kind::Exact:
      return exact(Rat(rational_ * weight));
    case Kind::Real:
      return real(real_ * rat_double(weight));
    case Kind::PosInf:
      return weight > 0 ? infinity() : neg_infinity();
    case Kind::NegInf:
      return weight > 0 ? neg_infinity() : infinity();
  }
  return XVal();
}

bool XVal::operator==(const XVal& other) const {
  if (kind_ == Kind::PosInf || kind_ == Kind::NegInf) return kind_ == other.kind_;
  if (other.kind_ == Kind::PosInf || other.kind_ == Kind::NegInf) return false;
  if (kind_ == Kind::Exact && other.kind_ == Kind::Exact) {
    return rational_ == other.rational_;
  }
  return as_double() == other.as_double();
}

bool XVal::operator<(const XVal& other) const {
  if (kind_ == Kind::NegInf) return other.kind_ != Kind::NegInf;
  if (other.kind_ == Kind::NegInf) return false;
  if (other.kind_ == Kind::PosInf) return kind_ != Kind::PosInf;
  if (kind_ == Kind::PosInf) return false;
  if (kind_ == Kind::Exact && other.kind_ == Kind::Exact) {
    return rational_ < other.rational_;
  }
  return as_double() < other.as_double();
}

bool XVal::operator<=(const XVal& other) const {
  return *this < other || *this == other;
}

std::string XVal::str(int decimals) const {
  switch (kind_) {
    case Kind::Exact:
      return decimals < 0 ? rat_str(rational_) : rat_decimal(rational_, decimals);
    case Kind::Real: {
      char buf[64];
      if (decimals < 0) {
        std::snprintf(buf, sizeof(buf), "%.17g", real_);
      } else {
        std::snprintf(buf, sizeof(buf), "%.*f", decimals, real_);
      }
      return buf;
    }
    case Kind::PosInf:
      return "inf";
    case Kind::NegInf:
      return "-inf";
  }
  return "";
}

}  // namespace qif
