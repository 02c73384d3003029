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

#ifndef QIF_DIST_HPP_
#define QIF_DIST_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "qif/rational.hpp"

namespace qif {

using Label = std::string;
using Labels = std::vector<Label>;

// Exact finite probability distribution over an ordered set of opaque labels.
// Masses are non-negative rationals summing to exactly 1; the label order is
// part of the value so matrices and reports print deterministically.
class Dist {
 public:
  /// Validates: matching lengths, no duplicate labels, masses >= 0, sum == 1.
  Dist(Labels labels, std::vector<Rat> masses);

  static Dist point(const Label& x, const Labels& labels);
  static Dist uniform(const Labels& labels);

  const Labels& labels() const { return labels_; }
  size_t size() const { return labels_.size(); }

  const Rat& mass(size_t i) const { return masses_[i]; }
  const Rat& mass(const Label& x) const { return masses_[index_of(x)]; }
  const std::vector<Rat>& masses() const { return masses_; }

  /// Index of a label; UnknownLabel if absent.
  size_t index_of(const Label& x) const;
  bool has_label(const Label& x) const;

  /// Labels with strictly positive mass, in label order.
  Labels support() const;
  bool is_point() const { return support().size() == 1; }

  bool operator==(const Dist& other) const {
    return labels_ == other.labels_ && masses_ == other.masses_;
  }
  bool operator!=(const Dist& other) const { return !(*this == other); }

  /// {"labels":[...], "mass":["7/8","1/16",...]}. decimals >= 0 switches the
  /// mass strings to fixed-point decimals (presentation only; may round).
  std::string to_json(int decimals = -1) const;
  static Dist from_json(const std::string& text);

 private:
  Labels labels_;
  std::vector<Rat> masses_;
};

}  // namespace qif

#endif  // QIF_DIST_HPP_
