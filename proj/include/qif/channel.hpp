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

#ifndef QIF_CHANNEL_HPP_
#define QIF_CHANNEL_HPP_

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qif/dist.hpp"

namespace qif {

/// Output label of the null channel (the one useless observation).
inline const Label kBottom = "⊥";  // ⊥

// Row-stochastic matrix with labeled rows (secrets) and columns (observables).
// All-zero columns are permitted; they are simply infeasible outputs.
class Channel {
 public:
  /// Validates: unique labels, entries >= 0, every row sums to exactly 1.
  Channel(Labels rows, Labels cols, std::vector<std::vector<Rat>> entries);

  static Channel identity(const Labels& labels);

  const Labels& rows() const { return rows_; }
  const Labels& cols() const { return cols_; }
  size_t row_count() const { return rows_.size(); }
  size_t col_count() const { return cols_.size(); }

  const Rat& at(size_t row, size_t col) const { return entries_[row][col]; }
  const Rat& at(const Label& row, const Label& col) const;
  const std::vector<std::vector<Rat>>& entries() const { return entries_; }

  size_t row_index(const Label& x) const;
  size_t col_index(const Label& y) const;

  /// The row as a distribution over the output labels.
  Dist row_dist(size_t row) const;

  /// Row-selection by label; ShapeMismatch if a label is missing. Used to
  /// align independently constructed channels over the same input space.
  Channel select_rows(const Labels& wanted) const;

  bool operator==(const Channel& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && entries_ == other.entries_;
  }
  bool operator!=(const Channel& other) const { return !(*this == other); }

  /// {"rows":[...], "cols":[...], "entries":[["2/3","1/3"],...]}
  std::string to_json(int decimals = -1) const;
  static Channel from_json(const std::string& text);

  /// Header row = column labels, first field of each row = row label.
  /// Fields containing commas or quotes are double-quoted.
  std::string to_csv() const;
  static Channel from_csv(const std::string& text);

 private:
  Labels rows_;
  Labels cols_;
  std::vector<std::vector<Rat>> entries_;
};

// Outer distribution over the realised output labels plus the posterior
// ("inner") distribution for every feasible output. Output labels are kept so
// dynamic analyses can select the realised posterior; use reduced() for
// label-erasing static comparisons.
class Hyper {
 public:
  Hyper(Dist outer, std::vector<std::optional<Dist>> inners)
      : outer_(std::move(outer)), inners_(std::move(inners)) {}

  const Dist& outer() const { return outer_; }

  bool feasible(const Label& y) const;
  /// Posterior given output y; ZeroProbabilityObservation when outer(y) = 0.
  const Dist& inner(const Label& y) const;

  /// Label-erased form: equal inners merged, their outer masses summed,
  /// sorted canonically. Two hypers are statically equivalent iff their
  /// reduced forms are equal.
  std::vector<std::pair<Dist, Rat>> reduced() const;

 private:
  Dist outer_;
  std::vector<std::optional<Dist>> inners_;  // indexed like outer labels
};

bool hyper_equivalent(const Hyper& a, const Hyper& b);

/// Sequential composition by matrix multiplication; cols(c) must equal rows(d).
Channel cascade(const Channel& c, const Channel& d);

/// Joint observation of two channels on the same secret; output labels are
/// "y,z" pairs.
Channel parallel(const Channel& c, const Channel& d);

/// J[x][y] = prior(x) * C[x][y].
std::vector<std::vector<Rat>> joint(const Dist& prior, const Channel& c);

/// Marginal distribution on outputs.
Dist outer(const Dist& prior, const Channel& c);

/// Bayesian update given output y; ZeroProbabilityObservation if outer(y)=0.
Dist posterior(const Dist& prior, const Channel& c, const Label& y);

Hyper hyper(const Dist& prior, const Channel& c);

/// The channel that leaks nothing: a single all-ones column labeled ⊥.
Channel null_channel(const Labels& rows);

/// Pair label used by parallel composition.
Label pair_label(const Label& y, const Label& z);

}  // namespace qif

#endif  // QIF_CHANNEL_HPP_
