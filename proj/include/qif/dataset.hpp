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

#ifndef QIF_DATASET_HPP_
#define QIF_DATASET_HPP_

#include <map>
#include <string>
#include <vector>

#include "qif/channel.hpp"

namespace qif {

// Mapping from person ids to a multiset of location labels. Serialization is
// canonical (sorted keys, sorted multisets), so a dataset's label is stable
// regardless of construction order.
class Dataset {
 public:
  using Record = std::vector<Label>;  // kept sorted

  Dataset() = default;
  explicit Dataset(std::map<std::string, Record> records);

  const std::map<std::string, Record>& records() const { return records_; }
  const Record& record(const std::string& person) const;
  bool has_person(const std::string& person) const;

  /// "Alex={A,A};Bob={B}"
  Label label() const;
  static Dataset parse(const Label& text);

  /// Person ids replaced by positional indices, records in canonical order
  /// (larger records first, then lexicographic).
  Dataset deidentified() const;

  /// Location counts over the whole dataset; label form "A:2;B:1".
  std::map<Label, int> histogram() const;
  Label histogram_label() const;

  bool operator==(const Dataset& other) const { return records_ == other.records_; }

 private:
  std::map<std::string, Record> records_;
};

/// Dataset labels in order.
Labels dataset_labels(const std::vector<Dataset>& datasets);

/// Per-location noise lifted to whole datasets: every location of every
/// record passes through per_element independently, and the probability of an
/// output dataset sums over all per-location outcomes that produce its
/// multisets. Rows and columns are all datasets with the shape's person ids
/// and record sizes, over per_element's location alphabet.
Channel mechanism_lift(const Channel& per_element, const Dataset& shape);

/// Deterministic de-identification channel over a secret space: each dataset
/// maps to its canonical de-identified form. Columns appear in first-use
/// order.
Channel deid_channel(const std::vector<Dataset>& secret_space);

/// Hint revealing one of a person's locations, weighted by multiplicity in
/// their record. UnknownPerson unless the person appears in every dataset.
Channel hint_frequency(const std::string& person, const std::vector<Dataset>& secret_space);

/// Deterministic histogram hint over a secret space.
Channel hint_histogram(const std::vector<Dataset>& secret_space);

/// hints[0] || hints[1] || ... || (deid ; lifted mechanism). The lift's shape
/// is taken from the de-identification channel's column labels, which must
/// all parse to datasets with the same person ids and record sizes.
Channel build_data_release(const std::vector<Dataset>& secret_space, const Channel& deid,
                           const Channel& mech_per_loc, const std::vector<Channel>& hints);

}  // namespace qif

#endif  // QIF_DATASET_HPP_
