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

#include "qif/dataset.hpp"

#include <algorithm>
#include <map>

#include "qif/errors.hpp"

namespace qif {

namespace {

std::string join(const std::vector<Label>& parts, const char* sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

Dataset::Dataset(std::map<std::string, Record> records) : records_(std::move(records)) {
  if (records_.empty()) fail(Errc::InvalidArgument, "dataset with no records");
  for (auto& [person, record] : records_) {
    if (record.empty()) fail(Errc::InvalidArgument, "empty record for '" + person + "'");
    std::sort(record.begin(), record.end());
  }
}

const Dataset::Record& Dataset::record(const std::string& person) const {
  auto it = records_.find(person);
  if (it == records_.end()) fail(Errc::UnknownPerson, "no record for '" + person + "'");
  return it->second;
}

bool Dataset::has_person(const std::string& person) const {
  return records_.count(person) != 0;
}

Label Dataset::label() const {
  std::vector<Label> parts;
  for (const auto& [person, record] : records_) {
    parts.push_back(person + "={" + join(record, ",") + "}");
  }
  return join(parts, ";");
}

Dataset Dataset::parse(const Label& text) {
  std::map<std::string, Record> records;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t eq = text.find("={", pos);
    if (eq == Label::npos) fail(Errc::Parse, "invalid dataset label '" + text + "'");
    std::string person = text.substr(pos, eq - pos);
    size_t close = text.find('}', eq);
    if (close == Label::npos) fail(Errc::Parse, "invalid dataset label '" + text + "'");
    std::string locs = text.substr(eq + 2, close - eq - 2);
    Record record;
    size_t p = 0;
    while (p <= locs.size()) {
      size_t comma = locs.find(',', p);
      if (comma == Label::npos) {
        record.push_back(locs.substr(p));
        break;
      }
      record.push_back(locs.substr(p, comma - p));
      p = comma + 1;
    }
    records[person] = std::move(record);
    pos = close + 1;
    if (pos < text.size()) {
      if (text[pos] != ';') fail(Errc::Parse, "invalid dataset label '" + text + "'");
      ++pos;
    }
  }
  return Dataset(std::move(records));
}

Dataset Dataset::deidentified() const {
  std::vector<Record> recs;
  for (const auto& [person, record] : records_) recs.push_back(record);
  std::sort(recs.begin(), recs.end(), [](const Record& a, const Record& b) {
    if (a.size() != b.size()) return a.size() > b.size();
    return a < b;
  });
  std::map<std::string, Record> out;
  for (size_t i = 0; i < recs.size(); ++i) out[std::to_string(i)] = std::move(recs[i]);
  return Dataset(std::move(out));
}

std::map<Label, int> Dataset::histogram() const {
  std::map<Label, int> counts;
  for (const auto& [person, record] : records_) {
    for (const auto& loc : record) ++counts[loc];
  }
  return counts;
}

Label Dataset::histogram_label() const {
  std::vector<Label> parts;
  for (const auto& [loc, count] : histogram()) {
    parts.push_back(loc + ":" + std::to_string(count));
  }
  return join(parts, ";");
}

Labels dataset_labels(const std::vector<Dataset>& datasets) {
  Labels out;
  out.reserve(datasets.size());
  for (const auto& d : datasets) out.push_back(d.label());
  return out;
}

namespace {

// All multisets of the given size over the alphabet, lexicographically.
std::vector<Dataset::Record> multisets(const Labels& alphabet, size_t size) {
  std::vector<Dataset::Record> out;
  Dataset::Record current;
  auto rec = [&](auto&& self, size_t start, size_t remaining) -> void {
    if (remaining == 0) {
      out.push_back(current);
      return;
    }
    for (size_t i = start; i < alphabet.size(); ++i) {
      current.push_back(alphabet[i]);
      self(self, i, remaining - 1);
      current.pop_back();
    }
  };
  rec(rec, 0, size);
  return out;
}

// Distribution over output multisets for one record pushed through the
// per-location channel, summing over the per-location outcome assignments.
std::map<Label, Rat> record_push(const Channel& per_element, const Dataset::Record& record,
                                 std::map<Label, Dataset::Record>* forms) {
  std::map<Label, Rat> acc;
  Dataset::Record outcome(record.size());
  auto rec = [&](auto&& self, size_t pos, Rat prob) -> void {
    if (pos == record.size()) {
      Dataset::Record sorted = outcome;
      std::sort(sorted.begin(), sorted.end());
      Label key = join(sorted, ",");
      acc[key] += prob;
      (*forms)[key] = std::move(sorted);
      return;
    }
    size_t row = per_element.row_index(record[pos]);
    for (size_t j = 0; j < per_element.col_count(); ++j) {
      const Rat& p = per_element.at(row, j);
      if (p == 0) continue;
      outcome[pos] = per_element.cols()[j];
      self(self, pos + 1, Rat(prob * p));
    }
  };
  rec(rec, 0, Rat(1));
  return acc;
}

}  // namespace

Channel mechanism_lift(const Channel& per_element, const Dataset& shape) {
  if (per_element.rows() != per_element.cols()) {
    fail(Errc::ShapeMismatch, "per-element mechanism must map locations to locations");
  }
  const Labels& alphabet = per_element.rows();

  // Enumerate the dataset space with the shape's keys and record sizes.
  std::vector<std::string> persons;
  std::vector<std::vector<Dataset::Record>> choices;
  for (const auto& [person, record] : shape.records()) {
    persons.push_back(person);
    choices.push_back(multisets(alphabet, record.size()));
  }
  std::vector<Dataset> space;
  std::map<std::string, Dataset::Record> current;
  auto build = [&](auto&& self, size_t pos) -> void {
    if (pos == persons.size()) {
      space.emplace_back(current);
      return;
    }
    for (const auto& rec : choices[pos]) {
      current[persons[pos]] = rec;
      self(self, pos + 1);
    }
    current.erase(persons[pos]);
  };
  build(build, 0);

  // Per-record output distributions, then the product across records.
  std::vector<std::vector<Rat>> entries;
  entries.reserve(space.size());
  Labels labels = dataset_labels(space);
  std::map<Label, size_t> index;
  for (size_t i = 0; i < labels.size(); ++i) index[labels[i]] = i;

  for (const auto& input : space) {
    std::vector<std::map<Label, Rat>> per_record;
    std::map<Label, Dataset::Record> forms;
    for (const auto& person : persons) {
      per_record.push_back(record_push(per_element, input.record(person), &forms));
    }
    std::vector<Rat> row(space.size(), Rat(0));
    std::map<std::string, Dataset::Record> out_records;
    auto combine = [&](auto&& self, size_t pos, Rat prob) -> void {
      if (pos == persons.size()) {
        row[index.at(Dataset(out_records).label())] += prob;
        return;
      }
      for (const auto& [key, p] : per_record[pos]) {
        out_records[persons[pos]] = forms.at(key);
        self(self, pos + 1, Rat(prob * p));
      }
      out_records.erase(persons[pos]);
    };
    combine(combine, 0, Rat(1));
    entries.push_back(std::move(row));
  }
  return Channel(labels, labels, std::move(entries));
}

Channel deid_channel(const std::vector<Dataset>& secret_space) {
  Labels rows = dataset_labels(secret_space);
  Labels cols;
  std::map<Label, size_t> col_index;
  std::vector<size_t> target(secret_space.size());
  for (size_t i = 0; i < secret_space.size(); ++i) {
    Label d = secret_space[i].deidentified().label();
    auto it = col_index.find(d);
    if (it == col_index.end()) {
      col_index[d] = cols.size();
      target[i] = cols.size();
      cols.push_back(d);
    } else {
      target[i] = it->second;
    }
  }
  std::vector<std::vector<Rat>> entries(rows.size(), std::vector<Rat>(cols.size(), Rat(0)));
  for (size_t i = 0; i < rows.size(); ++i) entries[i][target[i]] = 1;
  return Channel(std::move(rows), std::move(cols), std::move(entries));
}

Channel hint_frequency(const std::string& person, const std::vector<Dataset>& secret_space) {
  if (secret_space.empty()) fail(Errc::ShapeMismatch, "empty secret space");
  std::map<Label, size_t> loc_index;
  Labels locations;
  for (const auto& d : secret_space) {
    if (!d.has_person(person)) {
      fail(Errc::UnknownPerson, "'" + person + "' is missing from dataset " + d.label());
    }
    for (const auto& [p, record] : d.records()) {
      for (const auto& loc : record) {
        if (loc_index.emplace(loc, 0).second) locations.push_back(loc);
      }
    }
  }
  std::sort(locations.begin(), locations.end());
  for (size_t i = 0; i < locations.size(); ++i) loc_index[locations[i]] = i;

  std::vector<std::vector<Rat>> entries;
  for (const auto& d : secret_space) {
    const auto& record = d.record(person);
    std::vector<Rat> row(locations.size(), Rat(0));
    Rat share(1, static_cast<long>(record.size()));
    for (const auto& loc : record) row[loc_index.at(loc)] += share;
    entries.push_back(std::move(row));
  }
  return Channel(dataset_labels(secret_space), std::move(locations), std::move(entries));
}

Channel hint_histogram(const std::vector<Dataset>& secret_space) {
  if (secret_space.empty()) fail(Errc::ShapeMismatch, "empty secret space");
  Labels cols;
  std::map<Label, size_t> col_index;
  std::vector<size_t> target(secret_space.size());
  for (size_t i = 0; i < secret_space.size(); ++i) {
    Label h = secret_space[i].histogram_label();
    auto it = col_index.find(h);
    if (it == col_index.end()) {
      col_index[h] = cols.size();
      target[i] = cols.size();
      cols.push_back(h);
    } else {
      target[i] = it->second;
    }
  }
  std::vector<std::vector<Rat>> entries(secret_space.size(),
                                        std::vector<Rat>(cols.size(), Rat(0)));
  for (size_t i = 0; i < secret_space.size(); ++i) entries[i][target[i]] = 1;
  return Channel(dataset_labels(secret_space), std::move(cols), std::move(entries));
}

Channel build_data_release(const std::vector<Dataset>& secret_space, const Channel& deid,
                           const Channel& mech_per_loc, const std::vector<Channel>& hints) {
  Labels secrets = dataset_labels(secret_space);
  if (deid.rows() != secrets) {
    fail(Errc::ShapeMismatch, "de-identification rows must match the secret space");
  }

  // All de-identified outputs must share one record structure.
  Dataset shape = Dataset::parse(deid.cols()[0]);
  for (const auto& col : deid.cols()) {
    Dataset d = Dataset::parse(col);
    if (d.records().size() != shape.records().size()) {
      fail(Errc::ShapeMismatch, "de-identified datasets disagree on record structure");
    }
    for (const auto& [person, record] : d.records()) {
      if (!shape.has_person(person) || shape.record(person).size() != record.size()) {
        fail(Errc::ShapeMismatch, "de-identified datasets disagree on record structure");
      }
    }
  }

  Channel lifted = mechanism_lift(mech_per_loc, shape).select_rows(deid.cols());
  Channel release = cascade(deid, lifted);
  for (auto it = hints.rbegin(); it != hints.rend(); ++it) {
    release = parallel(*it, release);
  }
  return release;
}

}  // namespace qif
