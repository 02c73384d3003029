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

#include "qif/channel.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "qif/errors.hpp"

namespace qif {

using nlohmann::json;

namespace {

void check_unique(const Labels& labels, const char* what) {
  std::unordered_set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) {
      fail(Errc::DuplicateLabel, std::string("duplicate ") + what + " label '" + l + "'");
    }
  }
}

size_t find_label(const Labels& labels, const Label& x, const char* what) {
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == x) return i;
  }
  fail(Errc::UnknownLabel, std::string("unknown ") + what + " label '" + x + "'");
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

Channel::Channel(Labels rows, Labels cols, std::vector<std::vector<Rat>> entries)
    : rows_(std::move(rows)), cols_(std::move(cols)), entries_(std::move(entries)) {
  if (rows_.empty() || cols_.empty()) fail(Errc::ShapeMismatch, "empty channel");
  check_unique(rows_, "row");
  check_unique(cols_, "column");
  if (entries_.size() != rows_.size()) {
    fail(Errc::ShapeMismatch, "entry matrix has wrong number of rows");
  }
  for (size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].size() != cols_.size()) {
      fail(Errc::ShapeMismatch, "row '" + rows_[i] + "' has wrong number of entries");
    }
    Rat total = 0;
    for (const auto& e : entries_[i]) {
      if (e < 0) fail(Errc::NegativeEntry, "negative entry in row '" + rows_[i] + "'");
      total += e;
    }
    if (total != 1) {
      fail(Errc::NotStochastic,
           "row '" + rows_[i] + "' sums to " + rat_str(total) + ", expected 1");
    }
  }
}

Channel Channel::identity(const Labels& labels) {
  std::vector<std::vector<Rat>> entries(labels.size(), std::vector<Rat>(labels.size(), Rat(0)));
  for (size_t i = 0; i < labels.size(); ++i) entries[i][i] = 1;
  return Channel(labels, labels, std::move(entries));
}

const Rat& Channel::at(const Label& row, const Label& col) const {
  return entries_[row_index(row)][col_index(col)];
}

size_t Channel::row_index(const Label& x) const { return find_label(rows_, x, "row"); }

size_t Channel::col_index(const Label& y) const { return find_label(cols_, y, "column"); }

Dist Channel::row_dist(size_t row) const { return Dist(cols_, entries_[row]); }

Channel Channel::select_rows(const Labels& wanted) const {
  std::vector<std::vector<Rat>> entries;
  entries.reserve(wanted.size());
  for (const auto& x : wanted) entries.push_back(entries_[row_index(x)]);
  return Channel(wanted, cols_, std::move(entries));
}

std::string Channel::to_json(int decimals) const {
  json j;
  j["rows"] = rows_;
  j["cols"] = cols_;
  json rows = json::array();
  for (const auto& row : entries_) {
    json r = json::array();
    for (const auto& e : row) {
      r.push_back(decimals < 0 ? rat_str(e) : rat_decimal(e, decimals));
    }
    rows.push_back(std::move(r));
  }
  j["entries"] = rows;
  return j.dump();
}

Channel Channel::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(Errc::Parse, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("entries")) {
    fail(Errc::Parse, "channel JSON needs 'rows', 'cols' and 'entries'");
  }
  Labels rows, cols;
  for (const auto& l : j["rows"]) rows.push_back(l.get<std::string>());
  for (const auto& l : j["cols"]) cols.push_back(l.get<std::string>());
  std::vector<std::vector<Rat>> entries;
  for (const auto& row : j["entries"]) {
    std::vector<Rat> r;
    for (const auto& e : row) {
      if (e.is_string()) {
        r.push_back(rat_parse(e.get<std::string>()));
      } else if (e.is_number_integer()) {
        r.push_back(Rat(e.get<long long>()));
      } else {
        fail(Errc::Parse, "channel entries must be rational string literals or integers");
      }
    }
    entries.push_back(std::move(r));
  }
  return Channel(std::move(rows), std::move(cols), std::move(entries));
}

std::string Channel::to_csv() const {
  std::ostringstream out;
  for (size_t j = 0; j < cols_.size(); ++j) {
    if (j) out << ",";
    out << csv_field(cols_[j]);
  }
  out << "\n";
  for (size_t i = 0; i < rows_.size(); ++i) {
    out << csv_field(rows_[i]);
    for (const auto& e : entries_[i]) out << "," << csv_field(rat_str(e));
    out << "\n";
  }
  return out.str();
}

Channel Channel::from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  Labels cols;
  Labels rows;
  std::vector<std::vector<Rat>> entries;
  bool header_done = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = csv_split(line);
    if (!header_done) {
      // Tolerate a leading empty field above the row-label column.
      size_t start = (!fields.empty() && fields[0].empty()) ? 1 : 0;
      cols.assign(fields.begin() + start, fields.end());
      header_done = true;
      continue;
    }
    if (fields.size() != cols.size() + 1) {
      fail(Errc::Parse, "CSV row '" + fields[0] + "' has wrong field count");
    }
    rows.push_back(fields[0]);
    std::vector<Rat> r;
    for (size_t j = 1; j < fields.size(); ++j) r.push_back(rat_parse(fields[j]));
    entries.push_back(std::move(r));
  }
  if (!header_done) fail(Errc::Parse, "empty CSV channel");
  return Channel(std::move(rows), std::move(cols), std::move(entries));
}

bool Hyper::feasible(const Label& y) const {
  return inners_[outer_.index_of(y)].has_value();
}

const Dist& Hyper::inner(const Label& y) const {
  const auto& slot = inners_[outer_.index_of(y)];
  if (!slot.has_value()) {
    fail(Errc::ZeroProbabilityObservation, "output '" + y + "' has probability 0");
  }
  return *slot;
}

std::vector<std::pair<Dist, Rat>> Hyper::reduced() const {
  std::vector<std::pair<Dist, Rat>> acc;
  for (size_t i = 0; i < outer_.size(); ++i) {
    if (!inners_[i].has_value()) continue;
    const Dist& inner = *inners_[i];
    bool merged = false;
    for (auto& [d, mass] : acc) {
      if (d == inner) {
        mass += outer_.mass(i);
        merged = true;
        break;
      }
    }
    if (!merged) acc.emplace_back(inner, outer_.mass(i));
  }
  std::sort(acc.begin(), acc.end(), [](const auto& a, const auto& b) {
    return a.first.masses() < b.first.masses();
  });
  return acc;
}

bool hyper_equivalent(const Hyper& a, const Hyper& b) {
  return a.reduced() == b.reduced();
}

Channel cascade(const Channel& c, const Channel& d) {
  if (c.cols() != d.rows()) {
    fail(Errc::ShapeMismatch, "cascade: cols of first channel must equal rows of second");
  }
  std::vector<std::vector<Rat>> entries(c.row_count(),
                                        std::vector<Rat>(d.col_count(), Rat(0)));
  for (size_t x = 0; x < c.row_count(); ++x) {
    for (size_t y = 0; y < c.col_count(); ++y) {
      const Rat& cxy = c.at(x, y);
      if (cxy == 0) continue;
      for (size_t z = 0; z < d.col_count(); ++z) {
        entries[x][z] += cxy * d.at(y, z);
      }
    }
  }
  return Channel(c.rows(), d.cols(), std::move(entries));
}

Label pair_label(const Label& y, const Label& z) { return y + "," + z; }

Channel parallel(const Channel& c, const Channel& d) {
  if (c.rows() != d.rows()) {
    fail(Errc::ShapeMismatch, "parallel: channels must share the same input labels");
  }
  Labels cols;
  cols.reserve(c.col_count() * d.col_count());
  for (const auto& y : c.cols()) {
    for (const auto& z : d.cols()) cols.push_back(pair_label(y, z));
  }
  std::vector<std::vector<Rat>> entries(c.row_count());
  for (size_t x = 0; x < c.row_count(); ++x) {
    entries[x].reserve(cols.size());
    for (size_t y = 0; y < c.col_count(); ++y) {
      for (size_t z = 0; z < d.col_count(); ++z) {
        entries[x].push_back(c.at(x, y) * d.at(x, z));
      }
    }
  }
  return Channel(c.rows(), std::move(cols), std::move(entries));
}

std::vector<std::vector<Rat>> joint(const Dist& prior, const Channel& c) {
  if (prior.labels() != c.rows()) {
    fail(Errc::ShapeMismatch, "joint: prior labels must equal channel rows");
  }
  std::vector<std::vector<Rat>> j(c.row_count(), std::vector<Rat>(c.col_count()));
  for (size_t x = 0; x < c.row_count(); ++x) {
    for (size_t y = 0; y < c.col_count(); ++y) j[x][y] = prior.mass(x) * c.at(x, y);
  }
  return j;
}

Dist outer(const Dist& prior, const Channel& c) {
  auto j = joint(prior, c);
  std::vector<Rat> masses(c.col_count(), Rat(0));
  for (size_t x = 0; x < c.row_count(); ++x) {
    for (size_t y = 0; y < c.col_count(); ++y) masses[y] += j[x][y];
  }
  return Dist(c.cols(), std::move(masses));
}

Dist posterior(const Dist& prior, const Channel& c, const Label& y) {
  size_t col = c.col_index(y);
  auto j = joint(prior, c);
  Rat total = 0;
  for (size_t x = 0; x < c.row_count(); ++x) total += j[x][col];
  if (total == 0) {
    fail(Errc::ZeroProbabilityObservation, "output '" + y + "' has probability 0");
  }
  std::vector<Rat> masses(c.row_count());
  for (size_t x = 0; x < c.row_count(); ++x) masses[x] = j[x][col] / total;
  return Dist(c.rows(), std::move(masses));
}

Hyper hyper(const Dist& prior, const Channel& c) {
  Dist out = outer(prior, c);
  std::vector<std::optional<Dist>> inners(c.col_count());
  for (size_t y = 0; y < c.col_count(); ++y) {
    if (out.mass(y) > 0) inners[y] = posterior(prior, c, c.cols()[y]);
  }
  return Hyper(std::move(out), std::move(inners));
}

Channel null_channel(const Labels& rows) {
  std::vector<std::vector<Rat>> entries(rows.size(), std::vector<Rat>(1, Rat(1)));
  return Channel(rows, Labels{kBottom}, std::move(entries));
}

}  // namespace qif
