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

#include "qif/dist.hpp"

#include <unordered_set>

#include <nlohmann/json.hpp>

#include "qif/errors.hpp"

namespace qif {

using nlohmann::json;

namespace {

void check_unique(const Labels& labels) {
  std::unordered_set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) fail(Errc::DuplicateLabel, "duplicate label '" + l + "'");
  }
}

}  // namespace

Dist::Dist(Labels labels, std::vector<Rat> masses)
    : labels_(std::move(labels)), masses_(std::move(masses)) {
  if (labels_.size() != masses_.size()) {
    fail(Errc::ShapeMismatch, "label/mass length mismatch");
  }
  if (labels_.empty()) fail(Errc::ShapeMismatch, "distribution over empty label set");
  check_unique(labels_);
  Rat total = 0;
  for (size_t i = 0; i < masses_.size(); ++i) {
    if (masses_[i] < 0) {
      fail(Errc::NegativeMass, "negative mass at '" + labels_[i] + "'");
    }
    total += masses_[i];
  }
  if (total != 1) {
    fail(Errc::NotNormalized, "masses sum to " + rat_str(total) + ", expected 1");
  }
}

Dist Dist::point(const Label& x, const Labels& labels) {
  std::vector<Rat> masses(labels.size(), Rat(0));
  bool found = false;
  for (size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == x) {
      masses[i] = 1;
      found = true;
      break;
    }
  }
  if (!found) fail(Errc::UnknownLabel, "label '" + x + "' not in label set");
  return Dist(labels, std::move(masses));
}

Dist Dist::uniform(const Labels& labels) {
  if (labels.empty()) fail(Errc::ShapeMismatch, "uniform over empty label set");
  std::vector<Rat> masses(labels.size(), Rat(1, static_cast<long>(labels.size())));
  return Dist(labels, std::move(masses));
}

size_t Dist::index_of(const Label& x) const {
  for (size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == x) return i;
  }
  fail(Errc::UnknownLabel, "label '" + x + "' not in distribution");
}

bool Dist::has_label(const Label& x) const {
  for (const auto& l : labels_) {
    if (l == x) return true;
  }
  return false;
}

Labels Dist::support() const {
  Labels out;
  for (size_t i = 0; i < labels_.size(); ++i) {
    if (masses_[i] > 0) out.push_back(labels_[i]);
  }
  return out;
}

std::string Dist::to_json(int decimals) const {
  json j;
  j["labels"] = labels_;
  json mass = json::array();
  for (const auto& m : masses_) {
    mass.push_back(decimals < 0 ? rat_str(m) : rat_decimal(m, decimals));
  }
  j["mass"] = mass;
  return j.dump();
}

Dist Dist::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(Errc::Parse, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("labels") || !j.contains("mass")) {
    fail(Errc::Parse, "distribution JSON needs 'labels' and 'mass'");
  }
  Labels labels;
  for (const auto& l : j["labels"]) {
    if (!l.is_string()) fail(Errc::Parse, "labels must be strings");
    labels.push_back(l.get<std::string>());
  }
  std::vector<Rat> masses;
  for (const auto& m : j["mass"]) {
    if (m.is_string()) {
      masses.push_back(rat_parse(m.get<std::string>()));
    } else if (m.is_number_integer()) {
      masses.push_back(Rat(m.get<long long>()));
    } else {
      fail(Errc::Parse, "mass entries must be rational string literals or integers");
    }
  }
  return Dist(std::move(labels), std::move(masses));
}

}  // namespace qif
