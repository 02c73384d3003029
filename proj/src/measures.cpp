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

#include "qif/measures.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "qif/errors.hpp"

namespace qif {

using nlohmann::json;

namespace {

// A model either names its secrets (which must then match the distribution's
// labels exactly) or is bound positionally by arity.
void check_binding(const Labels& secrets, size_t width, const Dist& p, const char* what) {
  if (!secrets.empty()) {
    if (secrets != p.labels()) {
      fail(Errc::ShapeMismatch, std::string(what) + ": secrets do not match distribution labels");
    }
  } else if (width != p.size()) {
    fail(Errc::ShapeMismatch, std::string(what) + ": matrix width does not match distribution size");
  }
}

XVal expected_loss(const LossMatrix& loss, size_t action, const Dist& p) {
  XVal total = XVal::exact(Rat(0));
  for (size_t x = 0; x < p.size(); ++x) {
    total = total + loss.values[action][x].scaled(p.mass(x));
  }
  return total;
}

}  // namespace

MeasureKind kind_of(const AdversaryModel& model) {
  return std::holds_alternative<GainMatrix>(model) ? MeasureKind::Vulnerability
                                                   : MeasureKind::Uncertainty;
}

bool is_gain(const AdversaryModel& model) {
  return std::holds_alternative<GainMatrix>(model);
}

void validate_model(const AdversaryModel& model) {
  if (const auto* g = std::get_if<GainMatrix>(&model)) {
    if (g->actions.empty()) fail(Errc::ShapeMismatch, "gain matrix with no actions");
    if (g->values.size() != g->actions.size()) {
      fail(Errc::ShapeMismatch, "gain matrix has wrong number of action rows");
    }
    for (const auto& row : g->values) {
      if (row.size() != g->values[0].size()) {
        fail(Errc::ShapeMismatch, "ragged gain matrix");
      }
    }
    if (!g->secrets.empty() && g->secrets.size() != g->values[0].size()) {
      fail(Errc::ShapeMismatch, "gain matrix width does not match secrets");
    }
  } else if (const auto* l = std::get_if<LossMatrix>(&model)) {
    if (l->actions.empty()) fail(Errc::ShapeMismatch, "loss matrix with no actions");
    if (l->values.size() != l->actions.size()) {
      fail(Errc::ShapeMismatch, "loss matrix has wrong number of action rows");
    }
    for (const auto& row : l->values) {
      if (row.size() != l->values[0].size()) fail(Errc::ShapeMismatch, "ragged loss matrix");
      for (const auto& v : row) {
        if (v.is_neg_inf() || (v.is_exact() && v.exact_value() < 0) || v.is_real()) {
          fail(Errc::NegativeEntry, "loss entries must be exact non-negative or inf");
        }
      }
    }
    if (!l->secrets.empty() && l->secrets.size() != l->values[0].size()) {
      fail(Errc::ShapeMismatch, "loss matrix width does not match secrets");
    }
  }
}

GainMatrix identity_gain(const Labels& secrets) {
  if (secrets.empty()) fail(Errc::ShapeMismatch, "identity gain over empty secret set");
  GainMatrix g;
  g.actions = secrets;
  g.secrets = secrets;
  g.values.assign(secrets.size(), std::vector<Rat>(secrets.size(), Rat(0)));
  for (size_t i = 0; i < secrets.size(); ++i) g.values[i][i] = 1;
  return g;
}

Rat vg(const GainMatrix& gain, const Dist& p) {
  check_binding(gain.secrets, gain.values.empty() ? 0 : gain.values[0].size(), p, "vg");
  bool first = true;
  Rat best = 0;
  for (size_t w = 0; w < gain.actions.size(); ++w) {
    Rat total = 0;
    for (size_t x = 0; x < p.size(); ++x) total += p.mass(x) * gain.values[w][x];
    if (first || total > best) {
      best = total;
      first = false;
    }
  }
  return best;
}

XVal ul(const AdversaryModel& loss_model, const Dist& p) {
  if (std::holds_alternative<ShannonLoss>(loss_model)) {
    return XVal::real(shannon_entropy(p));
  }
  const auto* loss = std::get_if<LossMatrix>(&loss_model);
  if (loss == nullptr) fail(Errc::InvalidArgument, "ul needs a loss model");
  check_binding(loss->secrets, loss->values.empty() ? 0 : loss->values[0].size(), p, "ul");
  bool first = true;
  XVal best;
  for (size_t w = 0; w < loss->actions.size(); ++w) {
    XVal total = expected_loss(*loss, w, p);
    if (first || total < best) {
      best = total;
      first = false;
    }
  }
  return best;
}

double shannon_entropy(const Dist& p) {
  double h = 0.0;
  for (size_t x = 0; x < p.size(); ++x) {
    if (p.mass(x) == 0) continue;
    double px = rat_double(p.mass(x));
    h -= px * std::log2(px);
  }
  return h;
}

XVal measure_value(const AdversaryModel& model, const Dist& p) {
  if (const auto* g = std::get_if<GainMatrix>(&model)) return XVal::exact(vg(*g, p));
  return ul(model, p);
}

XVal static_posterior(const AdversaryModel& model, CaseKind kind, const Dist& prior,
                      const Channel& c) {
  Dist out = outer(prior, c);
  bool first = true;
  XVal acc = XVal::exact(Rat(0));
  XVal extreme;
  const bool gains = is_gain(model);
  for (size_t y = 0; y < c.col_count(); ++y) {
    if (out.mass(y) == 0) continue;
    XVal value = measure_value(model, posterior(prior, c, c.cols()[y]));
    if (kind == CaseKind::Expected) {
      acc = acc + value.scaled(out.mass(y));
    } else if (first || (gains ? extreme < value : value < extreme)) {
      extreme = value;
      first = false;
    }
  }
  return kind == CaseKind::Expected ? acc : extreme;
}

XVal static_leakage(const AdversaryModel& model, CaseKind kind, const Dist& prior,
                    const Channel& c) {
  XVal post = static_posterior(model, kind, prior, c);
  XVal pri = measure_value(model, prior);
  return is_gain(model) ? post - pri : pri - post;
}

XVal traditional_dynamic_leakage(const AdversaryModel& model, const Dist& prior,
                                 const Channel& c, const Label& y) {
  XVal post = measure_value(model, posterior(prior, c, y));
  XVal pri = measure_value(model, prior);
  return is_gain(model) ? post - pri : pri - post;
}

std::string model_to_json(const AdversaryModel& model) {
  json j;
  if (const auto* g = std::get_if<GainMatrix>(&model)) {
    j["kind"] = "gain";
    j["actions"] = g->actions;
    if (!g->secrets.empty()) j["secrets"] = g->secrets;
    json rows = json::array();
    for (const auto& row : g->values) {
      json r = json::array();
      for (const auto& v : row) r.push_back(rat_str(v));
      rows.push_back(std::move(r));
    }
    j["values"] = rows;
  } else if (const auto* l = std::get_if<LossMatrix>(&model)) {
    j["kind"] = "loss";
    j["actions"] = l->actions;
    if (!l->secrets.empty()) j["secrets"] = l->secrets;
    json rows = json::array();
    for (const auto& row : l->values) {
      json r = json::array();
      for (const auto& v : row) r.push_back(v.str());
      rows.push_back(std::move(r));
    }
    j["values"] = rows;
  } else {
    j["kind"] = "shannon";
  }
  return j.dump();
}

AdversaryModel model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(Errc::Parse, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("kind")) fail(Errc::Parse, "model JSON needs 'kind'");
  std::string kind = j["kind"].get<std::string>();
  if (kind == "shannon") return ShannonLoss{};
  if (kind != "gain" && kind != "loss") {
    fail(Errc::Parse, "model kind must be 'gain', 'loss' or 'shannon'");
  }
  if (!j.contains("actions") || !j.contains("values")) {
    fail(Errc::Parse, "matrix model JSON needs 'actions' and 'values'");
  }
  Labels actions;
  for (const auto& a : j["actions"]) actions.push_back(a.get<std::string>());
  Labels secrets;
  if (j.contains("secrets")) {
    for (const auto& s : j["secrets"]) secrets.push_back(s.get<std::string>());
  }
  if (kind == "gain") {
    GainMatrix g;
    g.actions = std::move(actions);
    g.secrets = std::move(secrets);
    for (const auto& row : j["values"]) {
      std::vector<Rat> r;
      for (const auto& v : row) r.push_back(rat_parse(v.get<std::string>()));
      g.values.push_back(std::move(r));
    }
    AdversaryModel model = std::move(g);
    validate_model(model);
    return model;
  }
  LossMatrix l;
  l.actions = std::move(actions);
  l.secrets = std::move(secrets);
  for (const auto& row : j["values"]) {
    std::vector<XVal> r;
    for (const auto& v : row) r.push_back(XVal::parse(v.get<std::string>()));
    l.values.push_back(std::move(r));
  }
  AdversaryModel model = std::move(l);
  validate_model(model);
  return model;
}

}  // namespace qif
