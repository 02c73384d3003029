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

#include "qif/qif_c.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "qif/dataset.hpp"
#include "qif/errors.hpp"
#include "qif/refinement.hpp"
#include "qif/scenario.hpp"
#include "qif/simulate.hpp"
#include "qif/strategy.hpp"

using nlohmann::json;

struct qif_dist {
  qif::Dist value;
};
struct qif_channel {
  qif::Channel value;
};
struct qif_model {
  qif::AdversaryModel value;
};

namespace {

thread_local std::string g_last_error;

qif_status code_of(qif::Errc errc) {
  switch (errc) {
    case qif::Errc::Parse:
      return QIF_ERR_PARSE;
    case qif::Errc::ShapeMismatch:
      return QIF_ERR_SHAPE_MISMATCH;
    case qif::Errc::NotStochastic:
      return QIF_ERR_NOT_STOCHASTIC;
    case qif::Errc::NegativeEntry:
      return QIF_ERR_NEGATIVE_ENTRY;
    case qif::Errc::NotNormalized:
      return QIF_ERR_NOT_NORMALIZED;
    case qif::Errc::NegativeMass:
      return QIF_ERR_NEGATIVE_MASS;
    case qif::Errc::DuplicateLabel:
      return QIF_ERR_DUPLICATE_LABEL;
    case qif::Errc::UnknownLabel:
      return QIF_ERR_UNKNOWN_LABEL;
    case qif::Errc::ZeroProbabilityObservation:
      return QIF_ERR_ZERO_PROBABILITY_OBSERVATION;
    case qif::Errc::EnumerationTooLarge:
      return QIF_ERR_ENUMERATION_TOO_LARGE;
    case qif::Errc::UnknownScenario:
      return QIF_ERR_UNKNOWN_SCENARIO;
    case qif::Errc::UnknownPerson:
      return QIF_ERR_UNKNOWN_PERSON;
    case qif::Errc::InvalidArgument:
      return QIF_ERR_INVALID_ARGUMENT;
  }
  return QIF_ERR_INTERNAL;
}

template <typename Fn>
qif_status guard(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return QIF_OK;
  } catch (const qif::Error& e) {
    g_last_error = e.what();
    return code_of(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return QIF_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

qif_status require(bool ok, const char* message) {
  if (ok) return QIF_OK;
  g_last_error = message;
  return QIF_ERR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* qif_last_error(void) { return g_last_error.c_str(); }

void qif_string_free(char* s) { std::free(s); }

qif_status qif_dist_from_json(const char* text, qif_dist** out) {
  if (auto st = require(text && out, "null argument")) return st;
  return guard([&] { *out = new qif_dist{qif::Dist::from_json(text)}; });
}

qif_status qif_dist_to_json(const qif_dist* d, int decimals, char** out) {
  if (auto st = require(d && out, "null argument")) return st;
  return guard([&] { *out = dup_string(d->value.to_json(decimals)); });
}

void qif_dist_free(qif_dist* d) { delete d; }

qif_status qif_channel_from_json(const char* text, qif_channel** out) {
  if (auto st = require(text && out, "null argument")) return st;
  return guard([&] { *out = new qif_channel{qif::Channel::from_json(text)}; });
}

qif_status qif_channel_from_csv(const char* text, qif_channel** out) {
  if (auto st = require(text && out, "null argument")) return st;
  return guard([&] { *out = new qif_channel{qif::Channel::from_csv(text)}; });
}

qif_status qif_channel_to_json(const qif_channel* c, int decimals, char** out) {
  if (auto st = require(c && out, "null argument")) return st;
  return guard([&] { *out = dup_string(c->value.to_json(decimals)); });
}

qif_status qif_channel_to_csv(const qif_channel* c, char** out) {
  if (auto st = require(c && out, "null argument")) return st;
  return guard([&] { *out = dup_string(c->value.to_csv()); });
}

qif_status qif_channel_cascade(const qif_channel* c, const qif_channel* d,
                               qif_channel** out) {
  if (auto st = require(c && d && out, "null argument")) return st;
  return guard([&] { *out = new qif_channel{qif::cascade(c->value, d->value)}; });
}

qif_status qif_channel_parallel(const qif_channel* c, const qif_channel* d,
                                qif_channel** out) {
  if (auto st = require(c && d && out, "null argument")) return st;
  return guard([&] { *out = new qif_channel{qif::parallel(c->value, d->value)}; });
}

void qif_channel_free(qif_channel* c) { delete c; }

qif_status qif_model_from_json(const char* text, qif_model** out) {
  if (auto st = require(text && out, "null argument")) return st;
  return guard([&] { *out = new qif_model{qif::model_from_json(text)}; });
}

qif_status qif_model_to_json(const qif_model* m, char** out) {
  if (auto st = require(m && out, "null argument")) return st;
  return guard([&] { *out = dup_string(qif::model_to_json(m->value)); });
}

void qif_model_free(qif_model* m) { delete m; }

qif_status qif_eval_static(const qif_model* m, const char* kind, const qif_dist* prior,
                           const qif_channel* c, int decimals, char** out_json) {
  if (auto st = require(m && kind && prior && c && out_json, "null argument")) return st;
  return guard([&] {
    std::string k = kind;
    qif::CaseKind case_kind;
    if (k == "expected") {
      case_kind = qif::CaseKind::Expected;
    } else if (k == "extreme") {
      case_kind = qif::CaseKind::Extreme;
    } else {
      qif::fail(qif::Errc::InvalidArgument, "kind must be 'expected' or 'extreme'");
    }
    json j;
    j["kind"] = k;
    j["prior"] = qif::measure_value(m->value, prior->value).str(decimals);
    j["posterior"] =
        qif::static_posterior(m->value, case_kind, prior->value, c->value).str(decimals);
    j["leakage"] =
        qif::static_leakage(m->value, case_kind, prior->value, c->value).str(decimals);
    *out_json = dup_string(j.dump());
  });
}

qif_status qif_dynamic(const qif_model* m, const qif_dist* prior, const qif_channel* c,
                       const char* observe, const char* mode, int decimals,
                       char** out_json) {
  if (auto st = require(m && prior && c && observe && mode && out_json, "null argument")) {
    return st;
  }
  return guard([&] {
    std::string mode_name = mode;
    if (mode_name == "traditional") {
      json j;
      j["mode"] = "traditional";
      j["observation"] = observe;
      j["leakage"] =
          qif::traditional_dynamic_leakage(m->value, prior->value, c->value, observe)
              .str(decimals);
      *out_json = dup_string(j.dump());
    } else if (mode_name == "strategy") {
      qif::LeakageReport report =
          qif::st_dynamic_leakage(m->value, prior->value, c->value, observe);
      json j = json::parse(report.to_json(decimals));
      j["mode"] = "strategy";
      j["observation"] = observe;
      *out_json = dup_string(j.dump());
    } else {
      qif::fail(qif::Errc::InvalidArgument, "mode must be 'traditional' or 'strategy'");
    }
  });
}

qif_status qif_strategy_report(const qif_model* m, const qif_dist* belief, int decimals,
                               char** out_json) {
  if (auto st = require(m && belief && out_json, "null argument")) return st;
  return guard([&] {
    qif::Strategy strategy = qif::uniform_strategy(m->value, belief->value);
    json j;
    j["analytic"] = strategy.analytic;
    if (!strategy.analytic) {
      j["optimal_actions"] = qif::optimal_actions(m->value, belief->value);
    }
    j["strategy"] = json::parse(strategy.dist.to_json(decimals));
    *out_json = dup_string(j.dump());
  });
}

qif_status qif_multi_step(const qif_model* m, const qif_dist* baseline,
                          const qif_dist* prior, const qif_dist* posterior_belief,
                          int decimals, char** out_json) {
  if (auto st = require(m && baseline && prior && posterior_belief && out_json,
                        "null argument")) {
    return st;
  }
  return guard([&] {
    qif::LeakageReport report = qif::multi_step_report(
        m->value, baseline->value, prior->value, posterior_belief->value);
    *out_json = dup_string(report.to_json(decimals));
  });
}

qif_status qif_refinement_witness(const qif_channel* c, const qif_channel* d,
                                  qif_channel** out) {
  if (auto st = require(c && d && out, "null argument")) return st;
  return guard([&] {
    auto witness = qif::refinement_witness(c->value, d->value);
    *out = witness.has_value() ? new qif_channel{std::move(*witness)} : nullptr;
  });
}

qif_status qif_scenario_list(char** out_json) {
  if (auto st = require(out_json != nullptr, "null argument")) return st;
  return guard([&] {
    json names = json::array();
    for (const auto& s : qif::scenario_registry()) names.push_back(s.name);
    *out_json = dup_string(names.dump());
  });
}

qif_status qif_scenario_run(const char* name, int decimals, char** out_json) {
  if (auto st = require(name && out_json, "null argument")) return st;
  return guard([&] {
    const qif::Scenario& scenario = qif::find_scenario(name);
    *out_json = dup_string(qif::run_scenario(scenario).to_json(decimals));
  });
}

qif_status qif_scenario_export(const char* name, const char* directory) {
  if (auto st = require(name && directory, "null argument")) return st;
  return guard([&] {
    const qif::Scenario& scenario = qif::find_scenario(name);
    auto write = [&](const std::string& file, const std::string& body) {
      std::ofstream out(std::string(directory) + "/" + file);
      if (!out) {
        qif::fail(qif::Errc::InvalidArgument,
                  "cannot write to '" + std::string(directory) + "/" + file + "'");
      }
      out << body << "\n";
    };
    write("prior.json", scenario.prior.to_json());
    for (const auto& [channel_name, channel] : scenario.channels) {
      write("channel_" + channel_name + ".json", channel.to_json());
    }
    json manifest;
    manifest["name"] = scenario.name;
    manifest["description"] = scenario.description;
    json obs = json::object();
    for (const auto& [key, label] : scenario.observations) obs[key] = label;
    manifest["observations"] = obs;
    write("scenario.json", manifest.dump(2));
  });
}

qif_status qif_simulate(const qif_dist* prior, const qif_channel* const* stages,
                        size_t stage_count, const qif_model* model, const char* budget,
                        uint64_t seed, int decimals, char** out_jsonl) {
  if (auto st = require(prior && stages && stage_count > 0 && out_jsonl, "null argument")) {
    return st;
  }
  return guard([&] {
    std::vector<qif::Channel> chans;
    chans.reserve(stage_count);
    for (size_t i = 0; i < stage_count; ++i) {
      if (stages[i] == nullptr) qif::fail(qif::Errc::InvalidArgument, "null stage");
      chans.push_back(stages[i]->value);
    }
    qif::Pipeline pipeline(prior->value, std::move(chans));
    qif::Trace trace;
    if (model != nullptr) {
      qif::XVal limit =
          budget != nullptr ? qif::XVal::parse(budget) : qif::XVal::infinity();
      trace = qif::monitor_run(pipeline, model->value, limit, seed);
    } else {
      trace = qif::sample_trace(pipeline, seed);
    }
    *out_jsonl = dup_string(trace.to_jsonl(decimals));
  });
}

qif_status qif_verify_consistency(const qif_model* m, const qif_dist* prior,
                                  const qif_channel* c, const qif_channel* post,
                                  char** out_json) {
  if (auto st = require(m && prior && c && out_json, "null argument")) return st;
  return guard([&] {
    std::optional<qif::Channel> r;
    if (post != nullptr) r = post->value;
    *out_json =
        dup_string(qif::verify_consistency(prior->value, c->value, r, m->value).to_json());
  });
}

}  // extern "C"
