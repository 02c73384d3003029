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

#include "qif/simulate.hpp"

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qif/errors.hpp"

namespace qif {

using nlohmann::json;

Pipeline::Pipeline(Dist prior_in, std::vector<Channel> stages_in)
    : prior(std::move(prior_in)), stages(std::move(stages_in)) {
  if (stages.empty()) fail(Errc::ShapeMismatch, "pipeline needs at least one stage");
  if (prior.labels() != stages[0].rows()) {
    fail(Errc::ShapeMismatch, "prior labels must match the first stage's rows");
  }
  for (size_t i = 0; i + 1 < stages.size(); ++i) {
    if (stages[i].cols() != stages[i + 1].rows()) {
      fail(Errc::ShapeMismatch,
           "stage " + std::to_string(i) + " columns must match stage " +
               std::to_string(i + 1) + " rows");
    }
  }
}

bool Trace::aborted() const {
  return !continued.empty() && !continued.back();
}

std::string Trace::to_jsonl(int decimals) const {
  std::ostringstream out;
  json header;
  header["seed"] = seed;
  header["secret"] = secret;
  out << header.dump() << "\n";
  for (size_t i = 0; i < step_outputs.size(); ++i) {
    json step;
    step["step"] = i;
    step["output"] = step_outputs[i];
    if (i < reports.size()) {
      step["leakage"] = reports[i].leakage.str(decimals);
      step["verdict"] = continued[i] ? "continue" : "abort";
    }
    out << step.dump() << "\n";
  }
  return out.str();
}

uint64_t stream_draw(uint64_t seed, uint64_t index) {
  uint64_t x = seed ^ (index * 0x9E3779B97F4A7C15ull);
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

Label sample_label(const Dist& dist, uint64_t draw) {
  static const Int kTwo64 = Int(1) << 64;
  Rat point(Int(draw), kTwo64);
  Rat cumulative = 0;
  for (size_t i = 0; i < dist.size(); ++i) {
    cumulative += dist.mass(i);
    if (point < cumulative) return dist.labels()[i];
  }
  // point < 1 and the masses sum to 1, so we cannot fall through; return the
  // last label regardless.
  return dist.labels().back();
}

namespace {

Trace run(const Pipeline& pipeline, const AdversaryModel* model, const XVal* budget,
          uint64_t seed) {
  Trace trace;
  trace.seed = seed;
  trace.secret = sample_label(pipeline.prior, stream_draw(seed, 0));

  Label current = trace.secret;
  std::optional<Channel> prefix;
  for (size_t i = 0; i < pipeline.stages.size(); ++i) {
    const Channel& stage = pipeline.stages[i];
    Dist row = stage.row_dist(stage.row_index(current));
    current = sample_label(row, stream_draw(seed, i + 1));
    trace.step_outputs.push_back(current);
    if (model == nullptr) continue;

    prefix = prefix.has_value() ? cascade(*prefix, stage) : stage;
    LeakageReport report = st_dynamic_leakage(*model, pipeline.prior, *prefix, current);
    bool keep_going = report.leakage <= *budget;
    trace.reports.push_back(std::move(report));
    trace.continued.push_back(keep_going);
    if (!keep_going) break;  // remaining stages unexecuted
  }
  return trace;
}

}  // namespace

Trace sample_trace(const Pipeline& pipeline, uint64_t seed) {
  return run(pipeline, nullptr, nullptr, seed);
}

Trace monitor_run(const Pipeline& pipeline, const AdversaryModel& model,
                  const XVal& budget, uint64_t seed) {
  if (budget < XVal::exact(Rat(0))) {
    fail(Errc::InvalidArgument, "monitor budget must be non-negative");
  }
  return run(pipeline, &model, &budget, seed);
}

bool ConsistencyReport::all_pass() const {
  for (const auto& i : identities) {
    if (!i.pass) return false;
  }
  return true;
}

std::string ConsistencyReport::to_json() const {
  json j;
  j["pass"] = all_pass();
  json rows = json::array();
  for (const auto& i : identities) {
    json row;
    row["identity"] = i.name;
    row["residual"] = i.residual.str();
    row["pass"] = i.pass;
    rows.push_back(std::move(row));
  }
  j["identities"] = rows;
  return j.dump();
}

namespace {

bool residual_ok(const XVal& residual) {
  if (residual.is_exact()) return residual.exact_value() == 0;
  if (!residual.is_finite()) return false;
  return std::abs(residual.as_double()) < 1e-9;
}

void push_identity(ConsistencyReport* report, const std::string& name, XVal lhs,
                   XVal rhs) {
  XVal residual = lhs - rhs;
  report->identities.push_back({name, residual, residual_ok(residual)});
}

}  // namespace

ConsistencyReport verify_consistency(const Dist& prior, const Channel& c,
                                     const std::optional<Channel>& post,
                                     const AdversaryModel& model) {
  const bool gains = is_gain(model);
  Dist out_c = outer(prior, c);
  std::vector<std::optional<Dist>> posts_c(c.col_count());
  for (size_t y = 0; y < c.col_count(); ++y) {
    if (out_c.mass(y) > 0) posts_c[y] = posterior(prior, c, c.cols()[y]);
  }

  ConsistencyReport report;

  // Expected posterior recovery.
  XVal expected = XVal::exact(Rat(0));
  for (size_t y = 0; y < c.col_count(); ++y) {
    if (!posts_c[y]) continue;
    expected = expected + st_measure(model, *posts_c[y], *posts_c[y]).scaled(out_c.mass(y));
  }
  push_identity(&report, "expected-posterior-recovery", expected,
                static_posterior(model, CaseKind::Expected, prior, c));

  // Extreme posterior recovery (max for gains, min for losses).
  bool first = true;
  XVal extreme;
  for (size_t y = 0; y < c.col_count(); ++y) {
    if (!posts_c[y]) continue;
    XVal v = st_measure(model, *posts_c[y], *posts_c[y]);
    if (first || (gains ? extreme < v : v < extreme)) {
      extreme = v;
      first = false;
    }
  }
  push_identity(&report, "extreme-posterior-recovery", extreme,
                static_posterior(model, CaseKind::Extreme, prior, c));

  // Prior recovery: following the prior strategy, extra knowledge buys nothing.
  XVal prior_side = XVal::exact(Rat(0));
  for (size_t y = 0; y < c.col_count(); ++y) {
    if (!posts_c[y]) continue;
    prior_side = prior_side + st_measure(model, *posts_c[y], prior).scaled(out_c.mass(y));
  }
  push_identity(&report, "prior-recovery", prior_side, measure_value(model, prior));

  if (!post.has_value()) return report;

  const Channel& r = *post;
  Channel d = cascade(c, r);
  Dist out_d = outer(prior, d);
  std::vector<std::optional<Dist>> posts_d(d.col_count());
  for (size_t z = 0; z < d.col_count(); ++z) {
    if (out_d.mass(z) > 0) posts_d[z] = posterior(prior, d, d.cols()[z]);
  }

  // Refined expected recovery over all realisable (y, z) pairs.
  XVal refined = XVal::exact(Rat(0));
  for (size_t z = 0; z < d.col_count(); ++z) {
    if (!posts_d[z]) continue;
    for (size_t y = 0; y < c.col_count(); ++y) {
      if (!posts_c[y]) continue;
      Rat weight = out_c.mass(y) * r.at(y, z);
      if (weight == 0) continue;
      refined = refined + st_measure(model, *posts_c[y], *posts_d[z]).scaled(weight);
    }
  }
  push_identity(&report, "refined-expected-recovery", refined,
                static_posterior(model, CaseKind::Expected, prior, d));

  // Refined extreme recovery, normalised per realised z.
  first = true;
  XVal refined_extreme;
  for (size_t z = 0; z < d.col_count(); ++z) {
    if (!posts_d[z]) continue;
    XVal acc = XVal::exact(Rat(0));
    for (size_t y = 0; y < c.col_count(); ++y) {
      if (!posts_c[y]) continue;
      Rat weight = out_c.mass(y) * r.at(y, z);
      if (weight == 0) continue;
      acc = acc + st_measure(model, *posts_c[y], *posts_d[z]).scaled(weight);
    }
    XVal v = acc.scaled(Rat(1 / out_d.mass(z)));
    if (first || (gains ? refined_extreme < v : v < refined_extreme)) {
      refined_extreme = v;
      first = false;
    }
  }
  push_identity(&report, "refined-extreme-recovery", refined_extreme,
                static_posterior(model, CaseKind::Extreme, prior, d));

  return report;
}

}  // namespace qif
