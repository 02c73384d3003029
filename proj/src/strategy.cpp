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

#include "qif/strategy.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "qif/errors.hpp"

namespace qif {

using nlohmann::json;

namespace {

void check_same_labels(const Dist& baseline, const Dist& belief) {
  if (baseline.labels() != belief.labels()) {
    fail(Errc::ShapeMismatch, "baseline and belief must share the same secret labels");
  }
}

std::vector<size_t> optimal_indices_gain(const GainMatrix& g, const Dist& q) {
  std::vector<size_t> best;
  Rat best_value = 0;
  for (size_t w = 0; w < g.actions.size(); ++w) {
    Rat total = 0;
    for (size_t x = 0; x < q.size(); ++x) total += q.mass(x) * g.values[w][x];
    if (best.empty() || total > best_value) {
      best.assign(1, w);
      best_value = total;
    } else if (total == best_value) {
      best.push_back(w);
    }
  }
  return best;
}

std::vector<size_t> optimal_indices_loss(const LossMatrix& l, const Dist& q) {
  std::vector<size_t> best;
  XVal best_value;
  for (size_t w = 0; w < l.actions.size(); ++w) {
    XVal total = XVal::exact(Rat(0));
    for (size_t x = 0; x < q.size(); ++x) total = total + l.values[w][x].scaled(q.mass(x));
    if (best.empty() || total < best_value) {
      best.assign(1, w);
      best_value = total;
    } else if (total == best_value) {
      best.push_back(w);
    }
  }
  return best;
}

std::vector<size_t> optimal_indices(const AdversaryModel& model, const Dist& q) {
  if (const auto* g = std::get_if<GainMatrix>(&model)) {
    if (!g->secrets.empty() && g->secrets != q.labels()) {
      fail(Errc::ShapeMismatch, "belief labels do not match the model's secrets");
    }
    if (g->secrets.empty() && g->values[0].size() != q.size()) {
      fail(Errc::ShapeMismatch, "belief size does not match the model's matrix width");
    }
    return optimal_indices_gain(*g, q);
  }
  const auto* l = std::get_if<LossMatrix>(&model);
  if (l == nullptr) {
    fail(Errc::InvalidArgument,
         "the Shannon model's optimal action is analytic; use uniform_strategy");
  }
  if (!l->secrets.empty() && l->secrets != q.labels()) {
    fail(Errc::ShapeMismatch, "belief labels do not match the model's secrets");
  }
  if (l->secrets.empty() && l->values[0].size() != q.size()) {
    fail(Errc::ShapeMismatch, "belief size does not match the model's matrix width");
  }
  return optimal_indices_loss(*l, q);
}

const Labels& model_actions(const AdversaryModel& model) {
  if (const auto* g = std::get_if<GainMatrix>(&model)) return g->actions;
  return std::get<LossMatrix>(model).actions;
}

double cross_entropy_or_inf(const Dist& p, const Dist& q, bool* infinite) {
  *infinite = false;
  double total = 0.0;
  for (size_t x = 0; x < p.size(); ++x) {
    if (p.mass(x) == 0) continue;
    if (q.mass(x) == 0) {
      *infinite = true;
      return 0.0;
    }
    total -= rat_double(p.mass(x)) * std::log2(rat_double(q.mass(x)));
  }
  return total;
}

}  // namespace

std::string Strategy::to_json(int decimals) const {
  json j;
  j["analytic"] = analytic;
  j["dist"] = json::parse(dist.to_json(decimals));
  return j.dump();
}

std::string LeakageReport::to_json(int decimals) const {
  json j;
  j["belief"] = json::parse(belief.to_json(decimals));
  j["baseline"] = json::parse(baseline.to_json(decimals));
  j["strategy"] = json::parse(strategy.to_json(decimals));
  j["st_measure_belief"] = st_measure_belief.str(decimals);
  j["st_measure_baseline"] = st_measure_baseline.str(decimals);
  j["leakage"] = leakage.str(decimals);
  j["ordering_verified"] = ordering_verified;
  return j.dump();
}

Labels optimal_actions(const AdversaryModel& model, const Dist& belief) {
  auto indices = optimal_indices(model, belief);
  const Labels& actions = model_actions(model);
  Labels out;
  out.reserve(indices.size());
  for (size_t w : indices) out.push_back(actions[w]);
  return out;
}

Strategy uniform_strategy(const AdversaryModel& model, const Dist& belief) {
  if (std::holds_alternative<ShannonLoss>(model)) {
    return Strategy{true, belief};
  }
  auto indices = optimal_indices(model, belief);
  const Labels& actions = model_actions(model);
  std::vector<Rat> masses(actions.size(), Rat(0));
  Rat share(1, static_cast<long>(indices.size()));
  for (size_t w : indices) masses[w] = share;
  return Strategy{false, Dist(actions, std::move(masses))};
}

Rat st_vg(const GainMatrix& gain, const Dist& baseline, const Dist& belief) {
  check_same_labels(baseline, belief);
  auto indices = optimal_indices_gain(gain, belief);
  if (!gain.secrets.empty() && gain.secrets != baseline.labels()) {
    fail(Errc::ShapeMismatch, "baseline labels do not match the model's secrets");
  }
  Rat total = 0;
  Rat share(1, static_cast<long>(indices.size()));
  for (size_t w : indices) {
    Rat value = 0;
    for (size_t x = 0; x < baseline.size(); ++x) {
      value += baseline.mass(x) * gain.values[w][x];
    }
    total += share * value;
  }
  return total;
}

XVal st_ul(const AdversaryModel& loss_model, const Dist& baseline, const Dist& belief) {
  check_same_labels(baseline, belief);
  if (std::holds_alternative<ShannonLoss>(loss_model)) {
    bool infinite = false;
    double ce = cross_entropy_or_inf(baseline, belief, &infinite);
    return infinite ? XVal::infinity() : XVal::real(ce);
  }
  const auto* l = std::get_if<LossMatrix>(&loss_model);
  if (l == nullptr) fail(Errc::InvalidArgument, "st_ul needs a loss model");
  auto indices = optimal_indices(loss_model, belief);
  XVal total = XVal::exact(Rat(0));
  Rat share(1, static_cast<long>(indices.size()));
  for (size_t w : indices) {
    XVal value = XVal::exact(Rat(0));
    for (size_t x = 0; x < baseline.size(); ++x) {
      value = value + l->values[w][x].scaled(baseline.mass(x));
    }
    total = total + value.scaled(share);
  }
  return total;
}

XVal st_measure(const AdversaryModel& model, const Dist& baseline, const Dist& belief) {
  if (const auto* g = std::get_if<GainMatrix>(&model)) {
    return XVal::exact(st_vg(*g, baseline, belief));
  }
  return st_ul(model, baseline, belief);
}

LeakageReport st_dynamic_leakage(const AdversaryModel& model, const Dist& prior,
                                 const Channel& c, const Label& y) {
  Dist post = posterior(prior, c, y);
  XVal from_belief = st_measure(model, post, prior);
  XVal from_baseline = st_measure(model, post, post);
  XVal leakage = is_gain(model) ? from_baseline - from_belief : from_belief - from_baseline;
  // The baseline is a posterior of the channel itself, so the knowledge
  // ordering holds by construction (the prior is its post-processing by the
  // null channel).
  return LeakageReport{prior,         std::move(post), uniform_strategy(model, prior),
                       from_belief,   from_baseline,   leakage,
                       true};
}

XVal multi_step_leakage(const AdversaryModel& model, const Dist& baseline,
                        const Dist& prior, const Dist& posterior_belief) {
  XVal before = st_measure(model, baseline, prior);
  XVal after = st_measure(model, baseline, posterior_belief);
  return is_gain(model) ? after - before : before - after;
}

LeakageReport multi_step_report(const AdversaryModel& model, const Dist& baseline,
                                const Dist& prior, const Dist& posterior_belief,
                                bool ordering_verified) {
  XVal from_belief = st_measure(model, baseline, prior);
  XVal from_refined = st_measure(model, baseline, posterior_belief);
  XVal leakage = is_gain(model) ? from_refined - from_belief : from_belief - from_refined;
  return LeakageReport{prior,       baseline,     uniform_strategy(model, prior),
                       from_belief, from_refined, leakage,
                       ordering_verified};
}

XVal kl_divergence(const Dist& p, const Dist& q) {
  if (p.labels() != q.labels()) {
    fail(Errc::ShapeMismatch, "KL divergence needs identical label sets");
  }
  double total = 0.0;
  for (size_t x = 0; x < p.size(); ++x) {
    if (p.mass(x) == 0) continue;
    if (q.mass(x) == 0) return XVal::infinity();
    if (p.mass(x) == q.mass(x)) continue;  // log(1) = 0, exactly
    total += rat_double(p.mass(x)) * std::log2(rat_double(Rat(p.mass(x) / q.mass(x))));
  }
  return XVal::real(total);
}

std::vector<Strategy> enumerate_fixed_precision_strategies(const GainMatrix& gain,
                                                           const Dist& belief,
                                                           unsigned precision) {
  AdversaryModel model = gain;
  auto indices = optimal_indices(model, belief);
  const size_t k = indices.size();
  Int steps = 1;
  for (unsigned i = 0; i < precision; ++i) steps *= 10;

  // C(steps + k - 1, k - 1) strategies in total.
  Int count = 1;
  for (size_t i = 1; i < k; ++i) {
    count = count * (steps + static_cast<long>(i)) / static_cast<long>(i);
  }
  if (count > 1'000'000) {
    fail(Errc::EnumerationTooLarge,
         "fixed-precision enumeration would produce " + count.str() + " strategies");
  }

  const long total_steps = steps.convert_to<long>();
  std::vector<Strategy> out;
  std::vector<long> shares(k, 0);
  // Compositions of total_steps into k parts, first coordinate descending.
  auto emit = [&]() {
    std::vector<Rat> masses(gain.actions.size(), Rat(0));
    for (size_t i = 0; i < k; ++i) {
      masses[indices[i]] = Rat(shares[i], total_steps);
    }
    out.push_back(Strategy{false, Dist(gain.actions, std::move(masses))});
  };
  auto rec = [&](auto&& self, size_t pos, long remaining) -> void {
    if (pos + 1 == k) {
      shares[pos] = remaining;
      emit();
      return;
    }
    for (long v = remaining; v >= 0; --v) {
      shares[pos] = v;
      self(self, pos + 1, remaining - v);
    }
  };
  rec(rec, 0, total_steps);
  return out;
}

Rat averaged_strategy_vulnerability(const GainMatrix& gain, const Dist& baseline,
                                    const Dist& belief, unsigned precision) {
  auto strategies = enumerate_fixed_precision_strategies(gain, belief, precision);
  if (!gain.secrets.empty() && gain.secrets != baseline.labels()) {
    fail(Errc::ShapeMismatch, "baseline labels do not match the model's secrets");
  }
  check_same_labels(baseline, belief);
  // Per-action expected gains against the baseline, shared by all strategies.
  std::vector<Rat> action_value(gain.actions.size(), Rat(0));
  for (size_t w = 0; w < gain.actions.size(); ++w) {
    for (size_t x = 0; x < baseline.size(); ++x) {
      action_value[w] += baseline.mass(x) * gain.values[w][x];
    }
  }
  Rat total = 0;
  for (const auto& s : strategies) {
    for (size_t w = 0; w < gain.actions.size(); ++w) {
      total += s.dist.mass(w) * action_value[w];
    }
  }
  return total / Rat(static_cast<long>(strategies.size()));
}

}  // namespace qif
