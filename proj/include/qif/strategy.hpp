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

#ifndef QIF_STRATEGY_HPP_
#define QIF_STRATEGY_HPP_

#include <string>
#include <vector>

#include "qif/measures.hpp"

namespace qif {

// Probability distribution over the actions that are optimal for the belief
// it was derived from. For the Shannon model the single optimal action is the
// belief itself (Gibbs), kept analytically instead of as an action label.
struct Strategy {
  bool analytic = false;
  Dist dist;  // over the model's actions, or the belief itself when analytic

  std::string to_json(int decimals = -1) const;
};

// One dynamic measurement: two strategies, one derived from the (coarse)
// belief and one from the most refined knowledge in the comparison, both
// evaluated against the baseline.
//
// st_measure_belief is the value attained by the belief-derived strategy;
// st_measure_baseline the value attained by the refined-knowledge strategy
// (the baseline's own strategy in the single-step case). For gains,
// leakage = st_measure_baseline - st_measure_belief; flipped for losses.
struct LeakageReport {
  Dist belief;
  Dist baseline;
  Strategy strategy;  // derived from the belief
  XVal st_measure_belief;
  XVal st_measure_baseline;
  XVal leakage;
  bool ordering_verified = false;

  std::string to_json(int decimals = -1) const;
};

/// Exact argmax (gains) / argmin (losses) action set for a finite model, in
/// action order. Ties are resolved by exact rational equality. The Shannon
/// model's optimal action is the belief itself and is never enumerated; ask
/// uniform_strategy for it.
Labels optimal_actions(const AdversaryModel& model, const Dist& belief);

/// Mass 1/|W*| on each optimal action; the belief itself for ShannonLoss.
Strategy uniform_strategy(const AdversaryModel& model, const Dist& belief);

/// Expected gain of the belief-derived uniform strategy when secrets follow
/// the baseline. Exact.
Rat st_vg(const GainMatrix& gain, const Dist& baseline, const Dist& belief);

/// Dual: expected loss of the belief-derived strategy against the baseline.
/// For ShannonLoss this is the cross-entropy sum p(x) * (-log2 q(x)), which
/// is +inf exactly when the belief rules out part of the baseline's support.
XVal st_ul(const AdversaryModel& loss_model, const Dist& baseline, const Dist& belief);

/// st_vg or st_ul depending on the model kind.
XVal st_measure(const AdversaryModel& model, const Dist& baseline, const Dist& belief);

/// Leakage attributed to the realised output y, with the posterior as the
/// baseline and the prior as the belief. Non-negative for every feasible y.
LeakageReport st_dynamic_leakage(const AdversaryModel& model, const Dist& prior,
                                 const Channel& c, const Label& y);

/// Analyst-side leakage against an arbitrary baseline (e.g. a posterior of a
/// less post-processed system, or a point distribution on the real secret).
/// Gains: st_vg(b, posterior_belief) - st_vg(b, prior); flipped for losses.
/// May be negative: the observation made the adversary's strategy worse.
XVal multi_step_leakage(const AdversaryModel& model, const Dist& baseline,
                        const Dist& prior, const Dist& posterior_belief);

/// Same measurement as a full report. ordering_verified should be set only
/// when the caller has checked the knowledge ordering (a refinement witness
/// with a positive entry connecting the two realised outputs).
LeakageReport multi_step_report(const AdversaryModel& model, const Dist& baseline,
                                const Dist& prior, const Dist& posterior_belief,
                                bool ordering_verified = false);

/// sum over supp(p) of p(x) log2(p(x)/q(x)); +inf if supp(p) is not contained
/// in supp(q).
XVal kl_divergence(const Dist& p, const Dist& q);

/// All strategies over the belief's optimal actions whose masses are integer
/// multiples of 10^-n. EnumerationTooLarge beyond 10^6 strategies.
std::vector<Strategy> enumerate_fixed_precision_strategies(const GainMatrix& gain,
                                                           const Dist& belief,
                                                           unsigned precision);

/// Mean strategy-based vulnerability over the fixed-precision enumeration;
/// equals st_vg(gain, baseline, belief) for every precision.
Rat averaged_strategy_vulnerability(const GainMatrix& gain, const Dist& baseline,
                                    const Dist& belief, unsigned precision);

}  // namespace qif

#endif  // QIF_STRATEGY_HPP_
