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

#ifndef QIF_MEASURES_HPP_
#define QIF_MEASURES_HPP_

#include <string>
#include <variant>
#include <vector>

#include "qif/channel.hpp"
#include "qif/dist.hpp"

namespace qif {

// Adversary with a finite action set and a rational payoff per (action,
// secret) pair. Vulnerability = maximum expected gain.
struct GainMatrix {
  Labels actions;
  Labels secrets;  // may be empty: bound positionally at use
  std::vector<std::vector<Rat>> values;  // actions x secrets
};

// Dual model: non-negative (possibly infinite) loss per (action, secret).
// Uncertainty = minimum expected loss, with the 0 * inf = 0 convention.
struct LossMatrix {
  Labels actions;
  Labels secrets;
  std::vector<std::vector<XVal>> values;  // exact >= 0 or +inf
};

// Analytic Shannon adversary: the action space is all distributions on the
// secrets, never enumerated. The unique optimal action against a belief q is
// q itself, so uncertainty is H(q) and the strategy-based uncertainty is a
// cross-entropy.
struct ShannonLoss {};

using AdversaryModel = std::variant<GainMatrix, LossMatrix, ShannonLoss>;

enum class MeasureKind { Vulnerability, Uncertainty };
enum class CaseKind { Expected, Extreme };

MeasureKind kind_of(const AdversaryModel& model);
bool is_gain(const AdversaryModel& model);

/// Validates entries (loss entries exact >= 0 or inf) and non-empty actions.
void validate_model(const AdversaryModel& model);

/// One-try guessing adversary: actions = secrets, g(w,x) = [w = x].
GainMatrix identity_gain(const Labels& secrets);

/// Maximum expected gain of an optimal action; exact.
Rat vg(const GainMatrix& gain, const Dist& p);

/// Minimum expected loss; H(p) for the Shannon model (the Gibbs-optimal
/// action is p itself). +inf when every action has infinite expected loss.
XVal ul(const AdversaryModel& loss_model, const Dist& p);

/// -sum p(x) log2 p(x) over the support, in bits.
double shannon_entropy(const Dist& p);

/// vg or ul depending on the model kind.
XVal measure_value(const AdversaryModel& model, const Dist& p);

/// Expected- or extreme-case posterior measure over all feasible outputs.
/// Extreme is max for gains and min for losses.
XVal static_posterior(const AdversaryModel& model, CaseKind kind, const Dist& prior,
                      const Channel& c);

/// Gains: posterior - prior. Losses: prior - posterior.
XVal static_leakage(const AdversaryModel& model, CaseKind kind, const Dist& prior,
                    const Channel& c);

/// Leakage attributed to one realised output under the traditional dynamic
/// definition. Can be negative; see strategy.hpp for the repaired measure.
XVal traditional_dynamic_leakage(const AdversaryModel& model, const Dist& prior,
                                 const Channel& c, const Label& y);

/// {"kind":"gain"|"loss"|"shannon", "actions":[...], "secrets":[...],
///  "values":[[...]]} with rational or "inf" literals. A missing "secrets"
/// field leaves the model positionally bound.
std::string model_to_json(const AdversaryModel& model);
AdversaryModel model_from_json(const std::string& text);

}  // namespace qif

#endif  // QIF_MEASURES_HPP_
