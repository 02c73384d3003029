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

#include "qif/scenario.hpp"

#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "qif/dataset.hpp"
#include "qif/errors.hpp"
#include "qif/measures.hpp"
#include "qif/refinement.hpp"
#include "qif/strategy.hpp"

namespace qif {

using nlohmann::json;

namespace {

Rat rat(long n, long d = 1) { return Rat(n, d); }
XVal ex(long n, long d = 1) { return XVal::exact(Rat(n, d)); }

ScenarioCheck check(std::string name, std::string note, XVal expected,
                    std::function<XVal()> compute) {
  return ScenarioCheck{std::move(name), std::move(note), std::move(expected),
                       std::move(compute)};
}

Scenario two_bit_secret() {
  Labels secrets{"00", "10", "11"};
  Dist prior(secrets, {rat(7, 8), rat(1, 16), rat(1, 16)});
  Channel b(secrets, {"a", "b"},
            {{rat(1), rat(0)}, {rat(0), rat(1)}, {rat(0), rat(1)}});
  AdversaryModel shannon = ShannonLoss{};
  Dist post_b = posterior(prior, b, "b");

  // H(prior) = 1/2 + 7/8 * (3 - log2 7); the realised output is b.
  double h_prior = 0.5 + 0.875 * (3.0 - std::log2(7.0));

  Scenario s{"two-bit-secret",
             "Deterministic program revealing whether a 2-bit secret is 00, "
             "monitored through a single realised output; the classical dynamic "
             "Shannon leakage goes negative while the strategy-based one stays "
             "positive.",
             prior,
             {{"B", b}},
             {{"realised", "b"}},
             {}};
  s.checks = {
      check("outer.a", "probability of output a", ex(7, 8),
            [=] { return XVal::exact(outer(prior, b).mass("a")); }),
      check("outer.b", "probability of output b", ex(1, 8),
            [=] { return XVal::exact(outer(prior, b).mass("b")); }),
      check("posterior_b.00", "posterior mass on 00 after b", ex(0),
            [=] { return XVal::exact(post_b.mass("00")); }),
      check("posterior_b.10", "posterior mass on 10 after b", ex(1, 2),
            [=] { return XVal::exact(post_b.mass("10")); }),
      check("posterior_b.11", "posterior mass on 11 after b", ex(1, 2),
            [=] { return XVal::exact(post_b.mass("11")); }),
      check("prior_entropy", "Shannon entropy of the prior", XVal::real(h_prior),
            [=] { return XVal::real(shannon_entropy(prior)); }),
      check("posterior_entropy_b", "Shannon entropy of the posterior after b", ex(1),
            [=] { return XVal::real(shannon_entropy(post_b)); }),
      check("traditional_leakage_b",
            "prior minus posterior entropy; negative despite a learned bit",
            XVal::real(h_prior - 1.0),
            [=] { return traditional_dynamic_leakage(shannon, prior, b, "b"); }),
      check("st_prior_uncertainty_b",
            "uncertainty of the prior-derived guess against the posterior baseline",
            ex(4), [=] { return st_ul(shannon, post_b, prior); }),
      check("st_posterior_uncertainty_b",
            "uncertainty when the belief matches the baseline", ex(1),
            [=] { return st_ul(shannon, post_b, post_b); }),
      check("st_leakage_b", "strategy-based dynamic leakage of output b", ex(3),
            [=] { return st_dynamic_leakage(shannon, prior, b, "b").leakage; }),
      check("kl_posterior_prior", "KL divergence of posterior from prior", ex(3),
            [=] { return kl_divergence(post_b, prior); }),
      check("static_expected_uncertainty", "expected posterior entropy over all runs",
            ex(1, 8),
            [=] { return static_posterior(shannon, CaseKind::Expected, prior, b); }),
  };
  return s;
}

Scenario query_pipeline() {
  Labels answers{"no", "yes"};
  Dist uniform = Dist::uniform(answers);
  Channel p(answers, answers, {{rat(2, 3), rat(1, 3)}, {rat(1, 3), rat(2, 3)}});
  Channel s_step(answers, answers, {{rat(1), rat(0)}, {rat(1, 2), rat(1, 2)}});
  Channel ps = cascade(p, s_step);
  GainMatrix guess = identity_gain(answers);
  AdversaryModel guess_model = guess;
  Dist post_p_yes = posterior(uniform, p, "yes");
  Dist post_ps_no = posterior(uniform, ps, "no");
  Dist true_no = Dist::point("no", answers);

  Scenario sc{"query-pipeline",
              "Noisy query answer followed by an extra sanitisation step; on "
              "average the composition is safer, yet along the realised path "
              "no->yes->no the extra step hands the adversary the correct guess.",
              uniform,
              {{"P", p}, {"S", s_step}, {"PS", ps}},
              {{"P", "yes"}, {"PS", "no"}},
              {}};
  sc.checks = {
      check("ps.no.no", "composed channel entry", ex(5, 6),
            [=] { return XVal::exact(ps.at("no", "no")); }),
      check("ps.no.yes", "composed channel entry", ex(1, 6),
            [=] { return XVal::exact(ps.at("no", "yes")); }),
      check("ps.yes.no", "composed channel entry", ex(2, 3),
            [=] { return XVal::exact(ps.at("yes", "no")); }),
      check("ps.yes.yes", "composed channel entry", ex(1, 3),
            [=] { return XVal::exact(ps.at("yes", "yes")); }),
      check("posterior_P_yes.no", "first adversary's posterior", ex(1, 3),
            [=] { return XVal::exact(post_p_yes.mass("no")); }),
      check("posterior_P_yes.yes", "first adversary's posterior", ex(2, 3),
            [=] { return XVal::exact(post_p_yes.mass("yes")); }),
      check("posterior_PS_no.no", "second adversary's posterior", ex(5, 9),
            [=] { return XVal::exact(post_ps_no.mass("no")); }),
      check("posterior_PS_no.yes", "second adversary's posterior", ex(4, 9),
            [=] { return XVal::exact(post_ps_no.mass("yes")); }),
      check("outer_PS.no", "output distribution of the composition", ex(3, 4),
            [=] { return XVal::exact(outer(uniform, ps).mass("no")); }),
      check("outer_PS.yes", "output distribution of the composition", ex(1, 4),
            [=] { return XVal::exact(outer(uniform, ps).mass("yes")); }),
      check("vg_posterior_P_yes", "one-try success chance after observing yes",
            ex(2, 3), [=] { return XVal::exact(vg(guess, post_p_yes)); }),
      check("vg_posterior_PS_no", "one-try success chance after observing no",
            ex(5, 9), [=] { return XVal::exact(vg(guess, post_ps_no)); }),
      check("stvg_true_no_vs_P_yes",
            "first adversary's strategy measured against the true answer", ex(0),
            [=] { return XVal::exact(st_vg(guess, true_no, post_p_yes)); }),
      check("stvg_true_no_vs_PS_no",
            "second adversary's strategy measured against the true answer", ex(1),
            [=] { return XVal::exact(st_vg(guess, true_no, post_ps_no)); }),
      check("static_expected_leakage_P", "expected one-try leakage of P", ex(1, 6),
            [=] {
              return static_leakage(guess_model, CaseKind::Expected, uniform, p);
            }),
      check("traditional_dynamic_leakage_P_yes", "classical dynamic leakage",
            ex(1, 6),
            [=] { return traditional_dynamic_leakage(guess_model, uniform, p, "yes"); }),
  };
  return sc;
}

Scenario strategy_averaging() {
  Labels secrets{"x0", "x1", "x2"};
  Dist belief = Dist::uniform(secrets);
  Dist baseline(secrets, {rat(0), rat(1, 2), rat(1, 2)});
  GainMatrix guess = identity_gain(secrets);

  Scenario sc{"avg-st",
              "All three guesses are optimal under a uniform belief; averaging "
              "over all fixed-precision strategies reproduces the uniform "
              "strategy's value.",
              belief,
              {},
              {},
              {}};
  sc.checks = {
      check("strategies_n1", "strategies with 1-decimal action probabilities", ex(66),
            [=] {
              return ex(static_cast<long>(
                  enumerate_fixed_precision_strategies(guess, belief, 1).size()));
            }),
      check("strategies_n0", "strategies with 0-decimal action probabilities", ex(3),
            [=] {
              return ex(static_cast<long>(
                  enumerate_fixed_precision_strategies(guess, belief, 0).size()));
            }),
      check("strategies_n2", "strategies with 2-decimal action probabilities", ex(5151),
            [=] {
              return ex(static_cast<long>(
                  enumerate_fixed_precision_strategies(guess, belief, 2).size()));
            }),
      check("averaged_vulnerability_n1", "mean vulnerability over the 66 strategies",
            ex(1, 3),
            [=] {
              return XVal::exact(
                  averaged_strategy_vulnerability(guess, baseline, belief, 1));
            }),
      check("averaged_vulnerability_n0", "mean vulnerability over point strategies",
            ex(1, 3),
            [=] {
              return XVal::exact(
                  averaged_strategy_vulnerability(guess, baseline, belief, 0));
            }),
      check("averaged_vulnerability_n2", "mean vulnerability at 2 decimals", ex(1, 3),
            [=] {
              return XVal::exact(
                  averaged_strategy_vulnerability(guess, baseline, belief, 2));
            }),
      check("uniform_strategy_vulnerability", "uniform-strategy value", ex(1, 3),
            [=] { return XVal::exact(st_vg(guess, baseline, belief)); }),
  };
  return sc;
}

Scenario doctor() {
  Labels diseases{"x0", "x1", "x2"};
  Dist prior(diseases, {rat(9, 10), rat(1, 20), rat(1, 20)});
  Channel test(diseases, {"P", "N"},
               {{rat(99, 100), rat(1, 100)},
                {rat(1, 100), rat(99, 100)},
                {rat(1, 100), rat(99, 100)}});
  GainMatrix guess = identity_gain(diseases);
  AdversaryModel guess_model = guess;
  Dist post_n = posterior(prior, test, "N");
  Dist truth = Dist::point("x0", diseases);

  Scenario sc{"doctor",
              "Diagnostic test with a 1% error rate; a false negative makes the "
              "rational strategy update strictly worse against the real disease, "
              "which the analyst-side measurement reports as negative leakage.",
              prior,
              {{"C", test}},
              {{"realised", "N"}},
              {}};
  sc.checks = {
      check("outer.P", "probability of a positive result", ex(223, 250),
            [=] { return XVal::exact(outer(prior, test).mass("P")); }),
      check("outer.N", "probability of a negative result", ex(27, 250),
            [=] { return XVal::exact(outer(prior, test).mass("N")); }),
      check("posterior_N.x0", "posterior after a negative result", ex(1, 12),
            [=] { return XVal::exact(post_n.mass("x0")); }),
      check("posterior_N.x1", "posterior after a negative result", ex(11, 24),
            [=] { return XVal::exact(post_n.mass("x1")); }),
      check("posterior_N.x2", "posterior after a negative result", ex(11, 24),
            [=] { return XVal::exact(post_n.mass("x2")); }),
      check("posterior_P.x0", "posterior after a positive result", ex(891, 892),
            [=] { return XVal::exact(posterior(prior, test, "P").mass("x0")); }),
      check("posterior_P.x1", "posterior after a positive result", ex(1, 1784),
            [=] { return XVal::exact(posterior(prior, test, "P").mass("x1")); }),
      check("uniform_strategy_N.x0", "updated guessing strategy", ex(0),
            [=] { return XVal::exact(uniform_strategy(guess_model, post_n).dist.mass("x0")); }),
      check("uniform_strategy_N.x1", "updated guessing strategy", ex(1, 2),
            [=] { return XVal::exact(uniform_strategy(guess_model, post_n).dist.mass("x1")); }),
      check("uniform_strategy_N.x2", "updated guessing strategy", ex(1, 2),
            [=] { return XVal::exact(uniform_strategy(guess_model, post_n).dist.mass("x2")); }),
      check("st_measure_baseline_N", "posterior strategy against the posterior",
            ex(11, 24),
            [=] { return st_dynamic_leakage(guess_model, prior, test, "N").st_measure_baseline; }),
      check("st_measure_belief_N", "prior strategy against the posterior", ex(1, 12),
            [=] { return st_dynamic_leakage(guess_model, prior, test, "N").st_measure_belief; }),
      check("st_dynamic_leakage_N", "strategy-based dynamic leakage of N", ex(3, 8),
            [=] { return st_dynamic_leakage(guess_model, prior, test, "N").leakage; }),
      check("multi_step_leakage_x0",
            "analyst-side leakage when the real disease is x0", ex(-1),
            [=] { return multi_step_leakage(guess_model, truth, prior, post_n); }),
  };
  return sc;
}

std::vector<Dataset::Record> location_multisets(size_t size) {
  if (size == 1) return {{"A"}, {"B"}};
  return {{"A", "A"}, {"A", "B"}, {"B", "B"}};
}

std::vector<Dataset> data_release_space() {
  std::vector<Dataset> displayed = {
      Dataset({{"Alex", {"A", "A"}}, {"Bob", {"B"}}}),
      Dataset({{"Alex", {"B"}}, {"Bob", {"A", "A"}}}),
      Dataset({{"Alex", {"A", "B"}}, {"Bob", {"A"}}}),
      Dataset({{"Alex", {"A"}}, {"Bob", {"A", "B"}}}),
  };
  std::vector<Dataset> tail;
  for (auto [alex_size, bob_size] : {std::pair<size_t, size_t>{2, 1}, {1, 2}}) {
    for (const auto& ra : location_multisets(alex_size)) {
      for (const auto& rb : location_multisets(bob_size)) {
        Dataset d({{"Alex", ra}, {"Bob", rb}});
        bool shown = false;
        for (const auto& x : displayed) shown = shown || x == d;
        if (!shown) tail.push_back(d);
      }
    }
  }
  std::sort(tail.begin(), tail.end(),
            [](const Dataset& a, const Dataset& b) { return a.label() < b.label(); });
  displayed.insert(displayed.end(), tail.begin(), tail.end());
  return displayed;
}

Scenario data_release() {
  std::vector<Dataset> space = data_release_space();
  Labels secrets = dataset_labels(space);
  Dist prior = Dist::uniform(secrets);

  Channel deid = deid_channel(space);
  Channel mech_per_loc({"A", "B"}, {"A", "B"},
                       {{rat(3, 4), rat(1, 4)}, {rat(1, 4), rat(3, 4)}});
  Channel lifted =
      mechanism_lift(mech_per_loc, space[0].deidentified()).select_rows(deid.cols());
  Channel release = cascade(deid, lifted);
  Channel h_hist = hint_histogram(space);
  Channel h_alex = hint_frequency("Alex", space);
  Channel sys_s = build_data_release(space, deid, mech_per_loc, {h_hist, h_alex});
  Channel sys_p = parallel(h_hist, parallel(h_alex, deid));
  Channel hints = parallel(h_hist, h_alex);

  Label d0 = space[0].deidentified().label();   // 0={A,A};1={B}
  Label d1 = space[2].deidentified().label();   // 0={A,B};1={A}
  Label sanitized = d0;                         // the observed noisy dataset
  Label hist = space[0].histogram_label();      // A:2;B:1
  Label obs_s = pair_label(hist, pair_label("A", sanitized));
  Label obs_p = pair_label(hist, pair_label("A", d1));
  Label obs_hints = pair_label(hist, "A");

  GainMatrix guess = identity_gain(secrets);
  Dist post_s = posterior(prior, sys_s, obs_s);
  Dist post_p = posterior(prior, sys_p, obs_p);

  Labels x = {secrets[0], secrets[1], secrets[2], secrets[3]};

  Scenario sc{"data-release",
              "Location datasets released after de-identification and "
              "per-location noise, observed together with a histogram hint and "
              "one of Alex's locations; the noisy release is a refinement of the "
              "raw one.",
              prior,
              {{"deid", deid}, {"mechanism", lifted}, {"release", release},
               {"H_hist", h_hist}, {"H_Alex", h_alex}, {"P", sys_p}, {"S", sys_s}},
              {{"S", obs_s}, {"P", obs_p}},
              {}};
  sc.checks = {
      check("mech.d0.s", "lifted mechanism keeps the sanitised dataset", ex(27, 64),
            [=] { return XVal::exact(lifted.at(d0, sanitized)); }),
      check("mech.d1.s", "lifted mechanism flips into the sanitised dataset",
            ex(3, 64), [=] { return XVal::exact(lifted.at(d1, sanitized)); }),
      check("release.x0.s", "release channel column", ex(27, 64),
            [=] { return XVal::exact(release.at(x[0], sanitized)); }),
      check("release.x1.s", "release channel column", ex(27, 64),
            [=] { return XVal::exact(release.at(x[1], sanitized)); }),
      check("release.x2.s", "release channel column", ex(3, 64),
            [=] { return XVal::exact(release.at(x[2], sanitized)); }),
      check("release.x3.s", "release channel column", ex(3, 64),
            [=] { return XVal::exact(release.at(x[3], sanitized)); }),
      check("hints.x0.kA", "joint hint column", ex(1),
            [=] { return XVal::exact(hints.at(x[0], obs_hints)); }),
      check("hints.x1.kA", "joint hint column", ex(0),
            [=] { return XVal::exact(hints.at(x[1], obs_hints)); }),
      check("hints.x2.kA", "joint hint column", ex(1, 2),
            [=] { return XVal::exact(hints.at(x[2], obs_hints)); }),
      check("hints.x3.kA", "joint hint column", ex(1),
            [=] { return XVal::exact(hints.at(x[3], obs_hints)); }),
      check("posterior_S.x0", "noisy-release posterior", ex(6, 7),
            [=] { return XVal::exact(post_s.mass(x[0])); }),
      check("posterior_S.x1", "noisy-release posterior", ex(0),
            [=] { return XVal::exact(post_s.mass(x[1])); }),
      check("posterior_S.x2", "noisy-release posterior", ex(1, 21),
            [=] { return XVal::exact(post_s.mass(x[2])); }),
      check("posterior_S.x3", "noisy-release posterior", ex(2, 21),
            [=] { return XVal::exact(post_s.mass(x[3])); }),
      check("vg_posterior_S", "apparent one-try success after the noisy release",
            ex(6, 7), [=] { return XVal::exact(vg(guess, post_s)); }),
      check("posterior_P.x0", "raw-release posterior", ex(0),
            [=] { return XVal::exact(post_p.mass(x[0])); }),
      check("posterior_P.x1", "raw-release posterior", ex(0),
            [=] { return XVal::exact(post_p.mass(x[1])); }),
      check("posterior_P.x2", "raw-release posterior", ex(1, 3),
            [=] { return XVal::exact(post_p.mass(x[2])); }),
      check("posterior_P.x3", "raw-release posterior", ex(2, 3),
            [=] { return XVal::exact(post_p.mass(x[3])); }),
      check("vg_posterior_P", "one-try success with the raw release", ex(2, 3),
            [=] { return XVal::exact(vg(guess, post_p)); }),
      check("stvg_P_baseline_vs_S_belief",
            "noisy-release strategy measured against the raw-release baseline",
            ex(0), [=] { return XVal::exact(st_vg(guess, post_p, post_s)); }),
      check("refinement_witness_found",
            "the noisy release post-processes the raw release", ex(1), [=] {
              auto witness = refinement_witness(sys_p, sys_s);
              if (!witness.has_value()) return ex(0);
              return cascade(sys_p, *witness) == sys_s ? ex(1) : ex(0);
            }),
  };
  return sc;
}

}  // namespace

const std::vector<Scenario>& scenario_registry() {
  static const std::vector<Scenario> registry = {
      two_bit_secret(), query_pipeline(), strategy_averaging(), doctor(),
      data_release()};
  return registry;
}

const Scenario& find_scenario(const std::string& name) {
  for (const auto& s : scenario_registry()) {
    if (s.name == name) return s;
  }
  fail(Errc::UnknownScenario, "unknown scenario '" + name + "'");
}

bool values_agree(const XVal& expected, const XVal& actual) {
  if (expected.is_exact() && actual.is_exact()) return expected == actual;
  if (expected.is_inf() || actual.is_inf()) return expected.is_inf() && actual.is_inf();
  if (expected.is_neg_inf() || actual.is_neg_inf()) {
    return expected.is_neg_inf() && actual.is_neg_inf();
  }
  return std::abs(expected.as_double() - actual.as_double()) <= 1e-9;
}

bool ScenarioResult::all_pass() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

std::string ScenarioResult::to_json(int decimals) const {
  json j;
  j["name"] = name;
  j["pass"] = all_pass();
  json rows = json::array();
  for (const auto& c : checks) {
    json row;
    row["name"] = c.name;
    row["note"] = c.note;
    row["expected"] = c.expected.str(decimals);
    row["actual"] = c.actual.str(decimals);
    row["pass"] = c.pass;
    rows.push_back(std::move(row));
  }
  j["checks"] = rows;
  return j.dump();
}

ScenarioResult run_scenario(const Scenario& scenario) {
  ScenarioResult result;
  result.name = scenario.name;
  for (const auto& c : scenario.checks) {
    ScenarioCheckResult row;
    row.name = c.name;
    row.note = c.note;
    row.expected = c.expected;
    try {
      row.actual = c.compute();
      row.pass = values_agree(c.expected, row.actual);
    } catch (const Error&) {
      row.actual = XVal::real(std::numeric_limits<double>::quiet_NaN());
      row.pass = false;
    }
    result.checks.push_back(std::move(row));
  }
  return result;
}

}  // namespace qif
