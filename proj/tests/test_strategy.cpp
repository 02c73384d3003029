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

#include <cmath>

#include "doctest.h"
#include "qif/strategy.hpp"
#include "testutil.hpp"

using namespace qif;
using namespace qif::testutil;

namespace {

const Labels kAnswers{"no", "yes"};
const Labels kBits{"00", "10", "11"};
const Labels kDiseases{"x0", "x1", "x2"};

Channel channel_p() {
  return Channel(kAnswers, kAnswers, {{Rat(2, 3), Rat(1, 3)}, {Rat(1, 3), Rat(2, 3)}});
}

Channel channel_s() {
  return Channel(kAnswers, kAnswers, {{Rat(1), Rat(0)}, {Rat(1, 2), Rat(1, 2)}});
}

Dist two_bit_prior() { return Dist(kBits, {Rat(7, 8), Rat(1, 16), Rat(1, 16)}); }

Channel two_bit_channel() {
  return Channel(kBits, {"a", "b"}, {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}, {Rat(0), Rat(1)}});
}

Dist doctor_prior() { return Dist(kDiseases, {Rat(9, 10), Rat(1, 20), Rat(1, 20)}); }

Channel doctor_test() {
  return Channel(kDiseases, {"P", "N"},
                 {{Rat(99, 100), Rat(1, 100)},
                  {Rat(1, 100), Rat(99, 100)},
                  {Rat(1, 100), Rat(99, 100)}});
}

}  // namespace

TEST_CASE("optimal actions are the exact argmax set") {
  AdversaryModel guess3 = identity_gain(kDiseases);
  CHECK(optimal_actions(guess3, Dist::uniform(kDiseases)) == kDiseases);
  AdversaryModel guess2 = identity_gain(kAnswers);
  CHECK(optimal_actions(guess2, Dist(kAnswers, {Rat(1, 3), Rat(2, 3)})) ==
        Labels{"yes"});
  // Shannon's optimal action is analytic, not an enumerable label set
  CHECK_THROWS_AS(optimal_actions(AdversaryModel{ShannonLoss{}}, Dist::uniform(kAnswers)),
                  Error);
}

TEST_CASE("uniform strategies") {
  AdversaryModel guess3 = identity_gain(kDiseases);
  Strategy all = uniform_strategy(guess3, Dist::uniform(kDiseases));
  CHECK(all.dist == Dist(kDiseases, {Rat(1, 3), Rat(1, 3), Rat(1, 3)}));

  AdversaryModel guess2 = identity_gain(kAnswers);
  Strategy point = uniform_strategy(guess2, Dist(kAnswers, {Rat(1, 3), Rat(2, 3)}));
  CHECK(point.dist == Dist::point("yes", kAnswers));

  Dist post_n = posterior(doctor_prior(), doctor_test(), "N");
  Strategy updated = uniform_strategy(guess3, post_n);
  CHECK(updated.dist == Dist(kDiseases, {Rat(0), Rat(1, 2), Rat(1, 2)}));

  // the Shannon strategy is the belief itself
  Strategy gibbs = uniform_strategy(AdversaryModel{ShannonLoss{}}, post_n);
  CHECK(gibbs.analytic);
  CHECK(gibbs.dist == post_n);
}

TEST_CASE("strategy-based vulnerability of the query pipeline") {
  GainMatrix guess = identity_gain(kAnswers);
  Dist true_no = Dist::point("no", kAnswers);
  Dist uniform = Dist::uniform(kAnswers);
  CHECK(st_vg(guess, true_no, posterior(uniform, channel_p(), "yes")) == Rat(0));
  CHECK(st_vg(guess, true_no,
              posterior(uniform, cascade(channel_p(), channel_s()), "no")) == Rat(1));
  // the avg-st values
  GainMatrix guess3 = identity_gain(kDiseases);
  CHECK(st_vg(guess3, Dist(kDiseases, {Rat(0), Rat(1, 2), Rat(1, 2)}),
              Dist::uniform(kDiseases)) == Rat(1, 3));
}

TEST_CASE("strategy-based uncertainty of the two-bit example") {
  AdversaryModel shannon = ShannonLoss{};
  Dist prior = two_bit_prior();
  Dist post_b = posterior(prior, two_bit_channel(), "b");
  CHECK(st_ul(shannon, post_b, prior).as_double() == doctest::Approx(4.0));
  CHECK(st_ul(shannon, post_b, post_b).as_double() == doctest::Approx(1.0));
  // belief that rules out part of the baseline's support
  CHECK(st_ul(shannon, Dist(kBits, {Rat(0), Rat(1, 2), Rat(1, 2)}),
              Dist::point("00", kBits))
            .is_inf());
}

TEST_CASE("strategy-based dynamic leakage, single channel") {
  AdversaryModel shannon = ShannonLoss{};
  LeakageReport two_bit = st_dynamic_leakage(shannon, two_bit_prior(), two_bit_channel(), "b");
  CHECK(two_bit.leakage.as_double() == doctest::Approx(3.0));
  CHECK(two_bit.ordering_verified);
  CHECK(two_bit.strategy.analytic);
  CHECK(two_bit.baseline == posterior(two_bit_prior(), two_bit_channel(), "b"));

  AdversaryModel guess3 = identity_gain(kDiseases);
  LeakageReport doc = st_dynamic_leakage(guess3, doctor_prior(), doctor_test(), "N");
  CHECK(doc.st_measure_baseline == XVal::exact(Rat(11, 24)));
  CHECK(doc.st_measure_belief == XVal::exact(Rat(1, 12)));
  CHECK(doc.leakage == XVal::exact(Rat(3, 8)));

  CHECK_THROWS_AS(st_dynamic_leakage(guess3, Dist::point("x0", kDiseases),
                                     doctor_test(), "zz"),
                  Error);
}

TEST_CASE("non-interference: the null channel leaks exactly zero") {
  AdversaryModel guess = identity_gain(kBits);
  AdversaryModel shannon = ShannonLoss{};
  Dist prior = two_bit_prior();
  CHECK(st_dynamic_leakage(guess, prior, null_channel(kBits), kBottom).leakage ==
        XVal::exact(Rat(0)));
  CHECK(st_dynamic_leakage(shannon, prior, null_channel(kBits), kBottom)
            .leakage.as_double() == 0.0);
  Rng rng(59);
  for (int i = 0; i < 30; ++i) {
    Labels xs = make_labels("x", 2 + i % 4);
    Dist pi = random_dist(rng, xs);
    AdversaryModel g = random_gain(rng, 2 + i % 3, xs);
    CHECK(st_dynamic_leakage(g, pi, null_channel(xs), kBottom).leakage ==
          XVal::exact(Rat(0)));
  }
}

TEST_CASE("multi-step leakage can be negative (doctor example)") {
  AdversaryModel guess3 = identity_gain(kDiseases);
  Dist truth = Dist::point("x0", kDiseases);
  Dist post_n = posterior(doctor_prior(), doctor_test(), "N");
  CHECK(multi_step_leakage(guess3, truth, doctor_prior(), post_n) ==
        XVal::exact(Rat(-1)));
  LeakageReport report = multi_step_report(guess3, truth, doctor_prior(), post_n);
  CHECK(report.leakage == XVal::exact(Rat(-1)));
  CHECK_FALSE(report.ordering_verified);
}

TEST_CASE("multi-step with the baseline as its own belief reduces to single-step") {
  Rng rng(61);
  for (int i = 0; i < 30; ++i) {
    Labels xs = make_labels("x", 2 + i % 3);
    Dist pi = random_full_support_dist(rng, xs);
    Channel c = random_channel(rng, xs, make_labels("y", 2 + (i + 1) % 3));
    AdversaryModel g = random_gain(rng, 2 + i % 3, xs);
    for (const auto& y : feasible_outputs(pi, c)) {
      Dist post = posterior(pi, c, y);
      CHECK(multi_step_leakage(g, post, pi, post) ==
            st_dynamic_leakage(g, pi, c, y).leakage);
    }
  }
}

TEST_CASE("point-baseline Shannon leakage equals a KL difference") {
  Rng rng(67);
  for (int i = 0; i < 40; ++i) {
    Labels xs = make_labels("x", 2 + i % 4);
    Dist pi = random_full_support_dist(rng, xs);
    Channel c = random_channel(rng, xs, make_labels("y", 2 + (i + 1) % 4));
    Labels feasible = feasible_outputs(pi, c);
    Dist post = posterior(pi, c, feasible[i % feasible.size()]);
    Labels support = post.support();
    Dist truth = Dist::point(support[i % support.size()], xs);
    AdversaryModel shannon = ShannonLoss{};
    XVal lhs = multi_step_leakage(shannon, truth, pi, post);
    XVal rhs = kl_divergence(truth, pi) - kl_divergence(truth, post);
    CHECK(lhs.as_double() == doctest::Approx(rhs.as_double()).epsilon(1e-9));
  }
}

TEST_CASE("KL divergence") {
  Dist prior = two_bit_prior();
  Dist post_b = posterior(prior, two_bit_channel(), "b");
  CHECK(kl_divergence(post_b, prior).as_double() == doctest::Approx(3.0));
  CHECK(kl_divergence(prior, prior).as_double() == 0.0);
  CHECK(kl_divergence(prior, post_b).is_inf());  // support not contained
  CHECK_THROWS_AS(kl_divergence(prior, Dist::uniform(kAnswers)), Error);
}

TEST_CASE("KL equivalence: cross-entropy minus entropy") {
  Rng rng(71);
  for (int i = 0; i < 60; ++i) {
    Labels xs = make_labels("x", 2 + i % 4);
    Dist p = random_dist(rng, xs);
    Dist q = random_full_support_dist(rng, xs);
    AdversaryModel shannon = ShannonLoss{};
    double lhs = st_ul(shannon, p, q).as_double() - shannon_entropy(p);
    CHECK(lhs == doctest::Approx(kl_divergence(p, q).as_double()).epsilon(1e-9));
  }
}

TEST_CASE("fixed-precision strategy enumeration") {
  GainMatrix guess3 = identity_gain(kDiseases);
  Dist belief = Dist::uniform(kDiseases);
  CHECK(enumerate_fixed_precision_strategies(guess3, belief, 1).size() == 66);
  CHECK(enumerate_fixed_precision_strategies(guess3, belief, 0).size() == 3);

  // singleton optimal set: exactly one strategy at every precision
  GainMatrix guess2 = identity_gain(kAnswers);
  Dist skewed(kAnswers, {Rat(1, 3), Rat(2, 3)});
  for (unsigned n = 0; n <= 2; ++n) {
    auto strategies = enumerate_fixed_precision_strategies(guess2, skewed, n);
    REQUIRE(strategies.size() == 1);
    CHECK(strategies[0].dist == Dist::point("yes", kAnswers));
  }

  // all strategies are genuine distributions over the optimal actions
  for (const auto& s : enumerate_fixed_precision_strategies(guess3, belief, 1)) {
    Rat total = 0;
    for (const auto& m : s.dist.masses()) total += m;
    CHECK(total == Rat(1));
  }

  GainMatrix guess4 = identity_gain(make_labels("x", 4));
  CHECK_THROWS_AS(
      enumerate_fixed_precision_strategies(guess4, Dist::uniform(make_labels("x", 4)), 3),
      Error);
}

TEST_CASE("averaged strategy vulnerability equals the uniform strategy's") {
  GainMatrix guess3 = identity_gain(kDiseases);
  Dist belief = Dist::uniform(kDiseases);
  Dist baseline(kDiseases, {Rat(0), Rat(1, 2), Rat(1, 2)});
  CHECK(averaged_strategy_vulnerability(guess3, baseline, belief, 1) == Rat(1, 3));
  CHECK(averaged_strategy_vulnerability(guess3, baseline, belief, 0) == Rat(1, 3));
  CHECK(averaged_strategy_vulnerability(guess3, baseline, belief, 2) == Rat(1, 3));

  Rng rng(73);
  for (int i = 0; i < 25; ++i) {
    Labels xs = make_labels("x", 2 + i % 2);  // keeps the optimal set small
    GainMatrix g = identity_gain(xs);
    Dist q = random_full_support_dist(rng, xs);
    Dist p = random_dist(rng, xs);
    for (unsigned n = 0; n <= 2; ++n) {
      CHECK(averaged_strategy_vulnerability(g, p, q, n) == st_vg(g, p, q));
    }
  }
}

TEST_CASE("acting on a belief equal to the baseline is classical (p || p)") {
  Rng rng(79);
  for (int i = 0; i < 60; ++i) {
    Labels xs = make_labels("x", 2 + i % 4);
    Dist p = random_dist(rng, xs);
    GainMatrix g = random_gain(rng, 2 + (i + 1) % 4, xs);
    CHECK(st_vg(g, p, p) == vg(g, p));
    LossMatrix l = random_loss(rng, 2 + (i + 1) % 4, xs);
    AdversaryModel lm = l;
    CHECK(st_ul(lm, p, p) == ul(lm, p));
    AdversaryModel shannon = ShannonLoss{};
    CHECK(st_ul(shannon, p, p).as_double() ==
          doctest::Approx(ul(shannon, p).as_double()).epsilon(1e-12));
  }
}

TEST_CASE("no belief beats the baseline's own strategy (q <= p)") {
  Rng rng(83);
  for (int i = 0; i < 80; ++i) {
    Labels xs = make_labels("x", 2 + i % 4);
    Dist p = random_dist(rng, xs);
    Dist q = random_dist(rng, xs);
    GainMatrix g = random_gain(rng, 2 + (i + 1) % 4, xs);
    CHECK(st_vg(g, p, q) <= vg(g, p));
    LossMatrix l = random_loss(rng, 2 + (i + 1) % 4, xs);
    AdversaryModel lm = l;
    CHECK(ul(lm, p) <= st_ul(lm, p, q));
  }
}

TEST_CASE("single-step monotonicity: realised leakage is never negative") {
  Rng rng(89);
  for (int i = 0; i < 60; ++i) {
    Labels xs = make_labels("x", 2 + i % 4);
    Dist pi = random_dist(rng, xs);
    Channel c = random_channel(rng, xs, make_labels("y", 2 + (i + 1) % 4));
    AdversaryModel g = random_gain(rng, 2 + (i + 2) % 4, xs);
    AdversaryModel l = random_loss(rng, 2 + (i + 2) % 4, xs, /*allow_inf=*/false);
    AdversaryModel shannon = ShannonLoss{};
    for (const auto& y : feasible_outputs(pi, c)) {
      CHECK(XVal::exact(Rat(0)) <= st_dynamic_leakage(g, pi, c, y).leakage);
      CHECK(XVal::exact(Rat(0)) <= st_dynamic_leakage(l, pi, c, y).leakage);
      CHECK(st_dynamic_leakage(shannon, pi, c, y).leakage.as_double() >= -1e-9);
    }
  }
}

TEST_CASE("single-step DPI: a post-processed belief cannot beat the baseline") {
  Rng rng(97);
  for (int i = 0; i < 50; ++i) {
    Labels xs = make_labels("x", 2 + i % 4);
    Labels ys = make_labels("y", 2 + (i + 1) % 4);
    Labels zs = make_labels("z", 2 + (i + 2) % 4);
    Dist pi = random_dist(rng, xs);
    Channel c = random_channel(rng, xs, ys);
    Channel r = random_channel(rng, ys, zs);
    Channel d = cascade(c, r);
    GainMatrix g = random_gain(rng, 2 + i % 3, xs);
    for (const auto& y : feasible_outputs(pi, c)) {
      Dist post_c = posterior(pi, c, y);
      for (size_t z = 0; z < zs.size(); ++z) {
        if (r.at(y, zs[z]) == 0) continue;
        Dist post_d = posterior(pi, d, zs[z]);
        CHECK(st_vg(g, post_c, post_d) <= vg(g, post_c));
      }
    }
  }
}

TEST_CASE("Shannon uncertainty stays finite along realisable pairs") {
  Rng rng(101);
  AdversaryModel shannon = ShannonLoss{};
  for (int i = 0; i < 50; ++i) {
    Labels xs = make_labels("x", 2 + i % 4);
    Labels ys = make_labels("y", 2 + (i + 1) % 4);
    Labels zs = make_labels("z", 2 + (i + 2) % 4);
    Dist pi = random_dist(rng, xs);
    Channel c = random_channel(rng, xs, ys);
    Channel r = random_channel(rng, ys, zs);
    Channel d = cascade(c, r);
    for (const auto& y : feasible_outputs(pi, c)) {
      Dist post_c = posterior(pi, c, y);
      CHECK(st_ul(shannon, post_c, pi).is_finite());
      CHECK(st_ul(shannon, post_c, post_c).is_finite());
      for (size_t z = 0; z < zs.size(); ++z) {
        if (r.at(y, zs[z]) == 0) continue;
        CHECK(st_ul(shannon, post_c, posterior(pi, d, zs[z])).is_finite());
      }
    }
  }
}

TEST_CASE("multi-step DPI failure regression (engineering team's view)") {
  GainMatrix guess = identity_gain(kAnswers);
  Dist uniform = Dist::uniform(kAnswers);
  Dist true_no = Dist::point("no", kAnswers);
  Rat before = st_vg(guess, true_no, posterior(uniform, channel_p(), "yes"));
  Rat after = st_vg(guess, true_no,
                    posterior(uniform, cascade(channel_p(), channel_s()), "no"));
  CHECK(before == Rat(0));
  CHECK(after == Rat(1));
  CHECK(after > before);  // the extra sanitisation step increased realised vulnerability
}
