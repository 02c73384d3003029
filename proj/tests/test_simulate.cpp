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
#include "qif/simulate.hpp"
#include "testutil.hpp"

using namespace qif;
using namespace qif::testutil;

namespace {

const Labels kAnswers{"no", "yes"};
const Labels kBits{"00", "10", "11"};

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

}  // namespace

TEST_CASE("pipelines validate their chained shapes") {
  CHECK_NOTHROW(Pipeline(Dist::uniform(kAnswers), {channel_p(), channel_s()}));
  CHECK_THROWS_AS(Pipeline(Dist::uniform(kBits), {channel_p()}), Error);
  CHECK_THROWS_AS(Pipeline(Dist::uniform(kAnswers),
                           {channel_p(), two_bit_channel()}),
                  Error);
  CHECK_THROWS_AS(Pipeline(Dist::uniform(kAnswers), {}), Error);
}

TEST_CASE("identical seeds reproduce identical traces") {
  Pipeline pipeline(Dist::uniform(kAnswers), {channel_p(), channel_s()});
  for (uint64_t seed : {0ull, 1ull, 42ull, 0xDEADBEEFull}) {
    Trace a = sample_trace(pipeline, seed);
    Trace b = sample_trace(pipeline, seed);
    CHECK(a.secret == b.secret);
    CHECK(a.step_outputs == b.step_outputs);
  }
}

TEST_CASE("the null pipeline only ever outputs bottom") {
  Pipeline pipeline(two_bit_prior(), {null_channel(kBits)});
  for (uint64_t seed = 0; seed < 20; ++seed) {
    Trace t = sample_trace(pipeline, seed);
    CHECK(t.step_outputs == Labels{kBottom});
  }
  // and a zero budget never aborts it: the leakage is exactly zero
  AdversaryModel guess = identity_gain(kBits);
  for (uint64_t seed = 0; seed < 20; ++seed) {
    Trace t = monitor_run(pipeline, guess, XVal::exact(Rat(0)), seed);
    CHECK_FALSE(t.aborted());
    CHECK(t.reports[0].leakage == XVal::exact(Rat(0)));
  }
}

TEST_CASE("the query pipeline can realise the path no -> yes -> no") {
  Pipeline pipeline(Dist::uniform(kAnswers), {channel_p(), channel_s()});
  bool found = false;
  for (uint64_t seed = 0; seed < 500 && !found; ++seed) {
    Trace t = sample_trace(pipeline, seed);
    found = t.secret == "no" && t.step_outputs == Labels{"yes", "no"};
  }
  CHECK(found);
}

TEST_CASE("sampling a row distribution is exact at the boundaries") {
  Dist d(kAnswers, {Rat(1, 4), Rat(3, 4)});
  // draw/2^64 < 1/4 iff draw < 2^62
  CHECK(sample_label(d, 0) == "no");
  CHECK(sample_label(d, (1ull << 62) - 1) == "no");
  CHECK(sample_label(d, 1ull << 62) == "yes");
  CHECK(sample_label(d, ~0ull) == "yes");
}

TEST_CASE("empirical output frequencies match the exact outer distribution") {
  Pipeline pipeline(two_bit_prior(), {two_bit_channel()});
  const int n = 100000;
  int count_b = 0;
  for (int seed = 0; seed < n; ++seed) {
    if (sample_trace(pipeline, static_cast<uint64_t>(seed)).step_outputs[0] == "b") {
      ++count_b;
    }
  }
  double p = 1.0 / 8.0;
  double sigma = std::sqrt(n * p * (1 - p));
  CHECK(std::abs(count_b - n * p) <= 3 * sigma);
}

TEST_CASE("monitor aborts on the first budget exceedance") {
  Pipeline pipeline(two_bit_prior(), {two_bit_channel()});
  AdversaryModel shannon = ShannonLoss{};

  // find a run that realises output b (leakage 3)
  uint64_t seed_b = 0;
  for (uint64_t seed = 0;; ++seed) {
    if (sample_trace(pipeline, seed).step_outputs[0] == "b") {
      seed_b = seed;
      break;
    }
  }
  Trace strict = monitor_run(pipeline, shannon, XVal::exact(Rat(0)), seed_b);
  CHECK(strict.aborted());
  CHECK(strict.reports[0].leakage.as_double() == doctest::Approx(3.0));

  Trace generous = monitor_run(pipeline, shannon, XVal::exact(Rat(10)), seed_b);
  CHECK_FALSE(generous.aborted());

  CHECK_THROWS_AS(monitor_run(pipeline, shannon, XVal::exact(Rat(-1)), 0), Error);
}

TEST_CASE("aborted runs leave the remaining stages unexecuted") {
  Pipeline pipeline(Dist::uniform(kAnswers), {channel_p(), channel_s()});
  AdversaryModel guess = identity_gain(kAnswers);
  for (uint64_t seed = 0; seed < 50; ++seed) {
    Trace t = monitor_run(pipeline, guess, XVal::exact(Rat(0)), seed);
    if (t.aborted()) {
      CHECK(t.step_outputs.size() < 2);
      CHECK(t.step_outputs.size() == t.reports.size());
    }
  }
}

TEST_CASE("per-step monitor leakage is never negative") {
  Rng rng(107);
  AdversaryModel shannon = ShannonLoss{};
  for (int i = 0; i < 20; ++i) {
    Labels xs = make_labels("x", 2 + i % 3);
    Labels ys = make_labels("y", 2 + (i + 1) % 3);
    Labels zs = make_labels("z", 2 + (i + 2) % 3);
    Pipeline pipeline(random_full_support_dist(rng, xs),
                      {random_channel(rng, xs, ys), random_channel(rng, ys, zs)});
    AdversaryModel g = random_gain(rng, 2 + i % 3, xs);
    for (uint64_t seed = 0; seed < 5; ++seed) {
      for (const auto& report : monitor_run(pipeline, g, XVal::infinity(), seed).reports) {
        CHECK(XVal::exact(Rat(0)) <= report.leakage);
      }
      for (const auto& report :
           monitor_run(pipeline, shannon, XVal::infinity(), seed).reports) {
        CHECK(report.leakage.as_double() >= -1e-9);
      }
    }
  }
}

TEST_CASE("trace JSON lines carry one step per line") {
  Pipeline pipeline(Dist::uniform(kAnswers), {channel_p(), channel_s()});
  AdversaryModel guess = identity_gain(kAnswers);
  Trace t = monitor_run(pipeline, guess, XVal::infinity(), 7);
  std::string body = t.to_jsonl();
  size_t lines = std::count(body.begin(), body.end(), '\n');
  CHECK(lines == 1 + t.step_outputs.size());
  CHECK(body.find("\"verdict\"") != std::string::npos);
}

TEST_CASE("static-recovery identities on the worked examples") {
  AdversaryModel shannon = ShannonLoss{};
  ConsistencyReport ex1 =
      verify_consistency(two_bit_prior(), two_bit_channel(), std::nullopt, shannon);
  CHECK(ex1.identities.size() == 3);
  CHECK(ex1.all_pass());

  AdversaryModel guess = identity_gain(kAnswers);
  ConsistencyReport ex2 =
      verify_consistency(Dist::uniform(kAnswers), channel_p(), channel_s(), guess);
  CHECK(ex2.identities.size() == 5);
  CHECK(ex2.all_pass());
  // the refined expected recovery equals the composed pipeline's posterior
  CHECK(static_posterior(guess, CaseKind::Expected, Dist::uniform(kAnswers),
                         cascade(channel_p(), channel_s())) == XVal::exact(Rat(7, 12)));

  ConsistencyReport null_case = verify_consistency(
      two_bit_prior(), null_channel(kBits), std::nullopt, AdversaryModel{identity_gain(kBits)});
  for (const auto& identity : null_case.identities) {
    CHECK(identity.residual == XVal::exact(Rat(0)));
  }
}

TEST_CASE("static-recovery identities hold on random instances") {
  Rng rng(109);
  for (int i = 0; i < 50; ++i) {
    Labels xs = make_labels("x", 2 + i % 3);
    Labels ys = make_labels("y", 2 + (i + 1) % 3);
    Labels zs = make_labels("z", 2 + (i + 2) % 3);
    Dist prior = random_dist(rng, xs);
    Channel c = random_channel(rng, xs, ys);
    Channel r = random_channel(rng, ys, zs);
    AdversaryModel g = random_gain(rng, 2 + i % 3, xs);
    ConsistencyReport report = verify_consistency(prior, c, r, g);
    for (const auto& identity : report.identities) {
      INFO(identity.name, " residual ", identity.residual.str());
      CHECK(identity.residual == XVal::exact(Rat(0)));
    }
    AdversaryModel shannon = ShannonLoss{};
    CHECK(verify_consistency(prior, c, r, shannon).all_pass());
  }
}
