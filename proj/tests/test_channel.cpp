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

#include "doctest.h"
#include "qif/channel.hpp"
#include "testutil.hpp"

using namespace qif;
using namespace qif::testutil;

namespace {

const Labels kAnswers{"no", "yes"};

Channel channel_p() {
  return Channel(kAnswers, kAnswers, {{Rat(2, 3), Rat(1, 3)}, {Rat(1, 3), Rat(2, 3)}});
}

Channel channel_s() {
  return Channel(kAnswers, kAnswers, {{Rat(1), Rat(0)}, {Rat(1, 2), Rat(1, 2)}});
}

}  // namespace

TEST_CASE("channel construction validates rows exactly") {
  CHECK_NOTHROW(channel_p());
  CHECK_NOTHROW(channel_s());
  CHECK_THROWS_AS(Channel(kAnswers, kAnswers,
                          {{Rat(1, 2), Rat(1, 3)}, {Rat(1, 2), Rat(1, 2)}}),
                  Error);
  CHECK_THROWS_AS(Channel(kAnswers, kAnswers,
                          {{Rat(3, 2), Rat(-1, 2)}, {Rat(1, 2), Rat(1, 2)}}),
                  Error);
  CHECK_THROWS_AS(Channel(kAnswers, kAnswers, {{Rat(1), Rat(0)}}), Error);
  // all-zero columns are permitted; they are merely infeasible outputs
  CHECK_NOTHROW(Channel(kAnswers, {"y0", "y1", "y2"},
                        {{Rat(1), Rat(0), Rat(0)}, {Rat(1), Rat(0), Rat(0)}}));
}

TEST_CASE("cascade reproduces the sanitisation pipeline") {
  Channel ps = cascade(channel_p(), channel_s());
  CHECK(ps.at("no", "no") == Rat(5, 6));
  CHECK(ps.at("no", "yes") == Rat(1, 6));
  CHECK(ps.at("yes", "no") == Rat(2, 3));
  CHECK(ps.at("yes", "yes") == Rat(1, 3));
}

TEST_CASE("cascade with the identity is a no-op") {
  Channel p = channel_p();
  CHECK(cascade(p, Channel::identity(kAnswers)) == p);
  CHECK_THROWS_AS(cascade(p, Channel(Labels{"z"}, Labels{"z"}, {{Rat(1)}})), Error);
}

TEST_CASE("cascade is associative on random rational channels") {
  Rng rng(17);
  for (int i = 0; i < 40; ++i) {
    Labels xs = make_labels("x", 2 + i % 4);
    Labels ys = make_labels("y", 2 + (i + 1) % 4);
    Labels zs = make_labels("z", 2 + (i + 2) % 4);
    Labels ws = make_labels("w", 2 + (i + 3) % 4);
    Channel a = random_channel(rng, xs, ys);
    Channel b = random_channel(rng, ys, zs);
    Channel c = random_channel(rng, zs, ws);
    CHECK(cascade(cascade(a, b), c) == cascade(a, cascade(b, c)));
  }
}

TEST_CASE("parallel composition multiplies entries") {
  Channel two = parallel(channel_p(), channel_s());
  CHECK(two.col_count() == 4);
  CHECK(two.at("no", pair_label("no", "no")) == Rat(2, 3));
  CHECK(two.at("yes", pair_label("yes", "no")) == Rat(1, 3));
  // row sums stay 1: brute-force oracle over random rational channels
  Rng rng(19);
  for (int i = 0; i < 30; ++i) {
    Labels xs = make_labels("x", 2 + i % 3);
    Channel c = random_channel(rng, xs, make_labels("y", 2 + i % 3));
    Channel d = random_channel(rng, xs, make_labels("z", 2 + (i + 1) % 3));
    Channel both = parallel(c, d);
    for (size_t row = 0; row < both.row_count(); ++row) {
      Rat sum = 0;
      for (size_t col = 0; col < both.col_count(); ++col) sum += both.at(row, col);
      CHECK(sum == Rat(1));
    }
    // projecting away the second component recovers the first channel
    for (size_t row = 0; row < c.row_count(); ++row) {
      for (size_t y = 0; y < c.col_count(); ++y) {
        Rat sum = 0;
        for (size_t z = 0; z < d.col_count(); ++z) {
          sum += both.at(c.rows()[row], pair_label(c.cols()[y], d.cols()[z]));
        }
        CHECK(sum == c.at(row, y));
      }
    }
  }
}

TEST_CASE("parallel with a single-column channel only re-labels") {
  Channel p = channel_p();
  Channel one = null_channel(kAnswers);
  Channel both = parallel(p, one);
  REQUIRE(both.col_count() == p.col_count());
  for (size_t row = 0; row < p.row_count(); ++row) {
    for (size_t y = 0; y < p.col_count(); ++y) {
      CHECK(both.at(row, y) == p.at(row, y));
      CHECK(both.cols()[y] == pair_label(p.cols()[y], kBottom));
    }
  }
}

TEST_CASE("joint distribution of the uniform prior") {
  Dist uniform = Dist::uniform(kAnswers);
  auto j = joint(uniform, channel_p());
  CHECK(j[0][0] == Rat(1, 3));
  CHECK(j[0][1] == Rat(1, 6));
  CHECK(j[1][0] == Rat(1, 6));
  CHECK(j[1][1] == Rat(1, 3));

  Dist point = Dist::point("no", kAnswers);
  auto jp = joint(point, channel_p());
  CHECK(jp[0][0] == Rat(2, 3));
  CHECK(jp[1][0] == Rat(0));

  CHECK_THROWS_AS(joint(Dist::uniform({"a", "b"}), channel_p()), Error);
}

TEST_CASE("two-bit example: output b carries 1/8 of the joint mass") {
  Dist prior({"00", "10", "11"}, {Rat(7, 8), Rat(1, 16), Rat(1, 16)});
  Channel b({"00", "10", "11"}, {"a", "b"},
            {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}, {Rat(0), Rat(1)}});
  auto j = joint(prior, b);
  Rat mass_b = j[0][1] + j[1][1] + j[2][1];
  CHECK(mass_b == Rat(1, 8));
  CHECK(outer(prior, b).mass("b") == Rat(1, 8));
}

TEST_CASE("outer distribution of the composed pipeline") {
  Dist uniform = Dist::uniform(kAnswers);
  Dist out = outer(uniform, cascade(channel_p(), channel_s()));
  CHECK(out.mass("no") == Rat(3, 4));
  CHECK(out.mass("yes") == Rat(1, 4));

  Dist bottom = outer(uniform, null_channel(kAnswers));
  CHECK(bottom.mass(kBottom) == Rat(1));
}

TEST_CASE("posterior updates match Bayes' rule") {
  Dist uniform = Dist::uniform(kAnswers);
  Dist after_yes = posterior(uniform, channel_p(), "yes");
  CHECK(after_yes.mass("no") == Rat(1, 3));
  CHECK(after_yes.mass("yes") == Rat(2, 3));

  Dist after_no = posterior(uniform, cascade(channel_p(), channel_s()), "no");
  CHECK(after_no.mass("no") == Rat(5, 9));
  CHECK(after_no.mass("yes") == Rat(4, 9));

  // a point prior stays a point posterior on any feasible output
  Dist point = Dist::point("yes", kAnswers);
  CHECK(posterior(point, channel_p(), "no") == point);

  // infeasible output: prior point on "no" through S never yields "yes"
  Dist no = Dist::point("no", kAnswers);
  CHECK_THROWS_AS(posterior(no, channel_s(), "yes"), Error);
  CHECK_THROWS_AS(posterior(uniform, channel_p(), "zz"), Error);
}

TEST_CASE("hyper of the two-bit example keeps output labels") {
  Dist prior({"00", "10", "11"}, {Rat(7, 8), Rat(1, 16), Rat(1, 16)});
  Channel b({"00", "10", "11"}, {"a", "b"},
            {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}, {Rat(0), Rat(1)}});
  Hyper h = hyper(prior, b);
  CHECK(h.outer().mass("a") == Rat(7, 8));
  CHECK(h.outer().mass("b") == Rat(1, 8));
  CHECK(h.inner("a") == Dist({"00", "10", "11"}, {Rat(1), Rat(0), Rat(0)}));
  CHECK(h.inner("b") == Dist({"00", "10", "11"}, {Rat(0), Rat(1, 2), Rat(1, 2)}));
}

TEST_CASE("hyper of the null channel is the prior alone") {
  Dist prior({"x0", "x1", "x2"}, {Rat(9, 10), Rat(1, 20), Rat(1, 20)});
  Hyper h = hyper(prior, null_channel(prior.labels()));
  CHECK(h.outer().mass(kBottom) == Rat(1));
  CHECK(h.inner(kBottom) == prior);
}

TEST_CASE("averaging the posteriors recovers the prior") {
  Rng rng(23);
  for (int i = 0; i < 40; ++i) {
    Labels xs = make_labels("x", 2 + i % 4);
    Labels ys = make_labels("y", 2 + (i + 1) % 4);
    Dist prior = random_dist(rng, xs);
    Channel c = random_channel(rng, xs, ys);
    Hyper h = hyper(prior, c);
    for (size_t x = 0; x < xs.size(); ++x) {
      Rat mixed = 0;
      for (size_t y = 0; y < ys.size(); ++y) {
        if (h.outer().mass(y) == 0) continue;
        mixed += h.outer().mass(y) * h.inner(ys[y]).mass(x);
      }
      CHECK(mixed == prior.mass(x));
    }
  }
}

TEST_CASE("label-erased hyper comparison merges equal posteriors") {
  Dist uniform = Dist::uniform(kAnswers);
  // two copies of the same column, half the outer mass each
  Channel split(kAnswers, {"l", "r", "t"},
                {{Rat(1, 3), Rat(1, 3), Rat(1, 3)}, {Rat(1, 3), Rat(1, 3), Rat(1, 3)}});
  Channel merged(kAnswers, {"u", "t"}, {{Rat(2, 3), Rat(1, 3)}, {Rat(2, 3), Rat(1, 3)}});
  CHECK(hyper_equivalent(hyper(uniform, split), hyper(uniform, merged)));
  CHECK_FALSE(hyper_equivalent(hyper(uniform, channel_p()), hyper(uniform, merged)));
}

TEST_CASE("null channel composition laws") {
  Channel p = channel_p();
  CHECK(cascade(p, null_channel(p.cols())) == null_channel(p.rows()));
  Channel one = null_channel(kAnswers);
  CHECK(one.col_count() == 1);
  CHECK(one.at(0, 0) == Rat(1));
  CHECK(one.at(1, 0) == Rat(1));
}

TEST_CASE("channel JSON and CSV round-trip bit-exactly") {
  Channel p = channel_p();
  CHECK(Channel::from_json(p.to_json()) == p);
  CHECK(Channel::from_csv(p.to_csv()) == p);

  // labels containing commas and quotes survive CSV quoting
  Channel awkward({"a,1", "b\"2"}, {"out,1", "out2"},
                  {{Rat(1, 4), Rat(3, 4)}, {Rat(1), Rat(0)}});
  CHECK(Channel::from_csv(awkward.to_csv()) == awkward);
  CHECK(Channel::from_json(awkward.to_json()) == awkward);

  Rng rng(29);
  for (int i = 0; i < 25; ++i) {
    Channel c = random_channel(rng, make_labels("x", 1 + i % 4), make_labels("y", 1 + (i + 1) % 4));
    CHECK(Channel::from_json(c.to_json()) == c);
    CHECK(Channel::from_csv(c.to_csv()) == c);
  }
}
