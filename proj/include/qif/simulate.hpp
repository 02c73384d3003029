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

#ifndef QIF_SIMULATE_HPP_
#define QIF_SIMULATE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qif/strategy.hpp"

namespace qif {

// Channel pipeline with chained shapes: the prior ranges over the first
// stage's rows and each stage's columns are the next stage's rows.
struct Pipeline {
  Dist prior;
  std::vector<Channel> stages;

  Pipeline(Dist prior, std::vector<Channel> stages);
};

// One concrete run. step_outputs[i] is the realised output of stage i; for a
// monitored run, reports[i] is the cumulative strategy-based leakage of the
// composed prefix at that output and continued[i] the verdict. An aborted run
// has no entries past the aborting stage.
struct Trace {
  uint64_t seed = 0;
  Label secret;
  Labels step_outputs;
  std::vector<LeakageReport> reports;
  std::vector<bool> continued;

  bool aborted() const;

  /// One JSON object per line: a header line, then one line per step.
  std::string to_jsonl(int decimals = -1) const;
};

// Reproducible stream splitting: draw k of a run is
// splitmix64(seed XOR k * 0x9E3779B97F4A7C15). Draw 0 samples the secret,
// draw i+1 samples stage i. Pure function of (seed, k) on every platform.
uint64_t stream_draw(uint64_t seed, uint64_t index);

/// Samples a label by exact cumulative comparison: the 64-bit draw is read as
/// the fraction draw / 2^64 and compared against exact partial sums.
Label sample_label(const Dist& dist, uint64_t draw);

/// Secret from the prior, then each stage's output from its row distribution.
Trace sample_trace(const Pipeline& pipeline, uint64_t seed);

/// Like sample_trace, but after each stage computes the strategy-based
/// dynamic leakage of the composed prefix channel at the realised output and
/// aborts the run the first time it exceeds the budget.
Trace monitor_run(const Pipeline& pipeline, const AdversaryModel& model,
                  const XVal& budget, uint64_t seed);

struct ConsistencyIdentity {
  std::string name;
  XVal residual;
  bool pass;
};

struct ConsistencyReport {
  std::vector<ConsistencyIdentity> identities;
  bool all_pass() const;
  std::string to_json() const;
};

// Exhaustively checks that the strategy-based dynamic measures recover the
// static ones: expected and extreme posterior recovery, prior recovery, and,
// when a post-processing channel is supplied, the refined expected/extreme
// recoveries for d = cascade(c, post). Residuals are exactly 0 for matrix
// models and below 1e-9 for the Shannon model.
ConsistencyReport verify_consistency(const Dist& prior, const Channel& c,
                                     const std::optional<Channel>& post,
                                     const AdversaryModel& model);

}  // namespace qif

#endif  // QIF_SIMULATE_HPP_
