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

#ifndef QIF_SCENARIO_HPP_
#define QIF_SCENARIO_HPP_

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qif/channel.hpp"
#include "qif/rational.hpp"

namespace qif {

// One pinned value of a worked scenario: a short name, a plain-words note on
// what is being measured, the expected value, and the computation that must
// reproduce it (exactly for rational values, within 1e-9 for Shannon ones).
struct ScenarioCheck {
  std::string name;
  std::string note;
  XVal expected;
  std::function<XVal()> compute;
};

struct Scenario {
  std::string name;
  std::string description;
  Dist prior;
  std::vector<std::pair<std::string, Channel>> channels;
  std::vector<std::pair<std::string, Label>> observations;
  std::vector<ScenarioCheck> checks;
};

struct ScenarioCheckResult {
  std::string name;
  std::string note;
  XVal expected;
  XVal actual;
  bool pass;
};

struct ScenarioResult {
  std::string name;
  std::vector<ScenarioCheckResult> checks;
  bool all_pass() const;
  std::string to_json(int decimals = -1) const;
};

/// The built-in scenarios, constructed once.
const std::vector<Scenario>& scenario_registry();

/// UnknownScenario when the name is not registered.
const Scenario& find_scenario(const std::string& name);

/// Recomputes every pinned value of the scenario.
ScenarioResult run_scenario(const Scenario& scenario);

/// True when expected and actual agree: exact equality for two exact values,
/// matching infinities, otherwise |difference| <= 1e-9.
bool values_agree(const XVal& expected, const XVal& actual);

}  // namespace qif

#endif  // QIF_SCENARIO_HPP_
