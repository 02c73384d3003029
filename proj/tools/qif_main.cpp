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

// Command-line front end. All computation goes through the shared C API in
// qif/qif_c.h; this file only parses arguments, reads files and prints.
//
// Exit codes: 0 success, 1 scenario/verification mismatch, 2 validation or
// input error, 3 infeasibility (no refinement witness).

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include "qif/qif_c.h"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitValidation = 2;
constexpr int kExitInfeasible = 3;

[[noreturn]] void die(const std::string& message, int code = kExitValidation) {
  std::fprintf(stderr, "qif: %s\n", message.c_str());
  std::exit(code);
}

void check(qif_status status) {
  if (status != QIF_OK) die(qif_last_error());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) die("cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string take_string(char* s) {
  std::string out = s ? s : "";
  qif_string_free(s);
  return out;
}

using DistPtr = std::unique_ptr<qif_dist, decltype(&qif_dist_free)>;
using ChannelPtr = std::unique_ptr<qif_channel, decltype(&qif_channel_free)>;
using ModelPtr = std::unique_ptr<qif_model, decltype(&qif_model_free)>;

DistPtr load_dist(const std::string& path) {
  qif_dist* d = nullptr;
  check(qif_dist_from_json(read_file(path).c_str(), &d));
  return DistPtr(d, &qif_dist_free);
}

ChannelPtr load_channel(const std::string& path) {
  std::string text = read_file(path);
  size_t first = text.find_first_not_of(" \t\r\n");
  qif_channel* c = nullptr;
  if (first != std::string::npos && text[first] == '{') {
    check(qif_channel_from_json(text.c_str(), &c));
  } else {
    check(qif_channel_from_csv(text.c_str(), &c));
  }
  return ChannelPtr(c, &qif_channel_free);
}

ModelPtr load_model(const std::string& path) {
  qif_model* m = nullptr;
  check(qif_model_from_json(read_file(path).c_str(), &m));
  return ModelPtr(m, &qif_model_free);
}

int run_scenario_by_name(const std::string& name, int decimals) {
  char* out = nullptr;
  qif_status status = qif_scenario_run(name.c_str(), decimals, &out);
  if (status != QIF_OK) die(qif_last_error());
  json report = json::parse(take_string(out));
  std::printf("scenario %s\n", report["name"].get<std::string>().c_str());
  bool pass = true;
  for (const auto& row : report["checks"]) {
    bool row_pass = row["pass"].get<bool>();
    pass = pass && row_pass;
    std::printf("  %-34s expected=%-12s actual=%-12s %s\n",
                row["name"].get<std::string>().c_str(),
                row["expected"].get<std::string>().c_str(),
                row["actual"].get<std::string>().c_str(), row_pass ? "PASS" : "FAIL");
  }
  std::printf("scenario %s: %s\n", report["name"].get<std::string>().c_str(),
              pass ? "PASS" : "FAIL");
  return pass ? kExitOk : kExitMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qifdyn: static and strategy-based dynamic information-flow measures"};
  app.require_subcommand(1);
  int decimals = -1;
  app.add_option("--decimal", decimals,
                 "format values as decimals with this many digits (default: exact)");

  // eval
  auto* eval = app.add_subcommand("eval", "static posterior measure and leakage");
  std::string prior_path, channel_path, model_path, kind = "expected";
  eval->add_option("--prior", prior_path, "prior distribution (JSON)")->required();
  eval->add_option("--channel", channel_path, "channel (JSON or CSV)")->required();
  eval->add_option("--model", model_path, "adversary model (JSON)")->required();
  eval->add_option("--kind", kind, "expected or extreme");

  // dynamic
  auto* dynamic = app.add_subcommand("dynamic", "leakage of one realised output");
  std::string observe, mode = "strategy";
  dynamic->add_option("--prior", prior_path)->required();
  dynamic->add_option("--channel", channel_path)->required();
  dynamic->add_option("--model", model_path)->required();
  dynamic->add_option("--observe", observe, "realised output label")->required();
  dynamic->add_option("--mode", mode, "traditional or strategy");

  // strategy
  auto* strategy = app.add_subcommand("strategy", "optimal actions and uniform strategy");
  std::string belief_path;
  strategy->add_option("--model", model_path)->required();
  strategy->add_option("--belief", belief_path, "belief distribution (JSON)")->required();

  // refine
  auto* refine = app.add_subcommand("refine", "find a post-processing witness");
  std::string channel_c_path, channel_d_path, out_path;
  refine->add_option("--channel", channel_c_path, "the finer channel C")->required();
  refine->add_option("--refined", channel_d_path, "the candidate refinement D")->required();
  refine->add_option("--out", out_path, "write the witness JSON here instead of stdout");

  // scenario
  auto* scenario = app.add_subcommand("scenario", "replay a built-in worked scenario");
  std::string scenario_name, export_dir;
  bool all_scenarios = false;
  scenario->add_option("name", scenario_name, "scenario name");
  scenario->add_flag("--all", all_scenarios, "run every scenario in the registry");
  scenario->add_option("--export", export_dir, "write the scenario's files here");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "sample or monitor a pipeline run");
  std::vector<std::string> stage_paths;
  std::string budget = "inf";
  std::uint64_t seed = 0;
  bool no_monitor = false;
  simulate->add_option("--prior", prior_path)->required();
  simulate->add_option("--channel", stage_paths, "pipeline stages, in order")->required();
  simulate->add_option("--model", model_path, "monitor's adversary model");
  simulate->add_option("--budget", budget, "leakage budget (rational or inf)");
  simulate->add_option("--seed", seed, "PRNG seed (QIF_SEED overrides)");
  simulate->add_flag("--sample-only", no_monitor, "sample without monitoring");

  // verify
  auto* verify = app.add_subcommand("verify", "check the static-recovery identities");
  std::string post_path;
  verify->add_option("--prior", prior_path)->required();
  verify->add_option("--channel", channel_path)->required();
  verify->add_option("--model", model_path)->required();
  verify->add_option("--post", post_path, "post-processing channel R");

  CLI11_PARSE(app, argc, argv);

  if (eval->parsed()) {
    auto prior = load_dist(prior_path);
    auto channel = load_channel(channel_path);
    auto model = load_model(model_path);
    char* out = nullptr;
    check(qif_eval_static(model.get(), kind.c_str(), prior.get(), channel.get(), decimals,
                          &out));
    json j = json::parse(take_string(out));
    std::printf("posterior=%s leakage=%s\n", j["posterior"].get<std::string>().c_str(),
                j["leakage"].get<std::string>().c_str());
    return kExitOk;
  }

  if (dynamic->parsed()) {
    auto prior = load_dist(prior_path);
    auto channel = load_channel(channel_path);
    auto model = load_model(model_path);
    char* out = nullptr;
    check(qif_dynamic(model.get(), prior.get(), channel.get(), observe.c_str(),
                      mode.c_str(), decimals, &out));
    std::printf("%s\n", take_string(out).c_str());
    return kExitOk;
  }

  if (strategy->parsed()) {
    auto model = load_model(model_path);
    auto belief = load_dist(belief_path);
    char* out = nullptr;
    check(qif_strategy_report(model.get(), belief.get(), decimals, &out));
    std::printf("%s\n", take_string(out).c_str());
    return kExitOk;
  }

  if (refine->parsed()) {
    auto c = load_channel(channel_c_path);
    auto d = load_channel(channel_d_path);
    qif_channel* witness = nullptr;
    check(qif_refinement_witness(c.get(), d.get(), &witness));
    if (witness == nullptr) {
      std::printf("none\n");
      return kExitInfeasible;
    }
    char* out = nullptr;
    check(qif_channel_to_json(witness, decimals, &out));
    std::string body = take_string(out);
    qif_channel_free(witness);
    if (out_path.empty()) {
      std::printf("%s\n", body.c_str());
    } else {
      std::ofstream file(out_path);
      if (!file) die("cannot write '" + out_path + "'");
      file << body << "\n";
    }
    return kExitOk;
  }

  if (scenario->parsed()) {
    if (!export_dir.empty()) {
      if (scenario_name.empty()) die("--export needs a scenario name");
      check(qif_scenario_export(scenario_name.c_str(), export_dir.c_str()));
      return kExitOk;
    }
    if (all_scenarios) {
      char* names_json = nullptr;
      check(qif_scenario_list(&names_json));
      int exit_code = kExitOk;
      for (const auto& name : json::parse(take_string(names_json))) {
        int rc = run_scenario_by_name(name.get<std::string>(), decimals);
        if (rc != kExitOk) exit_code = rc;
      }
      return exit_code;
    }
    if (scenario_name.empty()) die("give a scenario name or --all");
    return run_scenario_by_name(scenario_name, decimals);
  }

  if (simulate->parsed()) {
    if (const char* env_seed = std::getenv("QIF_SEED")) {
      seed = std::strtoull(env_seed, nullptr, 10);
    }
    auto prior = load_dist(prior_path);
    std::vector<ChannelPtr> stages;
    std::vector<const qif_channel*> raw;
    for (const auto& path : stage_paths) {
      stages.push_back(load_channel(path));
      raw.push_back(stages.back().get());
    }
    ModelPtr model(nullptr, &qif_model_free);
    if (!model_path.empty() && !no_monitor) model = load_model(model_path);
    char* out = nullptr;
    check(qif_simulate(prior.get(), raw.data(), raw.size(), model.get(),
                       budget.c_str(), seed, decimals, &out));
    std::printf("%s", take_string(out).c_str());
    return kExitOk;
  }

  if (verify->parsed()) {
    auto prior = load_dist(prior_path);
    auto channel = load_channel(channel_path);
    auto model = load_model(model_path);
    ChannelPtr post(nullptr, &qif_channel_free);
    if (!post_path.empty()) post = load_channel(post_path);
    char* out = nullptr;
    check(qif_verify_consistency(model.get(), prior.get(), channel.get(), post.get(),
                                 &out));
    std::string body = take_string(out);
    std::printf("%s\n", body.c_str());
    return json::parse(body)["pass"].get<bool>() ? kExitOk : kExitMismatch;
  }

  return kExitOk;
}
