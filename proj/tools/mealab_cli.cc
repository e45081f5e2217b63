// Copyright 2026 The MEALab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end. Talks to the library only through the C API.

#include <signal.h>

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mealab/mealab.h"

namespace {

// Prints "<stage>: <status>: <message>" and returns the process exit code.
int Report(const char* stage, mealab_status status) {
  std::fprintf(stderr, "%s: %s: %s\n", stage, mealab_status_name(status),
               mealab_last_error());
  return static_cast<int>(status) + 1;
}

int Validate(const std::string& config) {
  char* report = nullptr;
  const mealab_status st = mealab_config_validate(config.c_str(), &report);
  if (st != MEALAB_OK) {
    if (report != nullptr && report[0] != '\0') {
      std::fprintf(stderr, "validate: config has errors:\n%s", report);
      mealab_string_free(report);
      return static_cast<int>(st) + 1;
    }
    mealab_string_free(report);
    return Report("validate", st);
  }
  mealab_string_free(report);
  std::printf("%s: ok\n", config.c_str());
  return 0;
}

int Run(const std::string& config, const std::string& out_dir, bool networked,
        bool quiet) {
  mealab_run_options options{};
  options.output_dir = out_dir.empty() ? nullptr : out_dir.c_str();
  options.networked = networked ? 1 : 0;
  options.verbose = quiet ? 0 : 1;
  size_t failed = 0;
  const mealab_status st =
      mealab_experiment_run(config.c_str(), &options, &failed);
  if (st != MEALAB_OK) return Report("run", st);
  if (failed > 0) {
    std::fprintf(stderr, "run: %zu row(s) failed; see the status column\n",
                 failed);
    return 1;
  }
  return 0;
}

int Synth(const std::string& config, const std::string& out_dir) {
  const mealab_status st = mealab_synth(config.c_str(), out_dir.c_str());
  if (st != MEALAB_OK) return Report("synth", st);
  std::printf("wrote corpora under %s\n", out_dir.c_str());
  return 0;
}

int Serve(const std::string& model_path, const std::string& defense,
          const std::string& host, int port,
          const std::vector<std::string>& clients, int64_t open_budget) {
  mealab_model* model = nullptr;
  mealab_status st = mealab_model_load(model_path.c_str(), &model);
  if (st != MEALAB_OK) return Report("serve: load", st);
  mealab_service* service = nullptr;
  st = mealab_service_create(model, defense.c_str(), &service);
  if (st != MEALAB_OK) {
    mealab_model_free(model);
    return Report("serve: defense", st);
  }
  int code = 0;
  for (const std::string& spec : clients) {
    const size_t eq = spec.rfind('=');
    uint64_t budget = 0;
    try {
      if (eq == std::string::npos || eq == 0) throw std::invalid_argument("");
      budget = std::stoull(spec.substr(eq + 1));
    } catch (const std::exception&) {
      std::fprintf(stderr, "serve: bad --client '%s' (want ID=BUDGET)\n",
                   spec.c_str());
      code = 2;
      break;
    }
    st = mealab_service_register_client(service, spec.substr(0, eq).c_str(),
                                        budget);
    if (st != MEALAB_OK) {
      code = Report("serve: register", st);
      break;
    }
  }
  if (code == 0 && open_budget >= 0) {
    st = mealab_service_set_open_budget(service,
                                        static_cast<uint64_t>(open_budget));
    if (st != MEALAB_OK) code = Report("serve: register", st);
  }

  if (code == 0) {
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);
    int bound = 0;
    st = mealab_service_start(service, host.c_str(), port, &bound);
    if (st != MEALAB_OK) {
      code = Report("serve: bind", st);
    } else {
      std::printf("serving on %s:%d (defense %s)\n", host.c_str(), bound,
                  defense.c_str());
      std::fflush(stdout);
      int received = 0;
      sigwait(&signals, &received);
      mealab_service_stop(service);
    }
  }
  mealab_service_free(service);
  mealab_model_free(model);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Model extraction and attribute inference experiments"};
  app.require_subcommand(1);

  std::string config;
  auto* validate = app.add_subcommand("validate", "Check a config file");
  validate->add_option("config", config, "Experiment config (YAML)")
      ->required();

  std::string out_dir;
  bool networked = false;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "Run an experiment and write CSVs");
  run->add_option("config", config, "Experiment config (YAML)")->required();
  run->add_option("-o,--out", out_dir, "Override the output directory");
  run->add_flag("--networked", networked,
                "Query the victim over HTTP on localhost");
  run->add_flag("-q,--quiet", quiet, "Suppress progress output");

  std::string synth_dir = "corpora";
  auto* synth = app.add_subcommand("synth", "Write synthetic corpora as JSONL");
  synth->add_option("config", config, "Experiment config (YAML)")->required();
  synth->add_option("-o,--out", synth_dir, "Output directory");

  std::string model_path;
  std::string defense = "none";
  std::string host = "127.0.0.1";
  int port = 8080;
  std::vector<std::string> clients;
  int64_t open_budget = -1;
  auto* serve = app.add_subcommand("serve", "Serve a model over HTTP");
  serve->add_option("model", model_path, "Saved model file")->required();
  serve->add_option("defense", defense,
                    "none | soften:TAU | perturb:SIGMA[:SEED]");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port (0 picks a free one)");
  serve->add_option("--client", clients, "Register ID=BUDGET (repeatable)");
  serve->add_option("--open-budget", open_budget,
                    "Budget granted to unregistered clients");

  CLI11_PARSE(app, argc, argv);

  if (*validate) return Validate(config);
  if (*run) return Run(config, out_dir, networked, quiet);
  if (*synth) return Synth(config, synth_dir);
  return Serve(model_path, defense, host, port, clients, open_budget);
}
