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

#include "mealab/mealab.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <iostream>
#include <memory>
#include <new>
#include <string>

#include "common/error.h"
#include "corpus/dataset.h"
#include "experiment/config.h"
#include "experiment/runner.h"
#include "modeling/model.h"
#include "victim/client.h"
#include "victim/defense.h"
#include "victim/service.h"

struct mealab_dataset {
  mealab::Dataset ds;
};

struct mealab_model {
  std::shared_ptr<const mealab::Model> model;
};

struct mealab_service {
  std::unique_ptr<mealab::VictimService> service;
  std::unique_ptr<mealab::HttpServer> server;
};

namespace {

thread_local std::string last_error;

mealab_status ToStatus(mealab::ErrorCode code) {
  return static_cast<mealab_status>(static_cast<int>(code));
}

mealab_status SetError(mealab_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs `fn`, translating exceptions into status codes.
template <typename Fn>
mealab_status Guard(Fn&& fn) {
  last_error.clear();
  try {
    fn();
    return MEALAB_OK;
  } catch (const mealab::Error& e) {
    return SetError(ToStatus(e.code()), e.what());
  } catch (const std::filesystem::filesystem_error& e) {
    return SetError(MEALAB_IO_ERROR, e.what());
  } catch (const std::bad_alloc&) {
    return SetError(MEALAB_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return SetError(MEALAB_INTERNAL_ERROR, e.what());
  }
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void Require(bool ok, const char* what) {
  if (!ok) mealab::Fail(mealab::ErrorCode::kInvalidArgument, what);
}

}  // namespace

extern "C" {

const char* mealab_version(void) { return "1.0.0"; }

const char* mealab_last_error(void) { return last_error.c_str(); }

const char* mealab_status_name(mealab_status status) {
  if (status == MEALAB_OK) return "ok";
  if (status < MEALAB_INVALID_ARGUMENT || status > MEALAB_INTERNAL_ERROR) {
    return "unknown";
  }
  return mealab::ErrorCodeName(static_cast<mealab::ErrorCode>(status));
}

void mealab_string_free(char* s) { std::free(s); }

mealab_status mealab_dataset_load(const char* path, mealab_dataset** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    auto handle = std::make_unique<mealab_dataset>();
    handle->ds = mealab::LoadJsonl(path);
    *out = handle.release();
  });
}

mealab_status mealab_dataset_save(const mealab_dataset* ds, const char* path) {
  return Guard([&] {
    Require(ds != nullptr && path != nullptr, "null argument");
    mealab::SaveJsonl(ds->ds, path);
  });
}

size_t mealab_dataset_size(const mealab_dataset* ds) {
  return ds == nullptr ? 0 : ds->ds.size();
}

int mealab_dataset_num_classes(const mealab_dataset* ds) {
  return ds == nullptr ? 0 : ds->ds.num_classes;
}

void mealab_dataset_free(mealab_dataset* ds) { delete ds; }

mealab_status mealab_model_load(const char* path, mealab_model** out) {
  return Guard([&] {
    Require(path != nullptr && out != nullptr, "null argument");
    auto handle = std::make_unique<mealab_model>();
    handle->model =
        std::make_shared<const mealab::Model>(mealab::Model::Load(path));
    *out = handle.release();
  });
}

mealab_status mealab_model_save(const mealab_model* m, const char* path) {
  return Guard([&] {
    Require(m != nullptr && path != nullptr, "null argument");
    m->model->Save(path);
  });
}

int mealab_model_num_classes(const mealab_model* m) {
  return m == nullptr ? 0 : m->model->num_classes();
}

mealab_status mealab_model_predict(const mealab_model* m, const char* text,
                                   double* probs, size_t capacity) {
  return Guard([&] {
    Require(m != nullptr && text != nullptr && probs != nullptr,
            "null argument");
    const mealab::Posterior p = m->model->Predict(text);
    Require(capacity >= p.num_classes(), "output buffer too small");
    std::copy(p.probs.begin(), p.probs.end(), probs);
  });
}

void mealab_model_free(mealab_model* m) { delete m; }

mealab_status mealab_config_validate(const char* config_path, char** report) {
  if (report != nullptr) *report = nullptr;
  return Guard([&] {
    Require(config_path != nullptr, "null argument");
    const mealab::ConfigParse parsed =
        mealab::ValidateExperimentConfigFile(config_path);
    if (report != nullptr) *report = CopyString(parsed.Describe());
    if (!parsed.ok()) mealab::Fail(mealab::ErrorCode::kConfig, parsed.Describe());
  });
}

mealab_status mealab_experiment_run(const char* config_path,
                                    const mealab_run_options* options,
                                    size_t* failed_rows) {
  return Guard([&] {
    Require(config_path != nullptr, "null argument");
    mealab::ExperimentConfig cfg = mealab::LoadExperimentConfig(config_path);
    bool verbose = false;
    if (options != nullptr) {
      if (options->output_dir != nullptr) cfg.output_dir = options->output_dir;
      if (options->networked) cfg.transport = mealab::Transport::kNetworked;
      verbose = options->verbose != 0;
    }
    if (cfg.output_dir.empty()) {
      mealab::Fail(mealab::ErrorCode::kConfig, "output_dir is not set");
    }
    mealab::ProgressFn progress;
    if (verbose) {
      progress = [](const std::string& line) { std::cerr << line << "\n"; };
    }
    const mealab::ExperimentReport report =
        mealab::RunExperiment(cfg, progress);
    mealab::WriteReport(report, cfg, cfg.output_dir);
    if (failed_rows != nullptr) {
      *failed_rows = 0;
      for (const auto& row : report.rows) *failed_rows += row.ok() ? 0 : 1;
    }
  });
}

mealab_status mealab_synth(const char* config_path, const char* out_dir) {
  return Guard([&] {
    Require(config_path != nullptr && out_dir != nullptr, "null argument");
    const mealab::ExperimentConfig cfg =
        mealab::LoadExperimentConfig(config_path);
    if (mealab::EmitSyntheticCorpora(cfg, out_dir).empty()) {
      mealab::Fail(mealab::ErrorCode::kConfig,
                   "config declares no synthetic corpora");
    }
  });
}

mealab_status mealab_service_create(const mealab_model* m, const char* defense,
                                    mealab_service** out) {
  return Guard([&] {
    Require(m != nullptr && defense != nullptr && out != nullptr,
            "null argument");
    mealab::DefenseConfig d = mealab::DefenseConfig::Parse(defense);
    d.Validate();
    auto handle = std::make_unique<mealab_service>();
    handle->service = std::make_unique<mealab::VictimService>(m->model, d);
    *out = handle.release();
  });
}

mealab_status mealab_service_register_client(mealab_service* s,
                                             const char* client_id,
                                             uint64_t budget) {
  return Guard([&] {
    Require(s != nullptr && client_id != nullptr, "null argument");
    s->service->ledger().Register(client_id, budget);
  });
}

mealab_status mealab_service_set_open_budget(mealab_service* s,
                                             uint64_t budget) {
  return Guard([&] {
    Require(s != nullptr, "null argument");
    s->service->ledger().SetOpenAllowance(budget);
  });
}

mealab_status mealab_service_handle(mealab_service* s, const char* request_body,
                                    int* http_status, char** response_body) {
  return Guard([&] {
    Require(s != nullptr && request_body != nullptr && http_status != nullptr &&
                response_body != nullptr,
            "null argument");
    const mealab::WireReply reply = s->service->Handle(request_body);
    *response_body = CopyString(reply.body);
    *http_status = reply.status;
  });
}

mealab_status mealab_service_start(mealab_service* s, const char* host,
                                   int port, int* bound_port) {
  return Guard([&] {
    Require(s != nullptr && host != nullptr, "null argument");
    Require(s->server == nullptr, "service is already serving");
    s->server = std::make_unique<mealab::HttpServer>(*s->service);
    const int bound = s->server->Start(host, port);
    if (bound_port != nullptr) *bound_port = bound;
  });
}

mealab_status mealab_service_listen(mealab_service* s, const char* host,
                                    int port) {
  return Guard([&] {
    Require(s != nullptr && host != nullptr, "null argument");
    Require(s->server == nullptr, "service is already serving");
    s->server = std::make_unique<mealab::HttpServer>(*s->service);
    s->server->Listen(host, port);
  });
}

void mealab_service_stop(mealab_service* s) {
  if (s != nullptr && s->server != nullptr) s->server->Stop();
}

void mealab_service_free(mealab_service* s) {
  if (s == nullptr) return;
  mealab_service_stop(s);
  delete s;
}

}  // extern "C"
