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

#ifndef MEALAB_VICTIM_CLIENT_H_
#define MEALAB_VICTIM_CLIENT_H_

#include <memory>
#include <span>
#include <string>

#include "victim/protocol.h"
#include "victim/service.h"

namespace mealab {

// Attacker-side handle on the prediction API. Subclasses only move bytes;
// request encoding and reply decoding are shared.
class PredictionClient {
 public:
  explicit PredictionClient(std::string client_id)
      : client_id_(std::move(client_id)) {}
  virtual ~PredictionClient() = default;

  const std::string& client_id() const { return client_id_; }

  // Order-preserving; a batch larger than the remaining budget is rejected
  // whole with kBudgetExceeded.
  QueryResult Query(std::span<const std::string> texts);

  virtual WireReply Exchange(const std::string& request_body) = 0;

 private:
  std::string client_id_;
};

class InProcessClient : public PredictionClient {
 public:
  InProcessClient(VictimService& service, std::string client_id)
      : PredictionClient(std::move(client_id)), service_(service) {}

  WireReply Exchange(const std::string& request_body) override;

 private:
  VictimService& service_;
};

class HttpClient : public PredictionClient {
 public:
  HttpClient(std::string host, int port, std::string client_id);
  ~HttpClient() override;

  WireReply Exchange(const std::string& request_body) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Serves a VictimService over HTTP on a background thread.
class HttpServer {
 public:
  explicit HttpServer(VictimService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Binds and starts serving; port 0 picks a free port. Returns the bound
  // port. Throws kTransport on bind failure.
  int Start(const std::string& host, int port);
  // Binds and serves on the calling thread until Stop() is called.
  void Listen(const std::string& host, int port);
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace mealab

#endif  // MEALAB_VICTIM_CLIENT_H_
