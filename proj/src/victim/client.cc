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

#include "victim/client.h"

#include <thread>

#include "common/error.h"
#include "httplib.h"

namespace mealab {

QueryResult PredictionClient::Query(std::span<const std::string> texts) {
  return DecodeReply(Exchange(EncodeRequest(client_id_, texts)));
}

WireReply InProcessClient::Exchange(const std::string& request_body) {
  return service_.Handle(request_body);
}

struct HttpClient::Impl {
  Impl(const std::string& host, int port) : client(host, port) {
    client.set_keep_alive(true);
  }
  httplib::Client client;
};

HttpClient::HttpClient(std::string host, int port, std::string client_id)
    : PredictionClient(std::move(client_id)),
      impl_(std::make_unique<Impl>(host, port)) {}

HttpClient::~HttpClient() = default;

WireReply HttpClient::Exchange(const std::string& request_body) {
  auto res = impl_->client.Post(kPredictPath, request_body, "application/json");
  if (!res) {
    return {0, "{\"error\":\"transport\",\"detail\":\"" +
                   httplib::to_string(res.error()) + "\"}"};
  }
  return {res->status, res->body};
}

constexpr size_t kServerThreads = 64;

struct HttpServer::Impl {
  explicit Impl(VictimService& svc) : service(svc) {
    // A keep-alive connection pins a worker, so the pool must cover the
    // expected number of concurrent clients or later ones queue and time out.
    server.new_task_queue = [] { return new httplib::ThreadPool(kServerThreads); };
    server.Post(kPredictPath, [this](const httplib::Request& req,
                                     httplib::Response& res) {
      WireReply reply = service.Handle(req.body);
      res.status = reply.status;
      res.set_content(reply.body, "application/json");
    });
  }
  VictimService& service;
  httplib::Server server;
  std::thread thread;
};

HttpServer::HttpServer(VictimService& service)
    : impl_(std::make_unique<Impl>(service)) {}

HttpServer::~HttpServer() { Stop(); }

int HttpServer::Start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound <= 0) {
    Fail(ErrorCode::kTransport,
         "cannot bind " + host + ":" + std::to_string(port));
  }
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void HttpServer::Listen(const std::string& host, int port) {
  if (!impl_->server.listen(host, port)) {
    Fail(ErrorCode::kTransport,
         "cannot listen on " + host + ":" + std::to_string(port));
  }
}

void HttpServer::Stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace mealab
