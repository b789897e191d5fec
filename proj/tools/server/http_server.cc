// Copyright 2026 The Flowfire Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "http_server.h"

#include <httplib.h>

#include <optional>

namespace flowfire::server {

namespace {

constexpr const char* kJson = "application/json";

void send_error(httplib::Response& res, int status, const std::string& message) {
  res.status = status;
  res.set_content(json{{"error", message}}.dump(), kJson);
}

// Runs `handler` and maps failures onto status codes.
template <class Handler>
void guarded(httplib::Response& res, Handler&& handler) {
  try {
    handler();
  } catch (const ServiceError& e) {
    send_error(res, e.status(), e.what());
  } catch (const json::exception& e) {
    send_error(res, 400, std::string("malformed JSON: ") + e.what());
  } catch (const std::exception& e) {
    send_error(res, 500, e.what());
  }
}

json body_of(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  return json::parse(req.body);
}

}  // namespace

HttpServer::HttpServer(SessionService& service)
    : service_(service), http_(std::make_unique<httplib::Server>()) {
  auto& svc = service_;
  http_->Post("/sessions", [&svc](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      res.status = 201;
      res.set_content(svc.create(body_of(req)).dump(), kJson);
    });
  });
  http_->Get(R"(/sessions/([^/]+)/state)",
             [&svc](const httplib::Request& req, httplib::Response& res) {
               guarded(res, [&] {
                 res.set_content(svc.state(req.matches[1]).dump(), kJson);
               });
             });
  http_->Get(R"(/sessions/([^/]+)/moves)",
             [&svc](const httplib::Request& req, httplib::Response& res) {
               guarded(res, [&] {
                 res.set_content(svc.moves(req.matches[1]).dump(), kJson);
               });
             });
  http_->Post(R"(/sessions/([^/]+)/fire)",
              [&svc](const httplib::Request& req, httplib::Response& res) {
                guarded(res, [&] {
                  res.set_content(svc.fire(req.matches[1], body_of(req)).dump(),
                                  kJson);
                });
              });
  http_->Post(R"(/sessions/([^/]+)/undo)",
              [&svc](const httplib::Request& req, httplib::Response& res) {
                guarded(res, [&] {
                  res.set_content(svc.undo(req.matches[1]).dump(), kJson);
                });
              });
  http_->Post(R"(/sessions/([^/]+)/autorun)",
              [&svc](const httplib::Request& req, httplib::Response& res) {
                guarded(res, [&] {
                  const std::string id = req.matches[1];
                  const json body = body_of(req);
                  if (!body.value("stream", false)) {
                    res.set_content(svc.autorun(id, body).dump(), kJson);
                    return;
                  }
                  svc.state(id);  // 404 before streaming starts
                  res.set_chunked_content_provider(
                      "application/x-ndjson",
                      [&svc, id, body](std::size_t, httplib::DataSink& sink) {
                        auto line = [&sink](const json& j) {
                          const auto text = j.dump() + "\n";
                          sink.write(text.data(), text.size());
                        };
                        try {
                          const auto every =
                              body.value("progressEvery", std::uint64_t{1000});
                          auto result = svc.autorun(
                              id, body,
                              [&line](std::uint64_t step) {
                                line(json{{"progress", step}});
                              },
                              every);
                          line(result);
                        } catch (const ServiceError& e) {
                          line(json{{"error", e.what()}, {"status", e.status()}});
                        }
                        sink.done();
                        return true;
                      });
                });
              });
  http_->Get(R"(/sessions/([^/]+)/predict)",
             [&svc](const httplib::Request& req, httplib::Response& res) {
               guarded(res, [&] {
                 res.set_content(svc.predict(req.matches[1]).dump(), kJson);
               });
             });
  http_->Get(R"(/sessions/([^/]+)/render)",
             [&svc](const httplib::Request& req, httplib::Response& res) {
               guarded(res, [&] {
                 const std::string format = req.has_param("format")
                                                ? req.get_param_value("format")
                                                : "ascii";
                 std::optional<std::string> window;
                 if (req.has_param("window")) window = req.get_param_value("window");
                 res.set_content(svc.render(req.matches[1], format, window),
                                 format == "svg" ? "image/svg+xml"
                                                 : "text/plain; charset=utf-8");
               });
             });
}

HttpServer::~HttpServer() = default;

int HttpServer::bind_any(const std::string& host) {
  return http_->bind_to_any_port(host);
}

bool HttpServer::bind(const std::string& host, int port) {
  return http_->bind_to_port(host, port);
}

bool HttpServer::serve() { return http_->listen_after_bind(); }

void HttpServer::stop() { http_->stop(); }

void HttpServer::wait_until_ready() const { http_->wait_until_ready(); }

}  // namespace flowfire::server
