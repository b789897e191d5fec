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

#ifndef FLOWFIRE_TOOLS_SERVER_HTTP_SERVER_H_
#define FLOWFIRE_TOOLS_SERVER_HTTP_SERVER_H_

#include <memory>
#include <string>

#include "session_service.h"

namespace httplib {
class Server;
}

namespace flowfire::server {

// HTTP+JSON binding of a SessionService:
//   POST /sessions                      create
//   GET  /sessions/{id}/state           snapshot
//   GET  /sessions/{id}/moves           legal moves with indices
//   POST /sessions/{id}/fire            {"version","moveIndex"}
//   POST /sessions/{id}/undo
//   POST /sessions/{id}/autorun         {"strategy","seed","maxSteps"}; with
//                                       "stream":true the answer is NDJSON
//                                       progress lines then the result
//   GET  /sessions/{id}/predict         closed-form pyramid
//   GET  /sessions/{id}/render?format=ascii|svg&window=x0,y0,x1,y1
class HttpServer {
 public:
  explicit HttpServer(SessionService& service);
  ~HttpServer();

  // Binds to an ephemeral port and returns it (or -1).
  int bind_any(const std::string& host);
  bool bind(const std::string& host, int port);
  // Serves until stop(); call after a bind.
  bool serve();
  void stop();
  void wait_until_ready() const;

 private:
  SessionService& service_;
  std::unique_ptr<httplib::Server> http_;
};

}  // namespace flowfire::server

#endif  // FLOWFIRE_TOOLS_SERVER_HTTP_SERVER_H_
