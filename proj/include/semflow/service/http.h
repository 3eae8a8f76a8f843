// Copyright 2026 The Semflow Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SEMFLOW_SERVICE_HTTP_H_
#define SEMFLOW_SERVICE_HTTP_H_

#include <memory>
#include <string>

#include "semflow/service/service.h"

namespace semflow::service {

// Puts a Service behind an HTTP listener.
class HttpServer {
 public:
  explicit HttpServer(Service &svc);
  ~HttpServer();

  // Port 0 picks a free port. Returns the bound port or -1.
  int bind(const std::string &host, int port);
  // Blocks until stop().
  bool run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace semflow::service

#endif  // SEMFLOW_SERVICE_HTTP_H_
