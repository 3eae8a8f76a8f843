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

#include "semflow/service/http.h"

#include <cctype>

#include "httplib.h"

namespace semflow::service {

struct HttpServer::Impl {
  Service &svc;
  httplib::Server server;

  explicit Impl(Service &s) : svc(s) {
    auto handler = [this](const httplib::Request &in, httplib::Response &out) {
      Request r;
      r.method = in.method;
      r.path = in.target.substr(0, in.target.find('?'));
      for (const auto &[k, v] : in.params) r.query[k] = v;
      for (const auto &[k, v] : in.headers) {
        std::string key = k;
        for (char &c : key) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        r.headers[key] = v;
      }
      r.body = in.body;
      Response res = svc.handle(r);
      out.status = res.status;
      out.set_content(res.body, res.content_type);
    };
    server.Get(".*", handler);
    server.Post(".*", handler);
    server.Put(".*", handler);
    server.Delete(".*", handler);
  }
};

HttpServer::HttpServer(Service &svc) : impl_(std::make_unique<Impl>(svc)) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string &host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::run() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  impl_->svc.shutdown();
  impl_->server.stop();
}

}  // namespace semflow::service
