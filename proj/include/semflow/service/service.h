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

#ifndef SEMFLOW_SERVICE_SERVICE_H_
#define SEMFLOW_SERVICE_SERVICE_H_

#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "semflow/base/clock.h"
#include "semflow/engine/engine.h"
#include "semflow/service/auth.h"
#include "semflow/service/notifications.h"
#include "semflow/store/triple_store.h"
#include "semflow/wiki/wiki.h"

namespace semflow::service {

struct Request {
  std::string method;
  std::string path;  // percent-encoded, without the query string
  std::map<std::string, std::string> query;  // decoded
  std::map<std::string, std::string> headers;  // lower-case names
  std::string body;
};

struct Response {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

struct ServiceConfig {
  std::string base_iri = "http://example.org/";
  // Domain vocabulary of the canned searches.
  std::string domain_ns = "http://example.org/";
  std::filesystem::path data_dir;  // empty: nothing is persisted
  std::chrono::seconds session_ttl{8 * 3600};
  std::chrono::milliseconds poll_timeout{20000};
  std::chrono::milliseconds max_poll_timeout{60000};
  engine::GroupingConfig grouping;
  std::vector<rules::Rulebase> extra_rules;
};

// HTTP status for an error code.
int status_for(const std::string &code);

// Splits a percent-encoded path into decoded segments.
std::vector<std::string> path_segments(std::string_view path);

// Short task id "<instance number>.<task number>" for a task URI; empty
// when the URI has another shape.
std::string task_id(const std::string &task_uri);

// Wires store, engine, wiki, sessions and notifications into one process
// and answers API requests. Routes are listed in docs/http-api.md.
class Service {
 public:
  Service(ServiceConfig config, Clock &clock);
  ~Service();

  Service(const Service &) = delete;
  Service &operator=(const Service &) = delete;

  Response handle(const Request &r);

  void add_user(const std::string &name, const Term &iri, const std::string &password,
                HashStrength strength = HashStrength::kInteractive);
  size_t import_ontology(const std::filesystem::path &file);
  // Parses, deploys and remembers the source text for persistence.
  const procdef::ProcessDefinition &deploy_text(const std::string &text);
  wiki::Template add_template_text(const std::string &text);

  // Events with seq > after whose decoration has finished, waiting up to
  // `timeout` when there are none yet.
  std::vector<rules::Event> wait_events(uint64_t after, std::chrono::milliseconds timeout);
  // Wakes all waiting feed readers; later waits return immediately.
  void shutdown();

  // Reads and writes the data directory: store.nt, pages/, processes/,
  // templates/, users.json; save() also writes events.log.
  void load();
  void save() const;

  TripleStore &store() { return store_; }
  engine::Engine &engine() { return *engine_; }
  wiki::Wiki &wiki() { return wiki_; }
  UserDirectory &users() { return users_; }
  SessionStore &sessions() { return sessions_; }
  NotificationCenter &notifications() { return notifications_; }
  const ServiceConfig &config() const { return config_; }

 private:
  struct Call;

  void wire();
  void delivered(uint64_t seq);
  Term resolve_resource(const std::string &text) const;
  std::string find_task(const std::string &id) const;

  Response route(Call &c);
  Response login(Call &c);
  Response pages(Call &c);
  Response processes(Call &c);
  Response tasks(Call &c);
  Response search(Call &c);
  Response query(Call &c);
  Response notifications(Call &c);
  Response events(Call &c);
  Response templates(Call &c);

  ServiceConfig config_;
  Clock &clock_;
  TripleStore store_;
  std::unique_ptr<engine::Engine> engine_;
  wiki::Wiki wiki_;
  UserDirectory users_;
  SessionStore sessions_;
  NotificationCenter notifications_;

  mutable std::mutex sources_mu_;
  std::map<std::string, std::string> process_sources_;  // "name-version" -> text
  std::map<std::string, std::string> template_sources_;

  std::mutex feed_mu_;
  std::condition_variable feed_cv_;
  uint64_t watermark_ = 0;
  std::set<uint64_t> ahead_;
  bool stopping_ = false;
};

}  // namespace semflow::service

#endif  // SEMFLOW_SERVICE_SERVICE_H_
