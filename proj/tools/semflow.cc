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

#include <spdlog/spdlog.h>

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "semflow/base/error.h"
#include "semflow/interchange/interchange.h"
#include "semflow/rules/rulebase.h"
#include "semflow/service/http.h"
#include "semflow/service/scenario.h"
#include "semflow/service/service.h"

namespace fs = std::filesystem;
using namespace semflow;

namespace {

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("io-error", p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

rules::Rulebase load_rules(const fs::path &p) {
  std::string text = slurp(p);
  if (p.extension() == ".xml") return interchange::import_rules(text);
  return rules::parse_rules(text);
}

struct Options {
  std::string data_dir = "semflow-data";
  std::string base_iri = "http://example.org/";
  std::string domain_ns = "http://example.org/";
  std::vector<std::string> rules;
  std::string group_by;
  std::string group_root;
};

service::ServiceConfig make_config(const Options &o) {
  service::ServiceConfig c;
  c.data_dir = o.data_dir;
  c.base_iri = o.base_iri;
  c.domain_ns = o.domain_ns;
  for (const std::string &r : o.rules) c.extra_rules.push_back(load_rules(r));
  if (!o.group_by.empty()) c.grouping.predicate = o.group_by;
  if (!o.group_root.empty()) c.grouping.root = o.group_root;
  return c;
}

int serve(const Options &o, const std::string &host, int port) {
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  SystemClock clock;
  service::Service svc(make_config(o), clock);
  svc.load();
  service::HttpServer http(svc);
  int bound = http.bind(host, port);
  if (bound < 0) throw Error("io-error", "cannot listen on " + host + ":" + std::to_string(port));
  spdlog::info("serving {} on http://{}:{}", o.data_dir, host, bound);
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    spdlog::info("signal {}: shutting down", sig);
    http.stop();
  });
  http.run();
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  svc.save();
  return 0;
}

int run_scenario(const Options &o, const fs::path &script, const std::string &transcript) {
  SystemClock clock;
  service::Service svc(make_config(o), clock);
  svc.load();
  service::ScenarioRunner runner(svc, script.parent_path());
  service::ScenarioResult r = runner.run(slurp(script));
  fs::create_directories(o.data_dir);
  svc.save();
  if (!transcript.empty()) {
    std::ofstream out(transcript, std::ios::binary);
    out << service::normalize_log(svc.engine().event_log());
  }
  for (const std::string &f : r.failures) std::cerr << script.string() << ": " << f << "\n";
  for (const std::string &e : svc.engine().rule_errors()) std::cerr << "rule error: " << e << "\n";
  std::cout << (r.ok ? "ok" : "FAILED") << ": " << r.calls << " calls, "
            << svc.engine().last_seq() << " events, log in "
            << (fs::path(o.data_dir) / "events.log").string() << "\n";
  return r.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"semflow: semantic wiki workflows"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--data-dir", o.data_dir, "Data directory")->capture_default_str();
  app.add_option("--base-iri", o.base_iri, "Namespace for pages and process URIs")
      ->capture_default_str();
  app.add_option("--domain-ns", o.domain_ns, "Domain vocabulary of the canned searches")
      ->capture_default_str();
  app.add_option("--rules", o.rules, "Extra rule files (.rules or .xml)");
  app.add_option("--group-by", o.group_by, "Predicate grouping the task inbox");
  app.add_option("--group-root", o.group_root, "Class whose children name the inbox groups");

  std::string host = "127.0.0.1";
  int port = 8080;
  CLI::App *serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  serve_cmd->add_option("--host", host)->capture_default_str();
  serve_cmd->add_option("--port", port)->capture_default_str();

  std::string file;
  CLI::App *import_cmd = app.add_subcommand("import-ontology", "Add an N-Triples file to the store");
  import_cmd->add_option("file", file)->required()->check(CLI::ExistingFile);
  CLI::App *deploy_cmd = app.add_subcommand("deploy", "Deploy a process definition");
  deploy_cmd->add_option("file", file)->required()->check(CLI::ExistingFile);
  CLI::App *template_cmd = app.add_subcommand("add-template", "Register a form template");
  template_cmd->add_option("file", file)->required()->check(CLI::ExistingFile);

  std::string transcript;
  CLI::App *scenario_cmd = app.add_subcommand("run-scenario", "Run a scenario script headlessly");
  scenario_cmd->add_option("script", file)->required()->check(CLI::ExistingFile);
  scenario_cmd->add_option("--transcript", transcript, "Write the normalized event log here");

  std::string out;
  CLI::App *export_cmd = app.add_subcommand("export-rules", "Write the active rulebase as XML");
  export_cmd->add_option("out", out)->required();
  CLI::App *dump_cmd = app.add_subcommand("dump-store", "Write the store as N-Triples");
  dump_cmd->add_option("out", out)->required();

  std::string name, iri, password;
  CLI::App *user_cmd = app.add_subcommand("add-user", "Create or replace a login");
  user_cmd->add_option("name", name)->required();
  user_cmd->add_option("iri", iri)->required();
  user_cmd->add_option("--password", password)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*serve_cmd) return serve(o, host, port);
    if (*scenario_cmd) return run_scenario(o, file, transcript);

    SystemClock clock;
    service::Service svc(make_config(o), clock);
    svc.load();
    if (*import_cmd) {
      size_t n = svc.import_ontology(file);
      std::cout << n << " triples added\n";
    } else if (*deploy_cmd) {
      const procdef::ProcessDefinition &d = svc.deploy_text(slurp(file));
      std::cout << "deployed " << d.name << " version " << d.version << " as " << d.uri << "\n";
    } else if (*template_cmd) {
      std::cout << "template " << svc.add_template_text(slurp(file)).name << "\n";
    } else if (*user_cmd) {
      svc.add_user(name, Term::iri(iri), password);
    } else if (*export_cmd) {
      std::ofstream f(out, std::ios::binary);
      f << interchange::export_rules(svc.engine().rulebase());
      if (!f) throw Error("io-error", out);
      return 0;
    } else if (*dump_cmd) {
      svc.store().save(out);
      return 0;
    }
    fs::create_directories(o.data_dir);
    svc.save();
  } catch (const Error &e) {
    std::cerr << "semflow: " << e.what() << "\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "semflow: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
