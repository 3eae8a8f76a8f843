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

#include <algorithm>
#include <deque>
#include <map>
#include <random>
#include <set>
#include <thread>

#include "doctest.h"
#include "procdef_gen.h"
#include "semflow/base/error.h"
#include "semflow/engine/engine.h"
#include "semflow/sparql/query.h"
#include "test_util.h"

using namespace semflow;
using namespace semflow::engine;
using namespace semflow::procdef;
using namespace semflow::testing;

namespace {

std::string error_code(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  return "";
}

ProcessDefinition fixture(const std::string &file) {
  return parse_definition(slurp(source_dir() / "fixtures" / file));
}

void load_ontology(TripleStore &store) {
  store.import(source_dir() / "fixtures" / "ontology.nt");
}

// Stand-ins for the wiki-backed actions: pages are ex:page/<title>, form
// fields become ex:<field> attributes of the new page.
void register_test_actions(Engine &engine) {
  engine.register_action("create-page", [](ActionContext &ctx) {
    std::string title = ctx.binding.args.at(1);
    size_t at = title.find("{instance}");
    if (at != std::string::npos) {
      title.replace(at, 10, std::to_string(ctx.instance.number));
    }
    Term page = ex("page/" + title);
    std::vector<Triple> ts;
    for (const auto &[field, value] : ctx.task.form_data) {
      ts.push_back(Triple{page, ex(field), value});
    }
    ctx.engine.store().insert_all(ts);
    ctx.instance.variables[ctx.binding.args.at(2)] = page;
  });
  engine.register_action("link", [](ActionContext &ctx) {
    const Term &from = ctx.instance.variables.at(ctx.binding.args.at(0));
    const Term &to = ctx.instance.variables.at(ctx.binding.args.at(2));
    std::string pred = ctx.binding.args.at(1);
    if (pred.rfind("ex:", 0) == 0) pred = kEx + pred.substr(3);
    ctx.engine.store().insert(Triple{from, Term::iri(pred), to});
  });
}

struct Harness {
  TripleStore store;
  ManualClock clock;
  Engine engine;

  explicit Harness(EngineConfig config = {}) : engine(store, clock, std::move(config)) {
    load_ontology(store);
    register_test_actions(engine);
  }
};

std::vector<std::string> kinds(const std::vector<EngineEvent> &events) {
  std::vector<std::string> out;
  for (const EngineEvent &e : events) out.push_back(e.kind);
  return out;
}

std::string local_name(const std::optional<Term> &t) {
  if (!t) return "-";
  const std::string &v = t->value();
  return v.substr(v.find_last_of("/#") + 1);
}

// kind(subject local name) per event, for readable sequence checks.
std::vector<std::string> trace(const std::vector<EngineEvent> &events) {
  std::vector<std::string> out;
  for (const EngineEvent &e : events) out.push_back(e.kind + "(" + local_name(e.subject) + ")");
  return out;
}

std::string open_task(const Engine &engine, const std::string &instance) {
  for (const TaskInstance &t : engine.tasks()) {
    if (t.instance == instance && t.state != TaskState::kCompleted) return t.uri;
  }
  return "";
}

// Hand-written closure over asserted rdfs:subClassOf edges.
std::set<Term> ancestors(const Graph &g, const Term &c) {
  std::set<Term> seen{c};
  std::deque<Term> queue{c};
  while (!queue.empty()) {
    Term cur = queue.front();
    queue.pop_front();
    for (const Triple &t : g.triples()) {
      if (t.subject == cur && t.predicate == sub_class_of() && t.object.is_iri() &&
          seen.insert(t.object).second) {
        queue.push_back(t.object);
      }
    }
  }
  return seen;
}

bool ask(const TripleStore &store, const std::string &text) {
  return sparql::evaluate_ask(sparql::parse_query(text, store.prefixes()), store.snapshot());
}

size_t count(const TripleStore &store, const std::string &text) {
  return sparql::evaluate_select(sparql::parse_query(text, store.prefixes()), store.snapshot())
      .rows.size();
}

// Per-instance ordering invariants over the global log.
void check_event_order(const std::vector<EngineEvent> &events) {
  for (size_t i = 1; i < events.size(); ++i) REQUIRE(events[i - 1].seq < events[i].seq);
  std::map<Term, std::vector<const EngineEvent *>> per_instance;
  for (const EngineEvent &e : events) per_instance[*e.instance].push_back(&e);
  for (const auto &[inst, es] : per_instance) {
    REQUIRE(es.front()->kind == "process-start");
    size_t ends = 0;
    std::map<Term, std::vector<std::string>> per_task;
    for (size_t i = 0; i < es.size(); ++i) {
      if (es[i]->kind == "process-end") {
        ++ends;
        CHECK(i + 1 == es.size());
      }
      if (es[i]->kind.rfind("task-", 0) == 0) per_task[*es[i]->subject].push_back(es[i]->kind);
    }
    CHECK(ends <= 1);
    for (const auto &[task, ks] : per_task) {
      std::vector<std::string> expected{"task-create", "task-assign", "task-start", "task-end"};
      expected.resize(ks.size());
      CHECK(ks == expected);
    }
  }
}

// Every registry entry has its type and state triples, and nothing else
// in the store claims to be one.
void check_decoration(const Engine &engine, const TripleStore &store) {
  const Graph &g = store.snapshot().graph();
  std::vector<ProcessInstance> insts = engine.instances();
  std::vector<TaskInstance> tasks = engine.tasks();
  for (const ProcessInstance &p : insts) {
    Term uri = Term::iri(p.uri);
    CHECK(g.contains(Triple{uri, rdf_type(), Term::iri(vocab::pm("ProcessInstance"))}));
    CHECK(g.find(uri, Term::iri(vocab::pm("state")), std::nullopt) ==
          std::vector<Triple>{Triple{uri, Term::iri(vocab::pm("state")),
                                     lit(std::string(to_string(p.state)))}});
  }
  for (const TaskInstance &t : tasks) {
    Term uri = Term::iri(t.uri);
    CHECK(g.contains(Triple{uri, rdf_type(), Term::iri(vocab::pm("TaskInstance"))}));
    CHECK(g.find(uri, Term::iri(vocab::pm("state")), std::nullopt) ==
          std::vector<Triple>{Triple{uri, Term::iri(vocab::pm("state")),
                                     lit(std::string(to_string(t.state)))}});
  }
  CHECK(g.find(std::nullopt, rdf_type(), Term::iri(vocab::pm("ProcessInstance"))).size() ==
        insts.size());
  CHECK(g.find(std::nullopt, rdf_type(), Term::iri(vocab::pm("TaskInstance"))).size() ==
        tasks.size());
}

void check_tokens(const ProcessInstance &p) {
  CHECK(p.live_tokens() == p.tokens_created - p.tokens_consumed);
  CHECK((p.state == InstanceState::kEnded) == (p.live_tokens() == 0));
  for (const Token &t : p.tokens) {
    CHECK((t.state == TokenState::kWaiting) == !t.task.empty());
  }
}

void run_task(Engine &engine, const std::string &task, const FormInput &data = {}) {
  TaskInstance t = *engine.task(task);
  REQUIRE(t.assignee);
  engine.start_task(task, *t.assignee);
  engine.complete_task(task, *t.assignee, data);
}

const Term kAlice = ex("alice");
const Term kBob = ex("bob");
const Term kCarol = ex("carol");

}  // namespace

TEST_CASE("iso8601 formatting") {
  CHECK(iso8601(Clock::time_point{}) == "1970-01-01T00:00:00.000Z");
  CHECK(iso8601(Clock::time_point{} + std::chrono::milliseconds(1781870400123)) ==
        "2026-06-19T12:00:00.123Z");
  ManualClock c(Clock::time_point{}, std::chrono::milliseconds(5));
  CHECK(c.now() == Clock::time_point{});
  CHECK(c.now() == Clock::time_point{} + std::chrono::milliseconds(5));
}

TEST_CASE("deploy") {
  Harness h;
  const ProcessDefinition &d = h.engine.deploy(fixture("specimen.process"));
  CHECK(d.uri == kEx + "process/specimen/1");
  CHECK(error_code([&] { h.engine.deploy(fixture("specimen.process")); }) ==
        "duplicate-version");
  ProcessDefinition broken = parse_definition("process b version 1\nstart a\n");
  CHECK(error_code([&] { h.engine.deploy(broken); }) == "invalid-definition");
  CHECK(h.engine.definition("specimen", 1));
  CHECK(!h.engine.definition("specimen", 2));
  CHECK(error_code([&] {
          TripleStore s;
          ManualClock c;
          Engine e(s, c, EngineConfig{"no-base", {}, 64, {}});
        }) == "invalid-namespace");
}

TEST_CASE("start→end definition ends immediately") {
  Harness h;
  h.engine.deploy(parse_definition("process tiny version 1\nstart a\nend b\ntransition a -> b\n"));
  ProcessInstance p = h.engine.start_process("tiny", 1, kAlice);
  CHECK(p.uri == kEx + "process/tiny/1/instance/1");
  CHECK(p.state == InstanceState::kEnded);
  CHECK(kinds(h.engine.events()) ==
        std::vector<std::string>{"process-start", "node-enter", "node-leave",
                                 "transition-taken", "node-enter", "process-end"});
  check_tokens(p);
  CHECK(error_code([&] { h.engine.start_process("nope", 1, kAlice); }) == "unknown-definition");
  CHECK(ask(h.store, "ASK { <" + p.uri + "> pm:state \"ended\" }"));
}

TEST_CASE("specimen workflow end to end") {
  Harness h;
  h.engine.deploy(fixture("specimen.process"));
  ProcessInstance p = h.engine.start_process("specimen", 1, kAlice);
  CHECK(trace(h.engine.events()) ==
        std::vector<std::string>{"process-start(1)", "node-enter(begin)", "node-leave(begin)",
                                 "transition-taken(0)", "node-enter(describeDiscovery)",
                                 "task-create(1)", "task-assign(1)"});
  CHECK(ask(h.store, "ASK { <" + p.uri + "> a pm:ProcessInstance ; pm:state \"running\" }"));

  std::string t1 = open_task(h.engine, p.uri);
  CHECK(h.engine.task(t1)->assignee == kAlice);
  CHECK(error_code([&] { h.engine.complete_task(t1, kAlice, {}); }) == "wrong-state");
  CHECK(error_code([&] { h.engine.start_task(t1, kBob); }) == "wrong-user");
  CHECK(error_code([&] { h.engine.start_task("urn:x:none", kBob); }) == "unknown-task");
  h.engine.start_task(t1, kAlice);
  CHECK(error_code([&] { h.engine.start_task(t1, kAlice); }) == "wrong-state");
  CHECK(error_code([&] { h.engine.complete_task(t1, kBob, {}); }) == "wrong-user");
  h.engine.complete_task(t1, kAlice, {{"location", "Vienna"}});
  CHECK(error_code([&] { h.engine.complete_task(t1, kAlice, {}); }) == "wrong-state");

  ProcessInstance mid = *h.engine.instance(p.uri);
  Term discovery = mid.variables.at("discoveryPage");
  CHECK(discovery == ex("page/Discovery-1"));
  std::string t2 = open_task(h.engine, p.uri);
  CHECK(h.engine.task(t2)->assignee == kBob);
  CHECK(h.engine.task(t2)->about == discovery);
  CHECK(ask(h.store, "ASK { <" + t2 + "> pm:about <" + discovery.value() + "> }"));

  run_task(h.engine, t2, {{"taxon", "<http://example.org/Morchella>"}});
  Term identification = h.engine.instance(p.uri)->variables.at("identificationPage");
  CHECK(h.store.snapshot()->contains(Triple{discovery, ex("identifiedAs"), identification}));

  // Curator oracle: walk identifiedAs → taxon → ancestors → responsibleFor.
  const Graph &g = h.store.snapshot().graph();
  std::set<Term> expected;
  for (const Triple &id : g.find(discovery, ex("identifiedAs"), std::nullopt)) {
    for (const Triple &tx : g.find(id.object, ex("taxon"), std::nullopt)) {
      for (const Term &anc : ancestors(g, tx.object)) {
        for (const Triple &r : g.find(std::nullopt, ex("responsibleFor"), anc)) {
          expected.insert(r.subject);
        }
      }
    }
  }
  REQUIRE(expected == std::set<Term>{kCarol});
  std::string t3 = open_task(h.engine, p.uri);
  CHECK(h.engine.task(t3)->assignee == kCarol);
  CHECK(h.engine.task(t3)->notes.empty());

  run_task(h.engine, t3);
  ProcessInstance done = *h.engine.instance(p.uri);
  CHECK(done.state == InstanceState::kEnded);
  CHECK(h.engine.events().back().kind == "process-end");
  CHECK(h.engine.rule_errors().empty());
  check_tokens(done);
  check_event_order(h.engine.events());
  check_decoration(h.engine, h.store);
  CHECK(count(h.store, "SELECT ?t WHERE { ?t a pm:TaskInstance }") == h.engine.tasks().size());
  CHECK(ask(h.store, "ASK { <" + t3 + "> pm:assignee ex:carol ; pm:state \"completed\" }"));

  std::string log = h.engine.event_log();
  CHECK(std::count(log.begin(), log.end(), '\n') == static_cast<long>(h.engine.last_seq()));
  CHECK(log.rfind("1\tprocess-start\t" + p.uri + "\t" + kEx + "process/specimen/1\t1970-", 0) ==
        0);
}

TEST_CASE("choose_transition against a first-true scan") {
  std::mt19937_64 rng(7);
  auto scan = [](const std::vector<Transition> &ts, const std::vector<bool> &truth) -> int {
    for (size_t i = 0; i < ts.size(); ++i) {
      if (!ts[i].is_default && (!ts[i].guard || truth[i])) return static_cast<int>(i);
    }
    for (size_t i = 0; i < ts.size(); ++i) {
      if (ts[i].is_default) return static_cast<int>(i);
    }
    return -1;
  };
  for (int round = 0; round < 100; ++round) {
    size_t n = 1 + rng() % 5;
    std::vector<Transition> ts(n);
    std::vector<bool> truth(n);
    size_t default_at = rng() % 2 ? rng() % n : n;
    for (size_t i = 0; i < n; ++i) {
      ts[i].name = "b" + std::to_string(i);
      ts[i].is_default = i == default_at;
      if (!ts[i].is_default && rng() % 5 != 0) ts[i].guard = "g";
      truth[i] = rng() % 3 == 0;
    }
    std::vector<const Transition *> ptrs;
    for (const Transition &t : ts) ptrs.push_back(&t);
    auto holds = [&](const Transition &t) { return truth[&t - ts.data()] == true; };
    int expected = scan(ts, truth);
    if (expected < 0) {
      CHECK(error_code([&] { choose_transition(ptrs, holds); }) == "no-enabled-transition");
    } else {
      CHECK(choose_transition(ptrs, holds) == &ts[expected]);
    }
  }
}

TEST_CASE("decision nodes in the engine follow the first-true scan") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 100; ++round) {
    size_t n = 2 + rng() % 4;
    bool with_default = rng() % 2;
    size_t default_at = rng() % n;
    bool with_override = rng() % 4 == 0;
    std::string text = "process dec version " + std::to_string(round + 1) +
                       "\nprefix ex <http://example.org/>\nstart s\ndecision d\nend e\n"
                       "transition s -> d\n";
    std::vector<bool> truth(n);
    int expected = -1;
    for (size_t i = 0; i < n; ++i) {
      truth[i] = rng() % 3 == 0;
      bool is_default = with_default && i == default_at;
      text += "transition d -> e name b" + std::to_string(i);
      if (is_default) {
        text += " default\n";
      } else {
        text += " guard \"" + guard_text(static_cast<int>(i)) + "\"\n";
        if (truth[i] && expected < 0) expected = static_cast<int>(i);
      }
    }
    if (expected < 0 && with_default) expected = static_cast<int>(default_at);

    EngineConfig config;
    if (with_override) {
      rules::Rulebase rb = default_decoration_rules();
      rb.append(rules::parse_rules("on(transition-selection, _, _, _, _) :- selectTransition(b" +
                                   std::to_string(n - 1) + ")."));
      config.rules = rb;
      if (expected < 0) expected = static_cast<int>(n - 1);
    }
    TripleStore store;
    ManualClock clock;
    Engine engine(store, clock, config);
    for (size_t i = 0; i < n; ++i) {
      if (truth[i]) store.insert(guard_switch(static_cast<int>(i)));
    }
    engine.deploy(parse_definition(text));
    if (expected < 0) {
      CHECK(error_code([&] { engine.start_process("dec", round + 1, kAlice); }) ==
            "no-enabled-transition");
      continue;
    }
    engine.start_process("dec", round + 1, kAlice);
    std::vector<std::string> taken;
    for (const EngineEvent &e : engine.events()) {
      if (e.kind == "transition-taken" && e.aux->value() != "d") taken.push_back(e.aux->value());
    }
    CHECK(taken == std::vector<std::string>{"b" + std::to_string(expected)});
  }
}

TEST_CASE("coordination fork, join and guarded decision") {
  for (bool needs_report : {false, true}) {
    Harness h;
    h.engine.deploy(fixture("coordination.process"));
    ProcessInstance p = h.engine.start_process("coordination", 1, kAlice);
    if (needs_report) {
      h.store.insert(Triple{Term::iri(p.uri), ex("needsReport"), Term::boolean(true)});
    }
    p = *h.engine.instance(p.uri);
    CHECK(p.live_tokens() == 2);
    CHECK(p.tasks.size() == 2);
    check_tokens(p);
    run_task(h.engine, p.tasks[0]);
    p = *h.engine.instance(p.uri);
    CHECK(p.live_tokens() == 1);  // first branch parked at the join
    CHECK(p.tasks.size() == 2);
    run_task(h.engine, p.tasks[1]);
    p = *h.engine.instance(p.uri);
    if (needs_report) {
      REQUIRE(p.tasks.size() == 3);
      CHECK(h.engine.task(p.tasks[2])->node == "report");
      run_task(h.engine, p.tasks[2]);
      p = *h.engine.instance(p.uri);
    }
    CHECK(p.state == InstanceState::kEnded);
    check_tokens(p);
    check_event_order(h.engine.events());
    check_decoration(h.engine, h.store);
  }
}

TEST_CASE("assignment corner cases") {
  Harness h;
  h.store.insert(Triple{ex("erin"), Term::iri(vocab::pm("hasRole")), ex("Taxonomist")});
  std::vector<std::string> pooled;
  h.engine.on_unassigned(
      [&](const TaskInstance &t, const ProcessInstance &) { pooled.push_back(t.uri); });
  h.engine.deploy(parse_definition(R"(process corner version 1
prefix ex <http://example.org/>
swimlane Nobody role ex:Nobody
swimlane Taxonomist role ex:Taxonomist
start s
task orphan lane Nobody
task shared lane Taxonomist
end e
transition s -> orphan
transition orphan -> shared
transition shared -> e
)"));
  ProcessInstance p = h.engine.start_process("corner", 1, kAlice);
  TaskInstance orphan = *h.engine.task(p.uri + "/task/1");
  CHECK(orphan.state == TaskState::kCreated);
  CHECK(!orphan.assignee);
  CHECK(pooled == std::vector<std::string>{orphan.uri});
  CHECK(std::count(orphan.notes.begin(), orphan.notes.end(), "unassigned-pool") == 1);
  for (const EngineEvent &e : h.engine.events()) CHECK(e.kind != "task-assign");
  CHECK(error_code([&] { h.engine.start_task(orphan.uri, kAlice); }) == "wrong-state");

  h.engine.reassign_task(orphan.uri, kAlice);
  run_task(h.engine, orphan.uri);
  TaskInstance shared = *h.engine.task(p.uri + "/task/2");
  CHECK(shared.assignee == kBob);  // bob < erin
  REQUIRE(shared.notes.size() == 1);
  CHECK(shared.notes[0] == "multiple-candidates: " + kEx + "bob " + kEx + "erin");
}

TEST_CASE("form validation against the template schema") {
  Harness h;
  h.engine.set_form_lookup([](const std::string &form) -> std::optional<FormSchema> {
    if (form != "Identification") return std::nullopt;
    return FormSchema{"Identification",
                      {{"taxon", FieldType::kConcept, true, kEx + "taxon", ""},
                       {"identifiedBy", FieldType::kResource, false, kEx + "identifiedBy",
                        "${currentUser}"},
                       {"remark", FieldType::kLiteral, false, kEx + "remark", ""}}};
  });
  h.engine.deploy(fixture("specimen.process"));
  ProcessInstance p = h.engine.start_process("specimen", 1, kAlice);
  run_task(h.engine, open_task(h.engine, p.uri));
  std::string t = open_task(h.engine, p.uri);
  h.engine.start_task(t, kBob);
  Error missing("", "");
  try {
    h.engine.complete_task(t, kBob, {{"remark", "x"}});
  } catch (const Error &e) {
    missing = e;
  }
  CHECK(missing.code() == "form-validation");
  CHECK(missing.detail() == "taxon");
  CHECK(error_code([&] { h.engine.complete_task(t, kBob, {{"taxon", "not an iri"}}); }) ==
        "form-validation");
  CHECK(h.engine.task(t)->state == TaskState::kStarted);
  TaskInstance done = h.engine.complete_task(t, kBob, {{"taxon", "ex:Morchella"}});
  CHECK(done.form_data.at("taxon") == ex("Morchella"));
  CHECK(done.form_data.at("identifiedBy") == kBob);
  CHECK(!done.form_data.count("remark"));
  CHECK(h.engine.instance(p.uri)->variables.at("taxon") == ex("Morchella"));
}

TEST_CASE("action failures are recorded, not fatal") {
  Harness h;
  h.engine.register_action("create-page", [](ActionContext &) {
    throw Error("page-exists", "Discovery-1");
  });
  h.engine.deploy(fixture("specimen.process"));
  ProcessInstance p = h.engine.start_process("specimen", 1, kAlice);
  std::string t = open_task(h.engine, p.uri);
  run_task(h.engine, t);
  CHECK(h.engine.task(t)->notes.size() == 1);
  CHECK(h.engine.rule_errors().size() == 1);
  CHECK(!open_task(h.engine, p.uri).empty());
}

TEST_CASE("list_tasks groups by taxonomy level") {
  EngineConfig config;
  config.grouping.root = kEx + "Fungi";
  Harness h(config);
  h.store.insert_all(std::vector<Triple>{{ex("spec1"), rdf_type(), ex("Morchella")},
                                         {ex("spec2"), rdf_type(), ex("Boletus")},
                                         {ex("spec3"), rdf_type(), ex("Rock")}});
  h.engine.deploy(parse_definition(R"(process review version 1
prefix ex <http://example.org/>
swimlane Taxonomist role ex:Taxonomist
start s
task check lane Taxonomist subject specimen
end e
transition s -> check
transition check -> e
)"));
  CHECK(h.engine.list_tasks(kBob).empty());
  std::map<std::string, std::string> task_of;
  for (std::string s : {"spec1", "spec2", "spec3", "spec1"}) {
    ProcessInstance p =
        h.engine.start_process("review", 1, kAlice, {{"specimen", "<" + kEx + s + ">"}});
    task_of[p.tasks[0]] = s;
  }
  // The last one is started, not just assigned; still open.
  h.engine.start_task(h.engine.instances().back().tasks[0], kBob);
  std::vector<TaskGroup> groups = h.engine.list_tasks(kBob);
  CHECK(h.engine.list_tasks(kAlice).empty());

  // Oracle: the Fungi child among each specimen's class ancestors.
  const Graph &g = h.store.snapshot().graph();
  std::map<std::optional<Term>, std::set<std::string>> expected;
  for (const auto &[task, spec] : task_of) {
    std::optional<Term> group;
    for (const Triple &ty : g.find(ex(spec), rdf_type(), std::nullopt)) {
      for (const Term &anc : ancestors(g, ty.object)) {
        if (g.contains(Triple{anc, sub_class_of(), ex("Fungi")})) group = anc;
      }
    }
    expected[group].insert(task);
  }
  REQUIRE(groups.size() == 3);
  CHECK(groups[0].category == ex("Ascomycota"));
  CHECK(groups[1].category == ex("Basidiomycota"));
  CHECK(!groups[2].category);
  std::set<std::string> listed;
  for (const TaskGroup &grp : groups) {
    std::set<std::string> uris;
    for (const TaskInstance &t : grp.tasks) uris.insert(t.uri);
    CHECK(uris == expected[grp.category]);
    listed.insert(uris.begin(), uris.end());
  }

  // Cross-check against the decorated store.
  sparql::ResultSet rs = sparql::evaluate_select(
      sparql::parse_query("SELECT ?t WHERE { ?t pm:assignee ex:bob ; pm:state ?s . "
                          "FILTER (?s != \"completed\") }",
                          h.store.prefixes()),
      h.store.snapshot());
  std::set<std::string> queried;
  for (const auto &row : rs.rows) queried.insert(row[0]->value());
  CHECK(queried == listed);

  run_task(h.engine, *listed.begin());
  size_t remaining = 0;
  for (const TaskGroup &grp : h.engine.list_tasks(kBob)) remaining += grp.tasks.size();
  CHECK(remaining == 3);
}

TEST_CASE("runs are deterministic") {
  auto run = [] {
    Harness h;
    h.engine.deploy(fixture("specimen.process"));
    h.engine.deploy(fixture("coordination.process"));
    ProcessInstance a = h.engine.start_process("specimen", 1, kAlice);
    ProcessInstance b = h.engine.start_process("coordination", 1, kBob);
    run_task(h.engine, open_task(h.engine, a.uri));
    run_task(h.engine, open_task(h.engine, b.uri), {{"n", "1"}});
    run_task(h.engine, open_task(h.engine, a.uri), {{"taxon", "<http://example.org/Boletus>"}});
    run_task(h.engine, open_task(h.engine, b.uri));
    // Boletus routes the curation task to dave.
    CHECK(h.engine.task(open_task(h.engine, a.uri))->assignee == ex("dave"));
    return std::make_pair(h.engine.event_log(), h.store.snapshot().graph().triples());
  };
  auto first = run();
  auto second = run();
  CHECK(first.first == second.first);
  CHECK(first.second == second.second);
}

TEST_CASE("random valid definitions execute without structural errors") {
  std::mt19937_64 rng(2026);
  DefGen gen;
  size_t finished = 0;
  size_t stuck = 0;
  for (int round = 0; round < 60; ++round) {
    TripleStore store;
    ManualClock clock;
    Engine engine(store, clock);
    for (int l = 0; l < gen.lanes; ++l) {
      store.insert(Triple{ex("user" + std::to_string(l)), Term::iri(vocab::pm("hasRole")),
                          ex("role" + std::to_string(l))});
    }
    ProcessDefinition d = gen(rng, "gen", round + 1);
    for (int g = 0; g < gen.guards; ++g) {
      if (rng() % 2) store.insert(guard_switch(g));
    }
    engine.deploy(d);
    std::string uri;
    try {
      uri = engine.start_process("gen", round + 1, kAlice).uri;
      for (int steps = 0; steps < 500; ++steps) {
        std::string t = open_task(engine, uri);
        if (t.empty()) break;
        run_task(engine, t);
      }
    } catch (const Error &e) {
      // Only an all-false decision without default may stop a run.
      REQUIRE(std::string(e.code()) == "no-enabled-transition");
      ++stuck;
      continue;
    }
    ProcessInstance p = *engine.instance(uri);
    CHECK(p.state == InstanceState::kEnded);
    check_tokens(p);
    check_event_order(engine.events());
    check_decoration(engine, store);
    CHECK(engine.rule_errors().empty());
    ++finished;
  }
  CHECK(finished > 30);
  MESSAGE("finished " << finished << ", stopped at guard-less decisions " << stuck);
}

TEST_CASE("instances progress concurrently") {
  Harness h;
  h.engine.deploy(fixture("coordination.process"));
  std::vector<std::thread> threads;
  for (int i = 0; i < 4; ++i) {
    threads.emplace_back([&h] {
      for (int k = 0; k < 10; ++k) {
        ProcessInstance p = h.engine.start_process("coordination", 1, kAlice);
        for (const std::string &t : p.tasks) run_task(h.engine, t);
      }
    });
  }
  for (std::thread &t : threads) t.join();
  CHECK(h.engine.instances().size() == 40);
  for (const ProcessInstance &p : h.engine.instances()) {
    CHECK(p.state == InstanceState::kEnded);
    check_tokens(p);
  }
  std::vector<EngineEvent> events = h.engine.events();
  for (size_t i = 0; i < events.size(); ++i) CHECK(events[i].seq == i + 1);
  check_event_order(events);
  check_decoration(h.engine, h.store);
}
