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


// Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any
// failure. Runs without doctest so the output stays one line per check.

#include <chrono>
#include <cstdlib>
#include <deque>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>
#include <string>
#include <vector>

#include "oracles.h"
#include "procdef_gen.h"
#include "query_oracle.h"
#include "rules_gen.h"
#include "semflow/base/error.h"
#include "semflow/engine/engine.h"
#include "semflow/interchange/interchange.h"
#include "semflow/rules/eca.h"
#include "semflow/rules/messaging.h"
#include "semflow/rules/solve.h"
#include "semflow/service/scenario.h"
#include "semflow/service/service.h"
#include "semflow/sparql/query.h"
#include "test_util.h"

using namespace semflow;
using namespace semflow::testing;

namespace {

// Collects the first few failed expectations of one criterion.
class Checker {
 public:
  void expect(bool ok, const std::string &what) {
    ++checks_;
    if (!ok && failures_.size() < 3) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  bool ok() const { return failed_ == 0; }
  std::string summary() const {
    std::ostringstream s;
    s << checks_ << " checks";
    if (failed_) {
      s << ", " << failed_ << " failed:";
      for (const std::string &f : failures_) s << " [" << f << "]";
    }
    return s.str();
  }

 private:
  size_t checks_ = 0;
  size_t failed_ = 0;
  std::vector<std::string> failures_;
};

std::string error_code(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  return "";
}

std::filesystem::path fixtures() { return source_dir() / "fixtures"; }

// Ancestors of `c` by breadth-first walk over asserted subClassOf edges.
std::set<Term> ancestors(const std::set<Triple> &g, const Term &c) {
  std::set<Term> seen{c};
  std::deque<Term> queue{c};
  while (!queue.empty()) {
    Term cur = queue.front();
    queue.pop_front();
    for (const Triple &t : g) {
      if (t.subject == cur && t.predicate == sub_class_of() && t.object.is_iri() &&
          seen.insert(t.object).second) {
        queue.push_back(t.object);
      }
    }
  }
  return seen;
}

std::set<Term> subjects_with(const std::set<Triple> &g, const Term &p, const Term &o) {
  std::set<Term> out;
  for (const Triple &t : g) {
    if (t.predicate == p && t.object == o) out.insert(t.subject);
  }
  return out;
}

std::set<Term> objects_of(const std::set<Triple> &g, const Term &s, const Term &p) {
  std::set<Term> out;
  for (const Triple &t : g) {
    if (t.subject == s && t.predicate == p) out.insert(t.object);
  }
  return out;
}

std::set<Triple> triples_of(const TripleStore &store) {
  auto ts = store.snapshot()->triples();
  return std::set<Triple>(ts.begin(), ts.end());
}

void specimen_scenario(Checker &c) {
  // Headless run through the command line tool on a fresh data directory.
  auto dir = temp_dir("acceptance");
  std::string cmd = std::string("\"") + SEMFLOW_CLI + "\" --data-dir \"" + (dir / "data").string() +
                    "\" run-scenario \"" + (fixtures() / "specimen.scenario").string() +
                    "\" > \"" + (dir / "out.txt").string() + "\" 2>&1";
  auto t0 = std::chrono::steady_clock::now();
  int rc = std::system(cmd.c_str());
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.expect(rc == 0, "run-scenario exit status " + std::to_string(rc) + ": " +
                        slurp(dir / "out.txt"));
  c.expect(secs < 5.0, "run-scenario took " + std::to_string(secs) + " s");
  std::string transcript = slurp(fixtures() / "specimen.transcript");
  std::string log = slurp(dir / "data" / "events.log");
  // (e)
  c.expect(!log.empty() && service::log_kinds(log) == service::log_kinds(transcript),
           "event kinds differ from the committed transcript");
  c.expect(service::normalize_log(log) == transcript, "normalized log differs from transcript");
  std::filesystem::remove_all(dir);

  // The same script in process, to inspect the resulting state.
  ManualClock clock;
  service::Service svc(service::ServiceConfig{}, clock);
  service::ScenarioRunner runner(svc, fixtures());
  service::ScenarioResult r = runner.run(slurp(fixtures() / "specimen.scenario"));
  c.expect(r.ok, r.failures.empty() ? "scenario failed" : r.failures.front());
  std::set<Triple> g = triples_of(svc.store());

  // (a) discovery page with the template's field statements.
  Term discovery = ex("page/Discovery-1");
  c.expect(svc.wiki().page("Discovery-1").has_value(), "Discovery-1 missing");
  c.expect(objects_of(g, discovery, ex("locality")) ==
               std::set<Term>{lit("Mont Royal, Montreal")},
           "locality statement");
  c.expect(objects_of(g, discovery, ex("taxonHint")) == std::set<Term>{ex("Morchella")},
           "taxonHint statement");
  c.expect(objects_of(g, discovery, ex("foundBy")) == std::set<Term>{ex("alice")},
           "foundBy default statement");

  // (b) the taxonomist, found by role, was notified of an assigned task.
  std::set<Term> taxonomists =
      subjects_with(g, Term::iri(vocab::pm("hasRole")), ex("Taxonomist"));
  c.expect(taxonomists == std::set<Term>{ex("bob")}, "taxonomist oracle");
  std::string identify;
  std::string curate;
  for (const engine::TaskInstance &t : svc.engine().tasks()) {
    if (t.node == "identify") identify = t.uri;
    if (t.node == "curate") curate = t.uri;
  }
  bool notified = false;
  for (const Term &u : taxonomists) {
    for (const service::Notification &n : svc.notifications().for_recipient(u)) {
      for (const std::string &s : n.subjects) {
        notified |= n.kind == service::kTaskAssigned && s == identify;
      }
    }
  }
  c.expect(notified, "no task-assigned notification for the identify task");

  // (c) identification page and the typed link.
  c.expect(svc.wiki().page("Identification-1").has_value(), "Identification-1 missing");
  auto q = sparql::parse_query(
      "ASK { <http://example.org/page/Discovery-1> <http://example.org/identifiedAs> "
      "<http://example.org/page/Identification-1> }",
      svc.store().prefixes());
  c.expect(sparql::evaluate_ask(q, svc.store().snapshot()), "typed link ASK is false");

  // (d) curator: identifiedAs -> taxon -> ancestors -> responsibleFor holders.
  std::set<Term> curators;
  for (const Term &id : objects_of(g, discovery, ex("identifiedAs"))) {
    for (const Term &taxon : objects_of(g, id, ex("taxon"))) {
      for (const Term &anc : ancestors(g, taxon)) {
        for (const Term &u : subjects_with(g, ex("responsibleFor"), anc)) curators.insert(u);
      }
    }
  }
  c.expect(curators == std::set<Term>{ex("carol")}, "curator oracle");
  auto curate_task = svc.engine().task(curate);
  c.expect(curate_task && curate_task->assignee &&
               curators == std::set<Term>{*curate_task->assignee},
           "curate task assignee differs from the closure join");
}

void flow_conditions(Checker &c) {
  std::mt19937_64 rng(326);
  size_t defaults_taken = 0;
  size_t raised = 0;
  for (int round = 0; round < 100; ++round) {
    size_t n = 1 + rng() % 5;
    bool with_default = rng() % 2;
    size_t default_at = rng() % n;
    std::vector<procdef::Transition> ts(n);
    std::vector<bool> truth(n);
    for (size_t i = 0; i < n; ++i) {
      ts[i].name = "b" + std::to_string(i);
      ts[i].is_default = with_default && i == default_at;
      if (!ts[i].is_default) ts[i].guard = "g" + std::to_string(i);
      truth[i] = rng() % 3 == 0;
    }
    int expected = -1;
    for (size_t i = 0; i < n && expected < 0; ++i) {
      if (!ts[i].is_default && truth[i]) expected = static_cast<int>(i);
    }
    if (expected < 0 && with_default) {
      expected = static_cast<int>(default_at);
      ++defaults_taken;
    }
    std::vector<const procdef::Transition *> ptrs;
    for (const procdef::Transition &t : ts) ptrs.push_back(&t);
    auto holds = [&](const procdef::Transition &t) { return bool(truth[&t - ts.data()]); };
    std::string label = "round " + std::to_string(round);
    if (expected < 0) {
      ++raised;
      c.expect(error_code([&] { engine::choose_transition(ptrs, holds); }) ==
                   "no-enabled-transition",
               label + ": expected no-enabled-transition");
    } else {
      const procdef::Transition *got = nullptr;
      std::string code = error_code([&] { got = engine::choose_transition(ptrs, holds); });
      c.expect(code.empty() && got == &ts[expected], label + ": wrong transition");
    }

    // The same decision through a deployed definition with store guards.
    std::string text = "process dec version " + std::to_string(round + 1) +
                       "\nprefix ex <http://example.org/>\nstart s\ndecision d\nend e\n"
                       "transition s -> d\n";
    for (size_t i = 0; i < n; ++i) {
      text += "transition d -> e name b" + std::to_string(i);
      text += ts[i].is_default ? " default\n"
                               : " guard \"" + guard_text(static_cast<int>(i)) + "\"\n";
    }
    TripleStore store;
    ManualClock clock;
    engine::Engine eng(store, clock);
    for (size_t i = 0; i < n; ++i) {
      if (truth[i]) store.insert(guard_switch(static_cast<int>(i)));
    }
    eng.deploy(procdef::parse_definition(text));
    std::vector<std::string> taken;
    std::string code = error_code([&] {
      eng.start_process("dec", round + 1, ex("alice"));
      for (const engine::EngineEvent &e : eng.events()) {
        if (e.kind == "transition-taken" && e.aux->value() != "d") taken.push_back(e.aux->value());
      }
    });
    if (expected < 0) {
      c.expect(code == "no-enabled-transition", label + ": engine did not raise");
    } else {
      c.expect(code.empty() && taken == std::vector<std::string>{"b" + std::to_string(expected)},
               label + ": engine took another branch");
    }
  }
  c.expect(defaults_taken > 0 && raised > 0, "generator missed the default or raise cases");
}

void query_oracle(Checker &c) {
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(500);
  GraphGen gen;
  size_t inferred = 0;
  for (int round = 0; round < 500; ++round) {
    TripleStore store;
    auto triples = gen(rng);
    store.insert_all(triples);
    std::set<Triple> asserted(triples.begin(), triples.end());
    std::set<Triple> closed = materialize_subclass(asserted);
    Snapshot snap = store.snapshot();
    for (int k = 0; k < 3; ++k) {
      sparql::Query q = random_query(rng);
      bool infer = q.entailment == Entailment::kSubclass;
      inferred += infer;
      auto expected = ExhaustiveEvaluator(infer ? closed : asserted, q).rows();
      auto got = sorted_rows(sparql::evaluate_select(q, snap).rows);
      c.expect(got == expected, "graph " + std::to_string(round) + " query " + std::to_string(k));
    }
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.expect(inferred > 100, "too few inference queries");
  c.expect(secs < 60.0, "took " + std::to_string(secs) + " s");
}

rules::Message msg(const std::string &cid, const std::string &perf,
                   std::vector<rules::Value> payload, const std::string &from = "client") {
  return rules::Message{cid, "inmem", from, "agent", perf, std::move(payload)};
}

void conversation_isolation(Checker &c) {
  rules::Rulebase rb = rules::parse_rules(R"(
rcvMsg(C, P, F, ping, [X]) :-
    sendMsg(C, P, F, ack, [X]),
    rcvMsg(C, P, F, done, [Y]),
    sendMsg(C, P, F, bye, [X, Y]).
)");
  std::mt19937_64 rng(50);
  std::vector<rules::Message> inbox;
  for (int i = 0; i < 50; ++i) {
    std::string id = "conv-" + std::to_string(i);
    std::string peer = "peer" + std::to_string(i % 3);
    inbox.push_back(msg(id, "ping", {rules::Value::rdf(Term::integer(i))}, peer));
    inbox.push_back(msg(id, "done", {rules::Value::atom("d" + std::to_string(rng() % 1000))}, peer));
  }
  std::shuffle(inbox.begin(), inbox.end(), rng);

  rules::TransportRegistry reg;
  auto out = std::make_shared<rules::InMemoryTransport>();
  reg.add("inmem", out);
  rules::Messenger agent("agent", rb, reg);
  std::vector<std::thread> threads;
  for (int w = 0; w < 4; ++w) {
    threads.emplace_back([&, w] {
      for (const rules::Message &m : inbox) {
        if (std::hash<std::string>()(m.conversation) % 4 == size_t(w)) agent.deliver(m);
      }
    });
  }
  for (auto &t : threads) t.join();

  std::map<std::string, std::vector<rules::Message>> projected;
  for (const rules::Message &m : out->sent()) projected[m.conversation].push_back(m);
  c.expect(projected.size() == 50, "conversations with output: " +
                                       std::to_string(projected.size()));
  for (const auto &[id, msgs] : projected) {
    rules::TransportRegistry solo_reg;
    auto solo_out = std::make_shared<rules::InMemoryTransport>();
    solo_reg.add("inmem", solo_out);
    rules::Messenger solo("agent", rb, solo_reg);
    for (const rules::Message &m : inbox) {
      if (m.conversation == id) solo.deliver(m);
    }
    c.expect(solo_out->sent() == msgs, id + ": differs from isolated replay");
    // Leakage: every value sent must come from this conversation's inbox.
    std::set<std::string> own;
    for (const rules::Message &m : inbox) {
      if (m.conversation != id) continue;
      for (const rules::Value &v : m.payload) own.insert(rules::to_string(v));
    }
    for (const rules::Message &m : msgs) {
      for (const rules::Value &v : m.payload) {
        c.expect(own.count(rules::to_string(v)) == 1, id + ": foreign value " + rules::to_string(v));
      }
    }
  }
  for (const rules::ConversationReport &r : agent.export_conversation_state()) {
    c.expect(r.completed && r.pending == 0 && r.mailbox == 0, r.id + " not completed");
  }
}

// Registry and store agree on instances, tasks, states and assignees.
void compare_decoration(Checker &c, const engine::Engine &eng, const TripleStore &store,
                        const std::string &label) {
  std::set<Triple> g = triples_of(store);
  const Term pstate = Term::iri(vocab::pm("state"));
  const Term passignee = Term::iri(vocab::pm("assignee"));
  std::set<Term> registry_instances;
  for (const engine::ProcessInstance &p : eng.instances()) {
    Term uri = Term::iri(p.uri);
    registry_instances.insert(uri);
    c.expect(objects_of(g, uri, pstate) == std::set<Term>{lit(std::string(to_string(p.state)))},
             label + ": state of " + p.uri);
  }
  c.expect(subjects_with(g, rdf_type(), Term::iri(vocab::pm("ProcessInstance"))) ==
               registry_instances,
           label + ": ProcessInstance set");
  std::set<Term> registry_tasks;
  for (const engine::TaskInstance &t : eng.tasks()) {
    Term uri = Term::iri(t.uri);
    registry_tasks.insert(uri);
    c.expect(objects_of(g, uri, pstate) == std::set<Term>{lit(std::string(to_string(t.state)))},
             label + ": state of " + t.uri);
    std::set<Term> assignee;
    if (t.assignee) assignee.insert(*t.assignee);
    c.expect(objects_of(g, uri, passignee) == assignee, label + ": assignee of " + t.uri);
  }
  c.expect(subjects_with(g, rdf_type(), Term::iri(vocab::pm("TaskInstance"))) == registry_tasks,
           label + ": TaskInstance set");
}

void decoration_completeness(Checker &c) {
  std::mt19937_64 rng(829);
  DefGen gen;
  size_t compared = 0;
  for (int round = 0; round < 60; ++round) {
    TripleStore store;
    ManualClock clock;
    engine::Engine eng(store, clock);
    for (int l = 0; l < gen.lanes; ++l) {
      if (rng() % 5 == 0) continue;  // empty lanes leave tasks in the pool
      store.insert(Triple{ex("user" + std::to_string(l)), Term::iri(vocab::pm("hasRole")),
                          ex("role" + std::to_string(l))});
    }
    procdef::ProcessDefinition d = gen(rng, "gen", round + 1);
    for (int i = 0; i < gen.guards; ++i) {
      if (rng() % 2) store.insert(guard_switch(i));
    }
    eng.deploy(d);
    std::string label = "round " + std::to_string(round);
    for (int inst = 0; inst < 3; ++inst) {
      std::string code = error_code([&] { eng.start_process("gen", round + 1, ex("alice")); });
      c.expect(code.empty() || code == "no-enabled-transition", label + ": " + code);
      compare_decoration(c, eng, store, label);
      ++compared;
    }
    size_t stop = rng() % 40;
    for (size_t step = 0; step < stop; ++step) {
      std::vector<engine::TaskInstance> open;
      for (const engine::TaskInstance &t : eng.tasks()) {
        if (t.state == engine::TaskState::kAssigned || t.state == engine::TaskState::kStarted) {
          open.push_back(t);
        }
      }
      if (open.empty()) break;
      const engine::TaskInstance &t = open[rng() % open.size()];
      std::string code = error_code([&] {
        if (t.state == engine::TaskState::kAssigned) eng.start_task(t.uri, *t.assignee);
        else eng.complete_task(t.uri, *t.assignee, {});
      });
      c.expect(code.empty() || code == "no-enabled-transition", label + ": " + code);
      compare_decoration(c, eng, store, label);
      ++compared;
    }
  }
  c.expect(compared > 200, "too few states compared");
}

void interchange_round_trip(Checker &c) {
  std::mt19937_64 rng(830);
  FullRuleGen gen;
  size_t kinds[3] = {0, 0, 0};
  for (int round = 0; round < 250; ++round) {
    rules::Rulebase rb = gen(rng);
    kinds[0] += rb.derivations.size();
    kinds[1] += rb.reactions.size();
    kinds[2] += rb.messaging.size();
    std::string text = interchange::export_rules(rb);
    rules::Rulebase back;
    std::string code = error_code([&] { back = interchange::import_rules(text); });
    c.expect(code.empty() && back == rb, "rulebase " + std::to_string(round) + " " + code);
  }
  c.expect(kinds[0] > 100 && kinds[1] > 100 && kinds[2] > 100, "rule kinds under-covered");

  // Behavior of the decoration rules plus the hand-written lookup rules.
  rules::Rulebase original = engine::default_decoration_rules();
  original.append(interchange::import_rules(slurp(fixtures() / "rules.xml")));
  rules::Rulebase again = interchange::import_rules(interchange::export_rules(original));
  c.expect(again == original, "default rulebase structure");

  TripleStore base;
  base.import(fixtures() / "ontology.nt");
  Snapshot snap = base.snapshot();
  for (const rules::Atom &goal :
       {rules::Atom{"responsible", {rules::Value::var("U"), rules::Value::var("C")}},
        rules::Atom{"curator", {rules::Value::var("U")}}}) {
    c.expect(rules::solve(goal, original, snap).answers == rules::solve(goal, again, snap).answers,
             "solve answers for " + goal.predicate);
  }

  const char *kinds_of[] = {"process-start", "process-end", "task-create", "task-assign",
                            "task-start",    "task-end",    "node-enter"};
  TripleStore a;
  TripleStore b;
  a.import(fixtures() / "ontology.nt");
  b.import(fixtures() / "ontology.nt");
  for (int i = 0; i < 300; ++i) {
    rules::Event e;
    e.kind = kinds_of[rng() % 7];
    e.seq = i + 1;
    e.instance = ex("inst" + std::to_string(rng() % 3));
    e.subject = ex("s" + std::to_string(rng() % 5));
    if (rng() % 2) e.actor = ex(rng() % 2 ? "carol" : "bob");
    if (rng() % 2) e.aux = ex("about" + std::to_string(rng() % 2));
    std::vector<std::string> notes[2];
    rules::DispatchReport reports[2];
    int side = 0;
    for (auto [rb, store] : {std::pair{&original, &a}, std::pair{&again, &b}}) {
      rules::ActionHooks hooks;
      hooks.notify = [&notes, side](const Term &who, const std::string &kind, const rules::Event &) {
        notes[side].push_back(who.value() + " " + kind);
      };
      reports[side] = rules::dispatch_event(e, *rb, *store, hooks);
      ++side;
    }
    bool same = reports[0].fired == reports[1].fired &&
                reports[0].outcomes.size() == reports[1].outcomes.size() && notes[0] == notes[1];
    for (size_t k = 0; same && k < reports[0].outcomes.size(); ++k) {
      const auto &x = reports[0].outcomes[k];
      const auto &y = reports[1].outcomes[k];
      same = x.rule == y.rule && x.action == y.action && x.ok == y.ok && x.detail == y.detail;
    }
    c.expect(same, "dispatch of event " + std::to_string(i));
  }
  c.expect(triples_of(a) == triples_of(b), "decorated stores differ");

  std::vector<rules::Message> sent[2];
  std::vector<rules::ConversationReport> states[2];
  std::vector<rules::DeliveryResult::Disposition> dispositions[2];
  int side = 0;
  std::vector<rules::Message> script;
  for (int i = 0; i < 40; ++i) {
    std::string cid = "c" + std::to_string(rng() % 8);
    if (rng() % 2) {
      script.push_back(msg(cid, "lookup", {rules::Value::rdf(
                                              ex(rng() % 2 ? "Morchella" : "Boletus"))}));
    } else {
      script.push_back(msg(cid, "accept", {}));
    }
  }
  for (const rules::Rulebase *rb : {&original, &again}) {
    rules::TransportRegistry reg;
    auto out = std::make_shared<rules::InMemoryTransport>();
    reg.add("inmem", out);
    rules::Messenger agent("agent", *rb, reg, &base);
    for (const rules::Message &m : script) dispositions[side].push_back(agent.deliver(m).disposition);
    sent[side] = out->sent();
    states[side] = agent.export_conversation_state();
    ++side;
  }
  c.expect(!sent[0].empty() && sent[0] == sent[1], "deliver outputs");
  c.expect(states[0] == states[1] && dispositions[0] == dispositions[1], "deliver outcomes");
}

void persistence_round_trip(Checker &c) {
  std::mt19937_64 rng(831);
  auto dir = temp_dir("persist");
  for (int round = 0; round < 12; ++round) {
    size_t n = round == 0 ? 10000 : rng() % 10001;
    TripleStore store;
    store.set_prefix("ex", kEx);
    if (rng() % 2) store.set_prefix("t" + std::to_string(round), kEx + "t/");
    std::vector<Triple> ts;
    for (size_t i = 0; i < n; ++i) {
      Term s = ex("s" + std::to_string(rng() % 500));
      Term p = ex("p" + std::to_string(rng() % 7));
      Term o;
      switch (rng() % 4) {
        case 0: o = ex("o" + std::to_string(rng() % 300)); break;
        case 1: o = Term::literal(std::to_string(rng() % 1000), vocab::kXsdInteger); break;
        case 2: o = Term::literal("t" + std::to_string(rng() % 50), {}, rng() % 2 ? "en" : "de-AT"); break;
        default: o = exotic_literal(rng);
      }
      ts.push_back(Triple{s, p, o});
    }
    store.insert_all(ts);
    store.save(dir / "a.nt");
    TripleStore loaded;
    loaded.load(dir / "a.nt");
    std::string label = "store " + std::to_string(round) + " (" + std::to_string(n) + ")";
    c.expect(loaded.snapshot()->triples() == store.snapshot()->triples(), label + ": triples");
    c.expect(loaded.prefixes() == store.prefixes(), label + ": prefixes");
    loaded.save(dir / "b.nt");
    c.expect(slurp(dir / "a.nt") == slurp(dir / "b.nt"), label + ": re-save bytes");
  }
  std::filesystem::remove_all(dir);
}

}  // namespace

int main() {
  struct Criterion {
    const char *name;
    void (*run)(Checker &);
  };
  const Criterion criteria[] = {
      {"specimen-scenario", specimen_scenario},
      {"flow-conditions", flow_conditions},
      {"query-oracle", query_oracle},
      {"conversation-isolation", conversation_isolation},
      {"decoration-completeness", decoration_completeness},
      {"interchange-round-trip", interchange_round_trip},
      {"persistence-round-trip", persistence_round_trip},
  };
  int failed = 0;
  for (const Criterion &cr : criteria) {
    Checker c;
    auto t0 = std::chrono::steady_clock::now();
    try {
      cr.run(c);
    } catch (const std::exception &e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (c.ok() ? "PASS " : "FAIL ") << cr.name << " (" << c.summary() << ", "
              << std::fixed << std::setprecision(2) << secs << " s)" << std::endl;
    failed += !c.ok();
  }
  return failed ? 1 : 0;
}
