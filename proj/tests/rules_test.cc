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
#include <random>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "rules_gen.h"
#include "rules_oracle.h"
#include "semflow/base/error.h"
#include "semflow/rules/eca.h"
#include "semflow/rules/messaging.h"
#include "semflow/rules/rulebase.h"
#include "semflow/rules/solve.h"
#include "semflow/sparql/query.h"
#include "test_util.h"

using namespace semflow;
using namespace semflow::rules;
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

std::set<std::string> answers_of(const SolveResult &r, const std::string &var) {
  std::set<std::string> out;
  for (const Substitution &s : r.answers) out.insert(to_string(s.at(var)));
  return out;
}

Atom goal(const std::string &text) {
  Rulebase rb = parse_rules("g :- " + text + ".");
  return rb.derivations.at(0).body.at(0).atom;
}

const char *kAncestors = R"(
parent(a, b).
parent(b, c).
ancestor(X, Y) :- parent(X, Y).
ancestor(X, Z) :- parent(X, Y), ancestor(Y, Z).
)";

const char *kTwoStep = R"(
rcvMsg(C, P, F, ping, [X]) :-
    sendMsg(C, P, F, ack, [X]),
    rcvMsg(C, P, F, done, [Y]),
    sendMsg(C, P, F, bye, [X, Y]).
)";

Message msg(const std::string &cid, const std::string &perf, std::vector<Value> payload,
            const std::string &from = "client") {
  return Message{cid, "inmem", from, "agent", perf, std::move(payload)};
}

}  // namespace

TEST_CASE("parse_rules") {
  Rulebase rb = parse_rules(kAncestors);
  CHECK(rb.derivations.size() == 4);
  CHECK(rb.derivations[2].id == "ancestor/2#0");
  CHECK(rb.derivations[3].id == "ancestor/2#1");

  CHECK(error_code([] { parse_rules("p(X) :- q(Y)."); }) == "range-violation");
  CHECK(error_code([] { parse_rules("p(X)."); }) == "range-violation");
  CHECK(error_code([] { parse_rules("p(X) :- not(q(X))."); }) == "range-violation");

  Rulebase echo = parse_rules("rcvMsg(CID,P,F,ping,[X]) :- sendMsg(CID,P,F,pong,[X]).");
  REQUIRE(echo.messaging.size() == 1);
  CHECK(echo.messaging[0].body.size() == 1);
  CHECK(echo.messaging[0].body[0].kind == Step::Kind::kSend);
  CHECK(echo.derivations.empty());

  Rulebase eca = parse_rules(
      ":- prefix(ex, <http://example.org/>).\n"
      "on(task-assign, I, T, U, _) :- rdf(U, ex:role, ex:Curator), "
      "update(\"INSERT DATA { ${T} ex:flag true }\"), notify(U, task-assigned).");
  REQUIRE(eca.reactions.size() == 1);
  CHECK(eca.reactions[0].condition.size() == 1);
  CHECK(eca.reactions[0].actions.size() == 2);
  CHECK(eca.reactions[0].condition[0].atom.args[1] == Value::rdf(ex("role")));
  CHECK(eca.prefixes.at("ex") == kEx);

  CHECK(error_code([] { parse_rules("on(a, I, S, A, X) :- rdf(I, S, A)."); }) == "syntax-error");
  CHECK(error_code([] { parse_rules("on(a, I, S, A, X) :- notify(A, k), rdf(I, S, A)."); }) ==
        "syntax-error");
  CHECK(error_code([] { parse_rules("on(a, I, S, A, X) :- update(\"${Q}\")."); }) ==
        "range-violation");
  CHECK(error_code([] {
          parse_rules("rcvMsg(C, P, F, a, X) :- rcvMsg(D, P, F, b, Y).");
        }) == "locality-violation");
  CHECK(error_code([] { parse_rules("rcvMsg(C, P, F, a, X) :- sendMsg(C, P, F, b, Y)."); }) ==
        "range-violation");
}

TEST_CASE("syntax errors report the line") {
  auto line_of = [](const std::string &text) -> size_t {
    try {
      parse_rules(text);
    } catch (const Error &e) {
      CHECK(e.code() == "syntax-error");
      return e.position().value_or(0);
    }
    FAIL("no error");
    return 0;
  };
  CHECK(line_of("p(a).\nq(b)\n") == 3);
  CHECK(line_of("p(a).\n\nq(b c).\n") == 3);
  CHECK(line_of("% comment\np(\"open).\n") == 2);
  CHECK(line_of("p(ex:a).\n") == 1);
  CHECK(line_of(":- prefix(ex).\n") == 1);
  CHECK(line_of("p(a) :- q(a) ; r(a).\n") == 1);
  CHECK(line_of("rdf(a, b, c).\n") == 1);
  CHECK(line_of("p(f(a)).\n") == 1);
}

TEST_CASE("print and parse round trip") {
  std::mt19937_64 rng(99);
  FullRuleGen gen;
  for (int i = 0; i < 300; ++i) {
    Rulebase rb = gen(rng);
    INFO(print_rules(rb));
    check_rulebase(rb);
    Rulebase back = parse_rules(print_rules(rb));
    CHECK(back == rb);
  }
  CHECK(parse_value("[a, \"x\"@en, <urn:a>, -4, 2.5, 'b c', []]") ==
        Value::list({Value::atom("a"), Value::rdf(Term::literal("x", {}, "en")),
                     Value::rdf(Term::iri("urn:a")),
                     Value::rdf(Term::literal("-4", vocab::kXsdInteger)),
                     Value::rdf(Term::literal("2.5", vocab::kXsdDecimal)), Value::atom("b c"),
                     Value::list({})}));
}

TEST_CASE("solve examples") {
  Rulebase rb = parse_rules(kAncestors);
  Snapshot empty;
  SolveResult r = solve(goal("ancestor(a, X)"), rb, empty);
  CHECK(answers_of(r, "X") == std::set<std::string>{"b", "c"});
  CHECK_FALSE(r.depth_limited);
  CHECK(solve(goal("unknown(X)"), rb, empty).answers.empty());
  CHECK(solve(goal("ancestor(c, X)"), rb, empty).answers.empty());

  // Ground goal succeeds with one empty binding.
  CHECK(solve(goal("ancestor(a, c)"), rb, empty).answers.size() == 1);

  // Store access, comparisons, negation.
  TripleStore store;
  store.insert({ex("alice"), ex("age"), Term::integer(30)});
  store.insert({ex("bob"), ex("age"), Term::integer(9)});
  store.insert({ex("bob"), rdf_type(), ex("Minor")});
  Rulebase people = parse_rules(
      ":- prefix(ex, <http://example.org/>).\n"
      "adult(P) :- rdf(P, ex:age, A), A >= 18.\n"
      "unflagged(P) :- rdf(P, ex:age, _), not(rdf(P, rdf:type, ex:Minor)).\n"
      "bad(P) :- rdf(P, ex:age, _), \\+ rdf(Q, rdf:type, ex:Minor).\n");
  Snapshot snap = store.snapshot();
  CHECK(answers_of(solve(goal("adult(P)"), people, snap), "P") ==
        std::set<std::string>{"<http://example.org/alice>"});
  CHECK(answers_of(solve(goal("unflagged(P)"), people, snap), "P") ==
        std::set<std::string>{"<http://example.org/alice>"});
  CHECK(error_code([&] { solve(goal("bad(P)"), people, snap); }) == "non-ground-negation");
  CHECK(error_code([&] { solve(goal("adult(P)"), people, snap, 0); }) == "invalid-argument");
}

TEST_CASE("subclass entailment through rdfs/3") {
  TripleStore store;
  store.insert({ex("Morchella"), sub_class_of(), ex("Ascomycota")});
  store.insert({ex("spec1"), rdf_type(), ex("Morchella")});
  Rulebase rb = parse_rules(
      ":- prefix(ex, <http://example.org/>).\n"
      "asco(S) :- rdfs(S, rdf:type, ex:Ascomycota).\n"
      "asco_plain(S) :- rdf(S, rdf:type, ex:Ascomycota).\n");
  CHECK(solve(goal("asco(S)"), rb, store.snapshot()).answers.size() == 1);
  CHECK(solve(goal("asco_plain(S)"), rb, store.snapshot()).answers.empty());
}

TEST_CASE("depth limit terminates left recursion") {
  Rulebase rb = parse_rules(
      "edge(a, b).\nedge(b, a).\n"
      "path(X, Y) :- path(X, Z), edge(Z, Y).\n"
      "path(X, Y) :- edge(X, Y).\n");
  SolveResult r = solve(goal("path(a, Y)"), rb, Snapshot(), 64);
  CHECK(r.depth_limited);
  CHECK(answers_of(r, "Y") == std::set<std::string>{"a", "b"});
}

TEST_CASE("solve matches bottom-up evaluation on random acyclic programs") {
  std::mt19937_64 rng(2024);
  DatalogGen gen;
  int nonempty = 0;
  for (int round = 0; round < 150; ++round) {
    Rulebase rb = gen(rng);
    std::vector<Triple> graph = gen.graph(rng);
    TripleStore store;
    store.insert_all(graph);
    BottomUp oracle(rb, graph);
    INFO(print_rules(rb));
    for (const auto &p : gen.preds()) {
      Atom g{p.name, {}};
      for (size_t i = 0; i < p.arity; ++i) g.args.push_back(Value::var("A" + std::to_string(i)));
      SolveResult r = solve(g, rb, store.snapshot());
      CHECK_FALSE(r.depth_limited);
      std::set<std::vector<Value>> got, want;
      for (const Substitution &s : r.answers) {
        std::vector<Value> row;
        for (const Value &v : g.args) row.push_back(s.at(v.name));
        got.insert(row);
      }
      for (const auto &[pred, args] : oracle.facts()) {
        if (pred == p.name) want.insert(args);
      }
      CHECK(got == want);
      if (!want.empty()) ++nonempty;

      // Partially bound goal.
      if (p.arity == 2 && !want.empty()) {
        Value first = want.begin()->front();
        Atom bound{p.name, {first, Value::var("B")}};
        std::set<Value> got_b, want_b;
        for (const Substitution &s : solve(bound, rb, store.snapshot()).answers) {
          got_b.insert(s.at("B"));
        }
        for (const auto &row : want) {
          if (row[0] == first) want_b.insert(row[1]);
        }
        CHECK(got_b == want_b);
      }
    }
  }
  CHECK(nonempty > 300);
}

TEST_CASE("dispatch_event") {
  Rulebase decoration = parse_rules(slurp(source_dir() / "fixtures" / "decoration.rules"));
  TripleStore store;
  Event e{"process-start", 1, "t", ex("inst/1"), ex("def"), ex("alice"), std::nullopt};
  DispatchReport r = dispatch_event(e, decoration, store);
  REQUIRE(r.outcomes.size() == 1);
  CHECK(r.outcomes[0].ok);
  CHECK(r.fired == std::vector<std::string>{"on/process-start#0"});
  auto ask = [&](const std::string &q) {
    return sparql::evaluate_ask(sparql::parse_query(q, store.prefixes()), store.snapshot());
  };
  CHECK(ask("ASK { <http://example.org/inst/1> a pm:ProcessInstance }"));
  CHECK(ask("ASK { <http://example.org/inst/1> pm:state \"running\" }"));

  CHECK(dispatch_event({"node-enter", 2, "t", ex("inst/1"), ex("n"), {}, {}}, decoration, store)
            .outcomes.empty());

  dispatch_event({"process-end", 3, "t", ex("inst/1"), ex("def"), {}, {}}, decoration, store);
  CHECK(ask("ASK { <http://example.org/inst/1> pm:state \"ended\" }"));
  CHECK_FALSE(ask("ASK { <http://example.org/inst/1> pm:state \"running\" }"));

  // Both matching rules run in declaration order; a failure stops only its
  // own rule.
  Rulebase two = parse_rules(
      "on(task-end, I, T, _, _) :- update(\"INSERT DATA { ${T} pm:p 1 }\"), "
      "update(\"not sparql\"), update(\"INSERT DATA { ${T} pm:p 2 }\").\n"
      "on(K, I, T, _, _) :- update(\"INSERT DATA { ${T} pm:p 3 }\").\n");
  TripleStore s2;
  DispatchReport r2 = dispatch_event({"task-end", 4, "t", ex("i"), ex("t"), {}, {}}, two, s2);
  CHECK(r2.fired == std::vector<std::string>{"on/task-end#0", "on/_#0"});
  REQUIRE(r2.outcomes.size() == 3);
  CHECK(r2.outcomes[0].ok);
  CHECK_FALSE(r2.outcomes[1].ok);
  CHECK(r2.outcomes[2].rule == "on/_#0");
  CHECK(r2.outcomes[2].ok);
  CHECK(s2.size() == 2);
  CHECK_FALSE(r2.ok());

  // Conditions read the store; selectTransition is legal only on selection
  // events.
  Rulebase sel = parse_rules(
      ":- prefix(ex, <http://example.org/>).\n"
      "on(transition-selection, I, N, _, _) :- rdf(I, ex:route, R), selectTransition(R).\n"
      "on(task-end, _, _, _, _) :- selectTransition(x).\n");
  TripleStore s3;
  DispatchReport none = dispatch_event({"transition-selection", 0, "", ex("i"), ex("n"), {}, {}},
                                       sel, s3);
  CHECK_FALSE(none.selected_transition);
  s3.insert({ex("i"), ex("route"), Term::literal("b1")});
  CHECK(dispatch_event({"transition-selection", 0, "", ex("i"), ex("n"), {}, {}}, sel, s3)
            .selected_transition == std::optional<std::string>("b1"));
  DispatchReport illegal = dispatch_event({"task-end", 0, "", ex("i"), ex("n"), {}, {}}, sel, s3);
  REQUIRE(illegal.outcomes.size() == 1);
  CHECK_FALSE(illegal.outcomes[0].ok);

  // Hooks.
  Rulebase hooks_rb = parse_rules(
      "on(task-assign, I, T, U, _) :- notify(U, task-assigned), mintPage('Page 1', 'Discovery'), "
      "sendMsg(c1, inmem, peer, inform, [T]).\n");
  std::vector<std::string> seen;
  ActionHooks hooks;
  hooks.notify = [&](const Term &u, const std::string &k, const Event &) {
    seen.push_back(u.value() + " " + k);
  };
  hooks.mint_page = [&](const std::string &p, const std::string &t, const Event &) {
    seen.push_back(p + "/" + t);
  };
  hooks.send = [&](const Message &m) { seen.push_back(m.to_string()); };
  TripleStore s4;
  DispatchReport hr = dispatch_event({"task-assign", 0, "", ex("i"), ex("t"), ex("bob"), {}},
                                     hooks_rb, s4, hooks);
  CHECK(hr.ok());
  REQUIRE(seen.size() == 3);
  CHECK(seen[0] == kEx + "bob task-assigned");
  CHECK(seen[1] == "Page 1/Discovery");
  DispatchReport no_hooks = dispatch_event(
      {"task-assign", 0, "", ex("i"), ex("t"), ex("bob"), {}}, hooks_rb, s4);
  CHECK_FALSE(no_hooks.ok());
}

TEST_CASE("transports") {
  TransportRegistry reg;
  auto mem = std::make_shared<InMemoryTransport>();
  reg.add("inmem", mem);
  uint64_t last = 0;
  for (int i = 0; i < 100; ++i) {
    Receipt r = reg.send(msg("c", "ping", {Value::atom("x")}));
    CHECK(r.seq > last);
    last = r.seq;
  }
  CHECK(mem->pending() == 100);
  CHECK(mem->drain().size() == 100);
  CHECK(mem->pending() == 0);
  Message other = msg("c", "ping", {});
  other.protocol = "smtp";
  CHECK(error_code([&] { reg.send(other); }) == "unknown-transport");

  // HTTP transport against a local endpoint.
  httplib::Server server;
  std::vector<Message> received;
  std::mutex mu;
  server.Post("/inbox", [&](const httplib::Request &req, httplib::Response &res) {
    std::lock_guard lock(mu);
    received.push_back(message_from_json(req.body));
    res.status = 202;
  });
  int port = server.bind_to_any_port("127.0.0.1");
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();
  HttpTransport http("http://127.0.0.1:" + std::to_string(port) + "/inbox");
  std::mt19937_64 rng(1);
  Message m = msg("c9", "ping", {Value::rdf(exotic_literal(rng)),
                                 Value::list({Value::atom("it's")})});
  CHECK(http.send(m).seq == 1);
  server.stop();
  t.join();
  REQUIRE(received.size() == 1);
  CHECK(received[0] == m);

  HttpTransport dead("http://127.0.0.1:" + std::to_string(port) + "/inbox", 200);
  CHECK(error_code([&] { dead.send(m); }) == "unreachable-endpoint");
}

TEST_CASE("messaging examples") {
  TransportRegistry reg;
  auto out = std::make_shared<InMemoryTransport>();
  reg.add("inmem", out);

  Messenger echo("agent", parse_rules("rcvMsg(CID,P,F,ping,[X]) :- sendMsg(CID,P,F,pong,[X])."),
                 reg);
  CHECK(echo.export_conversation_state().empty());
  DeliveryResult r = echo.deliver(msg("c1", "ping", {Value::atom("hello")}));
  CHECK(r.disposition == DeliveryResult::Disposition::kStarted);
  REQUIRE(r.branches.size() == 1);
  CHECK(r.branches[0].state == BranchOutcome::State::kCompleted);
  std::vector<Message> sent = out->drain();
  REQUIRE(sent.size() == 1);
  CHECK(sent[0].performative == "pong");
  CHECK(sent[0].receiver == "client");
  CHECK(sent[0].sender == "agent");
  CHECK(sent[0].payload == std::vector<Value>{Value::atom("hello")});
  CHECK(echo.export_conversation_state() ==
        std::vector<ConversationReport>{{"c1", 0, 0, true}});

  Messenger two("agent", parse_rules(kTwoStep), reg);
  two.deliver(msg("c1", "ping", {Value::atom("x1")}));
  CHECK(out->drain().size() == 1);
  CHECK(two.export_conversation_state() == std::vector<ConversationReport>{{"c1", 1, 0, false}});
  CHECK(two.deliver(msg("c2", "done", {Value::atom("y2")})).disposition ==
        DeliveryResult::Disposition::kParked);
  CHECK(out->drain().empty());
  CHECK(two.export_conversation_state() ==
        std::vector<ConversationReport>{{"c1", 1, 0, false}, {"c2", 0, 1, false}});
  // The parked message is picked up once its conversation starts.
  DeliveryResult later = two.deliver(msg("c2", "ping", {Value::atom("x2")}));
  CHECK(later.branches.size() == 2);
  sent = out->drain();
  REQUIRE(sent.size() == 2);
  CHECK(sent[1].payload == std::vector<Value>{Value::atom("x2"), Value::atom("y2")});
  two.deliver(msg("c1", "done", {Value::atom("y1")}));
  sent = out->drain();
  REQUIRE(sent.size() == 1);
  CHECK(sent[0].payload == std::vector<Value>{Value::atom("x1"), Value::atom("y1")});
  CHECK(two.export_conversation_state() ==
        std::vector<ConversationReport>{{"c1", 0, 0, true}, {"c2", 0, 0, true}});

  // A message that matches nothing in a known conversation parks there.
  CHECK(two.deliver(msg("c1", "unknown", {})).disposition ==
        DeliveryResult::Disposition::kParked);
  CHECK(two.export_conversation_state()[0].mailbox == 1);

  // Sends over an undeclared protocol fail the branch.
  Messenger bad("agent", parse_rules("rcvMsg(C,P,F,ping,X) :- sendMsg(C,smtp,F,pong,X)."), reg);
  DeliveryResult failed = bad.deliver(msg("c1", "ping", {}));
  REQUIRE(failed.branches.size() == 1);
  CHECK(failed.branches[0].state == BranchOutcome::State::kFailed);
}

TEST_CASE("conversation isolation under random interleavings") {
  std::mt19937_64 rng(5);
  Rulebase rb = parse_rules(kTwoStep);
  for (int round = 0; round < 10; ++round) {
    // Per conversation: ping then done, but the global order is shuffled,
    // so done may arrive first.
    std::vector<Message> inbox;
    for (int c = 0; c < 50; ++c) {
      std::string id = "conv-" + std::to_string(c);
      inbox.push_back(msg(id, "ping", {Value::rdf(Term::integer(c))}, "peer" + std::to_string(c % 3)));
      inbox.push_back(msg(id, "done", {Value::atom("d" + std::to_string(rng() % 1000))},
                          "peer" + std::to_string(c % 3)));
    }
    std::shuffle(inbox.begin(), inbox.end(), rng);

    TransportRegistry reg;
    auto out = std::make_shared<InMemoryTransport>();
    reg.add("inmem", out);
    Messenger agent("agent", rb, reg);
    // Deliver from four threads; per-conversation arrival order follows the
    // shuffled sequence because each thread takes a disjoint set of
    // conversations.
    std::vector<std::thread> threads;
    for (int w = 0; w < 4; ++w) {
      threads.emplace_back([&, w] {
        for (const Message &m : inbox) {
          if (std::hash<std::string>()(m.conversation) % 4 == size_t(w)) agent.deliver(m);
        }
      });
    }
    for (auto &t : threads) t.join();

    std::map<std::string, std::vector<Message>> projected;
    for (const Message &m : out->sent()) projected[m.conversation].push_back(m);
    CHECK(projected.size() == 50);
    for (const auto &[id, msgs] : projected) {
      // Isolated replay of the same conversation.
      TransportRegistry solo_reg;
      auto solo_out = std::make_shared<InMemoryTransport>();
      solo_reg.add("inmem", solo_out);
      Messenger solo("agent", rb, solo_reg);
      for (const Message &m : inbox) {
        if (m.conversation == id) solo.deliver(m);
      }
      CHECK(solo_out->sent() == msgs);
      REQUIRE(msgs.size() == 2);
      CHECK(msgs[0].performative == "ack");
      CHECK(msgs[1].performative == "bye");
      // Bindings saved before suspension survive resumption.
      CHECK(msgs[1].payload[0] == msgs[0].payload[0]);
      CHECK(msgs[1].payload[0] ==
            Value::rdf(Term::integer(std::stoi(id.substr(5)))));
    }
    auto state = agent.export_conversation_state();
    CHECK(state.size() == agent.conversation_count());
    for (const ConversationReport &c : state) {
      CHECK(c.completed);
      CHECK(c.pending == 0);
      CHECK(c.mailbox == 0);
    }
  }
}

TEST_CASE("messaging goals read derivation rules and the store") {
  TripleStore store;
  store.insert({ex("Morchella"), sub_class_of(), ex("Ascomycota")});
  store.insert({ex("carol"), ex("responsibleFor"), ex("Ascomycota")});
  Rulebase rb = parse_rules(
      ":- prefix(ex, <http://example.org/>).\n"
      "responsible(T, U) :- rdfs(T, rdfs:subClassOf, C), rdf(U, ex:responsibleFor, C).\n"
      "rcvMsg(C, P, F, whoIsResponsible, [T]) :- responsible(T, U), "
      "sendMsg(C, P, F, answer, [U]).\n");
  TransportRegistry reg;
  auto out = std::make_shared<InMemoryTransport>();
  reg.add("inmem", out);
  Messenger agent("expert-finder", rb, reg, &store);
  agent.deliver(msg("q1", "whoIsResponsible", {Value::rdf(ex("Morchella"))}));
  auto sent = out->drain();
  REQUIRE(sent.size() == 1);
  CHECK(sent[0].payload == std::vector<Value>{Value::rdf(ex("carol"))});
  DeliveryResult none = agent.deliver(msg("q2", "whoIsResponsible", {Value::rdf(ex("Boletus"))}));
  REQUIRE(none.branches.size() == 1);
  CHECK(none.branches[0].state == BranchOutcome::State::kFailed);
}
