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

#include "semflow/rules/eca.h"

#include "semflow/base/error.h"
#include "semflow/rules/solve.h"
#include "semflow/sparql/query.h"

namespace semflow::rules {

namespace {

Value slot(const std::optional<Term> &t) { return t ? Value::rdf(*t) : Value::atom("none"); }

std::string field(const std::optional<Term> &t) { return t ? t->value() : "-"; }

// Replaces ${Var} with the N-Triples form of the variable's value.
std::string substitute(const std::string &text, const Substitution &s) {
  std::string out;
  size_t p = 0;
  while (true) {
    size_t start = text.find("${", p);
    if (start == std::string::npos) break;
    size_t end = text.find('}', start);
    if (end == std::string::npos) break;
    out.append(text, p, start - p);
    std::string name = text.substr(start + 2, end - start - 2);
    Value v = resolve(Value::var(name), s);
    if (v.kind != Value::Kind::kRdf) {
      throw Error("unbound-variable", name + " is " + to_string(v));
    }
    out += v.term.to_ntriples();
    p = end + 1;
  }
  out.append(text, p);
  return out;
}

void run_action(const Atom &a, const Substitution &s, const Event &e, const Rulebase &rules,
                TripleStore &store, const ActionHooks &hooks, DispatchReport &report) {
  std::vector<Value> args;
  for (const Value &v : a.args) args.push_back(resolve(v, s));
  if (a.predicate == "update") {
    if (args[0].kind != Value::Kind::kRdf || !args[0].term.is_literal()) {
      throw Error("invalid-argument", "update expects a string");
    }
    PrefixMap prefixes = store.prefixes();
    for (const auto &[k, v] : rules.prefixes) prefixes[k] = v;
    sparql::execute_update(
        sparql::parse_update(substitute(args[0].term.value(), s), prefixes), store);
  } else if (a.predicate == "sendMsg") {
    if (!hooks.send) throw Error("unsupported-action", "sendMsg");
    for (const Value &v : args) {
      if (!v.ground()) throw Error("unbound-variable", to_string(v));
    }
    Message m;
    m.conversation = text_of(args[0]);
    m.protocol = text_of(args[1]);
    m.receiver = text_of(args[2]);
    m.performative = text_of(args[3]);
    m.payload = args[4].kind == Value::Kind::kList ? args[4].items : std::vector<Value>{args[4]};
    hooks.send(m);
  } else if (a.predicate == "mintPage") {
    if (!hooks.mint_page) throw Error("unsupported-action", "mintPage");
    hooks.mint_page(text_of(args[0]), text_of(args[1]), e);
  } else if (a.predicate == "notify") {
    if (!hooks.notify) throw Error("unsupported-action", "notify");
    if (args[0].kind != Value::Kind::kRdf || !args[0].term.is_iri()) {
      throw Error("invalid-argument", "notify expects a user IRI");
    }
    hooks.notify(args[0].term, text_of(args[1]), e);
  } else if (a.predicate == "selectTransition") {
    if (e.kind != "transition-selection") {
      throw Error("illegal-action", "selectTransition outside transition-selection");
    }
    if (!report.selected_transition) report.selected_transition = text_of(args[0]);
  } else {
    throw Error("unsupported-action", a.predicate);
  }
}

}  // namespace

std::vector<Value> Event::slots() const {
  return {Value::atom(kind), slot(instance), slot(subject), slot(actor), slot(aux)};
}

std::string Event::log_line() const {
  return std::to_string(seq) + "\t" + kind + "\t" + field(instance) + "\t" + field(subject) +
         "\t" + timestamp;
}

bool DispatchReport::ok() const {
  for (const ActionOutcome &o : outcomes) {
    if (!o.ok) return false;
  }
  return true;
}

DispatchReport dispatch_event(const Event &e, const Rulebase &rules, TripleStore &store,
                              const ActionHooks &hooks, size_t depth_limit) {
  DispatchReport report;
  std::vector<Value> slots = e.slots();
  for (const EcaRule &r : rules.reactions) {
    Substitution s;
    bool ok = true;
    for (size_t i = 0; i < 5 && ok; ++i) ok = unify(r.pattern[i], slots[i], s);
    if (!ok) continue;
    if (!r.condition.empty()) {
      Snapshot snap = store.snapshot();
      Solver solver(rules, &snap.graph(), depth_limit);
      std::optional<Substitution> sol;
      try {
        sol = solver.first(r.condition, s);
      } catch (const Error &err) {
        report.outcomes.push_back({r.id, "condition", false, err.what()});
        continue;
      }
      if (!sol) continue;
      s = std::move(*sol);
    }
    report.fired.push_back(r.id);
    for (const Atom &a : r.actions) {
      try {
        run_action(a, s, e, rules, store, hooks, report);
        report.outcomes.push_back({r.id, a.predicate, true, {}});
      } catch (const std::exception &err) {
        report.outcomes.push_back({r.id, a.predicate, false, err.what()});
        break;
      }
    }
  }
  return report;
}

}  // namespace semflow::rules
