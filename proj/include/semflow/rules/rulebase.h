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


#ifndef SEMFLOW_RULES_RULEBASE_H_
#define SEMFLOW_RULES_RULEBASE_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "semflow/store/term.h"
#include "semflow/store/triple_store.h"

namespace semflow::rules {

// A rule-language term: variable, symbolic atom, RDF term or list.
struct Value {
  enum class Kind { kVar, kAtom, kRdf, kList };

  Kind kind = Kind::kAtom;
  std::string name;  // variable or atom name
  Term term;         // kRdf
  std::vector<Value> items;  // kList

  static Value var(std::string n) { return {Kind::kVar, std::move(n), {}, {}}; }
  static Value atom(std::string n) { return {Kind::kAtom, std::move(n), {}, {}}; }
  static Value rdf(Term t) { return {Kind::kRdf, {}, std::move(t), {}}; }
  static Value list(std::vector<Value> v) { return {Kind::kList, {}, {}, std::move(v)}; }

  bool is_var() const { return kind == Kind::kVar; }
  bool is_anonymous() const { return kind == Kind::kVar && name.starts_with('_'); }
  bool ground() const;

  bool operator==(const Value &) const = default;
  bool operator<(const Value &o) const;
};

std::string to_string(const Value &v);

// Parses a single term in rule syntax, e.g. `[ping, "x", <urn:a>]`.
Value parse_value(std::string_view text, const PrefixMap &prefixes = default_prefixes());

struct Atom {
  std::string predicate;
  std::vector<Value> args;

  bool operator==(const Atom &) const = default;
};

std::string to_string(const Atom &a);

enum class CompareOp { kEq, kNe, kLt, kLe, kGt, kGe };

std::string_view to_string(CompareOp op);

// Body literal. `rdf(S, P, O)` atoms are matched against the store.
struct Literal {
  enum class Kind { kAtom, kNot, kCompare };

  Kind kind = Kind::kAtom;
  Atom atom;  // kAtom, kNot
  CompareOp op = CompareOp::kEq;
  Value lhs, rhs;  // kCompare

  bool is_triple() const { return kind == Kind::kAtom && atom.predicate == "rdf" &&
                                  atom.args.size() == 3; }

  bool operator==(const Literal &) const = default;
};

std::string to_string(const Literal &l);

struct DerivationRule {
  std::string id;
  Atom head;
  std::vector<Literal> body;  // empty for facts

  bool operator==(const DerivationRule &) const = default;
};

// on(Kind, Instance, Subject, Actor, Aux) :- condition..., action...
struct EcaRule {
  std::string id;
  std::vector<Value> pattern;  // the five event slots
  std::vector<Literal> condition;
  std::vector<Atom> actions;

  bool operator==(const EcaRule &) const = default;
};

// One step of a messaging rule body.
struct Step {
  enum class Kind { kGoal, kSend, kReceive };

  Kind kind = Kind::kGoal;
  Literal goal;             // kGoal
  std::vector<Value> args;  // kSend, kReceive: the five message slots

  bool operator==(const Step &) const = default;
};

// rcvMsg(Cid, Protocol, From, Performative, Payload) :- step, ...
struct MessagingRule {
  std::string id;
  std::vector<Value> trigger;
  std::vector<Step> body;

  bool operator==(const MessagingRule &) const = default;
};

struct Rulebase {
  PrefixMap prefixes;  // declared in the rule text
  std::vector<DerivationRule> derivations;
  std::vector<EcaRule> reactions;
  std::vector<MessagingRule> messaging;

  bool empty() const { return derivations.empty() && reactions.empty() && messaging.empty(); }
  size_t size() const { return derivations.size() + reactions.size() + messaging.size(); }
  // Declared prefixes over the store defaults.
  PrefixMap effective_prefixes() const;
  // Appends the rules of `other`, re-assigning ids.
  void append(const Rulebase &other);

  bool operator==(const Rulebase &) const = default;
};

// Action predicates recognised in ECA rule bodies.
bool is_action(std::string_view predicate, size_t arity);

// Throws Error("syntax-error", reason, line) or
// Error("range-violation", "rule-id: Var").
Rulebase parse_rules(std::string_view text);

// Prints a rulebase in the rule syntax; parse_rules(print_rules(r)) == r.
std::string print_rules(const Rulebase &r);

// Re-derives rule ids from declaration order.
void assign_ids(Rulebase &r);

// Range restriction and conversation locality; throws like parse_rules.
void check_rulebase(const Rulebase &r);

}  // namespace semflow::rules

#endif  // SEMFLOW_RULES_RULEBASE_H_
