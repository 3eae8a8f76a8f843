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

#include "semflow/rules/solve.h"

#include <cstdlib>
#include <set>

#include "semflow/base/error.h"

namespace semflow::rules {

Value resolve(const Value &v, const Substitution &s) {
  if (v.kind == Value::Kind::kVar) {
    auto it = s.find(v.name);
    return it == s.end() ? v : resolve(it->second, s);
  }
  if (v.kind == Value::Kind::kList) {
    Value out = v;
    for (Value &i : out.items) i = resolve(i, s);
    return out;
  }
  return v;
}

namespace {

bool occurs(const std::string &var, const Value &v) {
  if (v.kind == Value::Kind::kVar) return v.name == var;
  for (const Value &i : v.items) {
    if (occurs(var, i)) return true;
  }
  return false;
}

std::optional<long double> numeric(const Value &v) {
  if (v.kind != Value::Kind::kRdf || !v.term.is_literal()) return std::nullopt;
  const std::string &dt = v.term.datatype();
  if (dt != vocab::kXsdInteger && dt != vocab::kXsdDecimal && dt != vocab::kXsdDouble) {
    return std::nullopt;
  }
  const char *begin = v.term.value().c_str();
  char *end = nullptr;
  long double x = std::strtold(begin, &end);
  if (end == begin || *end != '\0') return std::nullopt;
  return x;
}

// Orders two ground values when they are comparable.
std::optional<int> order(const Value &a, const Value &b) {
  if (auto x = numeric(a)) {
    if (auto y = numeric(b)) return *x < *y ? -1 : *x > *y ? 1 : 0;
    return std::nullopt;
  }
  if (a.kind != b.kind) return std::nullopt;
  if (a.kind == Value::Kind::kAtom) return a.name.compare(b.name) < 0 ? -1 : a.name == b.name ? 0 : 1;
  if (a.kind == Value::Kind::kRdf) {
    const Term &x = a.term, &y = b.term;
    if (x.kind() != y.kind() || x.datatype() != y.datatype() || x.lang() != y.lang()) {
      return std::nullopt;
    }
    int c = x.value().compare(y.value());
    return c < 0 ? -1 : c > 0 ? 1 : 0;
  }
  return std::nullopt;
}

}  // namespace

bool unify(const Value &a0, const Value &b0, Substitution &s) {
  Value a = a0.kind == Value::Kind::kVar ? resolve(a0, s) : a0;
  Value b = b0.kind == Value::Kind::kVar ? resolve(b0, s) : b0;
  if (a.kind == Value::Kind::kVar && b.kind == Value::Kind::kVar && a.name == b.name) return true;
  if (a.kind == Value::Kind::kVar) {
    Value bound = resolve(b, s);
    if (occurs(a.name, bound)) return false;
    s[a.name] = std::move(bound);
    return true;
  }
  if (b.kind == Value::Kind::kVar) return unify(b, a, s);
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Value::Kind::kAtom: return a.name == b.name;
    case Value::Kind::kRdf: return a.term == b.term;
    case Value::Kind::kList:
      if (a.items.size() != b.items.size()) return false;
      for (size_t i = 0; i < a.items.size(); ++i) {
        if (!unify(a.items[i], b.items[i], s)) return false;
      }
      return true;
    default: return false;
  }
}

Solver::Solver(const Rulebase &rules, const Graph *graph, size_t depth_limit)
    : rules_(rules), graph_(graph), depth_limit_(depth_limit) {
  if (depth_limit == 0) throw Error("invalid-argument", "depth limit must be positive");
  for (const DerivationRule &r : rules.derivations) {
    index_[{r.head.predicate, r.head.args.size()}].push_back(&r);
  }
}

void Solver::solve(const std::vector<Literal> &goals, const Substitution &initial,
                   const std::function<bool(const Substitution &)> &yield) {
  Chain chain;
  for (auto it = goals.rbegin(); it != goals.rend(); ++it) {
    chain = std::make_shared<const Frame>(Frame{*it, 0, chain});
  }
  run(chain, initial, yield);
}

std::optional<Substitution> Solver::first(const std::vector<Literal> &goals,
                                          const Substitution &initial) {
  std::optional<Substitution> out;
  solve(goals, initial, [&](const Substitution &s) {
    out = s;
    return false;
  });
  return out;
}

namespace {

void rename_value(Value &v, const std::string &suffix) {
  if (v.kind == Value::Kind::kVar) v.name += suffix;
  for (Value &i : v.items) rename_value(i, suffix);
}

void rename_literal(Literal &l, const std::string &suffix) {
  for (Value &a : l.atom.args) rename_value(a, suffix);
  rename_value(l.lhs, suffix);
  rename_value(l.rhs, suffix);
}

}  // namespace

DerivationRule Solver::rename(const DerivationRule &r) {
  std::string suffix = "#" + std::to_string(rename_++);
  DerivationRule out = r;
  for (Value &a : out.head.args) rename_value(a, suffix);
  for (Literal &l : out.body) rename_literal(l, suffix);
  return out;
}

// Returns false when the caller should stop enumerating.
bool Solver::run(const Chain &goals, const Substitution &s,
                 const std::function<bool(const Substitution &)> &yield) {
  if (!goals) return yield(s);
  const Frame &f = *goals;
  const Literal &l = f.literal;
  switch (l.kind) {
    case Literal::Kind::kCompare: {
      Substitution next = s;
      if (l.op == CompareOp::kEq) {
        if (!unify(l.lhs, l.rhs, next)) return true;
        return run(f.next, next, yield);
      }
      Value a = resolve(l.lhs, s), b = resolve(l.rhs, s);
      bool ok;
      if (l.op == CompareOp::kNe) {
        Substitution probe = s;
        ok = !unify(a, b, probe);
      } else {
        if (!a.ground() || !b.ground()) return true;
        std::optional<int> c = order(a, b);
        if (!c) return true;
        ok = (l.op == CompareOp::kLt && *c < 0) || (l.op == CompareOp::kLe && *c <= 0) ||
             (l.op == CompareOp::kGt && *c > 0) || (l.op == CompareOp::kGe && *c >= 0);
      }
      return ok ? run(f.next, s, yield) : true;
    }
    case Literal::Kind::kNot: {
      Atom a = l.atom;
      for (Value &v : a.args) {
        v = resolve(v, s);
        if (!v.ground()) throw Error("non-ground-negation", to_string(l.atom));
      }
      Literal positive;
      positive.atom = std::move(a);
      Chain sub = std::make_shared<const Frame>(Frame{std::move(positive), f.depth, nullptr});
      bool found = false;
      run(sub, s, [&](const Substitution &) {
        found = true;
        return false;
      });
      return found ? true : run(f.next, s, yield);
    }
    case Literal::Kind::kAtom:
      if (l.is_triple()) return match_triple(f, Entailment::kNone, s, yield);
      if (l.atom.predicate == "rdfs" && l.atom.args.size() == 3) {
        return match_triple(f, Entailment::kSubclass, s, yield);
      }
      if (l.atom.predicate == "true" && l.atom.args.empty()) return run(f.next, s, yield);
      return expand(f, s, yield);
  }
  return true;
}

bool Solver::expand(const Frame &f, const Substitution &s,
                    const std::function<bool(const Substitution &)> &yield) {
  auto it = index_.find({f.literal.atom.predicate, f.literal.atom.args.size()});
  if (it == index_.end()) return true;
  for (const DerivationRule *rule : it->second) {
    if (f.depth >= depth_limit_) {
      depth_limited_ = true;
      return true;
    }
    DerivationRule r = rename(*rule);
    Substitution next = s;
    bool ok = true;
    for (size_t i = 0; i < r.head.args.size() && ok; ++i) {
      ok = unify(f.literal.atom.args[i], r.head.args[i], next);
    }
    if (!ok) continue;
    Chain chain = f.next;
    for (auto b = r.body.rbegin(); b != r.body.rend(); ++b) {
      chain = std::make_shared<const Frame>(Frame{std::move(*b), f.depth + 1, chain});
    }
    if (!run(chain, next, yield)) return false;
  }
  return true;
}

bool Solver::match_triple(const Frame &f, Entailment ent, const Substitution &s,
                          const std::function<bool(const Substitution &)> &yield) {
  if (!graph_) return true;
  std::vector<Value> args;
  PatternSlot slots[3];
  for (size_t i = 0; i < 3; ++i) {
    Value v = resolve(f.literal.atom.args[i], s);
    if (v.kind == Value::Kind::kVar) {
      slots[i] = PatternSlot::var(v.name);
    } else if (v.kind == Value::Kind::kRdf) {
      slots[i] = PatternSlot(v.term);
    } else {
      return true;
    }
    args.push_back(std::move(v));
  }
  TriplePattern pattern{slots[0], slots[1], slots[2]};
  for (const Binding &b : graph_->match(pattern, ent)) {
    Substitution next = s;
    bool ok = true;
    for (const auto &[var, term] : b) {
      ok = ok && unify(Value::var(var), Value::rdf(term), next);
    }
    if (ok && !run(f.next, next, yield)) return false;
  }
  return true;
}

SolveResult solve(const Atom &goal, const Rulebase &rules, const Snapshot &view,
                  size_t depth_limit) {
  Solver solver(rules, &view.graph(), depth_limit);
  std::set<std::string> vars;
  std::function<void(const Value &)> collect = [&](const Value &v) {
    if (v.kind == Value::Kind::kVar) vars.insert(v.name);
    for (const Value &i : v.items) collect(i);
  };
  for (const Value &a : goal.args) collect(a);

  Literal l;
  l.atom = goal;
  std::set<Substitution> answers;
  solver.solve({l}, {}, [&](const Substitution &s) {
    Substitution projected;
    for (const std::string &v : vars) {
      Value r = resolve(Value::var(v), s);
      if (!(r.kind == Value::Kind::kVar && r.name == v)) projected[v] = std::move(r);
    }
    answers.insert(std::move(projected));
    return true;
  });
  return {std::vector<Substitution>(answers.begin(), answers.end()), solver.depth_limited()};
}

}  // namespace semflow::rules
