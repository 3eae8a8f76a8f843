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


#ifndef SEMFLOW_RULES_SOLVE_H_
#define SEMFLOW_RULES_SOLVE_H_

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "semflow/rules/rulebase.h"
#include "semflow/store/triple_store.h"

namespace semflow::rules {

inline constexpr size_t kDefaultDepthLimit = 512;

using Substitution = std::map<std::string, Value>;

// Applies `s` to `v` until no bound variable remains.
Value resolve(const Value &v, const Substitution &s);
bool unify(const Value &a, const Value &b, Substitution &s);

// SLD resolution over the derivation rules of a rulebase. `rdf(S, P, O)`
// literals read the graph as stored; `rdfs(S, P, O)` adds subclass
// entailment.
class Solver {
 public:
  Solver(const Rulebase &rules, const Graph *graph, size_t depth_limit = kDefaultDepthLimit);

  // Calls `yield` for every solution of the conjunction, depth first in
  // rule and body order; stops early when `yield` returns false.
  void solve(const std::vector<Literal> &goals, const Substitution &initial,
             const std::function<bool(const Substitution &)> &yield);

  std::optional<Substitution> first(const std::vector<Literal> &goals,
                                    const Substitution &initial);

  // Set when some branch was cut at the depth limit.
  bool depth_limited() const { return depth_limited_; }

 private:
  struct Frame;
  using Chain = std::shared_ptr<const Frame>;
  struct Frame {
    Literal literal;
    size_t depth;
    Chain next;
  };

  bool run(const Chain &goals, const Substitution &s,
           const std::function<bool(const Substitution &)> &yield);
  bool expand(const Frame &f, const Substitution &s,
              const std::function<bool(const Substitution &)> &yield);
  bool match_triple(const Frame &f, Entailment ent, const Substitution &s,
                    const std::function<bool(const Substitution &)> &yield);
  DerivationRule rename(const DerivationRule &r);

  const Rulebase &rules_;
  const Graph *graph_;
  size_t depth_limit_;
  bool depth_limited_ = false;
  size_t rename_ = 0;
  std::map<std::pair<std::string, size_t>, std::vector<const DerivationRule *>> index_;
};

struct SolveResult {
  // Bindings of the goal's variables, deduplicated and sorted.
  std::vector<Substitution> answers;
  bool depth_limited = false;
};

// Throws Error("non-ground-negation") when a negated subgoal is not ground
// at the time it is reached, Error("invalid-argument") for depth_limit 0.
SolveResult solve(const Atom &goal, const Rulebase &rules, const Snapshot &view,
                  size_t depth_limit = kDefaultDepthLimit);

}  // namespace semflow::rules

#endif  // SEMFLOW_RULES_SOLVE_H_
