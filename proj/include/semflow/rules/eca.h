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


#ifndef SEMFLOW_RULES_ECA_H_
#define SEMFLOW_RULES_ECA_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "semflow/rules/messaging.h"
#include "semflow/rules/rulebase.h"
#include "semflow/store/triple_store.h"

namespace semflow::rules {

// An engine event as seen by reaction rules. Absent fields match the atom
// `none`.
struct Event {
  std::string kind;
  uint64_t seq = 0;
  std::string timestamp;
  std::optional<Term> instance;
  std::optional<Term> subject;
  std::optional<Term> actor;
  std::optional<Term> aux;

  // Kind, instance, subject, actor, aux: the slots of on/5.
  std::vector<Value> slots() const;
  // seq, kind, instance, subject, timestamp separated by tabs; "-" for
  // absent fields.
  std::string log_line() const;

  bool operator==(const Event &) const = default;
};

// Side effects outside the store. A missing hook makes the action fail.
struct ActionHooks {
  std::function<void(const Message &)> send;
  std::function<void(const Term &recipient, const std::string &kind, const Event &)> notify;
  std::function<void(const std::string &page, const std::string &tpl, const Event &)> mint_page;
};

struct ActionOutcome {
  std::string rule;
  std::string action;
  bool ok = true;
  std::string detail;
};

struct DispatchReport {
  std::vector<std::string> fired;  // rules whose condition held, in order
  std::vector<ActionOutcome> outcomes;
  std::optional<std::string> selected_transition;

  bool ok() const;
};

// Runs every reaction rule matching `e` in declaration order. A failing
// action skips the rest of its rule only.
DispatchReport dispatch_event(const Event &e, const Rulebase &rules, TripleStore &store,
                              const ActionHooks &hooks = {},
                              size_t depth_limit = kDefaultDepthLimit);

}  // namespace semflow::rules

#endif  // SEMFLOW_RULES_ECA_H_
