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


#ifndef SEMFLOW_ENGINE_ENGINE_H_
#define SEMFLOW_ENGINE_ENGINE_H_

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include "semflow/base/clock.h"
#include "semflow/procdef/definition.h"
#include "semflow/rules/eca.h"
#include "semflow/rules/rulebase.h"
#include "semflow/sparql/query.h"
#include "semflow/store/triple_store.h"

namespace semflow::engine {

using EngineEvent = rules::Event;

using semflow::Clock;
using semflow::ManualClock;
using semflow::SystemClock;
using semflow::iso8601;

enum class InstanceState { kRunning, kEnded };
enum class TokenState { kActive, kWaiting, kConsumed };
enum class TaskState { kCreated, kAssigned, kStarted, kCompleted };

std::string_view to_string(InstanceState s);
std::string_view to_string(TokenState s);
std::string_view to_string(TaskState s);

struct Token {
  uint64_t id = 0;
  std::string node;
  TokenState state = TokenState::kActive;
  std::string task;  // uri of the open task while waiting
};

struct TaskInstance {
  std::string uri;
  std::string node;
  std::string instance;
  std::string form;
  TaskState state = TaskState::kCreated;
  std::optional<Term> assignee;
  std::optional<Term> about;  // value of the task's subject variable
  std::map<std::string, Term> form_data;
  std::vector<std::string> notes;
  std::string created;
};

struct ProcessInstance {
  std::string uri;
  std::string definition;  // definition uri
  std::string name;
  int64_t version = 0;
  uint64_t number = 0;
  InstanceState state = InstanceState::kRunning;
  Term initiator;
  std::vector<Token> tokens;
  std::map<std::string, Term> variables;
  std::vector<std::string> tasks;  // task uris in creation order
  std::string created;
  std::string ended;
  uint64_t tokens_created = 0;
  uint64_t tokens_consumed = 0;

  size_t live_tokens() const;
};

enum class FieldType { kLiteral, kConcept, kResource };

std::string_view to_string(FieldType t);

struct FormField {
  std::string name;
  FieldType type = FieldType::kLiteral;
  bool required = false;
  std::string predicate;  // absolute IRI
  std::string default_value;  // may be "${currentUser}"
};

struct FormSchema {
  std::string name;
  std::vector<FormField> fields;
};

using FormLookup = std::function<std::optional<FormSchema>(const std::string &form)>;
using FormInput = std::map<std::string, std::string>;

class Engine;

// Passed to completion actions. Actions may set process variables.
struct ActionContext {
  Engine &engine;
  ProcessInstance &instance;
  const TaskInstance &task;
  const Term &user;
  const procdef::ActionBinding &binding;
};

using ActionFn = std::function<void(ActionContext &)>;

// Groups open tasks by the class of their subject resource (read through
// `predicate`) generalized to a child of `root`.
struct GroupingConfig {
  std::string predicate = vocab::kRdfType;
  std::optional<std::string> root;
};

struct TaskGroup {
  std::optional<Term> category;  // nullopt: subject has no matching class
  std::vector<TaskInstance> tasks;
};

struct EngineConfig {
  std::string base_iri = "http://example.org/";
  std::optional<rules::Rulebase> rules;  // default: default_decoration_rules()
  size_t depth_limit = rules::kDefaultDepthLimit;
  GroupingConfig grouping;
};

// The decoration rulebase shipped in fixtures/decoration.rules.
const rules::Rulebase &default_decoration_rules();
std::string_view default_decoration_rules_text();

// First transition whose guard holds in declaration order, else the default
// transition, else the override's choice. Unguarded non-default
// transitions count as true. Throws Error("no-enabled-transition").
const procdef::Transition *choose_transition(
    std::span<const procdef::Transition *const> outgoing,
    const std::function<bool(const procdef::Transition &)> &guard_holds,
    const std::function<std::optional<std::string>()> &override_choice = {});

// Token-based process execution with semantic decoration of the store.
// Operations on one instance are serialized; different instances proceed
// concurrently; event sequence numbers are global.
class Engine {
 public:
  Engine(TripleStore &store, Clock &clock, EngineConfig config = {});
  ~Engine();

  // Validates, mints and registers. Throws Error("invalid-definition",
  // violations) or Error("duplicate-version").
  const procdef::ProcessDefinition &deploy(procdef::ProcessDefinition d);
  std::vector<procdef::ProcessDefinition> definitions() const;
  std::optional<procdef::ProcessDefinition> definition(const std::string &name,
                                                       int64_t version) const;

  // Throws Error("unknown-definition").
  ProcessInstance start_process(const std::string &name, int64_t version, const Term &initiator,
                                const FormInput &data = {});
  // Throws unknown-task, wrong-user, wrong-state, form-validation(fields).
  TaskInstance start_task(const std::string &task, const Term &user);
  TaskInstance complete_task(const std::string &task, const Term &user, const FormInput &data);
  // Administrative (re)assignment of an open, not yet started task.
  TaskInstance reassign_task(const std::string &task, const Term &user);

  std::vector<TaskGroup> list_tasks(const Term &user) const;
  std::optional<ProcessInstance> instance(const std::string &uri) const;
  std::vector<ProcessInstance> instances() const;
  std::optional<TaskInstance> task(const std::string &uri) const;
  std::vector<TaskInstance> tasks() const;

  std::vector<EngineEvent> events(uint64_t after = 0) const;
  uint64_t last_seq() const;
  // One line per event; see EngineEvent::log_line.
  std::string event_log() const;
  // Rule-action failures from decoration, in order.
  std::vector<std::string> rule_errors() const;

  // Listeners run synchronously after decoration of each event.
  void subscribe(std::function<void(const EngineEvent &)> fn);
  // Called when assignment finds no candidate.
  void on_unassigned(std::function<void(const TaskInstance &, const ProcessInstance &)> fn);
  void register_action(const std::string &name, ActionFn fn);
  void set_form_lookup(FormLookup lookup);
  void set_action_hooks(rules::ActionHooks hooks);
  // Appends to the rulebase consulted for decoration and overrides.
  void add_rules(const rules::Rulebase &r);
  rules::Rulebase rulebase() const;

  TripleStore &store() { return store_; }
  const EngineConfig &config() const { return config_; }

 private:
  struct Record;

  std::shared_ptr<Record> record_for_task(const std::string &task) const;
  std::shared_ptr<Record> record(const std::string &instance) const;
  EngineEvent fire(const std::string &kind, const ProcessInstance &inst,
                   std::optional<Term> subject, std::optional<Term> actor = std::nullopt,
                   std::optional<Term> aux = std::nullopt);
  void run(Record &r, std::vector<uint64_t> work);
  void process(Record &r, uint64_t token, std::vector<uint64_t> &work);
  void leave_and_move(Record &r, Token &token, std::vector<uint64_t> &work);
  void move(Record &r, Token &token, const procdef::Transition &t, std::vector<uint64_t> &work);
  Token &new_token(Record &r, const std::string &node);
  Token *find_token(Record &r, uint64_t id);
  void create_task(Record &r, Token &token, const procdef::Node &node);
  void assign(Record &r, TaskInstance &task, const procdef::Node &node);
  sparql::RenderContext context(const Record &r, const TaskInstance *task) const;
  std::map<std::string, Term> convert_form(const std::string &form, const Term &user,
                                           const FormInput &data) const;

  TripleStore &store_;
  Clock &clock_;
  EngineConfig config_;

  mutable std::shared_mutex registry_mu_;
  std::map<std::pair<std::string, int64_t>, procdef::ProcessDefinition> definitions_;
  std::map<std::string, std::shared_ptr<Record>> instances_;
  std::map<std::string, std::string> task_index_;  // task uri -> instance uri
  uint64_t instance_counter_ = 0;

  mutable std::mutex events_mu_;
  std::vector<EngineEvent> events_;
  uint64_t seq_ = 0;
  std::vector<std::string> rule_errors_;

  mutable std::mutex hooks_mu_;
  std::shared_ptr<const rules::Rulebase> rules_;
  rules::ActionHooks action_hooks_;
  std::vector<std::function<void(const EngineEvent &)>> listeners_;
  std::vector<std::function<void(const TaskInstance &, const ProcessInstance &)>> unassigned_;
  std::map<std::string, ActionFn> actions_;
  FormLookup form_lookup_;
};

}  // namespace semflow::engine

#endif  // SEMFLOW_ENGINE_ENGINE_H_
