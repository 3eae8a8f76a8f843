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

#include "semflow/engine/engine.h"

#include <algorithm>
#include <set>

#include "semflow/base/error.h"
#include "semflow/sparql/query.h"

namespace semflow::engine {

using procdef::Node;
using procdef::NodeKind;
using procdef::ProcessDefinition;
using procdef::Transition;

std::string_view to_string(InstanceState s) {
  return s == InstanceState::kRunning ? "running" : "ended";
}

std::string_view to_string(TokenState s) {
  switch (s) {
    case TokenState::kActive: return "active";
    case TokenState::kWaiting: return "waiting-on-task";
    case TokenState::kConsumed: return "consumed";
  }
  return "?";
}

std::string_view to_string(TaskState s) {
  switch (s) {
    case TaskState::kCreated: return "created";
    case TaskState::kAssigned: return "assigned";
    case TaskState::kStarted: return "started";
    case TaskState::kCompleted: return "completed";
  }
  return "?";
}

std::string_view to_string(FieldType t) {
  switch (t) {
    case FieldType::kLiteral: return "literal";
    case FieldType::kConcept: return "category-iri";
    case FieldType::kResource: return "resource-iri";
  }
  return "?";
}

size_t ProcessInstance::live_tokens() const {
  return std::count_if(tokens.begin(), tokens.end(),
                       [](const Token &t) { return t.state != TokenState::kConsumed; });
}

const rules::Rulebase &default_decoration_rules() {
  static const rules::Rulebase rb = rules::parse_rules(default_decoration_rules_text());
  return rb;
}

const Transition *choose_transition(
    std::span<const Transition *const> outgoing,
    const std::function<bool(const Transition &)> &guard_holds,
    const std::function<std::optional<std::string>()> &override_choice) {
  const Transition *fallback = nullptr;
  for (const Transition *t : outgoing) {
    if (t->is_default) {
      if (!fallback) fallback = t;
      continue;
    }
    if (!t->guard || guard_holds(*t)) return t;
  }
  if (fallback) return fallback;
  if (override_choice) {
    if (std::optional<std::string> name = override_choice()) {
      for (const Transition *t : outgoing) {
        if (t->name == *name) return t;
      }
    }
  }
  throw Error("no-enabled-transition", outgoing.empty() ? "" : outgoing.front()->from);
}

struct Engine::Record {
  std::mutex mu;
  ProcessInstance inst;
  const ProcessDefinition *def = nullptr;
  std::map<std::string, TaskInstance> tasks;
  std::map<std::string, size_t> arrivals;  // join node -> tokens parked
  uint64_t next_task = 0;
};

Engine::Engine(TripleStore &store, Clock &clock, EngineConfig config)
    : store_(store), clock_(clock), config_(std::move(config)) {
  if (config_.base_iri.empty() ||
      (config_.base_iri.back() != '/' && config_.base_iri.back() != '#')) {
    throw Error("invalid-namespace", config_.base_iri);
  }
  rules_ = std::make_shared<const rules::Rulebase>(
      config_.rules ? *config_.rules : default_decoration_rules());
}

Engine::~Engine() = default;

// ---------------------------------------------------------------------------
// Definitions

const ProcessDefinition &Engine::deploy(ProcessDefinition d) {
  std::vector<std::string> violations = procdef::validate(d);
  if (!violations.empty()) {
    std::string detail;
    for (const std::string &v : violations) detail += (detail.empty() ? "" : ", ") + v;
    throw Error("invalid-definition", detail);
  }
  d = procdef::mint_uris(std::move(d), config_.base_iri);
  std::unique_lock lock(registry_mu_);
  auto key = std::make_pair(d.name, d.version);
  if (definitions_.count(key)) throw Error("duplicate-version", d.name + "/" + std::to_string(d.version));
  procdef::register_definition(d, store_);
  return definitions_.emplace(key, std::move(d)).first->second;
}

std::vector<ProcessDefinition> Engine::definitions() const {
  std::shared_lock lock(registry_mu_);
  std::vector<ProcessDefinition> out;
  for (const auto &[k, d] : definitions_) out.push_back(d);
  return out;
}

std::optional<ProcessDefinition> Engine::definition(const std::string &name,
                                                    int64_t version) const {
  std::shared_lock lock(registry_mu_);
  auto it = definitions_.find({name, version});
  if (it == definitions_.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------------------
// Events

EngineEvent Engine::fire(const std::string &kind, const ProcessInstance &inst,
                         std::optional<Term> subject, std::optional<Term> actor,
                         std::optional<Term> aux) {
  EngineEvent e;
  e.kind = kind;
  e.instance = Term::iri(inst.uri);
  e.subject = std::move(subject);
  e.actor = std::move(actor);
  e.aux = std::move(aux);
  {
    std::lock_guard lock(events_mu_);
    e.seq = ++seq_;
    e.timestamp = iso8601(clock_.now());
    events_.push_back(e);
  }
  std::shared_ptr<const rules::Rulebase> rb;
  rules::ActionHooks hooks;
  std::vector<std::function<void(const EngineEvent &)>> listeners;
  {
    std::lock_guard lock(hooks_mu_);
    rb = rules_;
    hooks = action_hooks_;
    listeners = listeners_;
  }
  rules::DispatchReport report = rules::dispatch_event(e, *rb, store_, hooks, config_.depth_limit);
  for (const rules::ActionOutcome &o : report.outcomes) {
    if (o.ok) continue;
    std::lock_guard lock(events_mu_);
    rule_errors_.push_back(std::to_string(e.seq) + " " + o.rule + " " + o.action + ": " +
                           o.detail);
  }
  for (const auto &fn : listeners) fn(e);
  return e;
}

std::vector<EngineEvent> Engine::events(uint64_t after) const {
  std::lock_guard lock(events_mu_);
  // Sequence numbers are dense from 1 in log order.
  if (after >= events_.size()) return {};
  return std::vector<EngineEvent>(events_.begin() + after, events_.end());
}

uint64_t Engine::last_seq() const {
  std::lock_guard lock(events_mu_);
  return seq_;
}

std::string Engine::event_log() const {
  std::lock_guard lock(events_mu_);
  std::string out;
  for (const EngineEvent &e : events_) out += e.log_line() + "\n";
  return out;
}

std::vector<std::string> Engine::rule_errors() const {
  std::lock_guard lock(events_mu_);
  return rule_errors_;
}

// ---------------------------------------------------------------------------
// Configuration

void Engine::subscribe(std::function<void(const EngineEvent &)> fn) {
  std::lock_guard lock(hooks_mu_);
  listeners_.push_back(std::move(fn));
}

void Engine::on_unassigned(std::function<void(const TaskInstance &, const ProcessInstance &)> fn) {
  std::lock_guard lock(hooks_mu_);
  unassigned_.push_back(std::move(fn));
}

void Engine::register_action(const std::string &name, ActionFn fn) {
  std::lock_guard lock(hooks_mu_);
  actions_[name] = std::move(fn);
}

void Engine::set_form_lookup(FormLookup lookup) {
  std::lock_guard lock(hooks_mu_);
  form_lookup_ = std::move(lookup);
}

void Engine::set_action_hooks(rules::ActionHooks hooks) {
  std::lock_guard lock(hooks_mu_);
  action_hooks_ = std::move(hooks);
}

void Engine::add_rules(const rules::Rulebase &r) {
  std::lock_guard lock(hooks_mu_);
  rules::Rulebase merged = *rules_;
  merged.append(r);
  rules_ = std::make_shared<const rules::Rulebase>(std::move(merged));
}

rules::Rulebase Engine::rulebase() const {
  std::lock_guard lock(hooks_mu_);
  return *rules_;
}

// ---------------------------------------------------------------------------
// Execution

std::shared_ptr<Engine::Record> Engine::record(const std::string &instance) const {
  std::shared_lock lock(registry_mu_);
  auto it = instances_.find(instance);
  return it == instances_.end() ? nullptr : it->second;
}

std::shared_ptr<Engine::Record> Engine::record_for_task(const std::string &task) const {
  std::shared_lock lock(registry_mu_);
  auto it = task_index_.find(task);
  if (it == task_index_.end()) throw Error("unknown-task", task);
  return instances_.at(it->second);
}

Token &Engine::new_token(Record &r, const std::string &node) {
  Token t;
  t.id = ++r.inst.tokens_created;
  t.node = node;
  r.inst.tokens.push_back(t);
  return r.inst.tokens.back();
}

Token *Engine::find_token(Record &r, uint64_t id) {
  for (Token &t : r.inst.tokens) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

sparql::RenderContext Engine::context(const Record &r, const TaskInstance *task) const {
  sparql::RenderContext ctx;
  ctx.current_user = r.inst.initiator;
  ctx.values = r.inst.variables;
  ctx.values["processInstance"] = Term::iri(r.inst.uri);
  ctx.values["process"] = Term::iri(r.inst.definition);
  ctx.values["initiator"] = r.inst.initiator;
  if (task) ctx.values["task"] = Term::iri(task->uri);
  return ctx;
}

ProcessInstance Engine::start_process(const std::string &name, int64_t version,
                                      const Term &initiator, const FormInput &data) {
  auto rec = std::make_shared<Record>();
  {
    std::unique_lock lock(registry_mu_);
    auto it = definitions_.find({name, version});
    if (it == definitions_.end()) {
      throw Error("unknown-definition", name + "/" + std::to_string(version));
    }
    rec->def = &it->second;
    rec->inst.number = ++instance_counter_;
    rec->inst.uri = rec->def->uri + "/instance/" + std::to_string(rec->inst.number);
    instances_[rec->inst.uri] = rec;
  }
  std::lock_guard lock(rec->mu);
  ProcessInstance &inst = rec->inst;
  inst.definition = rec->def->uri;
  inst.name = name;
  inst.version = version;
  inst.initiator = initiator;
  inst.variables = convert_form("", initiator, data);
  inst.created = iso8601(clock_.now());
  fire("process-start", inst, Term::iri(inst.definition), initiator);

  const Node *start = nullptr;
  for (const Node &n : rec->def->nodes) {
    if (n.kind == NodeKind::kStart) start = &n;
  }
  Token &t = new_token(*rec, start->name);
  fire("node-enter", inst, Term::iri(start->uri));
  run(*rec, {t.id});
  return rec->inst;
}

void Engine::run(Record &r, std::vector<uint64_t> work) {
  // FIFO over tokens that just entered a node.
  for (size_t i = 0; i < work.size(); ++i) process(r, work[i], work);
}

void Engine::process(Record &r, uint64_t id, std::vector<uint64_t> &work) {
  Token *token = find_token(r, id);
  const Node &node = *r.def->node(token->node);
  switch (node.kind) {
    case NodeKind::kStart:
    case NodeKind::kDecision:
      leave_and_move(r, *token, work);
      break;
    case NodeKind::kTask:
      create_task(r, *token, node);
      break;
    case NodeKind::kFork: {
      fire("node-leave", r.inst, Term::iri(node.uri));
      token->state = TokenState::kConsumed;
      ++r.inst.tokens_consumed;
      std::vector<const Transition *> out = r.def->outgoing(node.name);
      for (const Transition *t : out) {
        Token &child = new_token(r, node.name);
        move(r, child, *t, work);
      }
      break;
    }
    case NodeKind::kJoin: {
      token->state = TokenState::kConsumed;
      ++r.inst.tokens_consumed;
      size_t &arrived = ++r.arrivals[node.name];
      if (arrived < r.def->in_degree(node.name)) break;
      r.arrivals.erase(node.name);
      Token &merged = new_token(r, node.name);
      leave_and_move(r, merged, work);
      break;
    }
    case NodeKind::kEnd:
      token->state = TokenState::kConsumed;
      ++r.inst.tokens_consumed;
      if (r.inst.live_tokens() == 0 && r.inst.state == InstanceState::kRunning) {
        r.inst.state = InstanceState::kEnded;
        r.inst.ended = iso8601(clock_.now());
        fire("process-end", r.inst, Term::iri(r.inst.definition));
      }
      break;
  }
}

void Engine::leave_and_move(Record &r, Token &token, std::vector<uint64_t> &work) {
  const Node &node = *r.def->node(token.node);
  fire("node-leave", r.inst, Term::iri(node.uri));
  std::vector<const Transition *> out = r.def->outgoing(node.name);
  Snapshot snap = store_.snapshot();
  sparql::RenderContext ctx = context(r, nullptr);
  PrefixMap prefixes = r.def->query_prefixes();
  auto guard = [&](const Transition &t) {
    try {
      sparql::Query q = sparql::parse_query(sparql::substitute_context(*t.guard, ctx), prefixes);
      return sparql::evaluate_ask(q, snap);
    } catch (const Error &e) {
      std::lock_guard lock(events_mu_);
      rule_errors_.push_back("guard " + t.from + "->" + t.to + ": " + e.what());
      return false;
    }
  };
  auto override_choice = [&]() -> std::optional<std::string> {
    EngineEvent e;
    e.kind = "transition-selection";
    e.instance = Term::iri(r.inst.uri);
    e.subject = Term::iri(node.uri);
    std::shared_ptr<const rules::Rulebase> rb;
    {
      std::lock_guard lock(hooks_mu_);
      rb = rules_;
    }
    return rules::dispatch_event(e, *rb, store_, {}, config_.depth_limit).selected_transition;
  };
  const Transition *t = choose_transition(out, guard, override_choice);
  move(r, token, *t, work);
}

void Engine::move(Record &r, Token &token, const Transition &t, std::vector<uint64_t> &work) {
  fire("transition-taken", r.inst, Term::iri(t.uri), std::nullopt, Term::literal(t.name));
  token.node = t.to;
  token.state = TokenState::kActive;
  fire("node-enter", r.inst, Term::iri(r.def->node(t.to)->uri));
  work.push_back(token.id);
}

void Engine::create_task(Record &r, Token &token, const Node &node) {
  TaskInstance task;
  task.uri = r.inst.uri + "/task/" + std::to_string(++r.next_task);
  task.node = node.name;
  task.instance = r.inst.uri;
  task.form = node.task->form;
  task.created = iso8601(clock_.now());
  if (!node.task->subject.empty()) {
    auto it = r.inst.variables.find(node.task->subject);
    if (it != r.inst.variables.end()) task.about = it->second;
  }
  token.state = TokenState::kWaiting;
  token.task = task.uri;
  r.inst.tasks.push_back(task.uri);
  {
    std::unique_lock lock(registry_mu_);
    task_index_[task.uri] = r.inst.uri;
  }
  TaskInstance &stored = r.tasks.emplace(task.uri, std::move(task)).first->second;
  fire("task-create", r.inst, Term::iri(stored.uri), std::nullopt, stored.about);
  assign(r, stored, node);
}

void Engine::assign(Record &r, TaskInstance &task, const Node &node) {
  const procdef::Swimlane *lane = r.def->swimlane(node.task->swimlane);
  std::set<Term> candidates;
  try {
    if (lane->kind == procdef::Swimlane::Kind::kStaticRole) {
      for (const Binding &b : store_.match({PatternSlot::var("u"),
                                            Term::iri(vocab::pm("hasRole")),
                                            Term::iri(lane->role)})) {
        if (b.at("u").is_iri()) candidates.insert(b.at("u"));
      }
    } else {
      std::string text = sparql::substitute_context(lane->query, context(r, &task));
      sparql::Query q = sparql::parse_query(text, r.def->query_prefixes());
      sparql::ResultSet rs = sparql::evaluate_select(q, store_.snapshot());
      for (const auto &row : rs.rows) {
        if (row[0] && row[0]->is_iri()) candidates.insert(*row[0]);
      }
    }
  } catch (const Error &e) {
    task.notes.push_back(std::string("assignment-error: ") + e.what());
  }
  if (candidates.empty()) {
    task.notes.push_back("unassigned-pool");
    std::vector<std::function<void(const TaskInstance &, const ProcessInstance &)>> fns;
    {
      std::lock_guard lock(hooks_mu_);
      fns = unassigned_;
    }
    for (const auto &fn : fns) fn(task, r.inst);
    return;
  }
  if (candidates.size() > 1) {
    std::string note = "multiple-candidates:";
    for (const Term &c : candidates) note += " " + c.value();
    task.notes.push_back(note);
  }
  task.assignee = *candidates.begin();
  task.state = TaskState::kAssigned;
  fire("task-assign", r.inst, Term::iri(task.uri), task.assignee);
}

std::map<std::string, Term> Engine::convert_form(const std::string &form, const Term &user,
                                                 const FormInput &data) const {
  std::optional<FormSchema> schema;
  {
    std::lock_guard lock(hooks_mu_);
    if (!form.empty() && form_lookup_) schema = form_lookup_(form);
  }
  PrefixMap prefixes = store_.prefixes();
  auto to_iri = [&](std::string raw) -> std::optional<Term> {
    if (raw.size() >= 2 && raw.front() == '<' && raw.back() == '>') {
      raw = raw.substr(1, raw.size() - 2);
    } else if (size_t colon = raw.find(':'); colon != std::string::npos) {
      auto it = prefixes.find(raw.substr(0, colon));
      if (it != prefixes.end()) raw = it->second + raw.substr(colon + 1);
    }
    if (!is_absolute_iri(raw)) return std::nullopt;
    return Term::iri(raw);
  };
  std::map<std::string, Term> out;
  std::vector<std::string> bad;
  std::set<std::string> declared;
  if (schema) {
    for (const FormField &f : schema->fields) {
      declared.insert(f.name);
      auto it = data.find(f.name);
      std::string raw = it == data.end() ? "" : it->second;
      if (raw.empty() && !f.default_value.empty()) {
        raw = f.default_value == "${currentUser}" ? user.value() : f.default_value;
      }
      if (raw.empty()) {
        if (f.required) bad.push_back(f.name);
        continue;
      }
      if (f.type == FieldType::kLiteral) {
        out[f.name] = Term::literal(raw);
      } else if (auto iri = to_iri(raw)) {
        out[f.name] = *iri;
      } else {
        bad.push_back(f.name);
      }
    }
  }
  for (const auto &[k, v] : data) {
    if (declared.count(k)) continue;
    if (v.size() >= 2 && v.front() == '<' && v.back() == '>') {
      if (auto iri = to_iri(v)) {
        out[k] = *iri;
        continue;
      }
    }
    out[k] = Term::literal(v);
  }
  if (!bad.empty()) {
    std::string detail;
    for (const std::string &b : bad) detail += (detail.empty() ? "" : ",") + b;
    throw Error("form-validation", detail);
  }
  return out;
}

TaskInstance Engine::start_task(const std::string &uri, const Term &user) {
  std::shared_ptr<Record> rec = record_for_task(uri);
  std::lock_guard lock(rec->mu);
  TaskInstance &task = rec->tasks.at(uri);
  if (task.state == TaskState::kCreated) throw Error("wrong-state", "created");
  if (!task.assignee || *task.assignee != user) throw Error("wrong-user", user.value());
  if (task.state != TaskState::kAssigned) {
    throw Error("wrong-state", std::string(to_string(task.state)));
  }
  task.state = TaskState::kStarted;
  fire("task-start", rec->inst, Term::iri(task.uri), user);
  return task;
}

TaskInstance Engine::complete_task(const std::string &uri, const Term &user,
                                   const FormInput &data) {
  std::shared_ptr<Record> rec = record_for_task(uri);
  std::lock_guard lock(rec->mu);
  TaskInstance &task = rec->tasks.at(uri);
  if (task.state == TaskState::kCreated) throw Error("wrong-state", "created");
  if (!task.assignee || *task.assignee != user) throw Error("wrong-user", user.value());
  if (task.state != TaskState::kStarted) {
    throw Error("wrong-state", std::string(to_string(task.state)));
  }
  task.form_data = convert_form(task.form, user, data);
  for (const auto &[k, v] : task.form_data) rec->inst.variables[k] = v;
  task.state = TaskState::kCompleted;
  fire("task-end", rec->inst, Term::iri(task.uri), user);

  const Node &node = *rec->def->node(task.node);
  for (const procdef::ActionBinding &b : node.task->actions) {
    ActionFn fn;
    {
      std::lock_guard hl(hooks_mu_);
      auto it = actions_.find(b.name);
      if (it != actions_.end()) fn = it->second;
    }
    try {
      if (!fn) throw Error("unknown-action", b.name);
      ActionContext ctx{*this, rec->inst, task, user, b};
      fn(ctx);
    } catch (const std::exception &e) {
      task.notes.push_back(std::string("action-failed: ") + e.what());
      std::lock_guard el(events_mu_);
      rule_errors_.push_back("action " + b.name + " on " + task.uri + ": " + e.what());
    }
  }

  for (Token &t : rec->inst.tokens) {
    if (t.state == TokenState::kWaiting && t.task == uri) {
      t.state = TokenState::kActive;
      t.task.clear();
      std::vector<uint64_t> work;
      leave_and_move(*rec, t, work);
      run(*rec, std::move(work));
      break;
    }
  }
  return rec->tasks.at(uri);
}

TaskInstance Engine::reassign_task(const std::string &uri, const Term &user) {
  std::shared_ptr<Record> rec = record_for_task(uri);
  std::lock_guard lock(rec->mu);
  TaskInstance &task = rec->tasks.at(uri);
  if (task.state != TaskState::kCreated && task.state != TaskState::kAssigned) {
    throw Error("wrong-state", std::string(to_string(task.state)));
  }
  task.assignee = user;
  task.state = TaskState::kAssigned;
  task.notes.push_back("reassigned: " + user.value());
  fire("task-assign", rec->inst, Term::iri(task.uri), user);
  return task;
}

// ---------------------------------------------------------------------------
// Queries

std::optional<ProcessInstance> Engine::instance(const std::string &uri) const {
  std::shared_ptr<Record> rec = record(uri);
  if (!rec) return std::nullopt;
  std::lock_guard lock(rec->mu);
  return rec->inst;
}

std::vector<ProcessInstance> Engine::instances() const {
  std::vector<std::shared_ptr<Record>> all;
  {
    std::shared_lock lock(registry_mu_);
    for (const auto &[k, r] : instances_) all.push_back(r);
  }
  std::vector<ProcessInstance> out;
  for (const auto &r : all) {
    std::lock_guard lock(r->mu);
    out.push_back(r->inst);
  }
  return out;
}

std::optional<TaskInstance> Engine::task(const std::string &uri) const {
  std::shared_ptr<Record> rec;
  try {
    rec = record_for_task(uri);
  } catch (const Error &) {
    return std::nullopt;
  }
  std::lock_guard lock(rec->mu);
  return rec->tasks.at(uri);
}

std::vector<TaskInstance> Engine::tasks() const {
  std::vector<std::shared_ptr<Record>> all;
  {
    std::shared_lock lock(registry_mu_);
    for (const auto &[k, r] : instances_) all.push_back(r);
  }
  std::vector<TaskInstance> out;
  for (const auto &r : all) {
    std::lock_guard lock(r->mu);
    for (const auto &[k, t] : r->tasks) out.push_back(t);
  }
  std::sort(out.begin(), out.end(),
            [](const TaskInstance &a, const TaskInstance &b) { return a.uri < b.uri; });
  return out;
}

std::vector<TaskGroup> Engine::list_tasks(const Term &user) const {
  std::vector<TaskInstance> open;
  for (TaskInstance &t : tasks()) {
    if (t.assignee == user &&
        (t.state == TaskState::kAssigned || t.state == TaskState::kStarted)) {
      open.push_back(std::move(t));
    }
  }
  Snapshot snap = store_.snapshot();
  const Graph &g = snap.graph();
  std::set<Term> children;
  if (config_.grouping.root) {
    for (const Triple &t : g.find(std::nullopt, Term::iri(vocab::kSubClassOf),
                                  Term::iri(*config_.grouping.root))) {
      if (t.subject.is_iri() && t.subject.value() != *config_.grouping.root) {
        children.insert(t.subject);
      }
    }
  }
  std::map<std::optional<Term>, std::vector<TaskInstance>> groups;
  for (TaskInstance &t : open) {
    std::optional<Term> category;
    if (t.about) {
      std::set<Term> candidates;
      for (const Triple &c : g.find(*t.about, Term::iri(config_.grouping.predicate),
                                    std::nullopt)) {
        if (!c.object.is_iri()) continue;
        if (!config_.grouping.root) {
          candidates.insert(c.object);
          continue;
        }
        for (const Term &anc : g.subclass_closure(c.object)) {
          if (children.count(anc)) candidates.insert(anc);
        }
      }
      if (!candidates.empty()) category = *candidates.begin();
    }
    groups[category].push_back(std::move(t));
  }
  std::vector<TaskGroup> out;
  for (auto &[category, ts] : groups) {
    if (category) out.push_back({category, std::move(ts)});
  }
  auto none = groups.find(std::nullopt);
  if (none != groups.end()) out.push_back({std::nullopt, std::move(none->second)});
  return out;
}

}  // namespace semflow::engine
