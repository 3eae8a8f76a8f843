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

#ifndef SEMFLOW_PROCDEF_DEFINITION_H_
#define SEMFLOW_PROCDEF_DEFINITION_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "semflow/store/triple_store.h"

namespace semflow::procdef {

enum class NodeKind { kStart, kEnd, kTask, kDecision, kFork, kJoin };

std::string_view to_string(NodeKind k);

// A named completion action with its raw arguments, resolved by the engine
// against registered handlers.
struct ActionBinding {
  std::string name;
  std::vector<std::string> args;

  bool operator==(const ActionBinding &) const = default;
};

struct TaskDefinition {
  std::string swimlane;
  std::string form;        // form template name, may be empty
  std::string annotation;  // absolute IRI or empty
  std::string subject;     // process variable naming the task's subject
  bool notify = false;
  std::vector<ActionBinding> actions;

  bool operator==(const TaskDefinition &) const = default;
};

struct Node {
  std::string name;
  NodeKind kind = NodeKind::kTask;
  std::optional<TaskDefinition> task;
  std::string uri;

  bool operator==(const Node &) const = default;
};

struct Transition {
  std::string from;
  std::string to;
  std::string name;  // defaults to `to`
  std::optional<std::string> guard;  // ASK query text
  bool is_default = false;
  size_t index = 0;  // declaration order
  std::string uri;

  bool operator==(const Transition &) const = default;
};

struct Swimlane {
  enum class Kind { kStaticRole, kSemanticQuery };
  std::string name;
  Kind kind = Kind::kStaticRole;
  std::string role;   // absolute IRI, static-role lanes
  std::string query;  // SELECT text with ${...} placeholders
  std::string uri;

  bool operator==(const Swimlane &) const = default;
};

struct ProcessDefinition {
  std::string name;
  int64_t version = 0;
  PrefixMap prefixes;  // declared in the file
  std::vector<Node> nodes;
  std::vector<Transition> transitions;
  std::vector<Swimlane> swimlanes;
  std::string uri;

  const Node *node(std::string_view name) const;
  const Swimlane *swimlane(std::string_view name) const;
  // Outgoing transitions of `node` in declaration order.
  std::vector<const Transition *> outgoing(std::string_view node) const;
  size_t in_degree(std::string_view node) const;
  // Declared prefixes over the defaults; what guards and lane queries see.
  PrefixMap query_prefixes() const;

  bool operator==(const ProcessDefinition &) const = default;
};

// Parses the process-definition format (docs/process-format.md). Structural
// problems are left to validate(). Throws Error("syntax-error", why, line).
ProcessDefinition parse_definition(std::string_view text);

// Canonical text form; parse_definition(serialize_definition(d)) == d for
// unminted definitions.
std::string serialize_definition(const ProcessDefinition &d);

// Empty iff the definition is structurally sound. Violations read like
// "multiple-start" or "unreachable(nodeName)".
std::vector<std::string> validate(const ProcessDefinition &d);

// Deterministic IRIs under `base`, which must end in '/' or '#':
//   {base}process/{name}/{version}                  definition
//   {definition}/node/{node}                         nodes
//   {definition}/transition/{declaration index}     transitions
//   {definition}/swimlane/{lane}                     swimlanes
// Throws Error("invalid-namespace", base).
ProcessDefinition mint_uris(ProcessDefinition d, std::string_view base);

// Asserts the definition's description in the store. Throws
// Error("duplicate-version") when name+version is already registered.
uint64_t register_definition(const ProcessDefinition &d, TripleStore &store);

// The triples register_definition() asserts.
std::vector<Triple> describe(const ProcessDefinition &d);

}  // namespace semflow::procdef

#endif  // SEMFLOW_PROCDEF_DEFINITION_H_
