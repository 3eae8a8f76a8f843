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

#ifndef SEMFLOW_SPARQL_QUERY_H_
#define SEMFLOW_SPARQL_QUERY_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "semflow/store/triple_store.h"

namespace semflow::sparql {

enum class CompareOp { kEq, kNe, kLt, kLe, kGt, kGe };

// Comparison between two operands, each a constant term or a variable.
struct FilterExpr {
  PatternSlot lhs;
  CompareOp op = CompareOp::kEq;
  PatternSlot rhs;

  bool operator==(const FilterExpr &) const = default;
};

enum class QueryForm { kSelect, kAsk };

struct Query {
  QueryForm form = QueryForm::kSelect;
  bool distinct = false;
  std::vector<std::string> projection;  // select only, in declared order
  std::vector<TriplePattern> where;
  std::vector<FilterExpr> filters;
  Entailment entailment = Entailment::kNone;

  bool operator==(const Query &) const = default;
};

enum class UpdateKind { kInsertData, kDeleteData, kModify };

struct UpdateRequest {
  UpdateKind kind = UpdateKind::kInsertData;
  std::vector<TriplePattern> delete_template;
  std::vector<TriplePattern> insert_template;
  std::vector<TriplePattern> where;  // modify only
  std::vector<FilterExpr> filters;
  Entailment entailment = Entailment::kNone;

  bool operator==(const UpdateRequest &) const = default;
};

using Request = std::variant<Query, UpdateRequest>;

// Parses query or update text. Prefixed names expand against `prefixes`
// plus any PREFIX declarations in the text. Throws
// Error("syntax-error", reason, byte offset) or Error("unknown-prefix", name).
Request parse(std::string_view text, const PrefixMap &prefixes);
Query parse_query(std::string_view text, const PrefixMap &prefixes);
UpdateRequest parse_update(std::string_view text, const PrefixMap &prefixes);

// Values available to ${...} placeholders at rendering time.
struct RenderContext {
  std::optional<Term> current_user;
  std::optional<Term> current_page;
  std::map<std::string, Term> values;

  const Term *lookup(std::string_view key) const;
};

// Replaces ${currentUser}, ${currentPage} and ${name} with the context's
// terms in query syntax. Throws Error("unknown-context-key", name).
std::string substitute_context(std::string_view text, const RenderContext &ctx);

struct ResultSet {
  std::vector<std::string> variables;
  std::vector<std::vector<std::optional<Term>>> rows;

  bool operator==(const ResultSet &) const = default;
};

ResultSet evaluate_select(const Query &q, const Snapshot &view);
bool evaluate_ask(const Query &q, const Snapshot &view);

// All solutions of a basic graph pattern plus filters, unprojected and in
// no particular order.
std::vector<Binding> solve_bgp(const std::vector<TriplePattern> &where,
                               const std::vector<FilterExpr> &filters,
                               Entailment entailment, const Graph &graph);

// Evaluates one comparison; unbound operands and incomparable terms make it
// false.
bool eval_filter(const FilterExpr &f, const Binding &b);

struct UpdateCounts {
  size_t inserted = 0;
  size_t removed = 0;
};

// Throws Error("unbound-variable-in-template", var) before touching the
// store when a template variable is not bound by the where clause.
UpdateCounts execute_update(const UpdateRequest &u, TripleStore &store);

// W3C SPARQL query results XML. Byte-stable for a given ResultSet.
std::string serialize_results_xml(const ResultSet &rs);
std::string serialize_boolean_xml(bool value);
// Inverse of serialize_results_xml. Throws Error("malformed-xml", why).
ResultSet parse_results_xml(std::string_view text);

inline constexpr std::string_view kResultsNamespace =
    "http://www.w3.org/2005/sparql-results#";

}  // namespace semflow::sparql

#endif  // SEMFLOW_SPARQL_QUERY_H_
