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
#include <cstdlib>
#include <set>

#include "semflow/base/error.h"
#include "semflow/sparql/query.h"

namespace semflow::sparql {
namespace {

bool is_numeric_type(const std::string &dt) {
  static const std::set<std::string> kTypes = {
      vocab::kXsdInteger, vocab::kXsdDecimal, vocab::kXsdDouble,
      std::string(vocab::kXsd) + "float", std::string(vocab::kXsd) + "int",
      std::string(vocab::kXsd) + "long"};
  return kTypes.count(dt) != 0;
}

std::optional<double> numeric_value(const Term &t) {
  if (!t.is_literal() || !is_numeric_type(t.datatype())) return std::nullopt;
  const char *begin = t.value().c_str();
  char *end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') return std::nullopt;
  return v;
}

const Term *resolve(const PatternSlot &slot, const Binding &b) {
  if (slot.is_term()) return &slot.term();
  if (slot.is_var()) {
    auto it = b.find(slot.var_name());
    if (it != b.end()) return &it->second;
  }
  return nullptr;
}

size_t bound_positions(const TriplePattern &p, const std::set<std::string> &bound) {
  auto is_bound = [&](const PatternSlot &s) {
    return s.is_term() || (s.is_var() && bound.count(s.var_name()));
  };
  return is_bound(p.subject) + is_bound(p.predicate) + is_bound(p.object);
}

PatternSlot instantiate(const PatternSlot &s, const Binding &b) {
  if (s.is_var()) {
    auto it = b.find(s.var_name());
    if (it != b.end()) return it->second;
  }
  return s;
}

// Greedy join order: the pattern with the most already-bound positions
// next, ties broken by declaration order.
std::vector<const TriplePattern *> join_order(const std::vector<TriplePattern> &where) {
  std::vector<const TriplePattern *> order;
  std::vector<bool> used(where.size(), false);
  std::set<std::string> bound;
  for (size_t step = 0; step < where.size(); ++step) {
    size_t best = where.size();
    size_t best_score = 0;
    for (size_t i = 0; i < where.size(); ++i) {
      if (used[i]) continue;
      size_t score = bound_positions(where[i], bound) + 1;
      if (best == where.size() || score > best_score) {
        best = i;
        best_score = score;
      }
    }
    used[best] = true;
    order.push_back(&where[best]);
    for (const PatternSlot *s : {&where[best].subject, &where[best].predicate,
                                 &where[best].object}) {
      if (s->is_var()) bound.insert(s->var_name());
    }
  }
  return order;
}

void join(const std::vector<const TriplePattern *> &order, size_t depth,
          Binding &current, Entailment entailment, const Graph &graph,
          std::vector<Binding> &out) {
  if (depth == order.size()) {
    out.push_back(current);
    return;
  }
  const TriplePattern &p = *order[depth];
  TriplePattern inst{instantiate(p.subject, current),
                     instantiate(p.predicate, current),
                     instantiate(p.object, current)};
  for (const Binding &m : graph.match(inst, entailment)) {
    std::vector<std::string> added;
    for (const auto &[k, v] : m) {
      if (current.emplace(k, v).second) added.push_back(k);
    }
    join(order, depth + 1, current, entailment, graph, out);
    for (const std::string &k : added) current.erase(k);
  }
}

std::string sort_key(const std::optional<Term> &t) {
  return t ? t->to_ntriples() : std::string();
}

}  // namespace

bool eval_filter(const FilterExpr &f, const Binding &b) {
  const Term *l = resolve(f.lhs, b);
  const Term *r = resolve(f.rhs, b);
  if (!l || !r) return false;
  auto ln = numeric_value(*l);
  auto rn = numeric_value(*r);
  if (ln && rn) {
    switch (f.op) {
      case CompareOp::kEq: return *ln == *rn;
      case CompareOp::kNe: return *ln != *rn;
      case CompareOp::kLt: return *ln < *rn;
      case CompareOp::kLe: return *ln <= *rn;
      case CompareOp::kGt: return *ln > *rn;
      case CompareOp::kGe: return *ln >= *rn;
    }
  }
  if (f.op == CompareOp::kEq) return *l == *r;
  if (f.op == CompareOp::kNe) return *l != *r;
  // Ordering is defined only between literals of the same datatype and
  // language.
  if (!l->is_literal() || !r->is_literal() || l->datatype() != r->datatype() ||
      l->lang() != r->lang() || ln || rn) {
    return false;
  }
  int c = l->value().compare(r->value());
  switch (f.op) {
    case CompareOp::kLt: return c < 0;
    case CompareOp::kLe: return c <= 0;
    case CompareOp::kGt: return c > 0;
    case CompareOp::kGe: return c >= 0;
    default: return false;
  }
}

std::vector<Binding> solve_bgp(const std::vector<TriplePattern> &where,
                               const std::vector<FilterExpr> &filters,
                               Entailment entailment, const Graph &graph) {
  std::vector<Binding> raw;
  if (where.empty()) return raw;
  Binding current;
  join(join_order(where), 0, current, entailment, graph, raw);
  if (filters.empty()) return raw;
  std::vector<Binding> out;
  for (Binding &b : raw) {
    bool keep = std::all_of(filters.begin(), filters.end(),
                            [&](const FilterExpr &f) { return eval_filter(f, b); });
    if (keep) out.push_back(std::move(b));
  }
  return out;
}

ResultSet evaluate_select(const Query &q, const Snapshot &view) {
  ResultSet rs;
  rs.variables = q.projection;
  for (const Binding &b : solve_bgp(q.where, q.filters, q.entailment, view.graph())) {
    std::vector<std::optional<Term>> row;
    row.reserve(q.projection.size());
    for (const std::string &v : q.projection) {
      auto it = b.find(v);
      row.push_back(it == b.end() ? std::nullopt : std::optional<Term>(it->second));
    }
    rs.rows.push_back(std::move(row));
  }
  std::vector<std::pair<std::vector<std::string>, size_t>> keys;
  keys.reserve(rs.rows.size());
  for (size_t i = 0; i < rs.rows.size(); ++i) {
    std::vector<std::string> k;
    for (const auto &cell : rs.rows[i]) k.push_back(sort_key(cell));
    keys.emplace_back(std::move(k), i);
  }
  std::sort(keys.begin(), keys.end());
  std::vector<std::vector<std::optional<Term>>> sorted;
  sorted.reserve(keys.size());
  for (size_t i = 0; i < keys.size(); ++i) {
    if (q.distinct && i > 0 && keys[i].first == keys[i - 1].first) continue;
    sorted.push_back(std::move(rs.rows[keys[i].second]));
  }
  rs.rows = std::move(sorted);
  return rs;
}

bool evaluate_ask(const Query &q, const Snapshot &view) {
  return !solve_bgp(q.where, q.filters, q.entailment, view.graph()).empty();
}

UpdateCounts execute_update(const UpdateRequest &u, TripleStore &store) {
  UpdateCounts counts;
  auto ground = [](const TriplePattern &p) {
    return Triple{p.subject.term(), p.predicate.term(), p.object.term()};
  };
  switch (u.kind) {
    case UpdateKind::kInsertData:
      store.write([&](WriteTxn &txn) {
        for (const TriplePattern &p : u.insert_template) {
          Triple t = ground(p);
          if (!t.subject.is_iri() || !t.predicate.is_iri()) {
            throw Error("invalid-term", t.to_ntriples());
          }
          counts.inserted += txn.insert(t);
        }
      });
      return counts;
    case UpdateKind::kDeleteData:
      store.write([&](WriteTxn &txn) {
        for (const TriplePattern &p : u.delete_template) {
          counts.removed += txn.erase(ground(p));
        }
      });
      return counts;
    case UpdateKind::kModify:
      break;
  }

  std::set<std::string> where_vars;
  for (const TriplePattern &p : u.where) {
    for (const PatternSlot *s : {&p.subject, &p.predicate, &p.object}) {
      if (s->is_var()) where_vars.insert(s->var_name());
    }
  }
  for (const auto *tpl : {&u.delete_template, &u.insert_template}) {
    for (const TriplePattern &p : *tpl) {
      for (const PatternSlot *s : {&p.subject, &p.predicate, &p.object}) {
        if (s->is_var() && !where_vars.count(s->var_name())) {
          throw Error("unbound-variable-in-template", s->var_name());
        }
      }
    }
  }

  store.write([&](WriteTxn &txn) {
    // Solutions are fixed before the first mutation.
    std::vector<Binding> solutions =
        solve_bgp(u.where, u.filters, u.entailment, txn.view());
    auto apply = [&](const TriplePattern &p, const Binding &b) -> std::optional<Triple> {
      PatternSlot s = instantiate(p.subject, b);
      PatternSlot pr = instantiate(p.predicate, b);
      PatternSlot o = instantiate(p.object, b);
      if (!s.term().is_iri() || !pr.term().is_iri()) return std::nullopt;
      return Triple{s.term(), pr.term(), o.term()};
    };
    for (const Binding &b : solutions) {
      for (const TriplePattern &p : u.delete_template) {
        if (auto t = apply(p, b)) counts.removed += txn.erase(*t);
      }
      for (const TriplePattern &p : u.insert_template) {
        if (auto t = apply(p, b)) counts.inserted += txn.insert(*t);
      }
    }
  });
  return counts;
}

}  // namespace semflow::sparql
