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

#ifndef SEMFLOW_STORE_TRIPLE_STORE_H_
#define SEMFLOW_STORE_TRIPLE_STORE_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include "semflow/store/term.h"

namespace semflow {

struct Triple {
  Term subject;
  Term predicate;
  Term object;

  // Throws Error("invalid-term") when a literal sits in subject or
  // predicate position.
  static Triple make(Term s, Term p, Term o);

  std::string to_ntriples() const;

  auto operator<=>(const Triple &) const = default;
  bool operator==(const Triple &) const = default;
};

enum class Entailment { kNone, kSubclass };

// One position of a triple pattern: a bound term, a named variable or an
// anonymous wildcard.
class PatternSlot {
 public:
  PatternSlot() = default;  // wildcard
  PatternSlot(Term t) : term_(std::move(t)) {}  // NOLINT: implicit by intent

  static PatternSlot wildcard() { return {}; }
  static PatternSlot var(std::string name) {
    PatternSlot s;
    s.var_ = std::move(name);
    return s;
  }

  bool is_term() const { return term_.has_value(); }
  bool is_var() const { return !var_.empty(); }
  bool is_wildcard() const { return !is_term() && !is_var(); }
  const Term &term() const { return *term_; }
  const std::string &var_name() const { return var_; }

  bool operator==(const PatternSlot &) const = default;

 private:
  std::optional<Term> term_;
  std::string var_;
};

struct TriplePattern {
  PatternSlot subject;
  PatternSlot predicate;
  PatternSlot object;

  bool operator==(const TriplePattern &) const = default;
};

using Binding = std::map<std::string, Term>;
using PrefixMap = std::map<std::string, std::string>;

PrefixMap default_prefixes();

// The triple set with its indexes. Instances reachable through a Snapshot
// are never mutated again.
class Graph {
 public:
  size_t size() const { return spo_.size(); }
  bool contains(const Triple &t) const { return spo_.count(t) != 0; }
  const std::set<Triple> &triples() const { return spo_; }
  const PrefixMap &prefixes() const { return prefixes_; }
  uint64_t revision() const { return revision_; }

  // Triples matching the bound positions (nullopt = any), asserted or
  // entailed depending on `entailment`. Sorted, duplicate-free.
  std::vector<Triple> find(const std::optional<Term> &s,
                           const std::optional<Term> &p,
                           const std::optional<Term> &o,
                           Entailment entailment = Entailment::kNone) const;

  // Solutions of one pattern. Repeated variables must bind equal terms.
  std::vector<Binding> match(const TriplePattern &pattern,
                             Entailment entailment = Entailment::kNone) const;

  // {c} plus every ancestor over rdfs:subClassOf. Terminates on cycles.
  std::set<Term> subclass_closure(const Term &c) const;
  // {c} plus every descendant over rdfs:subClassOf.
  std::set<Term> subclass_descendants(const Term &c) const;

  // True for IRIs used as a class: either end of an IRI-valued
  // rdfs:subClassOf edge, or the IRI object of rdf:type.
  bool is_class(const Term &t) const;

 private:
  friend class TripleStore;
  friend class WriteTxn;

  struct PosLess {
    bool operator()(const Triple &a, const Triple &b) const;
  };
  struct OspLess {
    bool operator()(const Triple &a, const Triple &b) const;
  };

  bool insert(const Triple &t);
  bool erase(const Triple &t);
  void find_asserted(const std::optional<Term> &s, const std::optional<Term> &p,
                     const std::optional<Term> &o,
                     const std::function<void(const Triple &)> &emit) const;
  void find_entailed(const std::optional<Term> &s, const std::optional<Term> &p,
                     const std::optional<Term> &o,
                     const std::function<void(const Triple &)> &emit) const;

  std::set<Triple> spo_;
  std::set<Triple, PosLess> pos_;
  std::set<Triple, OspLess> osp_;
  PrefixMap prefixes_;
  uint64_t revision_ = 0;
};

// Immutable read view of the store at one revision. Cheap to copy and safe
// to share between threads.
class Snapshot {
 public:
  Snapshot() : graph_(std::make_shared<Graph>()) {}
  explicit Snapshot(std::shared_ptr<const Graph> g) : graph_(std::move(g)) {}

  const Graph &graph() const { return *graph_; }
  const Graph *operator->() const { return graph_.get(); }
  uint64_t revision() const { return graph_->revision(); }
  size_t size() const { return graph_->size(); }

 private:
  std::shared_ptr<const Graph> graph_;
};

// Mutation handle passed to TripleStore::write(). Reads through view() see
// the effects of earlier calls in the same transaction.
class WriteTxn {
 public:
  const Graph &view() const { return *graph_; }
  bool insert(const Triple &t);
  size_t remove(const TriplePattern &pattern);
  bool erase(const Triple &t);
  bool changed() const { return changed_; }

 private:
  friend class TripleStore;
  explicit WriteTxn(Graph *g) : graph_(g) {}
  Graph *graph_;
  bool changed_ = false;
};

// In-memory RDF triple store: concurrent readers, serialized writers,
// copy-on-write snapshots.
class TripleStore {
 public:
  TripleStore();

  // Returns the revision after the call; unchanged when `t` was present.
  uint64_t insert(const Triple &t);
  uint64_t insert_all(std::span<const Triple> ts);
  // Variables in `pattern` act as wildcards. Returns the number removed.
  size_t remove(const TriplePattern &pattern);

  std::vector<Binding> match(const TriplePattern &pattern,
                             Entailment entailment = Entailment::kNone) const;
  std::set<Term> subclass_closure(const Term &c) const;

  Snapshot snapshot() const;
  uint64_t revision() const;
  size_t size() const;

  void set_prefix(const std::string &prefix, const std::string &ns);
  PrefixMap prefixes() const;

  // Runs `fn` under the writer lock; the revision advances once if the
  // transaction changed anything.
  void write(const std::function<void(WriteTxn &)> &fn);

  // Line-based persistence. save() writes the prefix header and one
  // N-Triples statement per line; load() replaces the store's content and
  // throws Error("parse-error", ..., line) or Error("io-error", path).
  void save(const std::filesystem::path &path) const;
  void load(const std::filesystem::path &path);
  // Adds the statements of a file without clearing the store.
  size_t import(const std::filesystem::path &path);

 private:
  // Caller holds the unique lock.
  Graph &mutable_graph();

  mutable std::shared_mutex mu_;
  std::shared_ptr<Graph> graph_;
};

}  // namespace semflow

#endif  // SEMFLOW_STORE_TRIPLE_STORE_H_
