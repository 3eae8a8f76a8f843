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

#include "semflow/store/triple_store.h"

#include <deque>
#include <fstream>
#include <mutex>
#include <sstream>

#include "semflow/base/error.h"
#include "semflow/store/ntriples.h"

namespace semflow {

Triple Triple::make(Term s, Term p, Term o) {
  if (!s.is_iri()) throw Error("invalid-term", "literal subject " + s.to_ntriples());
  if (!p.is_iri()) throw Error("invalid-term", "literal predicate " + p.to_ntriples());
  return Triple{std::move(s), std::move(p), std::move(o)};
}

std::string Triple::to_ntriples() const {
  return subject.to_ntriples() + " " + predicate.to_ntriples() + " " +
         object.to_ntriples() + " .";
}

PrefixMap default_prefixes() {
  return {{"rdf", std::string(vocab::kRdf)},
          {"rdfs", std::string(vocab::kRdfs)},
          {"xsd", std::string(vocab::kXsd)},
          {"pm", std::string(vocab::kPm)}};
}

// ---------------------------------------------------------------------------
// Graph

bool Graph::PosLess::operator()(const Triple &a, const Triple &b) const {
  return std::tie(a.predicate, a.object, a.subject) <
         std::tie(b.predicate, b.object, b.subject);
}

bool Graph::OspLess::operator()(const Triple &a, const Triple &b) const {
  return std::tie(a.object, a.subject, a.predicate) <
         std::tie(b.object, b.subject, b.predicate);
}

bool Graph::insert(const Triple &t) {
  if (!spo_.insert(t).second) return false;
  pos_.insert(t);
  osp_.insert(t);
  return true;
}

bool Graph::erase(const Triple &t) {
  if (spo_.erase(t) == 0) return false;
  pos_.erase(t);
  osp_.erase(t);
  return true;
}

namespace {

// Smallest possible term of each kind, used as a range lower bound.
const Term &min_term() {
  static const Term t;  // kIri with empty value sorts first
  return t;
}

}  // namespace

void Graph::find_asserted(
    const std::optional<Term> &s, const std::optional<Term> &p,
    const std::optional<Term> &o,
    const std::function<void(const Triple &)> &emit) const {
  auto ok = [&](const Triple &t) {
    return (!s || t.subject == *s) && (!p || t.predicate == *p) &&
           (!o || t.object == *o);
  };
  if (s) {
    Triple lo{*s, p ? *p : min_term(), (p && o) ? *o : min_term()};
    for (auto it = spo_.lower_bound(lo);
         it != spo_.end() && it->subject == *s; ++it) {
      if (p && it->predicate != *p) {
        if (it->predicate > *p) break;
        continue;
      }
      if (ok(*it)) emit(*it);
    }
  } else if (p) {
    Triple lo{min_term(), *p, o ? *o : min_term()};
    for (auto it = pos_.lower_bound(lo);
         it != pos_.end() && it->predicate == *p; ++it) {
      if (o && it->object != *o) break;
      emit(*it);
    }
  } else if (o) {
    Triple lo{min_term(), min_term(), *o};
    for (auto it = osp_.lower_bound(lo); it != osp_.end() && it->object == *o;
         ++it) {
      emit(*it);
    }
  } else {
    for (const Triple &t : spo_) emit(t);
  }
}

bool Graph::is_class(const Term &t) const {
  if (!t.is_iri()) return false;
  static const Term sc = Term::iri(vocab::kSubClassOf);
  static const Term type = Term::iri(vocab::kRdfType);
  bool found = false;
  auto hit = [&](const Triple &x) {
    if (x.object.is_iri()) found = true;
  };
  find_asserted(t, sc, std::nullopt, hit);
  if (!found) find_asserted(std::nullopt, sc, t, hit);
  if (!found) find_asserted(std::nullopt, type, t, hit);
  return found;
}

std::set<Term> Graph::subclass_closure(const Term &c) const {
  static const Term sc = Term::iri(vocab::kSubClassOf);
  std::set<Term> seen{c};
  std::deque<Term> queue{c};
  while (!queue.empty()) {
    Term cur = std::move(queue.front());
    queue.pop_front();
    find_asserted(cur, sc, std::nullopt, [&](const Triple &t) {
      if (t.object.is_iri() && seen.insert(t.object).second) {
        queue.push_back(t.object);
      }
    });
  }
  return seen;
}

std::set<Term> Graph::subclass_descendants(const Term &c) const {
  static const Term sc = Term::iri(vocab::kSubClassOf);
  std::set<Term> seen{c};
  std::deque<Term> queue{c};
  while (!queue.empty()) {
    Term cur = std::move(queue.front());
    queue.pop_front();
    find_asserted(std::nullopt, sc, cur, [&](const Triple &t) {
      if (seen.insert(t.subject).second) queue.push_back(t.subject);
    });
  }
  return seen;
}

// Entailed triples for rdf:type and rdfs:subClassOf under the subclass
// regime; asserted triples of those predicates are emitted as well.
void Graph::find_entailed(
    const std::optional<Term> &s, const std::optional<Term> &p,
    const std::optional<Term> &o,
    const std::function<void(const Triple &)> &emit) const {
  static const Term sc = Term::iri(vocab::kSubClassOf);
  static const Term type = Term::iri(vocab::kRdfType);

  auto want_o = [&](const Term &t) { return !o || *o == t; };

  if (!p || *p == sc) {
    if (s) {
      if (is_class(*s)) {
        for (const Term &anc : subclass_closure(*s)) {
          if (want_o(anc)) emit(Triple{*s, sc, anc});
        }
      }
    } else if (o) {
      if (is_class(*o)) {
        for (const Term &d : subclass_descendants(*o)) emit(Triple{d, sc, *o});
      }
    } else {
      std::set<Term> classes;
      for (const Triple &t : spo_) {
        if (t.predicate == sc && t.object.is_iri()) {
          classes.insert(t.subject);
          classes.insert(t.object);
        } else if (t.predicate == type && t.object.is_iri()) {
          classes.insert(t.object);
        }
      }
      for (const Term &c : classes) {
        for (const Term &anc : subclass_closure(c)) emit(Triple{c, sc, anc});
      }
    }
  }

  if (!p || *p == type) {
    if (s || !o) {
      find_asserted(s, type, std::nullopt, [&](const Triple &t) {
        if (!t.object.is_iri()) return;
        for (const Term &anc : subclass_closure(t.object)) {
          if (want_o(anc)) emit(Triple{t.subject, type, anc});
        }
      });
    } else {
      if (o->is_iri()) {
        for (const Term &d : subclass_descendants(*o)) {
          find_asserted(std::nullopt, type, d, [&](const Triple &t) {
            emit(Triple{t.subject, type, *o});
          });
        }
      }
    }
  }
}

std::vector<Triple> Graph::find(const std::optional<Term> &s,
                                const std::optional<Term> &p,
                                const std::optional<Term> &o,
                                Entailment entailment) const {
  std::vector<Triple> out;
  auto push = [&](const Triple &t) { out.push_back(t); };
  find_asserted(s, p, o, push);
  if (entailment == Entailment::kSubclass) {
    static const Term sc = Term::iri(vocab::kSubClassOf);
    static const Term type = Term::iri(vocab::kRdfType);
    if (!p || *p == sc || *p == type) {
      if ((s && !s->is_iri()) || (p && !p->is_iri())) return out;
      find_entailed(s, p, o, push);
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      return out;
    }
  }
  if (!s && (p || o)) std::sort(out.begin(), out.end());
  return out;
}

std::vector<Binding> Graph::match(const TriplePattern &pattern,
                                  Entailment entailment) const {
  auto bound = [](const PatternSlot &slot) -> std::optional<Term> {
    if (slot.is_term()) return slot.term();
    return std::nullopt;
  };
  std::vector<Binding> out;
  for (const Triple &t : find(bound(pattern.subject), bound(pattern.predicate),
                              bound(pattern.object), entailment)) {
    Binding b;
    bool consistent = true;
    auto bind = [&](const PatternSlot &slot, const Term &value) {
      if (!slot.is_var()) return;
      auto [it, inserted] = b.emplace(slot.var_name(), value);
      if (!inserted && it->second != value) consistent = false;
    };
    bind(pattern.subject, t.subject);
    bind(pattern.predicate, t.predicate);
    bind(pattern.object, t.object);
    if (consistent) out.push_back(std::move(b));
  }
  return out;
}

// ---------------------------------------------------------------------------
// WriteTxn

bool WriteTxn::insert(const Triple &t) {
  bool added = graph_->insert(t);
  changed_ |= added;
  return added;
}

bool WriteTxn::erase(const Triple &t) {
  bool removed = graph_->erase(t);
  changed_ |= removed;
  return removed;
}

size_t WriteTxn::remove(const TriplePattern &pattern) {
  auto bound = [](const PatternSlot &slot) -> std::optional<Term> {
    if (slot.is_term()) return slot.term();
    return std::nullopt;
  };
  std::vector<Triple> victims;
  graph_->find_asserted(bound(pattern.subject), bound(pattern.predicate),
                        bound(pattern.object),
                        [&](const Triple &t) { victims.push_back(t); });
  for (const Triple &t : victims) erase(t);
  return victims.size();
}

// ---------------------------------------------------------------------------
// TripleStore

TripleStore::TripleStore() : graph_(std::make_shared<Graph>()) {
  graph_->prefixes_ = default_prefixes();
}

Graph &TripleStore::mutable_graph() {
  // Snapshots share the graph; copy before the first write after one was
  // handed out.
  if (graph_.use_count() > 1) graph_ = std::make_shared<Graph>(*graph_);
  return *graph_;
}

uint64_t TripleStore::insert(const Triple &t) {
  if (!t.subject.is_iri() || !t.predicate.is_iri()) {
    throw Error("invalid-term", "literal in subject or predicate position");
  }
  std::unique_lock lock(mu_);
  if (graph_->contains(t)) return graph_->revision_;
  Graph &g = mutable_graph();
  g.insert(t);
  return ++g.revision_;
}

uint64_t TripleStore::insert_all(std::span<const Triple> ts) {
  for (const Triple &t : ts) {
    if (!t.subject.is_iri() || !t.predicate.is_iri()) {
      throw Error("invalid-term", "literal in subject or predicate position");
    }
  }
  std::unique_lock lock(mu_);
  bool changed = false;
  for (const Triple &t : ts) {
    if (graph_->contains(t)) continue;
    changed |= mutable_graph().insert(t);
  }
  if (changed) ++graph_->revision_;
  return graph_->revision_;
}

size_t TripleStore::remove(const TriplePattern &pattern) {
  size_t removed = 0;
  write([&](WriteTxn &txn) { removed = txn.remove(pattern); });
  return removed;
}

void TripleStore::write(const std::function<void(WriteTxn &)> &fn) {
  std::unique_lock lock(mu_);
  Graph &g = mutable_graph();
  WriteTxn txn(&g);
  fn(txn);
  if (txn.changed()) ++g.revision_;
}

std::vector<Binding> TripleStore::match(const TriplePattern &pattern,
                                        Entailment entailment) const {
  return snapshot()->match(pattern, entailment);
}

std::set<Term> TripleStore::subclass_closure(const Term &c) const {
  return snapshot()->subclass_closure(c);
}

Snapshot TripleStore::snapshot() const {
  std::shared_lock lock(mu_);
  return Snapshot(graph_);
}

uint64_t TripleStore::revision() const {
  std::shared_lock lock(mu_);
  return graph_->revision_;
}

size_t TripleStore::size() const {
  std::shared_lock lock(mu_);
  return graph_->size();
}

void TripleStore::set_prefix(const std::string &prefix, const std::string &ns) {
  if (!is_absolute_iri(ns)) throw Error("invalid-term", ns);
  std::unique_lock lock(mu_);
  auto it = graph_->prefixes_.find(prefix);
  if (it != graph_->prefixes_.end() && it->second == ns) return;
  Graph &g = mutable_graph();
  g.prefixes_[prefix] = ns;
  ++g.revision_;
}

PrefixMap TripleStore::prefixes() const {
  std::shared_lock lock(mu_);
  return graph_->prefixes_;
}

void TripleStore::save(const std::filesystem::path &path) const {
  Snapshot snap = snapshot();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("io-error", path.string());
  out << ntriples::write(snap->prefixes(), snap->triples());
  if (!out.flush()) throw Error("io-error", path.string());
}

namespace {

std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("io-error", path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

void TripleStore::load(const std::filesystem::path &path) {
  ntriples::Document doc = ntriples::parse(read_file(path));
  std::unique_lock lock(mu_);
  uint64_t rev = graph_->revision_;
  auto fresh = std::make_shared<Graph>();
  fresh->prefixes_ = std::move(doc.prefixes);
  for (const Triple &t : doc.triples) fresh->insert(t);
  fresh->revision_ = rev + 1;
  graph_ = std::move(fresh);
}

size_t TripleStore::import(const std::filesystem::path &path) {
  std::string text = read_file(path);
  PrefixMap known = prefixes();
  // Declared prefixes extend the store's table before statements resolve.
  ntriples::Document doc = ntriples::parse(text);
  size_t added = 0;
  std::unique_lock lock(mu_);
  Graph &g = mutable_graph();
  bool changed = false;
  for (const auto &[name, ns] : doc.prefixes) {
    if (known.count(name) == 0 || known[name] != ns) {
      g.prefixes_[name] = ns;
      changed = true;
    }
  }
  for (const Triple &t : doc.triples) {
    if (g.insert(t)) ++added;
  }
  if (changed || added > 0) ++g.revision_;
  return added;
}

}  // namespace semflow
