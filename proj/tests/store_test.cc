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
#include <atomic>
#include <random>
#include <thread>

#include "doctest.h"
#include "oracles.h"
#include "semflow/base/error.h"
#include "semflow/store/ntriples.h"
#include "semflow/store/triple_store.h"
#include "test_util.h"

using namespace semflow;
using namespace semflow::testing;

namespace {

std::set<Binding> as_set(const std::vector<Binding> &v) {
  return {v.begin(), v.end()};
}

PatternSlot random_slot(std::mt19937_64 &rng, const std::vector<Term> &pool,
                        const std::string &var) {
  switch (rng() % 3) {
    case 0: return PatternSlot::var(var);
    case 1: return PatternSlot::var("x");  // forces repeated-variable checks
    default: return pool[rng() % pool.size()];
  }
}

}  // namespace

TEST_CASE("insert has set semantics") {
  TripleStore store;
  Triple t{ex("s"), ex("p"), lit("v")};
  uint64_t r1 = store.insert(t);
  CHECK(store.size() == 1);
  uint64_t r2 = store.insert(t);
  CHECK(store.size() == 1);
  CHECK(r2 == r1);
}

TEST_CASE("literal subjects are rejected") {
  CHECK_THROWS_AS(Triple::make(lit("v"), ex("p"), ex("o")), Error);
  TripleStore store;
  try {
    store.insert(Triple{lit("v"), ex("p"), ex("o")});
    FAIL("expected invalid-term");
  } catch (const Error &e) {
    CHECK(e.code() == "invalid-term");
  }
  CHECK_THROWS_AS(Term::iri("no scheme"), Error);
  CHECK_THROWS_AS(Term::iri(""), Error);
}

TEST_CASE("remove by pattern") {
  TripleStore store;
  store.insert({ex("a"), ex("p"), ex("b")});
  store.insert({ex("a"), ex("q"), lit("x")});
  store.insert({ex("c"), ex("p"), ex("b")});

  CHECK(store.remove({ex("zz"), {}, {}}) == 0);
  uint64_t rev = store.revision();
  CHECK(store.remove({ex("zz"), {}, {}}) == 0);
  CHECK(store.revision() == rev);

  CHECK(store.remove({ex("a"), ex("q"), lit("x")}) == 1);
  CHECK(store.size() == 2);
  CHECK(store.remove({{}, {}, {}}) == 2);
  CHECK(store.size() == 0);
}

TEST_CASE("subclass closure") {
  TripleStore store;
  CHECK(store.subclass_closure(ex("Lonely")) == std::set<Term>{ex("Lonely")});

  store.insert({ex("A"), sub_class_of(), ex("B")});
  store.insert({ex("B"), sub_class_of(), ex("C")});
  CHECK(store.subclass_closure(ex("A")) ==
        std::set<Term>{ex("A"), ex("B"), ex("C")});

  TripleStore cyclic;
  cyclic.insert({ex("A"), sub_class_of(), ex("B")});
  cyclic.insert({ex("B"), sub_class_of(), ex("A")});
  CHECK(cyclic.subclass_closure(ex("A")) == std::set<Term>{ex("A"), ex("B")});
}

TEST_CASE("match with subclass entailment walks the taxonomy") {
  TripleStore store;
  CHECK(store.match({ex("x"), {}, PatternSlot::var("o")}).empty());

  store.insert({ex("Morchella"), sub_class_of(), ex("Ascomycota")});
  store.insert({ex("Ascomycota"), sub_class_of(), ex("Fungi")});
  auto rows = store.match(
      {ex("Morchella"), sub_class_of(), PatternSlot::var("c")},
      Entailment::kSubclass);
  std::set<Term> got;
  for (const auto &b : rows) got.insert(b.at("c"));
  CHECK(got == std::set<Term>{ex("Morchella"), ex("Ascomycota"), ex("Fungi")});

  store.insert({ex("spec1"), rdf_type(), ex("Morchella")});
  auto typed = store.match({PatternSlot::var("x"), rdf_type(), ex("Fungi")},
                           Entailment::kSubclass);
  REQUIRE(typed.size() == 1);
  CHECK(typed[0].at("x") == ex("spec1"));
  CHECK(store.match({PatternSlot::var("x"), rdf_type(), ex("Fungi")}).empty());
}

TEST_CASE("match equals a brute-force scan on random graphs") {
  std::mt19937_64 rng(7);
  GraphGen gen;
  for (int round = 0; round < 60; ++round) {
    TripleStore store;
    auto triples = gen(rng);
    store.insert_all(triples);
    std::set<Triple> asserted(triples.begin(), triples.end());
    std::set<Triple> closed = materialize_subclass(asserted);
    std::vector<Term> pool = {ex("n0"), ex("n1"), ex("n3"), ex("p0"),
                              rdf_type(), sub_class_of(), lit("v1")};
    for (int q = 0; q < 20; ++q) {
      TriplePattern p{random_slot(rng, pool, "s"), random_slot(rng, pool, "p"),
                      random_slot(rng, pool, "o")};
      CHECK(as_set(store.match(p)) == as_set(scan_match(asserted, p)));
      auto entailed = as_set(store.match(p, Entailment::kSubclass));
      CHECK(entailed == as_set(scan_match(closed, p)));
      // Monotonicity.
      for (const Binding &b : store.match(p)) CHECK(entailed.count(b) == 1);
    }
    // Closure idempotence.
    for (int c = 0; c < 8; ++c) {
      auto closure = store.subclass_closure(ex("n" + std::to_string(c)));
      for (const Term &m : closure) {
        for (const Term &n : store.subclass_closure(m)) {
          CHECK(closure.count(n) == 1);
        }
      }
    }
  }
}

TEST_CASE("snapshots are isolated from later writes") {
  TripleStore store;
  Snapshot empty = store.snapshot();
  CHECK(empty.size() == 0);

  store.insert({ex("a"), ex("p"), ex("b")});
  Snapshot before = store.snapshot();
  Triple added{ex("c"), ex("p"), ex("d")};
  store.insert(added);
  Snapshot after = store.snapshot();

  CHECK(before->match({ex("c"), {}, {}}).empty());
  CHECK(empty.size() == 0);
  std::vector<Triple> diff;
  std::set_difference(after->triples().begin(), after->triples().end(),
                      before->triples().begin(), before->triples().end(),
                      std::back_inserter(diff));
  CHECK(diff == std::vector<Triple>{added});
  CHECK(after.revision() > before.revision());
}

TEST_CASE("persistence round trip") {
  auto dir = temp_dir("store");
  std::mt19937_64 rng(11);

  TripleStore store;
  store.set_prefix("ex", kEx);
  store.insert({ex("a"), ex("p"), ex("b")});
  store.insert({ex("a"), ex("label"), Term::literal("Hallo", {}, "de")});
  store.insert({ex("a"), ex("n"), Term::literal("7", vocab::kXsdInteger)});
  for (int i = 0; i < 500; ++i) {
    store.insert({ex("s" + std::to_string(i % 17)), ex("q"), exotic_literal(rng)});
  }
  store.save(dir / "a.nt");

  TripleStore loaded;
  loaded.load(dir / "a.nt");
  CHECK(loaded.snapshot()->triples() == store.snapshot()->triples());
  CHECK(loaded.prefixes() == store.prefixes());
  // Term-by-term comparison on the tagged literals.
  auto lang = loaded.match({ex("a"), ex("label"), PatternSlot::var("o")});
  REQUIRE(lang.size() == 1);
  CHECK(lang[0].at("o").lang() == "de");
  CHECK(lang[0].at("o").value() == "Hallo");
  auto typed = loaded.match({ex("a"), ex("n"), PatternSlot::var("o")});
  REQUIRE(typed.size() == 1);
  CHECK(typed[0].at("o").datatype() == vocab::kXsdInteger);

  store.save(dir / "b.nt");
  CHECK(slurp(dir / "a.nt") == slurp(dir / "b.nt"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("malformed input reports its line") {
  std::string text;
  for (int i = 1; i <= 6; ++i) {
    text += "<http://e/s" + std::to_string(i) + "> <http://e/p> \"x\" .\n";
  }
  text += "<http://e/s7> <http://e/p> \"unterminated .\n";
  try {
    ntriples::parse(text);
    FAIL("expected parse-error");
  } catch (const Error &e) {
    CHECK(e.code() == "parse-error");
    REQUIRE(e.position());
    CHECK(*e.position() == 7);
  }
  CHECK_THROWS_AS(ntriples::parse("\"lit\" <http://e/p> <http://e/o> .\n"), Error);
  CHECK_THROWS_AS(ntriples::parse("<http://e/s> <http://e/p> <http://e/o>\n"), Error);

  TripleStore store;
  CHECK_THROWS_AS(store.load("/nonexistent/dir/x.nt"), Error);
}

TEST_CASE("prefixed names resolve through declared prefixes") {
  auto doc = ntriples::parse(
      "@prefix ex: <http://example.org/> .\n"
      "ex:a ex:b \"c\"^^xsd:string .\n"
      "ex:a rdf:type ex:T.\n");
  REQUIRE(doc.triples.size() == 2);
  CHECK(doc.triples[0].subject == ex("a"));
  CHECK(doc.triples[0].object.datatype() == vocab::kXsdString);
  CHECK(doc.triples[1].object == ex("T"));
  CHECK_THROWS_AS(ntriples::parse("zz:a zz:b zz:c .\n"), Error);
}

TEST_CASE("revisions are monotonic under concurrent writers and readers") {
  TripleStore store;
  std::atomic<bool> ok{true};
  std::vector<std::thread> threads;
  for (int w = 0; w < 4; ++w) {
    threads.emplace_back([&, w] {
      for (int i = 0; i < 200; ++i) {
        store.insert({ex("w" + std::to_string(w)), ex("p"), Term::integer(i)});
      }
    });
  }
  for (int r = 0; r < 2; ++r) {
    threads.emplace_back([&] {
      uint64_t last = 0;
      for (int i = 0; i < 500; ++i) {
        Snapshot s = store.snapshot();
        if (s.revision() < last) ok = false;
        last = s.revision();
        if (s->triples().size() != s.size()) ok = false;
      }
    });
  }
  for (auto &t : threads) t.join();
  CHECK(ok);
  CHECK(store.size() == 800);
}
