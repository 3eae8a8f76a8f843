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

#ifndef SEMFLOW_WIKI_WIKI_H_
#define SEMFLOW_WIKI_WIKI_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "semflow/base/clock.h"
#include "semflow/wiki/markup.h"
#include "semflow/sparql/query.h"
#include "semflow/store/triple_store.h"

namespace semflow::wiki {

struct PageVersion {
  int64_t version = 0;
  std::string markup;
  Term author;
  std::string timestamp;

  bool operator==(const PageVersion &) const = default;
};

struct WikiPage {
  std::string name;
  std::string iri;
  int64_t version = 0;
  std::string markup;
  Term author;
  std::string timestamp;
  std::vector<Triple> statements;
};

enum class Facet { kSubject, kPredicate, kObject };

// "subject", "predicate", "object"; throws Error("invalid-argument").
Facet parse_facet(std::string_view s);

// A named query with ${param} placeholders.
struct CannedSearch {
  std::string name;
  std::vector<std::string> params;
  std::string query;
};

// users-with-tasks-in-process(process) and specimens-identified-by
// (taxonomist); the latter reads `domain_ns`identifiedAs / identifiedBy.
std::vector<CannedSearch> default_canned_searches(std::string_view domain_ns);

// Versioned pages whose derived statements are kept in the store. Each
// page owns exactly the store triples having the page IRI as subject.
class Wiki {
 public:
  Wiki(TripleStore &store, std::string base_iri, Clock &clock);

  const std::string &base_iri() const { return base_; }
  std::string iri(std::string_view name) const { return page_iri(base_, name); }

  // Query blocks see ctx plus ${currentPage}; their errors render inline.
  // Throws Error("unknown-page") or Error("malformed-markup").
  RenderResult render(const std::string &name, sparql::RenderContext ctx = {}) const;
  RenderResult render_markup(std::string_view markup, const std::string &name,
                             sparql::RenderContext ctx = {}) const;

  // `base_version` is the version the edit started from (0: new page);
  // nullopt skips the check. Throws conflict, malformed-markup,
  // invalid-page-name.
  WikiPage save_page(const std::string &name, const std::string &markup, const Term &author,
                     std::optional<int64_t> base_version = std::nullopt);
  std::optional<WikiPage> page(const std::string &name) const;
  std::optional<PageVersion> version(const std::string &name, int64_t v) const;
  std::vector<PageVersion> history(const std::string &name) const;
  std::vector<std::string> page_names() const;
  bool exists(const std::string &name) const;

  void add_template(Template t);
  std::optional<Template> find_template(const std::string &name) const;
  std::vector<Template> templates() const;

  // Creates `page` from the template; values are literal text, <iri>,
  // prefixed names or absolute IRIs. Throws unknown-template,
  // missing-required(fields), invalid-iri(fields), page-exists.
  WikiPage instantiate_template(const std::string &tpl,
                                const std::map<std::string, std::string> &inputs,
                                const std::string &page, const Term &author);

  // Appends [predicate::target] to `page`. Throws unknown-page.
  WikiPage insert_typed_link(const std::string &page, const std::string &predicate,
                             const std::string &target, const Term &author);

  // Every triple with `resource` at the facet position; variables s, p, o.
  sparql::ResultSet click_search(const Term &resource, Facet facet) const;
  void add_canned_search(CannedSearch s);
  std::vector<CannedSearch> canned_searches() const;
  // Throws unknown-search or unknown-context-key(param).
  sparql::ResultSet run_canned_search(const std::string &name,
                                      const std::map<std::string, Term> &params) const;

  // One directory per page (url-encoded name) with one file per version:
  // a front-matter header then the markup.
  void save_to(const std::filesystem::path &dir) const;
  // Replaces all pages and re-derives their statements. Throws
  // Error("io-error") or Error("parse-error", file).
  void load_from(const std::filesystem::path &dir);

  // Link target of page IRIs known to this wiki.
  LinkResolver page_links() const;

 private:
  struct Entry {
    std::vector<PageVersion> versions;
  };

  WikiPage view(const std::string &name, const Entry &e) const;
  WikiPage commit(const std::string &name, const std::string &markup, const Term &author,
                  std::optional<int64_t> base_version);

  TripleStore &store_;
  std::string base_;
  Clock &clock_;

  mutable std::mutex mu_;
  std::map<std::string, Entry> pages_;
  std::map<std::string, Template> templates_;
  std::map<std::string, CannedSearch> searches_;
};

}  // namespace semflow::wiki

#endif  // SEMFLOW_WIKI_WIKI_H_
