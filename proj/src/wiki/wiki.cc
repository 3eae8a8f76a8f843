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

#include "semflow/wiki/wiki.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "semflow/base/error.h"

namespace semflow::wiki {
namespace {

void check_page_name(const std::string &name) {
  bool ok = !name.empty() && name.size() <= 200 && !std::isspace(static_cast<unsigned char>(name.front())) &&
            !std::isspace(static_cast<unsigned char>(name.back()));
  for (char c : name) {
    if (c == '[' || c == ']' || c == '{' || c == '}' || c == '|' || c == '<' || c == '>' ||
        static_cast<unsigned char>(c) < 0x20) {
      ok = false;
    }
  }
  if (name.find("::") != std::string::npos) ok = false;
  if (!ok) throw Error("invalid-page-name", name);
}

std::string trim(std::string_view s) {
  size_t b = 0;
  size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string quote(std::string_view v) {
  std::string out = "\"";
  for (char c : v) {
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (c == '\n') {
      out += "\\n";
    } else if (c != '\r') {
      out += c;
    }
  }
  return out + "\"";
}

void replace_statements(WriteTxn &txn, const std::string &iri, const std::vector<Triple> &ts) {
  txn.remove(TriplePattern{Term::iri(iri), PatternSlot::wildcard(), PatternSlot::wildcard()});
  for (const Triple &t : ts) txn.insert(t);
}

}  // namespace

Facet parse_facet(std::string_view s) {
  if (s == "subject") return Facet::kSubject;
  if (s == "predicate") return Facet::kPredicate;
  if (s == "object") return Facet::kObject;
  throw Error("invalid-argument", std::string(s));
}

std::vector<CannedSearch> default_canned_searches(std::string_view domain_ns) {
  std::string ns(domain_ns);
  return {
      {"users-with-tasks-in-process",
       {"process"},
       "SELECT DISTINCT ?user WHERE {\n"
       "  ?task pm:ofProcess ${process} ; pm:assignee ?user ; pm:state ?state .\n"
       "  FILTER (?state != \"completed\")\n"
       "}"},
      {"specimens-identified-by",
       {"taxonomist"},
       "SELECT DISTINCT ?specimen WHERE {\n"
       "  ?specimen <" + ns + "identifiedAs> ?identification .\n"
       "  ?identification <" + ns + "identifiedBy> ${taxonomist} .\n"
       "}"},
  };
}

Wiki::Wiki(TripleStore &store, std::string base_iri, Clock &clock)
    : store_(store), base_(std::move(base_iri)), clock_(clock) {
  if (base_.empty() || (base_.back() != '/' && base_.back() != '#') || !is_absolute_iri(base_)) {
    throw Error("invalid-namespace", base_);
  }
}

WikiPage Wiki::view(const std::string &name, const Entry &e) const {
  const PageVersion &v = e.versions.back();
  WikiPage p;
  p.name = name;
  p.iri = iri(name);
  p.version = v.version;
  p.markup = v.markup;
  p.author = v.author;
  p.timestamp = v.timestamp;
  p.statements = extract_statements(v.markup, p.iri, base_, store_.prefixes());
  return p;
}

WikiPage Wiki::commit(const std::string &name, const std::string &markup, const Term &author,
                      std::optional<int64_t> base_version) {
  check_page_name(name);
  std::string page = iri(name);
  std::vector<Triple> statements = extract_statements(markup, page, base_, store_.prefixes());
  std::lock_guard lock(mu_);
  auto it = pages_.find(name);
  int64_t current = it == pages_.end() ? 0 : it->second.versions.back().version;
  if (base_version && *base_version != current) {
    throw Error("conflict", name + ": edit based on version " + std::to_string(*base_version) +
                                ", current is " + std::to_string(current));
  }
  store_.write([&](WriteTxn &txn) { replace_statements(txn, page, statements); });
  Entry &e = pages_[name];
  e.versions.push_back(PageVersion{current + 1, markup, author, iso8601(clock_.now())});
  return view(name, e);
}

WikiPage Wiki::save_page(const std::string &name, const std::string &markup, const Term &author,
                         std::optional<int64_t> base_version) {
  return commit(name, markup, author, base_version);
}

std::optional<WikiPage> Wiki::page(const std::string &name) const {
  std::lock_guard lock(mu_);
  auto it = pages_.find(name);
  if (it == pages_.end()) return std::nullopt;
  return view(name, it->second);
}

std::optional<PageVersion> Wiki::version(const std::string &name, int64_t v) const {
  std::lock_guard lock(mu_);
  auto it = pages_.find(name);
  if (it == pages_.end() || v < 1 || v > static_cast<int64_t>(it->second.versions.size())) {
    return std::nullopt;
  }
  return it->second.versions[v - 1];
}

std::vector<PageVersion> Wiki::history(const std::string &name) const {
  std::lock_guard lock(mu_);
  auto it = pages_.find(name);
  if (it == pages_.end()) return {};
  return it->second.versions;
}

std::vector<std::string> Wiki::page_names() const {
  std::lock_guard lock(mu_);
  std::vector<std::string> out;
  for (const auto &[name, e] : pages_) out.push_back(name);
  return out;
}

bool Wiki::exists(const std::string &name) const {
  std::lock_guard lock(mu_);
  return pages_.count(name) != 0;
}

LinkResolver Wiki::page_links() const {
  return [this](const Term &t) -> std::optional<std::string> {
    if (!t.is_iri()) return std::nullopt;
    std::optional<std::string> name = page_name_of(base_, t.value());
    if (!name || !exists(*name)) return std::nullopt;
    return page_route(*name);
  };
}

RenderResult Wiki::render(const std::string &name, sparql::RenderContext ctx) const {
  std::string markup;
  {
    std::lock_guard lock(mu_);
    auto it = pages_.find(name);
    if (it == pages_.end()) throw Error("unknown-page", name);
    markup = it->second.versions.back().markup;
  }
  return render_markup(markup, name, std::move(ctx));
}

RenderResult Wiki::render_markup(std::string_view markup, const std::string &name,
                                 sparql::RenderContext ctx) const {
  std::string page = iri(name);
  PrefixMap prefixes = store_.prefixes();
  std::vector<Block> blocks = parse_markup(markup, base_, prefixes);
  if (!ctx.current_page) ctx.current_page = Term::iri(page);
  Snapshot snap = store_.snapshot();
  LinkResolver links = page_links();
  auto query_html = [&](const Block &b) -> std::string {
    try {
      sparql::Query q = sparql::parse_query(sparql::substitute_context(b.query, ctx), prefixes);
      if (q.form == sparql::QueryForm::kAsk) {
        bool v = sparql::evaluate_ask(q, snap);
        return std::string("<p class=\"ask\">") + (v ? "true" : "false") + "</p>";
      }
      return render_table(sparql::evaluate_select(q, snap), {}, links);
    } catch (const Error &e) {
      return "<div class=\"error\">" + html_escape(e.what()) + "</div>";
    }
  };
  RenderResult out;
  out.html = render_blocks(blocks, links, query_html);
  out.statements = statements_of(blocks, page);
  return out;
}

void Wiki::add_template(Template t) {
  std::lock_guard lock(mu_);
  std::string name = t.name;
  templates_[name] = std::move(t);
}

std::optional<Template> Wiki::find_template(const std::string &name) const {
  std::lock_guard lock(mu_);
  auto it = templates_.find(name);
  if (it == templates_.end()) return std::nullopt;
  return it->second;
}

std::vector<Template> Wiki::templates() const {
  std::lock_guard lock(mu_);
  std::vector<Template> out;
  for (const auto &[name, t] : templates_) out.push_back(t);
  return out;
}

WikiPage Wiki::instantiate_template(const std::string &tpl,
                                    const std::map<std::string, std::string> &inputs,
                                    const std::string &page, const Term &author) {
  std::optional<Template> t = find_template(tpl);
  if (!t) throw Error("unknown-template", tpl);
  check_page_name(page);
  PrefixMap prefixes = store_.prefixes();
  std::vector<std::string> missing;
  std::vector<std::string> invalid;
  std::map<std::string, std::string> rendered;
  for (const TemplateField &f : t->fields) {
    auto in = inputs.find(f.name);
    std::string raw = in != inputs.end() ? trim(in->second) : "";
    if (raw.empty() && !f.default_value.empty()) {
      raw = f.default_value == "${currentUser}" ? "<" + author.value() + ">" : f.default_value;
    }
    if (raw.empty()) {
      if (f.required) missing.push_back(f.name);
      rendered[f.name] = "";
      continue;
    }
    if (f.type == FieldType::kLiteral) {
      rendered[f.name] = "{<" + f.predicate + ">=" + quote(raw) + "}";
      continue;
    }
    std::optional<std::string> iri = resolve_name(raw, prefixes);
    if (!iri && raw.find(':') != std::string::npos && is_absolute_iri(raw) &&
        raw.find_first_of("<>\"{}|\\^` ") == std::string::npos) {
      iri = raw;
    }
    if (!iri) {
      invalid.push_back(f.name);
      continue;
    }
    rendered[f.name] = "{<" + f.predicate + ">=<" + *iri + ">}";
  }
  auto join = [](const std::vector<std::string> &v) {
    std::string out;
    for (const std::string &s : v) out += (out.empty() ? "" : ",") + s;
    return out;
  };
  if (!missing.empty()) throw Error("missing-required", join(missing));
  if (!invalid.empty()) throw Error("invalid-iri", join(invalid));

  std::string markup = t->body;
  std::vector<Placeholder> ps = placeholders(markup);
  for (auto it = ps.rbegin(); it != ps.rend(); ++it) {
    markup.replace(it->offset, it->length, rendered[it->field]);
  }
  try {
    return commit(page, markup, author, 0);
  } catch (const Error &e) {
    if (e.code() == "conflict") throw Error("page-exists", page);
    throw;
  }
}

WikiPage Wiki::insert_typed_link(const std::string &page, const std::string &predicate,
                                 const std::string &target, const Term &author) {
  std::string pred = predicate;
  if (!resolve_name(pred, store_.prefixes())) {
    if (!is_absolute_iri(pred)) throw Error("invalid-iri", predicate);
    pred = "<" + pred + ">";
  }
  for (;;) {
    std::optional<WikiPage> p = this->page(page);
    if (!p) throw Error("unknown-page", page);
    if (!exists(target)) throw Error("unknown-page", target);
    std::string markup = p->markup;
    if (!markup.empty() && markup.back() != '\n') markup += '\n';
    markup += "\n[" + pred + "::" + target + "]\n";
    try {
      return commit(page, markup, author, p->version);
    } catch (const Error &e) {
      // Lost a race with another writer; retry on the newer version.
      if (e.code() != "conflict") throw;
    }
  }
}

sparql::ResultSet Wiki::click_search(const Term &resource, Facet facet) const {
  std::optional<Term> s, p, o;
  if (facet == Facet::kSubject) s = resource;
  if (facet == Facet::kPredicate) p = resource;
  if (facet == Facet::kObject) o = resource;
  sparql::ResultSet rs;
  rs.variables = {"s", "p", "o"};
  for (const Triple &t : store_.snapshot()->find(s, p, o)) {
    rs.rows.push_back({t.subject, t.predicate, t.object});
  }
  return rs;
}

void Wiki::add_canned_search(CannedSearch s) {
  std::lock_guard lock(mu_);
  std::string name = s.name;
  searches_[name] = std::move(s);
}

std::vector<CannedSearch> Wiki::canned_searches() const {
  std::lock_guard lock(mu_);
  std::vector<CannedSearch> out;
  for (const auto &[name, s] : searches_) out.push_back(s);
  return out;
}

sparql::ResultSet Wiki::run_canned_search(const std::string &name,
                                          const std::map<std::string, Term> &params) const {
  CannedSearch s;
  {
    std::lock_guard lock(mu_);
    auto it = searches_.find(name);
    if (it == searches_.end()) throw Error("unknown-search", name);
    s = it->second;
  }
  sparql::RenderContext ctx;
  for (const std::string &p : s.params) {
    auto it = params.find(p);
    if (it == params.end()) throw Error("unknown-context-key", p);
    ctx.values.emplace(p, it->second);
  }
  sparql::Query q = sparql::parse_query(sparql::substitute_context(s.query, ctx), store_.prefixes());
  return sparql::evaluate_select(q, store_.snapshot());
}

void Wiki::save_to(const std::filesystem::path &dir) const {
  namespace fs = std::filesystem;
  std::lock_guard lock(mu_);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("io-error", dir.string());
  for (const auto &[name, e] : pages_) {
    fs::path pdir = dir / url_encode(name);
    fs::create_directories(pdir, ec);
    if (ec) throw Error("io-error", pdir.string());
    for (const PageVersion &v : e.versions) {
      fs::path file = pdir / (std::to_string(v.version) + ".page");
      std::ofstream out(file, std::ios::binary);
      out << "name: " << name << "\nversion: " << v.version << "\nauthor: " << v.author.value()
          << "\ntimestamp: " << v.timestamp << "\n---\n"
          << v.markup;
      if (!out) throw Error("io-error", file.string());
    }
  }
}

void Wiki::load_from(const std::filesystem::path &dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error("io-error", dir.string());
  std::map<std::string, Entry> loaded;
  for (const fs::directory_entry &pdir : fs::directory_iterator(dir)) {
    if (!pdir.is_directory()) continue;
    std::string name;
    std::map<int64_t, PageVersion> versions;
    for (const fs::directory_entry &f : fs::directory_iterator(pdir.path())) {
      if (f.path().extension() != ".page") continue;
      std::ifstream in(f.path(), std::ios::binary);
      std::stringstream buf;
      buf << in.rdbuf();
      std::string text = buf.str();
      auto bad = [&] { return Error("parse-error", f.path().string()); };
      size_t sep = text.find("\n---\n");
      if (sep == std::string::npos) throw bad();
      std::map<std::string, std::string> header;
      std::istringstream hs(text.substr(0, sep));
      std::string line;
      while (std::getline(hs, line)) {
        size_t colon = line.find(": ");
        if (colon == std::string::npos) throw bad();
        header[line.substr(0, colon)] = line.substr(colon + 2);
      }
      if (!header.count("name") || !header.count("version") || !header.count("author") ||
          !header.count("timestamp")) {
        throw bad();
      }
      if (!name.empty() && name != header["name"]) throw bad();
      name = header["name"];
      PageVersion v;
      try {
        v.version = std::stoll(header["version"]);
        v.author = Term::iri(header["author"]);
      } catch (const std::exception &) {
        throw bad();
      }
      v.timestamp = header["timestamp"];
      v.markup = text.substr(sep + 5);
      versions[v.version] = std::move(v);
    }
    if (versions.empty()) continue;
    if (url_encode(name) != pdir.path().filename().string()) {
      throw Error("parse-error", pdir.path().string());
    }
    Entry e;
    for (auto &[n, v] : versions) {
      if (n != static_cast<int64_t>(e.versions.size()) + 1) {
        throw Error("parse-error", pdir.path().string() + ": missing version " +
                                       std::to_string(e.versions.size() + 1));
      }
      e.versions.push_back(std::move(v));
    }
    loaded[name] = std::move(e);
  }

  PrefixMap prefixes = store_.prefixes();
  std::map<std::string, std::vector<Triple>> statements;
  for (const auto &[name, e] : loaded) {
    std::string page = iri(name);
    statements[page] = extract_statements(e.versions.back().markup, page, base_, prefixes);
  }
  std::lock_guard lock(mu_);
  store_.write([&](WriteTxn &txn) {
    for (const auto &[name, e] : pages_) {
      txn.remove(TriplePattern{Term::iri(iri(name)), PatternSlot::wildcard(),
                               PatternSlot::wildcard()});
    }
    for (const auto &[page, ts] : statements) replace_statements(txn, page, ts);
  });
  pages_ = std::move(loaded);
}

}  // namespace semflow::wiki
