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

#ifndef SEMFLOW_WIKI_MARKUP_H_
#define SEMFLOW_WIKI_MARKUP_H_

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "semflow/sparql/query.h"
#include "semflow/store/triple_store.h"

namespace semflow::wiki {

// RFC 3986 percent-encoding; unreserved characters pass through.
std::string url_encode(std::string_view s);
std::string url_decode(std::string_view s);

// {base}page/{url_encode(name)}
std::string page_iri(std::string_view base, std::string_view name);
// Inverse of page_iri; nullopt for IRIs outside the page space.
std::optional<std::string> page_name_of(std::string_view base, std::string_view iri);
// HTTP route of a page: /pages/{url_encode(name)}
std::string page_route(std::string_view name);

struct RenderResult {
  std::string html;
  std::vector<Triple> statements;  // sorted, duplicate-free

  bool operator==(const RenderResult &) const = default;
};

// A parsed inline construct. Links and typed links carry the target in
// `value`; `page` is set when the target is a wiki page.
struct Inline {
  enum class Kind { kText, kLink, kTypedLink, kAttribute };
  Kind kind = Kind::kText;
  std::string text;  // text or display text
  std::string predicate;
  Term value;
  std::string page;
};

struct Block {
  enum class Kind { kParagraph, kHeading, kItem, kQuery };
  Kind kind = Kind::kParagraph;
  int level = 0;
  std::vector<Inline> inlines;
  std::string query;
  size_t offset = 0;
};

std::string html_escape(std::string_view s);

// <iri>, or a prefixed name whose prefix is known; absolute results only.
std::optional<std::string> resolve_name(std::string_view text, const PrefixMap &prefixes);

// Throws Error("malformed-markup", why, byte offset).
std::vector<Block> parse_markup(std::string_view markup, std::string_view base,
                                const PrefixMap &prefixes);
std::vector<Triple> statements_of(const std::vector<Block> &blocks, const std::string &iri);

// Statements carried by `markup` on the page `iri`. Pure: no store access.
// Throws Error("malformed-markup", why, byte offset).
std::vector<Triple> extract_statements(std::string_view markup, const std::string &iri,
                                       std::string_view base, const PrefixMap &prefixes);

enum class FieldType { kLiteral, kConcept, kResource };

std::string_view to_string(FieldType t);
// "literal", "concept-iri", "resource-iri"; throws Error("invalid-argument").
FieldType parse_field_type(std::string_view s);

struct TemplateField {
  std::string name;
  FieldType type = FieldType::kLiteral;
  std::string predicate;  // absolute IRI
  bool required = false;
  std::string default_value;  // "${currentUser}" or a value in input form

  bool operator==(const TemplateField &) const = default;
};

struct Template {
  std::string name;
  std::vector<TemplateField> fields;
  std::string body;  // markup with {{field:name|type}} placeholders

  const TemplateField *field(std::string_view name) const;
  bool operator==(const Template &) const = default;
};

// Template file format (docs/markup.md). Throws Error("syntax-error", why,
// line) or Error("invalid-template", why).
Template parse_template(std::string_view text, const PrefixMap &prefixes);

struct ColumnSpec {
  std::vector<std::string> columns;  // empty: all variables in order
  std::map<std::string, std::string> labels;  // header text per variable
};

// Link target for an IRI cell, or nullopt for a plain resource link.
using LinkResolver = std::function<std::optional<std::string>(const Term &)>;

std::string render_table(const sparql::ResultSet &rs, const ColumnSpec &spec,
                         const LinkResolver &link);
// Throws Error("malformed-xml").
std::string render_results_table(std::string_view results_xml, const ColumnSpec &spec,
                                 const LinkResolver &link);

std::string render_blocks(const std::vector<Block> &blocks, const LinkResolver &link,
                          const std::function<std::string(const Block &)> &query_html);

struct Placeholder {
  size_t offset = 0;
  size_t length = 0;
  std::string field;
  std::string type;
};

// {{field:name|type}} occurrences in order. Throws Error("invalid-template").
std::vector<Placeholder> placeholders(std::string_view body);

}  // namespace semflow::wiki

#endif  // SEMFLOW_WIKI_MARKUP_H_
