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

#include "semflow/wiki/markup.h"

#include <algorithm>
#include <cctype>
#include <set>

#include "semflow/base/error.h"

namespace semflow::wiki {

std::string url_encode(std::string_view s) {
  static const char *kHex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '.' || c == '_' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 15];
    }
  }
  return out;
}

std::string url_decode(std::string_view s) {
  auto hex = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
  };
  std::string out;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size() && hex(s[i + 1]) >= 0 && hex(s[i + 2]) >= 0) {
      out += static_cast<char>(hex(s[i + 1]) * 16 + hex(s[i + 2]));
      i += 2;
    } else {
      out += s[i];
    }
  }
  return out;
}

std::string page_iri(std::string_view base, std::string_view name) {
  return std::string(base) + "page/" + url_encode(name);
}

std::optional<std::string> page_name_of(std::string_view base, std::string_view iri) {
  std::string prefix = std::string(base) + "page/";
  if (iri.size() <= prefix.size() || iri.substr(0, prefix.size()) != prefix) return std::nullopt;
  std::string_view rest = iri.substr(prefix.size());
  std::string name = url_decode(rest);
  if (url_encode(name) != rest) return std::nullopt;
  return name;
}

std::string page_route(std::string_view name) { return "/pages/" + url_encode(name); }

std::string html_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&#39;"; break;
      default: out += c;
    }
  }
  return out;
}

std::optional<std::string> resolve_name(std::string_view text, const PrefixMap &prefixes) {
  if (text.size() >= 2 && text.front() == '<' && text.back() == '>') {
    std::string iri(text.substr(1, text.size() - 2));
    if (is_absolute_iri(iri)) return iri;
    return std::nullopt;
  }
  size_t colon = text.find(':');
  if (colon == std::string_view::npos) return std::nullopt;
  auto it = prefixes.find(std::string(text.substr(0, colon)));
  if (it == prefixes.end()) return std::nullopt;
  std::string iri = it->second + std::string(text.substr(colon + 1));
  if (!is_absolute_iri(iri)) return std::nullopt;
  return iri;
}

namespace {

std::string trim(std::string_view s) {
  size_t b = 0;
  size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

Inline text_inline(std::string text) {
  Inline i;
  i.text = std::move(text);
  return i;
}

class MarkupParser {
 public:
  MarkupParser(std::string_view text, std::string_view base, const PrefixMap &prefixes)
      : s_(text), base_(base), prefixes_(prefixes) {}

  std::vector<Block> run() {
    std::vector<Block> out;
    std::optional<Block> para;
    auto flush = [&] {
      if (para) out.push_back(std::move(*para));
      para.reset();
    };
    size_t pos = 0;
    while (pos < s_.size()) {
      size_t eol = s_.find('\n', pos);
      if (eol == std::string_view::npos) eol = s_.size();
      std::string_view line = s_.substr(pos, eol - pos);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      size_t indent = 0;
      while (indent < line.size() && (line[indent] == ' ' || line[indent] == '\t')) ++indent;
      std::string_view body = line.substr(indent);

      if (body.starts_with("{{{")) {
        flush();
        size_t start = pos + indent + 3;
        size_t close = s_.find("}}}", start);
        if (close == std::string_view::npos) {
          throw Error("malformed-markup", "unclosed query block", pos + indent);
        }
        Block b;
        b.kind = Block::Kind::kQuery;
        b.offset = pos + indent;
        b.query = trim(s_.substr(start, close - start));
        out.push_back(std::move(b));
        pos = close + 3;
        // The rest of the closing line is ordinary markup.
        if (pos < s_.size() && s_[pos] == '\n') ++pos;
        continue;
      }
      if (trim(body).empty()) {
        flush();
      } else if (body.starts_with("!")) {
        flush();
        size_t level = 0;
        while (level < body.size() && level < 3 && body[level] == '!') ++level;
        Block b;
        b.kind = Block::Kind::kHeading;
        b.level = static_cast<int>(level);
        b.offset = pos + indent;
        size_t skip = level;
        while (skip < body.size() && body[skip] == ' ') ++skip;
        b.inlines = inlines(body.substr(skip), pos + indent + skip);
        out.push_back(std::move(b));
      } else if (body.starts_with("* ")) {
        flush();
        Block b;
        b.kind = Block::Kind::kItem;
        b.offset = pos + indent;
        b.inlines = inlines(body.substr(2), pos + indent + 2);
        out.push_back(std::move(b));
      } else {
        if (!para) {
          para = Block{};
          para->kind = Block::Kind::kParagraph;
          para->offset = pos;
        } else {
          para->inlines.push_back(text_inline("\n"));
        }
        for (Inline &i : inlines(line, pos)) para->inlines.push_back(std::move(i));
      }
      pos = eol + 1;
    }
    flush();
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string &why, size_t at) {
    throw Error("malformed-markup", why, at);
  }

  std::vector<Inline> inlines(std::string_view text, size_t offset) {
    std::vector<Inline> out;
    std::string pending;
    auto flush = [&] {
      if (!pending.empty()) out.push_back(text_inline(std::move(pending)));
      pending.clear();
    };
    size_t i = 0;
    while (i < text.size()) {
      char c = text[i];
      if ((c == '[' || c == '{') && i + 1 < text.size() && text[i + 1] == c) {
        pending += c;
        i += 2;
      } else if (c == '[') {
        size_t close = text.find(']', i + 1);
        if (close == std::string_view::npos) fail("unclosed [", offset + i);
        flush();
        out.push_back(link(text.substr(i + 1, close - i - 1), offset + i));
        i = close + 1;
      } else if (c == '{') {
        size_t close = i + 1;
        bool quoted = false;
        for (; close < text.size(); ++close) {
          if (quoted && text[close] == '\\') {
            ++close;
          } else if (text[close] == '"') {
            quoted = !quoted;
          } else if (!quoted && text[close] == '}') {
            break;
          }
        }
        if (close >= text.size()) fail("unclosed {", offset + i);
        flush();
        out.push_back(attribute(text.substr(i + 1, close - i - 1), offset + i));
        i = close + 1;
      } else {
        pending += c;
        ++i;
      }
    }
    flush();
    return out;
  }

  std::string predicate(std::string_view text, size_t at) {
    std::string t = trim(text);
    std::optional<std::string> iri = resolve_name(t, prefixes_);
    if (!iri) fail("unresolvable predicate " + t, at);
    return *iri;
  }

  Inline link(std::string_view inner, size_t at) {
    Inline l;
    size_t bar = inner.find('|');
    std::string_view target = inner.substr(0, bar);
    std::string display = bar == std::string_view::npos ? "" : trim(inner.substr(bar + 1));
    size_t sep = target.find("::");
    if (sep != std::string_view::npos) {
      l.kind = Inline::Kind::kTypedLink;
      l.predicate = predicate(target.substr(0, sep), at);
      target = target.substr(sep + 2);
    } else {
      l.kind = Inline::Kind::kLink;
    }
    std::string t = trim(target);
    if (t.empty()) fail("empty link target", at);
    if (t.front() == '<' && t.back() == '>') {
      std::string iri = t.substr(1, t.size() - 2);
      if (!is_absolute_iri(iri)) fail("invalid IRI " + t, at);
      l.value = Term::iri(iri);
    } else if (l.kind == Inline::Kind::kLink && t.find("://") != std::string::npos &&
               is_absolute_iri(t)) {
      l.value = Term::iri(t);
    } else {
      l.page = t;
      l.value = Term::iri(page_iri(base_, t));
    }
    l.text = display.empty() ? t : display;
    return l;
  }

  Inline attribute(std::string_view inner, size_t at) {
    size_t eq = std::string_view::npos;
    bool in_iri = false;
    for (size_t k = 0; k < inner.size(); ++k) {
      if (inner[k] == '<') in_iri = true;
      if (inner[k] == '>') in_iri = false;
      if (inner[k] == '=' && !in_iri) {
        eq = k;
        break;
      }
    }
    if (eq == std::string_view::npos) fail("attribute without '='", at);
    Inline a;
    a.kind = Inline::Kind::kAttribute;
    a.predicate = predicate(inner.substr(0, eq), at);
    std::string v = trim(inner.substr(eq + 1));
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') {
      std::string lex;
      for (size_t k = 1; k + 1 < v.size(); ++k) {
        if (v[k] == '\\' && k + 2 < v.size()) {
          char n = v[++k];
          lex += n == 'n' ? '\n' : n;
        } else {
          lex += v[k];
        }
      }
      a.value = Term::literal(lex);
    } else if (std::optional<std::string> iri = resolve_name(v, prefixes_)) {
      a.value = Term::iri(*iri);
      if (std::optional<std::string> name = page_name_of(base_, *iri)) a.page = *name;
    } else if (v.front() == '<') {
      fail("invalid IRI " + v, at);
    } else {
      a.value = Term::literal(v);
    }
    a.text = a.value.is_iri() ? v : a.value.value();
    return a;
  }

  std::string_view s_;
  std::string_view base_;
  const PrefixMap &prefixes_;
};

}  // namespace

std::vector<Block> parse_markup(std::string_view markup, std::string_view base,
                                const PrefixMap &prefixes) {
  return MarkupParser(markup, base, prefixes).run();
}

std::vector<Triple> statements_of(const std::vector<Block> &blocks, const std::string &iri) {
  std::set<Triple> out;
  Term page = Term::iri(iri);
  for (const Block &b : blocks) {
    for (const Inline &i : b.inlines) {
      if (i.kind == Inline::Kind::kTypedLink || i.kind == Inline::Kind::kAttribute) {
        out.insert(Triple{page, Term::iri(i.predicate), i.value});
      }
    }
  }
  return {out.begin(), out.end()};
}

std::vector<Triple> extract_statements(std::string_view markup, const std::string &iri,
                                       std::string_view base, const PrefixMap &prefixes) {
  return statements_of(parse_markup(markup, base, prefixes), iri);
}

std::string resource_html(const Term &t, const std::string &text, const LinkResolver &link,
                          const std::string &extra_attrs) {
  if (t.is_literal()) return html_escape(text);
  std::optional<std::string> href = link ? link(t) : std::nullopt;
  std::string cls = href ? "page" : "resource";
  return "<a class=\"" + cls + "\" href=\"" + html_escape(href ? *href : t.value()) +
         "\" data-resource=\"" + html_escape(t.value()) + "\"" + extra_attrs + ">" +
         html_escape(text) + "</a>";
}

std::string inline_html(const Inline &i, const LinkResolver &link) {
  switch (i.kind) {
    case Inline::Kind::kText:
      return html_escape(i.text);
    case Inline::Kind::kLink:
      if (!i.page.empty()) {
        std::string cls = link && link(i.value) ? "page" : "page missing";
        return "<a class=\"" + cls + "\" href=\"" + html_escape(page_route(i.page)) +
               "\" data-resource=\"" + html_escape(i.value.value()) + "\">" +
               html_escape(i.text) + "</a>";
      }
      return resource_html(i.value, i.text, {}, "");
    case Inline::Kind::kTypedLink: {
      std::string attrs = " data-predicate=\"" + html_escape(i.predicate) + "\"";
      if (!i.page.empty()) {
        std::string cls = link && link(i.value) ? "typed-link" : "typed-link missing";
        return "<a class=\"" + cls + "\" href=\"" + html_escape(page_route(i.page)) +
               "\" data-resource=\"" + html_escape(i.value.value()) + "\"" + attrs + ">" +
               html_escape(i.text) + "</a>";
      }
      return resource_html(i.value, i.text, {}, attrs);
    }
    case Inline::Kind::kAttribute:
      return "<span class=\"statement\" data-predicate=\"" + html_escape(i.predicate) + "\">" +
             resource_html(i.value, i.text, link, "") + "</span>";
  }
  return "";
}

std::string render_table(const sparql::ResultSet &rs, const ColumnSpec &spec,
                         const LinkResolver &link) {
  std::vector<size_t> cols;
  if (spec.columns.empty()) {
    for (size_t k = 0; k < rs.variables.size(); ++k) cols.push_back(k);
  } else {
    for (const std::string &c : spec.columns) {
      auto it = std::find(rs.variables.begin(), rs.variables.end(), c);
      if (it != rs.variables.end()) cols.push_back(it - rs.variables.begin());
    }
  }
  std::string out = "<table class=\"results\">\n<thead><tr>";
  for (size_t k : cols) {
    auto label = spec.labels.find(rs.variables[k]);
    out += "<th>" + html_escape(label == spec.labels.end() ? rs.variables[k] : label->second) +
           "</th>";
  }
  out += "</tr></thead>\n<tbody>\n";
  for (const auto &row : rs.rows) {
    out += "<tr>";
    for (size_t k : cols) {
      out += "<td>";
      if (k < row.size() && row[k]) out += resource_html(*row[k], row[k]->value(), link, "");
      out += "</td>";
    }
    out += "</tr>\n";
  }
  out += "</tbody>\n</table>";
  return out;
}

std::string render_results_table(std::string_view results_xml, const ColumnSpec &spec,
                                 const LinkResolver &link) {
  return render_table(sparql::parse_results_xml(results_xml), spec, link);
}

std::string render_blocks(const std::vector<Block> &blocks, const LinkResolver &link,
                          const std::function<std::string(const Block &)> &query_html) {
  std::string out;
  bool in_list = false;
  for (const Block &b : blocks) {
    if (b.kind != Block::Kind::kItem && in_list) {
      out += "</ul>\n";
      in_list = false;
    }
    std::string body;
    for (const Inline &i : b.inlines) body += inline_html(i, link);
    switch (b.kind) {
      case Block::Kind::kHeading: {
        std::string tag = "h" + std::to_string(b.level);
        out += "<" + tag + ">" + body + "</" + tag + ">\n";
        break;
      }
      case Block::Kind::kItem:
        if (!in_list) out += "<ul>\n";
        in_list = true;
        out += "<li>" + body + "</li>\n";
        break;
      case Block::Kind::kParagraph:
        out += "<p>" + body + "</p>\n";
        break;
      case Block::Kind::kQuery:
        out += "<div class=\"query\">\n" + query_html(b) + "\n</div>\n";
        break;
    }
  }
  if (in_list) out += "</ul>\n";
  return out;
}

std::string_view to_string(FieldType t) {
  switch (t) {
    case FieldType::kLiteral: return "literal";
    case FieldType::kConcept: return "concept-iri";
    case FieldType::kResource: return "resource-iri";
  }
  return "?";
}

FieldType parse_field_type(std::string_view s) {
  if (s == "literal") return FieldType::kLiteral;
  if (s == "concept-iri") return FieldType::kConcept;
  if (s == "resource-iri") return FieldType::kResource;
  throw Error("invalid-argument", std::string(s));
}

const TemplateField *Template::field(std::string_view name) const {
  for (const TemplateField &f : fields) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

std::vector<Placeholder> placeholders(std::string_view body) {
  std::vector<Placeholder> out;
  size_t pos = 0;
  while ((pos = body.find("{{field:", pos)) != std::string_view::npos) {
    size_t close = body.find("}}", pos);
    if (close == std::string_view::npos) throw Error("invalid-template", "unclosed placeholder");
    std::string_view inner = body.substr(pos + 8, close - pos - 8);
    size_t bar = inner.find('|');
    if (bar == std::string_view::npos) {
      throw Error("invalid-template", "placeholder without type: " + std::string(inner));
    }
    out.push_back({pos, close + 2 - pos, std::string(inner.substr(0, bar)),
                   std::string(inner.substr(bar + 1))});
    pos = close + 2;
  }
  return out;
}

Template parse_template(std::string_view text, const PrefixMap &base_prefixes) {
  Template t;
  PrefixMap prefixes = base_prefixes;
  size_t pos = 0;
  size_t line_no = 0;
  bool body = false;
  while (pos < text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string line = trim(text.substr(pos, eol - pos));
    ++line_no;
    pos = eol + 1;
    if (line == "---") {
      body = true;
      break;
    }
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> words;
    size_t k = 0;
    while (k < line.size()) {
      while (k < line.size() && std::isspace(static_cast<unsigned char>(line[k]))) ++k;
      size_t start = k;
      while (k < line.size() && !std::isspace(static_cast<unsigned char>(line[k]))) ++k;
      if (k > start) words.push_back(line.substr(start, k - start));
    }
    auto fail = [&](const std::string &why) { throw Error("syntax-error", why, line_no); };
    if (words[0] == "template") {
      if (words.size() != 2) fail("expected: template <name>");
      t.name = words[1];
    } else if (words[0] == "prefix") {
      if (words.size() != 3 || words[2].size() < 2 || words[2].front() != '<' ||
          words[2].back() != '>') {
        fail("expected: prefix <name> <iri>");
      }
      prefixes[words[1]] = words[2].substr(1, words[2].size() - 2);
    } else if (words[0] == "field") {
      if (words.size() < 4) fail("expected: field <name> <type> <predicate> [required] [default=v]");
      TemplateField f;
      f.name = words[1];
      try {
        f.type = parse_field_type(words[2]);
      } catch (const Error &) {
        fail("unknown field type " + words[2]);
      }
      std::optional<std::string> pred = resolve_name(words[3], prefixes);
      if (!pred) throw Error("invalid-template", "unresolvable predicate " + words[3]);
      f.predicate = *pred;
      for (size_t w = 4; w < words.size(); ++w) {
        if (words[w] == "required") {
          f.required = true;
        } else if (words[w].rfind("default=", 0) == 0) {
          f.default_value = words[w].substr(8);
        } else {
          fail("unexpected " + words[w]);
        }
      }
      if (t.field(f.name)) throw Error("invalid-template", "duplicate field " + f.name);
      t.fields.push_back(std::move(f));
    } else {
      fail("unexpected " + words[0]);
    }
  }
  if (!body) throw Error("syntax-error", "missing --- before the template body", line_no);
  if (t.name.empty()) throw Error("invalid-template", "missing template name");
  t.body = std::string(pos < text.size() ? text.substr(pos) : std::string_view{});

  std::vector<Placeholder> ps = placeholders(t.body);
  std::set<std::string> used;
  std::string stripped = t.body;
  for (auto it = ps.rbegin(); it != ps.rend(); ++it) {
    const TemplateField *f = t.field(it->field);
    if (!f) throw Error("invalid-template", "undeclared field " + it->field);
    if (to_string(f->type) != it->type) {
      throw Error("invalid-template", "type mismatch for " + it->field);
    }
    if (!used.insert(it->field).second) {
      throw Error("invalid-template", "field used twice: " + it->field);
    }
    stripped.erase(it->offset, it->length);
  }
  for (const TemplateField &f : t.fields) {
    if (!used.count(f.name)) throw Error("invalid-template", "field without placeholder: " + f.name);
  }
  // Statements of an instantiated page come from its fields only.
  try {
    if (!extract_statements(stripped, "urn:semflow:template", "urn:semflow:", prefixes).empty()) {
      throw Error("invalid-template", "body carries statements of its own");
    }
  } catch (const Error &e) {
    if (e.code() == "invalid-template") throw;
    throw Error("invalid-template", std::string("body: ") + e.what());
  }
  return t;
}

}  // namespace semflow::wiki
