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

#include "semflow/store/ntriples.h"

#include <cctype>

#include "semflow/base/error.h"

namespace semflow::ntriples {
namespace {

void skip_ws(std::string_view s, size_t &pos) {
  while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
}

void append_utf8(std::string &out, uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

bool is_pn_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
         c == '.' || static_cast<unsigned char>(c) >= 0x80;
}

std::string read_iri_ref(std::string_view s, size_t &pos) {
  ++pos;  // '<'
  size_t end = s.find('>', pos);
  if (end == std::string_view::npos) throw Error("parse-error", "unterminated IRI");
  std::string iri(s.substr(pos, end - pos));
  pos = end + 1;
  if (!is_absolute_iri(iri)) throw Error("parse-error", "invalid IRI <" + iri + ">");
  return iri;
}

}  // namespace

std::string unescape(std::string_view body) {
  std::string out;
  out.reserve(body.size());
  for (size_t i = 0; i < body.size(); ++i) {
    char c = body[i];
    if (c != '\\') {
      out += c;
      continue;
    }
    if (++i >= body.size()) throw Error("parse-error", "dangling escape");
    switch (body[i]) {
      case 't': out += '\t'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      case '"': out += '"'; break;
      case '\'': out += '\''; break;
      case '\\': out += '\\'; break;
      case 'u':
      case 'U': {
        size_t len = body[i] == 'u' ? 4 : 8;
        if (i + len >= body.size()) {
          throw Error("parse-error", "short unicode escape");
        }
        uint32_t cp = 0;
        for (size_t k = 1; k <= len; ++k) {
          char h = body[i + k];
          if (!std::isxdigit(static_cast<unsigned char>(h))) {
            throw Error("parse-error", "bad unicode escape");
          }
          cp = cp * 16 + static_cast<uint32_t>(std::isdigit(h) ? h - '0'
                                                : std::tolower(h) - 'a' + 10);
        }
        append_utf8(out, cp);
        i += len;
        break;
      }
      default:
        throw Error("parse-error", std::string("unknown escape \\") + body[i]);
    }
  }
  return out;
}

Term read_term(std::string_view s, size_t &pos, const PrefixMap &prefixes) {
  if (pos >= s.size()) throw Error("parse-error", "expected term");
  char c = s[pos];
  if (c == '<') return Term::iri(read_iri_ref(s, pos));
  if (c == '"') {
    size_t i = pos + 1;
    while (i < s.size() && s[i] != '"') i += (s[i] == '\\') ? 2 : 1;
    if (i >= s.size()) throw Error("parse-error", "unterminated literal");
    std::string lexical = unescape(s.substr(pos + 1, i - pos - 1));
    pos = i + 1;
    if (pos < s.size() && s[pos] == '@') {
      size_t start = ++pos;
      while (pos < s.size() &&
             (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '-')) {
        ++pos;
      }
      if (pos == start) throw Error("parse-error", "empty language tag");
      return Term::literal(std::move(lexical), {},
                           std::string(s.substr(start, pos - start)));
    }
    if (s.substr(pos, 2) == "^^") {
      pos += 2;
      if (pos < s.size() && s[pos] == '<') {
        return Term::literal(std::move(lexical), read_iri_ref(s, pos));
      }
      Term dt = read_term(s, pos, prefixes);
      if (!dt.is_iri()) throw Error("parse-error", "datatype must be an IRI");
      return Term::literal(std::move(lexical), dt.value());
    }
    return Term::literal(std::move(lexical));
  }
  // Prefixed name.
  size_t start = pos;
  while (pos < s.size() && is_pn_char(s[pos]) && s[pos] != '.') ++pos;
  if (pos >= s.size() || s[pos] != ':') {
    throw Error("parse-error", "expected term");
  }
  std::string prefix(s.substr(start, pos - start));
  ++pos;
  size_t local_start = pos;
  while (pos < s.size() && is_pn_char(s[pos])) ++pos;
  // A trailing '.' terminates the statement, not the name.
  while (pos > local_start && s[pos - 1] == '.') --pos;
  auto it = prefixes.find(prefix);
  if (it == prefixes.end()) throw Error("parse-error", "unknown prefix " + prefix);
  return Term::iri(it->second + std::string(s.substr(local_start, pos - local_start)));
}

Document parse(std::string_view text) {
  Document doc;
  doc.prefixes = default_prefixes();
  size_t line_no = 0;
  size_t begin = 0;
  while (begin <= text.size()) {
    size_t end = text.find('\n', begin);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(begin, end - begin);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    begin = end + 1;
    try {
      size_t pos = 0;
      skip_ws(line, pos);
      if (pos >= line.size() || line[pos] == '#') {
        if (end == text.size()) break;
        continue;
      }
      if (line.substr(pos, 7) == "@prefix") {
        pos += 7;
        skip_ws(line, pos);
        size_t colon = line.find(':', pos);
        if (colon == std::string_view::npos) throw Error("parse-error", "bad @prefix");
        std::string name(line.substr(pos, colon - pos));
        for (char c : name) {
          if (!is_pn_char(c)) throw Error("parse-error", "bad prefix name");
        }
        pos = colon + 1;
        skip_ws(line, pos);
        if (pos >= line.size() || line[pos] != '<') {
          throw Error("parse-error", "expected namespace IRI");
        }
        doc.prefixes[name] = read_iri_ref(line, pos);
      } else {
        Term s = read_term(line, pos, doc.prefixes);
        skip_ws(line, pos);
        Term p = read_term(line, pos, doc.prefixes);
        skip_ws(line, pos);
        Term o = read_term(line, pos, doc.prefixes);
        if (!s.is_iri() || !p.is_iri()) {
          throw Error("parse-error", "literal in subject or predicate position");
        }
        doc.triples.push_back(Triple{std::move(s), std::move(p), std::move(o)});
      }
      skip_ws(line, pos);
      if (pos >= line.size() || line[pos] != '.') {
        throw Error("parse-error", "expected '.'");
      }
      ++pos;
      skip_ws(line, pos);
      if (pos < line.size() && line[pos] != '#') {
        throw Error("parse-error", "trailing content");
      }
    } catch (const Error &e) {
      std::string reason = e.detail().empty() ? e.code() : e.detail();
      throw Error("parse-error", reason, line_no);
    }
    if (end == text.size()) break;
  }
  return doc;
}

std::string write(const PrefixMap &prefixes, const std::set<Triple> &triples) {
  std::string out;
  for (const auto &[name, ns] : prefixes) {
    out += "@prefix " + name + ": <" + ns + "> .\n";
  }
  for (const Triple &t : triples) {
    out += t.to_ntriples();
    out += '\n';
  }
  return out;
}

}  // namespace semflow::ntriples
