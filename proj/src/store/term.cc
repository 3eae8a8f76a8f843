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

#include "semflow/store/term.h"

#include <cctype>
#include <cstdio>

#include "semflow/base/error.h"

namespace semflow {

bool is_absolute_iri(std::string_view text) {
  if (text.empty() || !std::isalpha(static_cast<unsigned char>(text[0]))) {
    return false;
  }
  size_t colon = std::string_view::npos;
  for (size_t i = 1; i < text.size(); ++i) {
    char c = text[i];
    if (c == ':') {
      colon = i;
      break;
    }
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' &&
        c != '.') {
      return false;
    }
  }
  if (colon == std::string_view::npos) return false;
  for (char c : text) {
    if (static_cast<unsigned char>(c) <= 0x20 || c == '<' || c == '>' ||
        c == '"' || c == '{' || c == '}' || c == '|' || c == '\\' ||
        c == '^' || c == '`') {
      return false;
    }
  }
  return true;
}

Term Term::iri(std::string value) {
  if (!is_absolute_iri(value)) throw Error("invalid-term", value);
  Term t;
  t.kind_ = TermKind::kIri;
  t.value_ = std::move(value);
  return t;
}

Term Term::literal(std::string lexical, std::string datatype,
                   std::string lang) {
  if (!datatype.empty() && !lang.empty()) {
    throw Error("invalid-term", "literal with both datatype and language");
  }
  if (!datatype.empty() && !is_absolute_iri(datatype)) {
    throw Error("invalid-term", datatype);
  }
  Term t;
  t.kind_ = TermKind::kLiteral;
  t.value_ = std::move(lexical);
  t.datatype_ = std::move(datatype);
  t.lang_ = std::move(lang);
  return t;
}

Term Term::integer(int64_t v) {
  return literal(std::to_string(v), vocab::kXsdInteger);
}

Term Term::boolean(bool v) {
  return literal(v ? "true" : "false", vocab::kXsdBoolean);
}

std::string escape_literal(std::string_view lexical) {
  std::string out;
  out.reserve(lexical.size() + 2);
  for (char c : lexical) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20 || c == 0x7f) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04X",
                        static_cast<unsigned>(static_cast<unsigned char>(c)));
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string Term::to_ntriples() const {
  if (is_iri()) return "<" + value_ + ">";
  std::string out = "\"" + escape_literal(value_) + "\"";
  if (!lang_.empty()) {
    out += "@" + lang_;
  } else if (!datatype_.empty()) {
    out += "^^<" + datatype_ + ">";
  }
  return out;
}

size_t TermHash::operator()(const Term &t) const {
  size_t h = std::hash<std::string>()(t.value());
  h ^= std::hash<std::string>()(t.datatype()) + 0x9e3779b97f4a7c15ULL +
       (h << 6) + (h >> 2);
  h ^= std::hash<std::string>()(t.lang()) + 0x9e3779b97f4a7c15ULL + (h << 6) +
       (h >> 2);
  return h ^ static_cast<size_t>(t.kind());
}

}  // namespace semflow
