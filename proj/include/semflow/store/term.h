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

#ifndef SEMFLOW_STORE_TERM_H_
#define SEMFLOW_STORE_TERM_H_

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace semflow {

// Well-known vocabulary.
namespace vocab {
inline constexpr std::string_view kRdf =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kRdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";
// The artifact's own process-model namespace.
inline constexpr std::string_view kPm = "urn:semflow:pm#";

inline const std::string kRdfType = std::string(kRdf) + "type";
inline const std::string kSubClassOf = std::string(kRdfs) + "subClassOf";
inline const std::string kXsdInteger = std::string(kXsd) + "integer";
inline const std::string kXsdDecimal = std::string(kXsd) + "decimal";
inline const std::string kXsdDouble = std::string(kXsd) + "double";
inline const std::string kXsdBoolean = std::string(kXsd) + "boolean";
inline const std::string kXsdString = std::string(kXsd) + "string";

inline std::string pm(std::string_view local) {
  return std::string(kPm) + std::string(local);
}
}  // namespace vocab

enum class TermKind : uint8_t { kIri, kLiteral };

// An RDF term: an absolute IRI or a literal with optional datatype IRI or
// language tag. Blank nodes are not supported.
class Term {
 public:
  Term() = default;

  // Throws Error("invalid-term") unless `value` is an absolute IRI without
  // whitespace or angle brackets.
  static Term iri(std::string value);
  static Term literal(std::string lexical, std::string datatype = {},
                      std::string lang = {});

  static Term integer(int64_t v);
  static Term boolean(bool v);

  TermKind kind() const { return kind_; }
  bool is_iri() const { return kind_ == TermKind::kIri; }
  bool is_literal() const { return kind_ == TermKind::kLiteral; }
  const std::string &value() const { return value_; }
  const std::string &datatype() const { return datatype_; }
  const std::string &lang() const { return lang_; }

  // N-Triples form: <iri>, "lexical", "lexical"@lang, "lexical"^^<dt>.
  std::string to_ntriples() const;

  auto operator<=>(const Term &) const = default;
  bool operator==(const Term &) const = default;

 private:
  TermKind kind_ = TermKind::kIri;
  std::string value_;
  std::string datatype_;
  std::string lang_;
};

bool is_absolute_iri(std::string_view text);

// Escapes a literal lexical form for the inside of a double-quoted string.
std::string escape_literal(std::string_view lexical);

struct TermHash {
  size_t operator()(const Term &t) const;
};

}  // namespace semflow

#endif  // SEMFLOW_STORE_TERM_H_
