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

#ifndef SEMFLOW_INTERCHANGE_INTERCHANGE_H_
#define SEMFLOW_INTERCHANGE_INTERCHANGE_H_

#include <string>
#include <string_view>
#include <vector>

#include "semflow/interchange/schema.h"
#include "semflow/rules/rulebase.h"

namespace semflow::interchange {

inline constexpr std::string_view kNamespace = "urn:semflow:rules";

// Contents of schema/rules.xsd.
std::string_view schema_text();
const Schema &schema();

// Deterministic document: prefixes, derivation rules, ECA rules, then
// messaging rules, each group in rulebase order. IRIs are written in full.
std::string export_rules(const rules::Rulebase &rb);

// Throws Error("malformed-xml"), Error("schema-violation", path) or
// Error("range-violation"). Rule ids are re-derived from order.
rules::Rulebase import_rules(std::string_view xml);

// Throws like import_rules without converting.
void validate_document(std::string_view xml);

struct MappingRecord {
  std::string rule_id;
  std::string kind;  // derivation, reaction, messaging
  std::string element;  // path of the rule element in export_rules output

  bool operator==(const MappingRecord &) const = default;
};

std::vector<MappingRecord> translate_report(const rules::Rulebase &rb);

}  // namespace semflow::interchange

#endif  // SEMFLOW_INTERCHANGE_INTERCHANGE_H_
