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

#ifndef SEMFLOW_INTERCHANGE_SCHEMA_H_
#define SEMFLOW_INTERCHANGE_SCHEMA_H_

#include <map>
#include <memory>
#include <string>
#include <string_view>

#include "semflow/base/xml.h"

namespace semflow::interchange {

// Validator for the XML Schema subset used by schema/rules.xsd: global
// element declarations, named model groups, sequence/choice particles with
// occurrence bounds, attributes with use="required", simple text content
// and simpleContent extensions.
class Schema {
 public:
  // Throws Error("invalid-schema", why).
  static Schema parse(std::string_view xsd);

  const std::string &target_namespace() const { return target_namespace_; }
  bool declares(std::string_view element) const;

  // Throws Error("schema-violation", "<path>: <reason>") for the first
  // problem in document order. Paths look like /RuleBase/Rule[2]/Head.
  void validate(const xml::Element &root) const;

  struct Particle;
  struct Decl;

 private:
  void check(const xml::Element &e, const std::string &path) const;

  std::string target_namespace_;
  std::map<std::string, std::shared_ptr<const Decl>, std::less<>> elements_;
};

}  // namespace semflow::interchange

#endif  // SEMFLOW_INTERCHANGE_SCHEMA_H_
