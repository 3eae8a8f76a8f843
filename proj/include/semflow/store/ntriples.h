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

#ifndef SEMFLOW_STORE_NTRIPLES_H_
#define SEMFLOW_STORE_NTRIPLES_H_

#include <string>
#include <string_view>
#include <vector>

#include "semflow/store/triple_store.h"

namespace semflow::ntriples {

struct Document {
  PrefixMap prefixes;
  std::vector<Triple> triples;
};

// Parses the persistence format (docs/formats.md). Errors are
// Error("parse-error", reason, line) with a 1-based line number.
Document parse(std::string_view text);

// Header of "@prefix" lines in key order, then one statement per line in
// triple order. Byte-stable for a given graph.
std::string write(const PrefixMap &prefixes, const std::set<Triple> &triples);

// Reads one term starting at `pos` (IRI in angle brackets, prefixed name,
// or quoted literal); advances `pos`. Throws Error("parse-error", reason).
Term read_term(std::string_view line, size_t &pos, const PrefixMap &prefixes);

// Decodes the escapes allowed inside a quoted literal.
std::string unescape(std::string_view body);

}  // namespace semflow::ntriples

#endif  // SEMFLOW_STORE_NTRIPLES_H_
