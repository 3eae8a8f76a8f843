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

#include "semflow/base/error.h"
#include "semflow/sparql/query.h"

namespace semflow::sparql {

const Term *RenderContext::lookup(std::string_view key) const {
  if (key == "currentUser") return current_user ? &*current_user : nullptr;
  if (key == "currentPage") return current_page ? &*current_page : nullptr;
  auto it = values.find(std::string(key));
  return it == values.end() ? nullptr : &it->second;
}

std::string substitute_context(std::string_view text, const RenderContext &ctx) {
  std::string out;
  out.reserve(text.size());
  size_t i = 0;
  while (i < text.size()) {
    size_t open = text.find("${", i);
    if (open == std::string_view::npos) {
      out.append(text.substr(i));
      break;
    }
    out.append(text.substr(i, open - i));
    size_t close = text.find('}', open + 2);
    if (close == std::string_view::npos) {
      throw Error("unknown-context-key", std::string(text.substr(open + 2)));
    }
    std::string key(text.substr(open + 2, close - open - 2));
    const Term *t = ctx.lookup(key);
    if (!t) throw Error("unknown-context-key", key);
    out += t->to_ntriples();
    i = close + 1;
  }
  return out;
}

}  // namespace semflow::sparql
