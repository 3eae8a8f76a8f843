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

#ifndef SEMFLOW_BASE_ERROR_H_
#define SEMFLOW_BASE_ERROR_H_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace semflow {

// All recoverable failures raised by the library. `code` is a stable
// kebab-case identifier ("unknown-prefix", "wrong-user", ...) that callers
// and the HTTP layer switch on; `detail` carries the offending name (field,
// prefix, path) when there is one.
class Error : public std::runtime_error {
 public:
  Error(std::string code, std::string detail = {},
        std::optional<size_t> position = std::nullopt)
      : std::runtime_error(format(code, detail, position)),
        code_(std::move(code)),
        detail_(std::move(detail)),
        position_(position) {}

  const std::string &code() const { return code_; }
  const std::string &detail() const { return detail_; }

  // Byte offset (parsers over a single string) or 1-based line number
  // (line-oriented formats). Which one is documented per parser.
  std::optional<size_t> position() const { return position_; }

 private:
  static std::string format(const std::string &code, const std::string &detail,
                            std::optional<size_t> position) {
    std::string out = code;
    if (!detail.empty()) out += "(" + detail + ")";
    if (position) out += " at " + std::to_string(*position);
    return out;
  }

  std::string code_;
  std::string detail_;
  std::optional<size_t> position_;
};

}  // namespace semflow

#endif  // SEMFLOW_BASE_ERROR_H_
