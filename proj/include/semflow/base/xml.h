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

#ifndef SEMFLOW_BASE_XML_H_
#define SEMFLOW_BASE_XML_H_

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace semflow::xml {

// Minimal DOM. Namespace declarations stay ordinary attributes; element
// names keep their prefix verbatim.
struct Element {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<Element> children;
  // Concatenated character data directly inside this element.
  std::string text;

  const std::string *attr(std::string_view key) const;
  const Element *child(std::string_view name) const;
  std::vector<const Element *> children_named(std::string_view name) const;
};

// Parses a complete document and returns its root element. Throws
// Error("malformed-xml", reason, byte offset).
Element parse(std::string_view text);

std::string escape_text(std::string_view s);
std::string escape_attr(std::string_view s);

// Pretty-printing writer with two-space indentation. Elements holding only
// text are written on one line.
class Writer {
 public:
  Writer() { out_ = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"; }

  Writer &open(std::string_view name,
               std::initializer_list<std::pair<std::string_view, std::string_view>>
                   attrs = {});
  Writer &open(std::string_view name,
               const std::vector<std::pair<std::string, std::string>> &attrs);
  Writer &close();
  // <name attrs>text</name> on one line.
  Writer &leaf(std::string_view name, std::string_view text,
               const std::vector<std::pair<std::string, std::string>> &attrs = {});
  // <name attrs/>
  Writer &empty(std::string_view name,
                const std::vector<std::pair<std::string, std::string>> &attrs = {});

  std::string str() const { return out_; }

 private:
  void indent();
  std::string out_;
  std::vector<std::string> stack_;
};

}  // namespace semflow::xml

#endif  // SEMFLOW_BASE_XML_H_
