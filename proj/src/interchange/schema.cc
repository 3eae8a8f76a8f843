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

#include "semflow/interchange/schema.h"

#include <algorithm>
#include <cctype>
#include <limits>
#include <set>
#include <vector>

#include "semflow/base/error.h"

namespace semflow::interchange {

namespace {

constexpr size_t kUnbounded = std::numeric_limits<size_t>::max();

std::string_view local(std::string_view name) {
  size_t colon = name.find(':');
  return colon == std::string_view::npos ? name : name.substr(colon + 1);
}

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

[[noreturn]] void invalid(const std::string &why) { throw Error("invalid-schema", why); }

}  // namespace

struct Schema::Particle {
  enum class Kind { kElement, kSequence, kChoice };
  Kind kind = Kind::kElement;
  std::string name;  // kElement
  std::vector<Particle> items;
  size_t min = 1;
  size_t max = 1;

  using Memo = std::map<std::pair<const Particle *, size_t>, std::set<size_t>>;

  // Positions reachable after matching this particle from `start`.
  std::set<size_t> ends(const std::vector<std::string> &tokens, size_t start, Memo &memo) const {
    auto key = std::make_pair(this, start);
    auto hit = memo.find(key);
    if (hit != memo.end()) return hit->second;
    std::set<size_t> out = repeat(tokens, start, memo);
    memo[key] = out;
    return out;
  }

  std::set<size_t> repeat(const std::vector<std::string> &tokens, size_t start, Memo &memo) const {
    std::set<size_t> reached;
    std::set<size_t> frontier{start};
    if (min == 0) reached.insert(start);
    for (size_t n = 1; n <= max && !frontier.empty(); ++n) {
      std::set<size_t> next;
      for (size_t pos : frontier) {
        for (size_t e : once(tokens, pos, memo)) {
          // An unbounded repeat that consumes nothing adds nothing new.
          if (max == kUnbounded && e == pos && n > min) continue;
          next.insert(e);
        }
      }
      if (max == kUnbounded) {
        std::set<size_t> fresh;
        for (size_t e : next) {
          if (n < min || !reached.count(e)) fresh.insert(e);
        }
        next = fresh;
      }
      if (n >= min) reached.insert(next.begin(), next.end());
      frontier = std::move(next);
    }
    return reached;
  }

  std::set<size_t> once(const std::vector<std::string> &tokens, size_t start, Memo &memo) const {
    switch (kind) {
      case Kind::kElement:
        if (start < tokens.size() && tokens[start] == name) return {start + 1};
        return {};
      case Kind::kSequence: {
        std::set<size_t> cur{start};
        for (const Particle &p : items) {
          std::set<size_t> next;
          for (size_t pos : cur) {
            std::set<size_t> e = p.ends(tokens, pos, memo);
            next.insert(e.begin(), e.end());
          }
          cur = std::move(next);
          if (cur.empty()) break;
        }
        return cur;
      }
      case Kind::kChoice: {
        std::set<size_t> out;
        for (const Particle &p : items) {
          std::set<size_t> e = p.ends(tokens, start, memo);
          out.insert(e.begin(), e.end());
        }
        return out;
      }
    }
    return {};
  }

  std::string describe() const {
    std::string s;
    if (kind == Kind::kElement) {
      s = name;
    } else {
      s = "(";
      for (size_t i = 0; i < items.size(); ++i) {
        if (i) s += kind == Kind::kSequence ? ", " : " | ";
        s += items[i].describe();
      }
      s += ")";
    }
    if (min == 0 && max == 1) {
      s += "?";
    } else if (min == 0 && max == kUnbounded) {
      s += "*";
    } else if (min == 1 && max == kUnbounded) {
      s += "+";
    } else if (min != 1 || max != 1) {
      s += "{" + std::to_string(min) + "," + (max == kUnbounded ? "" : std::to_string(max)) + "}";
    }
    return s;
  }
};

struct Schema::Decl {
  enum class Content { kEmpty, kText, kElements };
  Content content = Content::kEmpty;
  std::map<std::string, bool> attributes;  // name -> required
  Particle model;
};

namespace {

class SchemaReader {
 public:
  explicit SchemaReader(const xml::Element &root) : root_(root) {
    for (const xml::Element &c : root.children) {
      const std::string *name = c.attr("name");
      if (local(c.name) == "group" && name) groups_[*name] = &c;
    }
  }

  Schema::Decl element(const xml::Element &e) {
    Schema::Decl d;
    if (const std::string *type = e.attr("type")) {
      if (local(*type) == "string" || local(*type) == "anyURI") {
        d.content = Schema::Decl::Content::kText;
        return d;
      }
      invalid("unsupported type " + *type);
    }
    const xml::Element *ct = find(e, "complexType");
    if (!ct) invalid("element without type");
    for (const xml::Element &c : ct->children) {
      std::string_view k = local(c.name);
      if (k == "attribute") {
        attribute(c, d);
      } else if (k == "simpleContent") {
        d.content = Schema::Decl::Content::kText;
        const xml::Element *ext = find(c, "extension");
        if (!ext) invalid("simpleContent without extension");
        for (const xml::Element &a : ext->children) {
          if (local(a.name) == "attribute") attribute(a, d);
        }
      } else if (k == "sequence" || k == "choice" || k == "group") {
        d.content = Schema::Decl::Content::kElements;
        d.model = particle(c);
      } else {
        invalid("unsupported " + c.name);
      }
    }
    return d;
  }

 private:
  static const xml::Element *find(const xml::Element &e, std::string_view name) {
    for (const xml::Element &c : e.children) {
      if (local(c.name) == name) return &c;
    }
    return nullptr;
  }

  static void attribute(const xml::Element &a, Schema::Decl &d) {
    const std::string *name = a.attr("name");
    if (!name) invalid("attribute without name");
    const std::string *use = a.attr("use");
    d.attributes[*name] = use && *use == "required";
  }

  static size_t bound(const xml::Element &e, const char *key) {
    const std::string *v = e.attr(key);
    if (!v) return 1;
    if (*v == "unbounded") return kUnbounded;
    try {
      return std::stoul(*v);
    } catch (const std::exception &) {
      invalid(std::string(key) + "=" + *v);
    }
  }

  Schema::Particle particle(const xml::Element &e) {
    Schema::Particle p;
    std::string_view k = local(e.name);
    if (k == "element") {
      const std::string *ref = e.attr("ref");
      if (!ref) invalid("local element declarations are not supported");
      p.kind = Schema::Particle::Kind::kElement;
      p.name = std::string(local(*ref));
    } else if (k == "sequence" || k == "choice") {
      p.kind = k == "sequence" ? Schema::Particle::Kind::kSequence
                               : Schema::Particle::Kind::kChoice;
      for (const xml::Element &c : e.children) p.items.push_back(particle(c));
    } else if (k == "group") {
      const std::string *ref = e.attr("ref");
      if (!ref) invalid("group without ref");
      auto it = groups_.find(std::string(local(*ref)));
      if (it == groups_.end()) invalid("unknown group " + *ref);
      if (!expanding_.insert(it->first).second) invalid("recursive group " + *ref);
      const xml::Element *body = nullptr;
      for (const xml::Element &c : it->second->children) {
        if (local(c.name) == "sequence" || local(c.name) == "choice") body = &c;
      }
      if (!body) invalid("empty group " + *ref);
      p = particle(*body);
      expanding_.erase(it->first);
      // The group reference's bounds wrap the group's own.
      Schema::Particle wrap;
      wrap.kind = Schema::Particle::Kind::kSequence;
      wrap.items.push_back(std::move(p));
      p = std::move(wrap);
    } else {
      invalid("unsupported particle " + e.name);
    }
    p.min = bound(e, "minOccurs");
    p.max = bound(e, "maxOccurs");
    if (p.min > p.max) invalid("minOccurs > maxOccurs");
    return p;
  }

  const xml::Element &root_;
  std::map<std::string, const xml::Element *> groups_;
  std::set<std::string> expanding_;
};

}  // namespace

Schema Schema::parse(std::string_view xsd) {
  xml::Element root = xml::parse(xsd);
  if (local(root.name) != "schema") invalid("root is not a schema");
  Schema s;
  if (const std::string *ns = root.attr("targetNamespace")) s.target_namespace_ = *ns;
  SchemaReader reader(root);
  for (const xml::Element &c : root.children) {
    if (local(c.name) != "element") continue;
    const std::string *name = c.attr("name");
    if (!name) invalid("global element without name");
    s.elements_[*name] = std::make_shared<const Decl>(reader.element(c));
  }
  for (const auto &[name, decl] : s.elements_) {
    std::vector<const Particle *> stack{&decl->model};
    while (!stack.empty()) {
      const Particle *p = stack.back();
      stack.pop_back();
      if (p->kind == Particle::Kind::kElement && decl->content == Decl::Content::kElements &&
          !s.elements_.count(p->name)) {
        invalid("reference to undeclared element " + p->name);
      }
      for (const Particle &c : p->items) stack.push_back(&c);
    }
  }
  return s;
}

bool Schema::declares(std::string_view element) const {
  return elements_.find(element) != elements_.end();
}

void Schema::validate(const xml::Element &root) const {
  std::string name(local(root.name));
  const std::string *ns = root.attr("xmlns");
  if (!target_namespace_.empty() && (!ns || *ns != target_namespace_)) {
    throw Error("schema-violation", "/" + name + ": namespace must be " + target_namespace_);
  }
  check(root, "/" + name);
}

void Schema::check(const xml::Element &e, const std::string &path) const {
  auto fail = [&](const std::string &why) { throw Error("schema-violation", path + ": " + why); };
  if (e.name.find(':') != std::string::npos) fail("prefixed element names are not supported");
  auto it = elements_.find(e.name);
  if (it == elements_.end()) fail("undeclared element " + e.name);
  const Decl &d = *it->second;

  for (const auto &[key, value] : e.attributes) {
    if (key == "xmlns" || key.rfind("xmlns:", 0) == 0) continue;
    if (!d.attributes.count(key)) fail("unexpected attribute " + key);
  }
  for (const auto &[key, required] : d.attributes) {
    if (required && !e.attr(key)) fail("missing attribute " + key);
  }

  switch (d.content) {
    case Decl::Content::kEmpty:
      if (!e.children.empty()) fail("element must be empty");
      if (!blank(e.text)) fail("unexpected text");
      return;
    case Decl::Content::kText:
      if (!e.children.empty()) fail("unexpected element " + e.children.front().name);
      return;
    case Decl::Content::kElements:
      break;
  }
  if (!blank(e.text)) fail("unexpected text");
  std::map<std::string, size_t> seen;
  for (const xml::Element &c : e.children) {
    if (!elements_.count(c.name)) {
      throw Error("schema-violation", path + "/" + c.name + "[" +
                                          std::to_string(seen[c.name] + 1) +
                                          "]: undeclared element " + c.name);
    }
    ++seen[c.name];
  }
  seen.clear();
  std::vector<std::string> tokens;
  for (const xml::Element &c : e.children) tokens.push_back(c.name);
  Particle::Memo memo;
  if (!d.model.ends(tokens, 0, memo).count(tokens.size())) {
    std::string got;
    for (const std::string &t : tokens) got += (got.empty() ? "" : ", ") + t;
    fail("content (" + got + ") does not match " + d.model.describe());
  }
  for (const xml::Element &c : e.children) {
    check(c, path + "/" + c.name + "[" + std::to_string(++seen[c.name]) + "]");
  }
}

}  // namespace semflow::interchange
