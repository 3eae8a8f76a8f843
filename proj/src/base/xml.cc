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

#include "semflow/base/xml.h"

#include <cctype>
#include <cstdio>

#include "semflow/base/error.h"

namespace semflow::xml {

const std::string *Element::attr(std::string_view key) const {
  for (const auto &[k, v] : attributes) {
    if (k == key) return &v;
  }
  return nullptr;
}

const Element *Element::child(std::string_view n) const {
  for (const Element &c : children) {
    if (c.name == n) return &c;
  }
  return nullptr;
}

std::vector<const Element *> Element::children_named(std::string_view n) const {
  std::vector<const Element *> out;
  for (const Element &c : children) {
    if (c.name == n) out.push_back(&c);
  }
  return out;
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  Element document() {
    skip_misc();
    if (!starts("<")) fail("expected root element");
    Element root = element();
    skip_misc();
    if (pos_ != s_.size()) fail("content after root element");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string &why) {
    throw Error("malformed-xml", why, pos_);
  }

  bool starts(std::string_view t) const { return s_.substr(pos_, t.size()) == t; }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
      ++pos_;
    }
  }

  void skip_until(std::string_view end) {
    size_t e = s_.find(end, pos_);
    if (e == std::string_view::npos) fail("unterminated construct");
    pos_ = e + end.size();
  }

  // Prolog, comments, processing instructions and doctype between elements.
  void skip_misc() {
    for (;;) {
      skip_ws();
      if (starts("<?")) {
        skip_until("?>");
      } else if (starts("<!--")) {
        skip_until("-->");
      } else if (starts("<!DOCTYPE")) {
        skip_until(">");
      } else {
        return;
      }
    }
  }

  static bool name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
           c == '.' || c == ':' || static_cast<unsigned char>(c) >= 0x80;
  }

  std::string name() {
    size_t start = pos_;
    while (pos_ < s_.size() && name_char(s_[pos_])) ++pos_;
    if (pos_ == start) fail("expected name");
    return std::string(s_.substr(start, pos_ - start));
  }

  static void append_utf8(std::string &out, uint32_t cp) {
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

  void entity(std::string &out) {
    size_t semi = s_.find(';', pos_);
    if (semi == std::string_view::npos || semi - pos_ > 12) fail("bad entity");
    std::string_view ent = s_.substr(pos_ + 1, semi - pos_ - 1);
    if (ent == "amp") out += '&';
    else if (ent == "lt") out += '<';
    else if (ent == "gt") out += '>';
    else if (ent == "quot") out += '"';
    else if (ent == "apos") out += '\'';
    else if (!ent.empty() && ent[0] == '#') {
      uint32_t cp = 0;
      bool hex = ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X');
      std::string_view digits = ent.substr(hex ? 2 : 1);
      if (digits.empty()) fail("bad character reference");
      for (char c : digits) {
        int v;
        if (std::isdigit(static_cast<unsigned char>(c))) v = c - '0';
        else if (hex && std::isxdigit(static_cast<unsigned char>(c)))
          v = std::tolower(c) - 'a' + 10;
        else fail("bad character reference");
        cp = cp * (hex ? 16 : 10) + static_cast<uint32_t>(v);
        if (cp > 0x10FFFF) fail("character reference out of range");
      }
      append_utf8(out, cp);
    } else {
      fail("unknown entity &" + std::string(ent) + ";");
    }
    pos_ = semi + 1;
  }

  std::string attr_value() {
    if (pos_ >= s_.size() || (s_[pos_] != '"' && s_[pos_] != '\'')) {
      fail("expected quoted attribute value");
    }
    char q = s_[pos_++];
    std::string out;
    while (pos_ < s_.size() && s_[pos_] != q) {
      if (s_[pos_] == '&') {
        entity(out);
      } else if (s_[pos_] == '<') {
        fail("'<' in attribute value");
      } else {
        out += s_[pos_++];
      }
    }
    if (pos_ >= s_.size()) fail("unterminated attribute value");
    ++pos_;
    return out;
  }

  Element element() {
    ++pos_;  // '<'
    Element e;
    e.name = name();
    for (;;) {
      skip_ws();
      if (pos_ >= s_.size()) fail("unterminated start tag");
      if (starts("/>")) {
        pos_ += 2;
        return e;
      }
      if (s_[pos_] == '>') {
        ++pos_;
        break;
      }
      std::string key = name();
      skip_ws();
      if (pos_ >= s_.size() || s_[pos_] != '=') fail("expected '='");
      ++pos_;
      skip_ws();
      if (e.attr(key)) fail("duplicate attribute " + key);
      e.attributes.emplace_back(std::move(key), attr_value());
    }
    for (;;) {
      if (pos_ >= s_.size()) fail("unterminated element <" + e.name + ">");
      if (starts("</")) {
        pos_ += 2;
        std::string end = name();
        if (end != e.name) fail("mismatched end tag </" + end + ">");
        skip_ws();
        if (pos_ >= s_.size() || s_[pos_] != '>') fail("expected '>'");
        ++pos_;
        return e;
      }
      if (starts("<!--")) {
        skip_until("-->");
      } else if (starts("<![CDATA[")) {
        pos_ += 9;
        size_t end = s_.find("]]>", pos_);
        if (end == std::string_view::npos) fail("unterminated CDATA");
        e.text += s_.substr(pos_, end - pos_);
        pos_ = end + 3;
      } else if (starts("<?")) {
        skip_until("?>");
      } else if (s_[pos_] == '<') {
        e.children.push_back(element());
      } else if (s_[pos_] == '&') {
        entity(e.text);
      } else {
        e.text += s_[pos_++];
      }
    }
  }

  std::string_view s_;
  size_t pos_ = 0;
};

std::string escape(std::string_view s, bool attr) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"':
        if (attr) out += "&quot;";
        else out += c;
        break;
      default: {
        auto u = static_cast<unsigned char>(c);
        if ((u < 0x20 && (attr || (c != '\n' && c != '\t'))) || c == '\r') {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "&#x%X;", static_cast<unsigned>(u));
          out += buf;
        } else {
          out += c;
        }
      }
    }
  }
  return out;
}

}  // namespace

Element parse(std::string_view text) { return Parser(text).document(); }

std::string escape_text(std::string_view s) { return escape(s, false); }
std::string escape_attr(std::string_view s) { return escape(s, true); }

void Writer::indent() { out_.append(stack_.size() * 2, ' '); }

Writer &Writer::open(
    std::string_view name,
    std::initializer_list<std::pair<std::string_view, std::string_view>> attrs) {
  std::vector<std::pair<std::string, std::string>> v;
  for (const auto &[k, a] : attrs) v.emplace_back(std::string(k), std::string(a));
  return open(name, v);
}

Writer &Writer::open(std::string_view name,
                     const std::vector<std::pair<std::string, std::string>> &attrs) {
  indent();
  out_ += "<";
  out_ += name;
  for (const auto &[k, v] : attrs) out_ += " " + k + "=\"" + escape_attr(v) + "\"";
  out_ += ">\n";
  stack_.emplace_back(name);
  return *this;
}

Writer &Writer::close() {
  std::string name = std::move(stack_.back());
  stack_.pop_back();
  indent();
  out_ += "</" + name + ">\n";
  return *this;
}

Writer &Writer::leaf(std::string_view name, std::string_view text,
                     const std::vector<std::pair<std::string, std::string>> &attrs) {
  indent();
  out_ += "<";
  out_ += name;
  for (const auto &[k, v] : attrs) out_ += " " + k + "=\"" + escape_attr(v) + "\"";
  out_ += ">" + escape_text(text) + "</";
  out_ += name;
  out_ += ">\n";
  return *this;
}

Writer &Writer::empty(std::string_view name,
                      const std::vector<std::pair<std::string, std::string>> &attrs) {
  indent();
  out_ += "<";
  out_ += name;
  for (const auto &[k, v] : attrs) out_ += " " + k + "=\"" + escape_attr(v) + "\"";
  out_ += "/>\n";
  return *this;
}

}  // namespace semflow::xml
