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

// Recursive-descent parser for the query/update subset described in
// docs/query-grammar.md.

#include <algorithm>
#include <cctype>
#include <set>

#include "semflow/base/error.h"
#include "semflow/sparql/query.h"
#include "semflow/store/ntriples.h"

namespace semflow::sparql {
namespace {

enum class Tok {
  kEnd,
  kIri,      // <...>, text = IRI
  kPname,    // prefix:local, text = whole name
  kVar,      // ?x / $x, text = name
  kString,   // text = unescaped lexical
  kLangTag,  // @en, text = tag
  kCaret2,   // ^^
  kNumber,
  kWord,     // bare keyword or 'a'
  kPunct,    // { } ( ) . ; , *
  kOp,       // = != < <= > >=
};

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;
  size_t pos = 0;
};

bool upper_eq(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (std::toupper(static_cast<unsigned char>(a[i])) !=
        std::toupper(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  Token next() {
    skip();
    Token t;
    t.pos = pos_;
    if (pos_ >= s_.size()) return t;
    char c = s_[pos_];
    if (c == '<') {
      // An IRI reference has no whitespace before its closing '>'.
      size_t end = pos_ + 1;
      while (end < s_.size() && s_[end] != '>' &&
             !std::isspace(static_cast<unsigned char>(s_[end])) && s_[end] != '<') {
        ++end;
      }
      if (end < s_.size() && s_[end] == '>' && end > pos_ + 1 &&
          s_[pos_ + 1] != '=') {
        t.kind = Tok::kIri;
        t.text = std::string(s_.substr(pos_ + 1, end - pos_ - 1));
        pos_ = end + 1;
        return t;
      }
      t.kind = Tok::kOp;
      if (s_.substr(pos_, 2) == "<=") {
        t.text = "<=";
        pos_ += 2;
      } else {
        t.text = "<";
        ++pos_;
      }
      return t;
    }
    if (c == '>' || c == '=' || c == '!') {
      t.kind = Tok::kOp;
      if (s_.substr(pos_, 2) == ">=" || s_.substr(pos_, 2) == "!=") {
        t.text = std::string(s_.substr(pos_, 2));
        pos_ += 2;
      } else if (c == '!') {
        throw Error("syntax-error", "unexpected '!'", pos_);
      } else {
        t.text = std::string(1, c);
        ++pos_;
      }
      return t;
    }
    if (c == '?' || c == '$') {
      size_t start = ++pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                                  s_[pos_] == '_')) {
        ++pos_;
      }
      if (pos_ == start) throw Error("syntax-error", "empty variable name", t.pos);
      t.kind = Tok::kVar;
      t.text = std::string(s_.substr(start, pos_ - start));
      return t;
    }
    if (c == '"' || c == '\'') {
      t.kind = Tok::kString;
      t.text = string_literal(c);
      return t;
    }
    if (c == '@') {
      size_t start = ++pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                                  s_[pos_] == '-')) {
        ++pos_;
      }
      if (pos_ == start) throw Error("syntax-error", "empty language tag", t.pos);
      t.kind = Tok::kLangTag;
      t.text = std::string(s_.substr(start, pos_ - start));
      return t;
    }
    if (c == '^') {
      if (s_.substr(pos_, 2) != "^^") throw Error("syntax-error", "expected ^^", pos_);
      pos_ += 2;
      t.kind = Tok::kCaret2;
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        ((c == '-' || c == '+') && pos_ + 1 < s_.size() &&
         std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])))) {
      size_t start = pos_++;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ + 1 < s_.size() && s_[pos_] == '.' &&
          std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))) {
        ++pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
      t.kind = Tok::kNumber;
      t.text = std::string(s_.substr(start, pos_ - start));
      return t;
    }
    if (std::string_view("{}().;,*").find(c) != std::string_view::npos) {
      t.kind = Tok::kPunct;
      t.text = std::string(1, c);
      ++pos_;
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':') {
      size_t start = pos_;
      while (pos_ < s_.size() && name_char(s_[pos_])) ++pos_;
      // Names never end with '.'; that dot terminates the triple.
      while (pos_ > start && s_[pos_ - 1] == '.') --pos_;
      t.text = std::string(s_.substr(start, pos_ - start));
      t.kind = t.text.find(':') != std::string::npos ? Tok::kPname : Tok::kWord;
      return t;
    }
    throw Error("syntax-error", std::string("unexpected character '") + c + "'", pos_);
  }

 private:
  static bool name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
           c == ':' || c == '.' || static_cast<unsigned char>(c) >= 0x80;
  }

  void skip() {
    for (;;) {
      while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ < s_.size() && s_[pos_] == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
        continue;
      }
      return;
    }
  }

  std::string string_literal(char quote) {
    size_t start = pos_;
    ++pos_;
    size_t body = pos_;
    while (pos_ < s_.size() && s_[pos_] != quote) {
      if (s_[pos_] == '\n') break;
      pos_ += (s_[pos_] == '\\') ? 2 : 1;
    }
    if (pos_ >= s_.size() || s_[pos_] != quote) {
      throw Error("syntax-error", "unterminated string", start);
    }
    std::string_view raw = s_.substr(body, pos_ - body);
    ++pos_;
    try {
      return ntriples::unescape(raw);
    } catch (const Error &) {
      throw Error("syntax-error", "bad escape in string", start);
    }
  }

  std::string_view s_;
  size_t pos_ = 0;
};

class Parser {
 public:
  Parser(std::string_view text, const PrefixMap &prefixes)
      : lex_(text), prefixes_(prefixes) {
    advance();
  }

  Request request() {
    prologue();
    if (is_word("SELECT")) return select();
    if (is_word("ASK")) return ask();
    if (is_word("INSERT") || is_word("DELETE")) return update();
    fail("expected SELECT, ASK, INSERT or DELETE");
  }

 private:
  [[noreturn]] void fail(const std::string &why) {
    throw Error("syntax-error", why, tok_.pos);
  }

  void advance() { tok_ = lex_.next(); }

  bool is_word(std::string_view w) const {
    return tok_.kind == Tok::kWord && upper_eq(tok_.text, w);
  }
  bool is_punct(char c) const {
    return tok_.kind == Tok::kPunct && tok_.text[0] == c;
  }

  void expect_word(std::string_view w) {
    if (!is_word(w)) fail("expected " + std::string(w));
    advance();
  }
  void expect_punct(char c) {
    if (!is_punct(c)) fail(std::string("expected '") + c + "'");
    advance();
  }

  void prologue() {
    while (is_word("PREFIX")) {
      advance();
      if (tok_.kind != Tok::kPname || tok_.text.back() != ':') {
        fail("expected prefix name ending in ':'");
      }
      std::string name = tok_.text.substr(0, tok_.text.size() - 1);
      advance();
      if (tok_.kind != Tok::kIri) fail("expected namespace IRI");
      if (!is_absolute_iri(tok_.text)) fail("namespace is not an absolute IRI");
      prefixes_[name] = tok_.text;
      advance();
    }
  }

  bool inference() {
    if (!is_word("WITH")) return false;
    advance();
    expect_word("INFERENCE");
    return true;
  }

  Query select() {
    Query q;
    q.form = QueryForm::kSelect;
    advance();
    if (is_word("DISTINCT")) {
      q.distinct = true;
      advance();
    }
    bool star = false;
    if (is_punct('*')) {
      star = true;
      advance();
    } else {
      while (tok_.kind == Tok::kVar) {
        if (std::find(q.projection.begin(), q.projection.end(), tok_.text) ==
            q.projection.end()) {
          q.projection.push_back(tok_.text);
        }
        advance();
      }
      if (q.projection.empty()) fail("expected projected variables or '*'");
    }
    bool infer = inference();
    if (is_word("WHERE")) advance();
    size_t where_pos = tok_.pos;
    group(q.where, q.filters);
    infer |= inference();
    q.entailment = infer ? Entailment::kSubclass : Entailment::kNone;
    finish();
    if (q.where.empty()) throw Error("syntax-error", "empty WHERE clause", where_pos);
    std::vector<std::string> vars = variables_of(q.where);
    if (star) {
      q.projection = vars;
    } else {
      for (const std::string &v : q.projection) {
        if (std::find(vars.begin(), vars.end(), v) == vars.end()) {
          throw Error("syntax-error", "projected variable ?" + v + " not in WHERE",
                      where_pos);
        }
      }
    }
    check_filters(q.filters, vars, where_pos);
    return q;
  }

  Query ask() {
    Query q;
    q.form = QueryForm::kAsk;
    advance();
    bool infer = inference();
    if (is_word("WHERE")) advance();
    size_t where_pos = tok_.pos;
    group(q.where, q.filters);
    infer |= inference();
    q.entailment = infer ? Entailment::kSubclass : Entailment::kNone;
    finish();
    if (q.where.empty()) throw Error("syntax-error", "empty WHERE clause", where_pos);
    check_filters(q.filters, variables_of(q.where), where_pos);
    return q;
  }

  UpdateRequest update() {
    UpdateRequest u;
    std::vector<FilterExpr> no_filters;
    if (is_word("INSERT")) {
      advance();
      if (is_word("DATA")) {
        advance();
        u.kind = UpdateKind::kInsertData;
        size_t p = tok_.pos;
        group(u.insert_template, no_filters);
        require_ground(u.insert_template, no_filters, p);
        finish();
        return u;
      }
      u.kind = UpdateKind::kModify;
      group(u.insert_template, no_filters);
      if (!no_filters.empty()) fail("FILTER not allowed in a template");
    } else {
      advance();  // DELETE
      if (is_word("DATA")) {
        advance();
        u.kind = UpdateKind::kDeleteData;
        size_t p = tok_.pos;
        group(u.delete_template, no_filters);
        require_ground(u.delete_template, no_filters, p);
        finish();
        return u;
      }
      u.kind = UpdateKind::kModify;
      if (is_word("WHERE")) {
        advance();
        size_t p = tok_.pos;
        group(u.where, u.filters);
        if (u.where.empty()) throw Error("syntax-error", "empty WHERE clause", p);
        u.delete_template = u.where;
        u.entailment = inference() ? Entailment::kSubclass : Entailment::kNone;
        finish();
        return u;
      }
      group(u.delete_template, no_filters);
      if (!no_filters.empty()) fail("FILTER not allowed in a template");
      if (is_word("INSERT")) {
        advance();
        group(u.insert_template, no_filters);
        if (!no_filters.empty()) fail("FILTER not allowed in a template");
      }
    }
    expect_word("WHERE");
    size_t p = tok_.pos;
    group(u.where, u.filters);
    u.entailment = inference() ? Entailment::kSubclass : Entailment::kNone;
    finish();
    if (u.where.empty()) throw Error("syntax-error", "empty WHERE clause", p);
    check_filters(u.filters, variables_of(u.where), p);
    return u;
  }

  void finish() {
    if (tok_.kind != Tok::kEnd) fail("unexpected trailing input");
  }

  void require_ground(const std::vector<TriplePattern> &tpl,
                      const std::vector<FilterExpr> &filters, size_t p) {
    if (!filters.empty()) throw Error("syntax-error", "FILTER not allowed in DATA", p);
    for (const TriplePattern &t : tpl) {
      if (!t.subject.is_term() || !t.predicate.is_term() || !t.object.is_term()) {
        throw Error("syntax-error", "DATA block must be ground", p);
      }
    }
  }

  static std::vector<std::string> variables_of(const std::vector<TriplePattern> &ps) {
    std::vector<std::string> out;
    auto add = [&](const PatternSlot &s) {
      if (s.is_var() && std::find(out.begin(), out.end(), s.var_name()) == out.end()) {
        out.push_back(s.var_name());
      }
    };
    for (const TriplePattern &p : ps) {
      add(p.subject);
      add(p.predicate);
      add(p.object);
    }
    return out;
  }

  static void check_filters(const std::vector<FilterExpr> &filters,
                            const std::vector<std::string> &vars, size_t p) {
    auto bound = [&](const PatternSlot &s) {
      return s.is_var() &&
             std::find(vars.begin(), vars.end(), s.var_name()) != vars.end();
    };
    for (const FilterExpr &f : filters) {
      if (!bound(f.lhs) && !bound(f.rhs)) {
        throw Error("syntax-error", "FILTER references no variable bound by WHERE", p);
      }
    }
  }

  // '{' ... '}' holding triples (with ';' and ',' abbreviations) and filters.
  void group(std::vector<TriplePattern> &out, std::vector<FilterExpr> &filters) {
    expect_punct('{');
    while (!is_punct('}')) {
      if (tok_.kind == Tok::kEnd) fail("unterminated '{'");
      if (is_word("FILTER")) {
        filters.push_back(filter());
      } else {
        triples_same_subject(out);
      }
      if (is_punct('.')) advance();
    }
    advance();
  }

  FilterExpr filter() {
    advance();
    expect_punct('(');
    FilterExpr f;
    f.lhs = operand();
    if (tok_.kind != Tok::kOp) fail("expected comparison operator");
    const std::string &op = tok_.text;
    if (op == "=") f.op = CompareOp::kEq;
    else if (op == "!=") f.op = CompareOp::kNe;
    else if (op == "<") f.op = CompareOp::kLt;
    else if (op == "<=") f.op = CompareOp::kLe;
    else if (op == ">") f.op = CompareOp::kGt;
    else f.op = CompareOp::kGe;
    advance();
    f.rhs = operand();
    expect_punct(')');
    return f;
  }

  PatternSlot operand() { return term(/*allow_literal=*/true); }

  void triples_same_subject(std::vector<TriplePattern> &out) {
    PatternSlot subject = term(true);
    for (;;) {
      PatternSlot verb;
      if (is_word("a")) {
        verb = Term::iri(vocab::kRdfType);
        advance();
      } else {
        verb = term(true);
      }
      for (;;) {
        out.push_back(TriplePattern{subject, verb, term(true)});
        if (!is_punct(',')) break;
        advance();
      }
      if (!is_punct(';')) break;
      advance();
      if (is_punct('.') || is_punct('}')) break;
    }
  }

  Term expand(const std::string &pname, size_t p) {
    size_t colon = pname.find(':');
    std::string prefix = pname.substr(0, colon);
    auto it = prefixes_.find(prefix);
    if (it == prefixes_.end()) throw Error("unknown-prefix", prefix, p);
    std::string iri = it->second + pname.substr(colon + 1);
    if (!is_absolute_iri(iri)) throw Error("syntax-error", "invalid IRI " + iri, p);
    return Term::iri(iri);
  }

  PatternSlot term(bool allow_literal) {
    size_t p = tok_.pos;
    switch (tok_.kind) {
      case Tok::kVar: {
        std::string name = tok_.text;
        advance();
        return PatternSlot::var(name);
      }
      case Tok::kIri: {
        std::string iri = tok_.text;
        advance();
        if (!is_absolute_iri(iri)) throw Error("syntax-error", "invalid IRI " + iri, p);
        return Term::iri(iri);
      }
      case Tok::kPname: {
        std::string name = tok_.text;
        advance();
        return expand(name, p);
      }
      case Tok::kString: {
        std::string lexical = tok_.text;
        advance();
        if (tok_.kind == Tok::kLangTag) {
          std::string lang = tok_.text;
          advance();
          return Term::literal(lexical, {}, lang);
        }
        if (tok_.kind == Tok::kCaret2) {
          advance();
          size_t dp = tok_.pos;
          if (tok_.kind == Tok::kIri) {
            std::string dt = tok_.text;
            advance();
            if (!is_absolute_iri(dt)) throw Error("syntax-error", "invalid datatype", dp);
            return Term::literal(lexical, dt);
          }
          if (tok_.kind == Tok::kPname) {
            std::string name = tok_.text;
            advance();
            return Term::literal(lexical, expand(name, dp).value());
          }
          fail("expected datatype IRI");
        }
        return Term::literal(lexical);
      }
      case Tok::kNumber: {
        std::string n = tok_.text;
        advance();
        if (n[0] == '+') n.erase(0, 1);
        bool dec = n.find('.') != std::string::npos;
        return Term::literal(n, dec ? vocab::kXsdDecimal : vocab::kXsdInteger);
      }
      case Tok::kWord:
        if (is_word("true") || is_word("false")) {
          bool v = is_word("true");
          advance();
          return Term::boolean(v);
        }
        fail("unexpected keyword '" + tok_.text + "'");
      default:
        break;
    }
    (void)allow_literal;
    fail("expected term");
  }

  Lexer lex_;
  Token tok_;
  PrefixMap prefixes_;
};

}  // namespace

Request parse(std::string_view text, const PrefixMap &prefixes) {
  return Parser(text, prefixes).request();
}

Query parse_query(std::string_view text, const PrefixMap &prefixes) {
  Request r = parse(text, prefixes);
  if (auto *q = std::get_if<Query>(&r)) return std::move(*q);
  throw Error("syntax-error", "expected a query, got an update", 0);
}

UpdateRequest parse_update(std::string_view text, const PrefixMap &prefixes) {
  Request r = parse(text, prefixes);
  if (auto *u = std::get_if<UpdateRequest>(&r)) return std::move(*u);
  throw Error("syntax-error", "expected an update, got a query", 0);
}

}  // namespace semflow::sparql
