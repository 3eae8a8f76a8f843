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

#include "semflow/rules/rulebase.h"

#include <algorithm>
#include <cctype>
#include <set>

#include "semflow/base/error.h"
#include "semflow/store/ntriples.h"

namespace semflow::rules {

bool Value::ground() const {
  switch (kind) {
    case Kind::kVar: return false;
    case Kind::kList:
      return std::all_of(items.begin(), items.end(), [](const Value &v) { return v.ground(); });
    default: return true;
  }
}

bool Value::operator<(const Value &o) const {
  if (kind != o.kind) return kind < o.kind;
  switch (kind) {
    case Kind::kVar:
    case Kind::kAtom: return name < o.name;
    case Kind::kRdf: return term < o.term;
    case Kind::kList:
      return std::lexicographical_compare(items.begin(), items.end(), o.items.begin(),
                                          o.items.end());
  }
  return false;
}

namespace {

bool is_plain_atom(std::string_view s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

std::string quote_atom(std::string_view s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  return out + "'";
}

bool is_integer_lexical(std::string_view s) {
  size_t i = (!s.empty() && s[0] == '-') ? 1 : 0;
  return i < s.size() && std::all_of(s.begin() + i, s.end(), ::isdigit);
}

bool is_decimal_lexical(std::string_view s) {
  size_t dot = s.find('.');
  return dot != std::string_view::npos && is_integer_lexical(s.substr(0, dot)) &&
         dot + 1 < s.size() && std::all_of(s.begin() + dot + 1, s.end(), ::isdigit);
}

}  // namespace

std::string to_string(const Value &v) {
  switch (v.kind) {
    case Value::Kind::kVar: return v.name;
    case Value::Kind::kAtom: return is_plain_atom(v.name) ? v.name : quote_atom(v.name);
    case Value::Kind::kRdf:
      if (v.term.is_literal() && v.term.lang().empty()) {
        if (v.term.datatype() == vocab::kXsdInteger && is_integer_lexical(v.term.value())) {
          return v.term.value();
        }
        if (v.term.datatype() == vocab::kXsdDecimal && is_decimal_lexical(v.term.value())) {
          return v.term.value();
        }
      }
      return v.term.to_ntriples();
    case Value::Kind::kList: {
      std::string out = "[";
      for (size_t i = 0; i < v.items.size(); ++i) {
        if (i) out += ", ";
        out += to_string(v.items[i]);
      }
      return out + "]";
    }
  }
  return "";
}

std::string to_string(const Atom &a) {
  std::string out = a.predicate;
  if (!a.args.empty()) {
    out += "(";
    for (size_t i = 0; i < a.args.size(); ++i) {
      if (i) out += ", ";
      out += to_string(a.args[i]);
    }
    out += ")";
  }
  return out;
}

std::string_view to_string(CompareOp op) {
  switch (op) {
    case CompareOp::kEq: return "=";
    case CompareOp::kNe: return "\\=";
    case CompareOp::kLt: return "<";
    case CompareOp::kLe: return "=<";
    case CompareOp::kGt: return ">";
    case CompareOp::kGe: return ">=";
  }
  return "?";
}

std::string to_string(const Literal &l) {
  switch (l.kind) {
    case Literal::Kind::kAtom: return to_string(l.atom);
    case Literal::Kind::kNot: return "not(" + to_string(l.atom) + ")";
    case Literal::Kind::kCompare:
      return to_string(l.lhs) + " " + std::string(to_string(l.op)) + " " + to_string(l.rhs);
  }
  return "";
}

PrefixMap Rulebase::effective_prefixes() const {
  PrefixMap p = default_prefixes();
  for (const auto &[k, v] : prefixes) p[k] = v;
  return p;
}

void Rulebase::append(const Rulebase &other) {
  for (const auto &[k, v] : other.prefixes) prefixes[k] = v;
  derivations.insert(derivations.end(), other.derivations.begin(), other.derivations.end());
  reactions.insert(reactions.end(), other.reactions.begin(), other.reactions.end());
  messaging.insert(messaging.end(), other.messaging.begin(), other.messaging.end());
  assign_ids(*this);
}

bool is_action(std::string_view p, size_t arity) {
  return (p == "update" && arity == 1) || (p == "sendMsg" && arity == 5) ||
         (p == "mintPage" && arity == 2) || (p == "notify" && arity == 2) ||
         (p == "selectTransition" && arity == 1);
}

// ---------------------------------------------------------------------------
// Lexer and parser

namespace {

enum class Tok {
  kVar, kAtom, kQuotedAtom, kString, kIri, kCurie, kNumber,
  kLParen, kRParen, kLBracket, kRBracket, kComma, kDot, kNeck, kOp, kNot, kCaret, kLang, kEnd
};

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;
  size_t line = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip();
      Token t;
      t.line = line_;
      if (i_ >= s_.size()) {
        out.push_back(t);
        return out;
      }
      lex(t);
      out.push_back(std::move(t));
    }
  }

 private:
  [[noreturn]] void fail(const std::string &why) { throw Error("syntax-error", why, line_); }

  void skip() {
    while (i_ < s_.size()) {
      char c = s_[i_];
      if (c == '\n') {
        ++line_;
        ++i_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++i_;
      } else if (c == '%') {
        while (i_ < s_.size() && s_[i_] != '\n') ++i_;
      } else {
        return;
      }
    }
  }

  static bool name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  }

  void lex(Token &t) {
    char c = s_[i_];
    auto punct = [&](Tok k, size_t n) {
      t.kind = k;
      t.text = std::string(s_.substr(i_, n));
      i_ += n;
    };
    if (c == '(') return punct(Tok::kLParen, 1);
    if (c == ')') return punct(Tok::kRParen, 1);
    if (c == '[') return punct(Tok::kLBracket, 1);
    if (c == ']') return punct(Tok::kRBracket, 1);
    if (c == ',') return punct(Tok::kComma, 1);
    if (s_.substr(i_, 2) == ":-") return punct(Tok::kNeck, 2);
    if (s_.substr(i_, 2) == "\\+") return punct(Tok::kNot, 2);
    if (s_.substr(i_, 2) == "\\=") return punct(Tok::kOp, 2);
    if (s_.substr(i_, 2) == "=<") return punct(Tok::kOp, 2);
    if (s_.substr(i_, 2) == ">=") return punct(Tok::kOp, 2);
    if (s_.substr(i_, 2) == "^^") return punct(Tok::kCaret, 2);
    if (c == '=' || c == '>') return punct(Tok::kOp, 1);
    if (c == '<') {
      size_t end = i_ + 1;
      while (end < s_.size() && s_[end] != '>' && !std::isspace(static_cast<unsigned char>(s_[end])) &&
             s_[end] != ',' && s_[end] != ')') {
        ++end;
      }
      if (end < s_.size() && s_[end] == '>' && end > i_ + 1) {
        t.kind = Tok::kIri;
        t.text = std::string(s_.substr(i_ + 1, end - i_ - 1));
        i_ = end + 1;
        return;
      }
      return punct(Tok::kOp, 1);
    }
    if (c == '.') {
      if (i_ + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_ + 1]))) {
        fail("number must start with a digit");
      }
      return punct(Tok::kDot, 1);
    }
    if (c == '@') {
      size_t start = ++i_;
      while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '-')) ++i_;
      if (i_ == start) fail("empty language tag");
      t.kind = Tok::kLang;
      t.text = std::string(s_.substr(start, i_ - start));
      return;
    }
    if (c == '"') {
      size_t start = ++i_;
      while (i_ < s_.size() && s_[i_] != '"') {
        if (s_[i_] == '\n') fail("unterminated string");
        if (s_[i_] == '\\') ++i_;
        ++i_;
      }
      if (i_ >= s_.size()) fail("unterminated string");
      t.kind = Tok::kString;
      try {
        t.text = ntriples::unescape(s_.substr(start, i_ - start));
      } catch (const Error &e) {
        fail("bad escape in string");
      }
      ++i_;
      return;
    }
    if (c == '\'') {
      ++i_;
      while (i_ < s_.size() && s_[i_] != '\'') {
        if (s_[i_] == '\n') fail("unterminated quoted atom");
        if (s_[i_] == '\\' && i_ + 1 < s_.size()) ++i_;
        t.text += s_[i_++];
      }
      if (i_ >= s_.size()) fail("unterminated quoted atom");
      ++i_;
      t.kind = Tok::kQuotedAtom;
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && i_ + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_ + 1])))) {
      size_t start = i_++;
      while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      if (i_ + 1 < s_.size() && s_[i_] == '.' && std::isdigit(static_cast<unsigned char>(s_[i_ + 1]))) {
        ++i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      }
      t.kind = Tok::kNumber;
      t.text = std::string(s_.substr(start, i_ - start));
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = i_;
      while (i_ < s_.size() && name_char(s_[i_])) ++i_;
      std::string word(s_.substr(start, i_ - start));
      bool upper = std::isupper(static_cast<unsigned char>(c)) || c == '_';
      if (!upper && i_ + 1 < s_.size() && s_[i_] == ':' && name_char(s_[i_ + 1]) &&
          s_[i_ + 1] != '-') {
        size_t local = ++i_;
        while (i_ < s_.size() && name_char(s_[i_])) ++i_;
        t.kind = Tok::kCurie;
        t.text = word + ":" + std::string(s_.substr(local, i_ - local));
        return;
      }
      if (upper && word.find('-') != std::string::npos) fail("invalid variable name " + word);
      t.kind = upper ? Tok::kVar : Tok::kAtom;
      t.text = std::move(word);
      return;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view s_;
  size_t i_ = 0;
  size_t line_ = 1;
};

class Parser {
 public:
  Parser(std::vector<Token> toks, PrefixMap prefixes)
      : toks_(std::move(toks)), prefixes_(std::move(prefixes)) {}

  Rulebase rulebase() {
    Rulebase rb;
    while (peek().kind != Tok::kEnd) clause(rb);
    assign_ids(rb);
    return rb;
  }

  Value single_value() {
    Value v = value();
    if (peek().kind != Tok::kEnd) fail("unexpected '" + peek().text + "'");
    return v;
  }

 private:
  const Token &peek(size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  Token next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  [[noreturn]] void fail(const std::string &why) {
    throw Error("syntax-error", why, peek().line);
  }

  void expect(Tok k, const char *what) {
    if (peek().kind != k) fail(std::string("expected ") + what);
    ++pos_;
  }

  std::string resolve_curie(const std::string &curie) {
    size_t colon = curie.find(':');
    auto it = prefixes_.find(curie.substr(0, colon));
    if (it == prefixes_.end()) fail("unknown prefix in " + curie);
    std::string iri = it->second + curie.substr(colon + 1);
    if (!is_absolute_iri(iri)) fail("invalid IRI " + curie);
    return iri;
  }

  Term make_iri(const std::string &text) {
    if (!is_absolute_iri(text)) fail("invalid IRI <" + text + ">");
    return Term::iri(text);
  }

  void directive(Rulebase &rb) {
    // :- prefix(name, <iri>).
    Token name = next();
    if (name.kind != Tok::kAtom || name.text != "prefix") fail("unknown directive");
    expect(Tok::kLParen, "'('");
    Token p = next();
    if (p.kind != Tok::kAtom) fail("expected prefix name");
    expect(Tok::kComma, "','");
    Token iri = next();
    if (iri.kind != Tok::kIri) fail("expected <IRI>");
    make_iri(iri.text);
    expect(Tok::kRParen, "')'");
    expect(Tok::kDot, "'.'");
    rb.prefixes[p.text] = iri.text;
    prefixes_[p.text] = iri.text;
  }

  Value value() {
    Token t = next();
    switch (t.kind) {
      case Tok::kVar:
        if (t.text == "_") return Value::var("_G" + std::to_string(anon_++));
        return Value::var(t.text);
      case Tok::kAtom:
        if (peek().kind == Tok::kLParen) fail("compound terms are not allowed here");
        return Value::atom(t.text);
      case Tok::kQuotedAtom: return Value::atom(t.text);
      case Tok::kIri: return Value::rdf(make_iri(t.text));
      case Tok::kCurie: return Value::rdf(Term::iri(resolve_curie(t.text)));
      case Tok::kNumber:
        return Value::rdf(Term::literal(
            t.text, t.text.find('.') == std::string::npos ? vocab::kXsdInteger : vocab::kXsdDecimal));
      case Tok::kString:
        if (peek().kind == Tok::kLang) return Value::rdf(Term::literal(t.text, {}, next().text));
        if (peek().kind == Tok::kCaret) {
          ++pos_;
          Token dt = next();
          if (dt.kind == Tok::kIri) return Value::rdf(Term::literal(t.text, make_iri(dt.text).value()));
          if (dt.kind == Tok::kCurie) return Value::rdf(Term::literal(t.text, resolve_curie(dt.text)));
          fail("expected datatype IRI");
        }
        return Value::rdf(Term::literal(t.text));
      case Tok::kLBracket: {
        std::vector<Value> items;
        if (peek().kind != Tok::kRBracket) {
          items.push_back(value());
          while (peek().kind == Tok::kComma) {
            ++pos_;
            items.push_back(value());
          }
        }
        expect(Tok::kRBracket, "']'");
        return Value::list(std::move(items));
      }
      default:
        --pos_;
        fail(t.kind == Tok::kEnd ? "unexpected end of input" : "unexpected '" + t.text + "'");
    }
  }

  Atom atom() {
    Token t = next();
    if (t.kind != Tok::kAtom) {
      --pos_;
      fail("expected predicate name");
    }
    Atom a;
    a.predicate = t.text;
    if (peek().kind == Tok::kLParen) {
      ++pos_;
      a.args.push_back(value());
      while (peek().kind == Tok::kComma) {
        ++pos_;
        a.args.push_back(value());
      }
      expect(Tok::kRParen, "')'");
    }
    return a;
  }

  Literal literal() {
    Literal l;
    if (peek().kind == Tok::kNot) {
      ++pos_;
      l.kind = Literal::Kind::kNot;
      l.atom = atom();
      return l;
    }
    if (peek().kind == Tok::kAtom && peek().text == "not" && peek(1).kind == Tok::kLParen) {
      pos_ += 2;
      l.kind = Literal::Kind::kNot;
      l.atom = atom();
      expect(Tok::kRParen, "')'");
      return l;
    }
    if (peek().kind == Tok::kAtom && peek(1).kind != Tok::kOp) {
      l.atom = atom();
      return l;
    }
    l.kind = Literal::Kind::kCompare;
    l.lhs = value();
    Token op = next();
    if (op.kind != Tok::kOp) {
      --pos_;
      fail("expected comparison operator");
    }
    l.op = op.text == "=" ? CompareOp::kEq
           : op.text == "\\=" ? CompareOp::kNe
           : op.text == "<" ? CompareOp::kLt
           : op.text == "=<" ? CompareOp::kLe
           : op.text == ">" ? CompareOp::kGt
                            : CompareOp::kGe;
    l.rhs = value();
    return l;
  }

  void clause(Rulebase &rb) {
    if (peek().kind == Tok::kNeck) {
      ++pos_;
      directive(rb);
      return;
    }
    size_t line = peek().line;
    Atom head = atom();
    std::vector<Literal> body;
    if (peek().kind == Tok::kNeck) {
      ++pos_;
      body.push_back(literal());
      while (peek().kind == Tok::kComma) {
        ++pos_;
        body.push_back(literal());
      }
    }
    expect(Tok::kDot, "'.' at end of clause");

    if (head.predicate == "on" && head.args.size() == 5) {
      EcaRule r;
      r.pattern = std::move(head.args);
      bool in_actions = false;
      for (Literal &l : body) {
        bool action = l.kind == Literal::Kind::kAtom &&
                      is_action(l.atom.predicate, l.atom.args.size());
        if (action) {
          in_actions = true;
          r.actions.push_back(std::move(l.atom));
        } else if (in_actions) {
          throw Error("syntax-error", "condition after action in reaction rule", line);
        } else {
          r.condition.push_back(std::move(l));
        }
      }
      if (r.actions.empty()) throw Error("syntax-error", "reaction rule without actions", line);
      rb.reactions.push_back(std::move(r));
    } else if (head.predicate == "rcvMsg" && head.args.size() == 5) {
      MessagingRule r;
      r.trigger = std::move(head.args);
      for (Literal &l : body) {
        Step s;
        if (l.kind == Literal::Kind::kAtom && l.atom.args.size() == 5 &&
            (l.atom.predicate == "sendMsg" || l.atom.predicate == "rcvMsg")) {
          s.kind = l.atom.predicate == "sendMsg" ? Step::Kind::kSend : Step::Kind::kReceive;
          s.args = std::move(l.atom.args);
        } else {
          s.goal = std::move(l);
        }
        r.body.push_back(std::move(s));
      }
      rb.messaging.push_back(std::move(r));
    } else {
      if (head.predicate == "on" || head.predicate == "rcvMsg" || head.predicate == "rdf" ||
          head.predicate == "rdfs" || head.predicate == "not") {
        throw Error("syntax-error", "reserved predicate " + head.predicate + " in head", line);
      }
      rb.derivations.push_back({"", std::move(head), std::move(body)});
    }
  }

  std::vector<Token> toks_;
  PrefixMap prefixes_;
  size_t pos_ = 0;
  size_t anon_ = 0;
};

void collect_vars(const Value &v, std::set<std::string> &out) {
  if (v.kind == Value::Kind::kVar) out.insert(v.name);
  for (const Value &i : v.items) collect_vars(i, out);
}

void collect_vars(const std::vector<Value> &vs, std::set<std::string> &out) {
  for (const Value &v : vs) collect_vars(v, out);
}

// Variables a literal binds when it succeeds.
void bind_vars(const Literal &l, std::set<std::string> &out) {
  if (l.kind == Literal::Kind::kAtom) collect_vars(l.atom.args, out);
  if (l.kind == Literal::Kind::kCompare && l.op == CompareOp::kEq) {
    collect_vars(l.lhs, out);
    collect_vars(l.rhs, out);
  }
}

std::vector<std::string> placeholders(const std::string &text) {
  std::vector<std::string> out;
  size_t p = 0;
  while ((p = text.find("${", p)) != std::string::npos) {
    size_t e = text.find('}', p);
    if (e == std::string::npos) break;
    out.push_back(text.substr(p + 2, e - p - 2));
    p = e + 1;
  }
  return out;
}

void require_bound(const std::string &rule, const std::set<std::string> &needed,
                   const std::set<std::string> &bound) {
  for (const std::string &v : needed) {
    if (!bound.count(v)) throw Error("range-violation", rule + ": " + v);
  }
}

}  // namespace

Rulebase parse_rules(std::string_view text) {
  Rulebase rb = Parser(Lexer(text).run(), default_prefixes()).rulebase();
  check_rulebase(rb);
  return rb;
}

Value parse_value(std::string_view text, const PrefixMap &prefixes) {
  return Parser(Lexer(text).run(), prefixes).single_value();
}

void assign_ids(Rulebase &r) {
  std::map<std::string, int> seen;
  auto next = [&](const std::string &key) { return key + "#" + std::to_string(seen[key]++); };
  for (DerivationRule &d : r.derivations) {
    d.id = next(d.head.predicate + "/" + std::to_string(d.head.args.size()));
  }
  for (EcaRule &e : r.reactions) {
    const Value &k = e.pattern[0];
    e.id = next("on/" + (k.kind == Value::Kind::kAtom ? k.name : std::string("_")));
  }
  for (MessagingRule &m : r.messaging) {
    const Value &p = m.trigger[3];
    m.id = next("rcvMsg/" + (p.kind == Value::Kind::kAtom ? p.name : std::string("_")));
  }
}

void check_rulebase(const Rulebase &r) {
  for (const DerivationRule &d : r.derivations) {
    std::set<std::string> head, bound;
    collect_vars(d.head.args, head);
    for (const Literal &l : d.body) bind_vars(l, bound);
    require_bound(d.id, head, bound);
  }
  for (const EcaRule &e : r.reactions) {
    if (e.pattern.size() != 5 || e.actions.empty()) {
      throw Error("syntax-error", e.id + ": malformed reaction rule");
    }
    std::set<std::string> bound, needed;
    collect_vars(e.pattern, bound);
    for (const Literal &l : e.condition) bind_vars(l, bound);
    for (const Atom &a : e.actions) {
      if (!is_action(a.predicate, a.args.size())) {
        throw Error("syntax-error", e.id + ": unknown action " + a.predicate);
      }
      collect_vars(a.args, needed);
      if (a.predicate == "update" && a.args[0].kind == Value::Kind::kRdf) {
        for (const std::string &p : placeholders(a.args[0].term.value())) needed.insert(p);
      }
    }
    require_bound(e.id, needed, bound);
  }
  for (const MessagingRule &m : r.messaging) {
    if (m.trigger.size() != 5) throw Error("syntax-error", m.id + ": malformed trigger");
    std::set<std::string> bound;
    collect_vars(m.trigger, bound);
    for (const Step &s : m.body) {
      switch (s.kind) {
        case Step::Kind::kGoal: bind_vars(s.goal, bound); break;
        case Step::Kind::kSend: {
          std::set<std::string> needed;
          collect_vars(s.args, needed);
          require_bound(m.id, needed, bound);
          break;
        }
        case Step::Kind::kReceive:
          if (!m.trigger[0].is_var() || s.args[0] != m.trigger[0]) {
            throw Error("locality-violation", m.id);
          }
          collect_vars(s.args, bound);
          break;
      }
    }
  }
}

std::string print_rules(const Rulebase &r) {
  std::string out;
  for (const auto &[k, v] : r.prefixes) out += ":- prefix(" + k + ", <" + v + ">).\n";
  auto body = [](const std::vector<std::string> &parts) {
    std::string b;
    for (size_t i = 0; i < parts.size(); ++i) b += (i ? ",\n    " : " :-\n    ") + parts[i];
    return b + ".\n";
  };
  for (const DerivationRule &d : r.derivations) {
    std::vector<std::string> parts;
    for (const Literal &l : d.body) parts.push_back(to_string(l));
    out += to_string(d.head) + (parts.empty() ? ".\n" : body(parts));
  }
  for (const EcaRule &e : r.reactions) {
    std::vector<std::string> parts;
    for (const Literal &l : e.condition) parts.push_back(to_string(l));
    for (const Atom &a : e.actions) parts.push_back(to_string(a));
    out += to_string(Atom{"on", e.pattern}) + body(parts);
  }
  for (const MessagingRule &m : r.messaging) {
    std::vector<std::string> parts;
    for (const Step &s : m.body) {
      switch (s.kind) {
        case Step::Kind::kGoal: parts.push_back(to_string(s.goal)); break;
        case Step::Kind::kSend: parts.push_back(to_string(Atom{"sendMsg", s.args})); break;
        case Step::Kind::kReceive: parts.push_back(to_string(Atom{"rcvMsg", s.args})); break;
      }
    }
    out += to_string(Atom{"rcvMsg", m.trigger}) + (parts.empty() ? ".\n" : body(parts));
  }
  return out;
}

}  // namespace semflow::rules
