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

#include "semflow/interchange/interchange.h"

#include <map>

#include "semflow/base/error.h"

namespace semflow::interchange {

using rules::Atom;
using rules::CompareOp;
using rules::Literal;
using rules::Rulebase;
using rules::Step;
using rules::Value;

namespace {

using Attrs = std::vector<std::pair<std::string, std::string>>;

void write_value(xml::Writer &w, const Value &v) {
  switch (v.kind) {
    case Value::Kind::kVar:
      w.leaf("Var", v.name);
      break;
    case Value::Kind::kAtom:
      w.leaf("Const", v.name);
      break;
    case Value::Kind::kRdf:
      if (v.term.is_iri()) {
        w.leaf("Iri", v.term.value());
      } else {
        Attrs a;
        if (!v.term.datatype().empty()) a.emplace_back("datatype", v.term.datatype());
        if (!v.term.lang().empty()) a.emplace_back("lang", v.term.lang());
        w.leaf("Data", v.term.value(), a);
      }
      break;
    case Value::Kind::kList:
      if (v.items.empty()) {
        w.empty("List");
      } else {
        w.open("List");
        for (const Value &i : v.items) write_value(w, i);
        w.close();
      }
      break;
  }
}

void write_values(xml::Writer &w, std::string_view name, const std::vector<Value> &vs) {
  w.open(name);
  for (const Value &v : vs) write_value(w, v);
  w.close();
}

void write_atom(xml::Writer &w, const Atom &a) {
  Attrs attrs{{"pred", a.predicate}};
  if (a.args.empty()) {
    w.empty("Atom", attrs);
    return;
  }
  w.open("Atom", attrs);
  for (const Value &v : a.args) write_value(w, v);
  w.close();
}

void write_literal(xml::Writer &w, const Literal &l) {
  switch (l.kind) {
    case Literal::Kind::kAtom:
      write_atom(w, l.atom);
      break;
    case Literal::Kind::kNot:
      w.open("Naf");
      write_atom(w, l.atom);
      w.close();
      break;
    case Literal::Kind::kCompare:
      w.open("Builtin", Attrs{{"op", std::string(rules::to_string(l.op))}});
      write_value(w, l.lhs);
      write_value(w, l.rhs);
      w.close();
      break;
  }
}

// Reader side. The document has been schema-validated, so shapes are
// known; only values the schema cannot see are checked here.

[[noreturn]] void violation(const std::string &path, const std::string &why) {
  throw Error("schema-violation", path + ": " + why);
}

Value read_value(const xml::Element &e, const std::string &path, size_t &anon) {
  if (e.name == "Var") {
    if (e.text.empty()) violation(path, "empty variable name");
    if (e.text == "_") return Value::var("_G" + std::to_string(anon++));
    return Value::var(e.text);
  }
  if (e.name == "Const") return Value::atom(e.text);
  if (e.name == "Iri") {
    try {
      return Value::rdf(Term::iri(e.text));
    } catch (const Error &) {
      violation(path, "invalid IRI " + e.text);
    }
  }
  if (e.name == "Data") {
    const std::string *dt = e.attr("datatype");
    const std::string *lang = e.attr("lang");
    if (dt && lang) violation(path, "datatype and lang are exclusive");
    return Value::rdf(Term::literal(e.text, dt ? *dt : "", lang ? *lang : ""));
  }
  std::vector<Value> items;
  std::map<std::string, size_t> seen;
  for (const xml::Element &c : e.children) {
    items.push_back(read_value(c, path + "/" + c.name + "[" + std::to_string(++seen[c.name]) + "]", anon));
  }
  return Value::list(std::move(items));
}

std::vector<Value> read_values(const xml::Element &e, const std::string &path, size_t &anon) {
  std::vector<Value> out;
  std::map<std::string, size_t> seen;
  for (const xml::Element &c : e.children) {
    out.push_back(read_value(c, path + "/" + c.name + "[" + std::to_string(++seen[c.name]) + "]", anon));
  }
  return out;
}

Atom read_atom(const xml::Element &e, const std::string &path, size_t &anon) {
  return Atom{*e.attr("pred"), read_values(e, path, anon)};
}

CompareOp read_op(const std::string &op, const std::string &path) {
  for (CompareOp o : {CompareOp::kEq, CompareOp::kNe, CompareOp::kLt, CompareOp::kLe,
                      CompareOp::kGt, CompareOp::kGe}) {
    if (rules::to_string(o) == op) return o;
  }
  violation(path, "unknown builtin " + op);
}

Literal read_literal(const xml::Element &e, const std::string &path, size_t &anon) {
  Literal l;
  if (e.name == "Atom") {
    l.atom = read_atom(e, path, anon);
  } else if (e.name == "Naf") {
    l.kind = Literal::Kind::kNot;
    l.atom = read_atom(e.children.front(), path + "/Atom[1]", anon);
  } else {
    l.kind = Literal::Kind::kCompare;
    l.op = read_op(*e.attr("op"), path);
    l.lhs = read_value(e.children[0], path + "/" + e.children[0].name + "[1]", anon);
    l.rhs = read_value(e.children[1], path + "/" + e.children[1].name +
                                          (e.children[0].name == e.children[1].name ? "[2]" : "[1]"),
                     anon);
  }
  return l;
}

// Paths of each child element, numbered per name like the validator.
std::vector<std::string> child_paths(const xml::Element &e, const std::string &path) {
  std::vector<std::string> out;
  std::map<std::string, size_t> seen;
  for (const xml::Element &c : e.children) {
    out.push_back(path + "/" + c.name + "[" + std::to_string(++seen[c.name]) + "]");
  }
  return out;
}

}  // namespace

const Schema &schema() {
  static const Schema s = Schema::parse(schema_text());
  return s;
}

std::string export_rules(const Rulebase &rb) {
  xml::Writer w;
  w.open("RuleBase", Attrs{{"xmlns", std::string(kNamespace)}});
  for (const auto &[name, iri] : rb.prefixes) w.empty("Prefix", {{"name", name}, {"iri", iri}});
  for (const rules::DerivationRule &r : rb.derivations) {
    w.open("Rule", Attrs{{"id", r.id}});
    w.open("Head");
    write_atom(w, r.head);
    w.close();
    if (!r.body.empty()) {
      w.open("Body");
      for (const Literal &l : r.body) write_literal(w, l);
      w.close();
    }
    w.close();
  }
  for (const rules::EcaRule &r : rb.reactions) {
    w.open("ReactionRule", Attrs{{"id", r.id}});
    write_values(w, "On", r.pattern);
    if (!r.condition.empty()) {
      w.open("If");
      for (const Literal &l : r.condition) write_literal(w, l);
      w.close();
    }
    w.open("Do");
    for (const Atom &a : r.actions) write_atom(w, a);
    w.close();
    w.close();
  }
  for (const rules::MessagingRule &r : rb.messaging) {
    w.open("ReactionRule", Attrs{{"id", r.id}});
    write_values(w, "Receive", r.trigger);
    for (const Step &s : r.body) {
      switch (s.kind) {
        case Step::Kind::kGoal: write_literal(w, s.goal); break;
        case Step::Kind::kSend: write_values(w, "Send", s.args); break;
        case Step::Kind::kReceive: write_values(w, "Receive", s.args); break;
      }
    }
    w.close();
  }
  w.close();
  return w.str();
}

void validate_document(std::string_view text) { schema().validate(xml::parse(text)); }

Rulebase import_rules(std::string_view text) {
  xml::Element root = xml::parse(text);
  schema().validate(root);
  Rulebase rb;
  size_t anon = 0;
  std::vector<std::string> paths = child_paths(root, "/RuleBase");
  for (size_t i = 0; i < root.children.size(); ++i) {
    const xml::Element &e = root.children[i];
    const std::string &path = paths[i];
    if (e.name == "Prefix") {
      rb.prefixes[*e.attr("name")] = *e.attr("iri");
    } else if (e.name == "Rule") {
      rules::DerivationRule r;
      std::vector<std::string> cp = child_paths(e, path);
      r.head = read_atom(e.children[0].children.front(), cp[0] + "/Atom[1]", anon);
      if (e.children.size() > 1) {
        std::vector<std::string> bp = child_paths(e.children[1], cp[1]);
        for (size_t k = 0; k < e.children[1].children.size(); ++k) {
          r.body.push_back(read_literal(e.children[1].children[k], bp[k], anon));
        }
      }
      rb.derivations.push_back(std::move(r));
    } else if (e.children.front().name == "On") {
      rules::EcaRule r;
      std::vector<std::string> cp = child_paths(e, path);
      r.pattern = read_values(e.children[0], cp[0], anon);
      for (size_t k = 1; k < e.children.size(); ++k) {
        const xml::Element &part = e.children[k];
        std::vector<std::string> pp = child_paths(part, cp[k]);
        for (size_t j = 0; j < part.children.size(); ++j) {
          if (part.name == "If") {
            r.condition.push_back(read_literal(part.children[j], pp[j], anon));
          } else {
            r.actions.push_back(read_atom(part.children[j], pp[j], anon));
          }
        }
      }
      rb.reactions.push_back(std::move(r));
    } else {
      rules::MessagingRule r;
      std::vector<std::string> cp = child_paths(e, path);
      r.trigger = read_values(e.children[0], cp[0], anon);
      for (size_t k = 1; k < e.children.size(); ++k) {
        const xml::Element &c = e.children[k];
        Step s;
        if (c.name == "Send" || c.name == "Receive") {
          s.kind = c.name == "Send" ? Step::Kind::kSend : Step::Kind::kReceive;
          s.args = read_values(c, cp[k], anon);
        } else {
          s.goal = read_literal(c, cp[k], anon);
        }
        r.body.push_back(std::move(s));
      }
      rb.messaging.push_back(std::move(r));
    }
  }
  rules::assign_ids(rb);
  rules::check_rulebase(rb);
  return rb;
}

std::vector<MappingRecord> translate_report(const Rulebase &rb) {
  std::vector<MappingRecord> out;
  size_t rule = 0;
  size_t reaction = 0;
  for (const rules::DerivationRule &r : rb.derivations) {
    out.push_back({r.id, "derivation", "/RuleBase/Rule[" + std::to_string(++rule) + "]"});
  }
  for (const rules::EcaRule &r : rb.reactions) {
    out.push_back({r.id, "reaction", "/RuleBase/ReactionRule[" + std::to_string(++reaction) + "]"});
  }
  for (const rules::MessagingRule &r : rb.messaging) {
    out.push_back(
        {r.id, "messaging", "/RuleBase/ReactionRule[" + std::to_string(++reaction) + "]"});
  }
  return out;
}

}  // namespace semflow::interchange
