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

#include "semflow/procdef/definition.h"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <set>

#include "semflow/base/error.h"
#include "semflow/sparql/query.h"

namespace semflow::procdef {

std::string_view to_string(NodeKind k) {
  switch (k) {
    case NodeKind::kStart: return "start";
    case NodeKind::kEnd: return "end";
    case NodeKind::kTask: return "task";
    case NodeKind::kDecision: return "decision";
    case NodeKind::kFork: return "fork";
    case NodeKind::kJoin: return "join";
  }
  return "?";
}

const Node *ProcessDefinition::node(std::string_view n) const {
  for (const Node &x : nodes) {
    if (x.name == n) return &x;
  }
  return nullptr;
}

const Swimlane *ProcessDefinition::swimlane(std::string_view n) const {
  for (const Swimlane &x : swimlanes) {
    if (x.name == n) return &x;
  }
  return nullptr;
}

std::vector<const Transition *> ProcessDefinition::outgoing(std::string_view n) const {
  std::vector<const Transition *> out;
  for (const Transition &t : transitions) {
    if (t.from == n) out.push_back(&t);
  }
  std::sort(out.begin(), out.end(),
            [](const Transition *a, const Transition *b) { return a->index < b->index; });
  return out;
}

size_t ProcessDefinition::in_degree(std::string_view n) const {
  return std::count_if(transitions.begin(), transitions.end(),
                       [&](const Transition &t) { return t.to == n; });
}

PrefixMap ProcessDefinition::query_prefixes() const {
  PrefixMap p = default_prefixes();
  for (const auto &[k, v] : prefixes) p[k] = v;
  return p;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Token {
  std::string text;
  bool quoted = false;
};

struct Statement {
  std::vector<Token> tokens;
  size_t line = 0;
  bool indented = false;
};

[[noreturn]] void syntax(const std::string &why, size_t line) {
  throw Error("syntax-error", why, line);
}

std::vector<Statement> tokenize(std::string_view s) {
  std::vector<Statement> out;
  Statement cur;
  size_t line = 1;
  size_t i = 0;
  bool line_start = true;
  auto flush = [&] {
    if (!cur.tokens.empty()) out.push_back(std::move(cur));
    cur = Statement{};
  };
  while (i < s.size()) {
    char c = s[i];
    if (c == '\n') {
      flush();
      ++line;
      ++i;
      line_start = true;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      if (line_start && cur.tokens.empty() && c != '\r') cur.indented = true;
      ++i;
      continue;
    }
    line_start = false;
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') ++i;
      continue;
    }
    if (cur.tokens.empty()) cur.line = line;
    if (s.substr(i, 3) == "\"\"\"") {
      size_t end = s.find("\"\"\"", i + 3);
      if (end == std::string_view::npos) syntax("unterminated \"\"\" string", line);
      std::string body(s.substr(i + 3, end - i - 3));
      line += std::count(body.begin(), body.end(), '\n');
      // Strip the layout newlines around a block string.
      size_t a = body.find_first_not_of(" \t\r\n");
      size_t b = body.find_last_not_of(" \t\r\n");
      body = a == std::string::npos ? "" : body.substr(a, b - a + 1);
      cur.tokens.push_back({std::move(body), true});
      i = end + 3;
      continue;
    }
    if (c == '"') {
      std::string body;
      ++i;
      while (i < s.size() && s[i] != '"') {
        if (s[i] == '\n') syntax("unterminated string", line);
        if (s[i] == '\\' && i + 1 < s.size()) {
          char e = s[++i];
          body += e == 'n' ? '\n' : e == 't' ? '\t' : e;
        } else {
          body += s[i];
        }
        ++i;
      }
      if (i >= s.size()) syntax("unterminated string", line);
      ++i;
      cur.tokens.push_back({std::move(body), true});
      continue;
    }
    size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])) && s[i] != '#') {
      ++i;
    }
    cur.tokens.push_back({std::string(s.substr(start, i - start)), false});
  }
  flush();
  return out;
}

std::string with_placeholders(std::string text) {
  size_t p;
  while ((p = text.find("${")) != std::string::npos) {
    size_t e = text.find('}', p);
    if (e == std::string::npos) break;
    text.replace(p, e - p + 1, "<urn:semflow:placeholder>");
  }
  return text;
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) {
    return false;
  }
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  });
}

class DefinitionParser {
 public:
  ProcessDefinition run(std::string_view text) {
    for (const Statement &st : tokenize(text)) statement(st);
    if (!seen_header_) syntax("missing 'process <name> version <n>' header", 1);
    return std::move(d_);
  }

 private:
  const std::string &word(const Statement &st, size_t i, const char *what) {
    if (i >= st.tokens.size()) syntax(std::string("expected ") + what, st.line);
    if (st.tokens[i].quoted) syntax(std::string("expected ") + what + ", got a string", st.line);
    return st.tokens[i].text;
  }

  std::string ident(const Statement &st, size_t i, const char *what) {
    const std::string &w = word(st, i, what);
    if (!is_identifier(w)) syntax(std::string("invalid ") + what + " '" + w + "'", st.line);
    return w;
  }

  const std::string &string_arg(const Statement &st, size_t i, const char *what) {
    if (i >= st.tokens.size() || !st.tokens[i].quoted) {
      syntax(std::string("expected quoted ") + what, st.line);
    }
    return st.tokens[i].text;
  }

  std::string iri(const Statement &st, size_t i) {
    const std::string &w = word(st, i, "IRI");
    if (w.size() >= 2 && w.front() == '<' && w.back() == '>') {
      std::string v = w.substr(1, w.size() - 2);
      if (!is_absolute_iri(v)) syntax("invalid IRI " + w, st.line);
      return v;
    }
    size_t colon = w.find(':');
    if (colon == std::string::npos) syntax("expected IRI, got '" + w + "'", st.line);
    PrefixMap p = d_.query_prefixes();
    auto it = p.find(w.substr(0, colon));
    if (it == p.end()) syntax("unknown prefix in " + w, st.line);
    std::string v = it->second + w.substr(colon + 1);
    if (!is_absolute_iri(v)) syntax("invalid IRI " + w, st.line);
    return v;
  }

  void statement(const Statement &st) {
    const std::string &kw = word(st, 0, "keyword");
    if (!seen_header_ && kw != "process") {
      syntax("definition must start with 'process'", st.line);
    }
    if (kw == "process") {
      if (seen_header_) syntax("duplicate process header", st.line);
      seen_header_ = true;
      d_.name = ident(st, 1, "process name");
      if (word(st, 2, "'version'") != "version") syntax("expected 'version'", st.line);
      const std::string &v = word(st, 3, "version number");
      if (v.empty() || !std::all_of(v.begin(), v.end(), ::isdigit) || v.size() > 15) {
        syntax("version must be a non-negative integer", st.line);
      }
      d_.version = std::stoll(v);
      expect_end(st, 4);
    } else if (kw == "prefix") {
      std::string name = word(st, 1, "prefix name");
      if (!name.empty() && name.back() == ':') name.pop_back();
      d_.prefixes[name] = iri(st, 2);
      expect_end(st, 3);
    } else if (kw == "swimlane") {
      Swimlane lane;
      lane.name = ident(st, 1, "swimlane name");
      const std::string &mode = word(st, 2, "'role' or 'query'");
      if (mode == "role") {
        lane.kind = Swimlane::Kind::kStaticRole;
        lane.role = iri(st, 3);
      } else if (mode == "query") {
        lane.kind = Swimlane::Kind::kSemanticQuery;
        lane.query = string_arg(st, 3, "query");
      } else {
        syntax("expected 'role' or 'query'", st.line);
      }
      expect_end(st, 4);
      d_.swimlanes.push_back(std::move(lane));
    } else if (kw == "start" || kw == "end" || kw == "decision" || kw == "fork" ||
               kw == "join") {
      Node n;
      n.name = ident(st, 1, "node name");
      n.kind = kw == "start"      ? NodeKind::kStart
               : kw == "end"      ? NodeKind::kEnd
               : kw == "decision" ? NodeKind::kDecision
               : kw == "fork"     ? NodeKind::kFork
                                  : NodeKind::kJoin;
      expect_end(st, 2);
      d_.nodes.push_back(std::move(n));
    } else if (kw == "task") {
      task(st);
    } else if (kw == "action") {
      if (d_.nodes.empty() || !d_.nodes.back().task || !st.indented) {
        syntax("'action' must be indented under a task", st.line);
      }
      ActionBinding a;
      a.name = ident(st, 1, "action name");
      for (size_t i = 2; i < st.tokens.size(); ++i) a.args.push_back(st.tokens[i].text);
      d_.nodes.back().task->actions.push_back(std::move(a));
    } else if (kw == "transition") {
      transition(st);
    } else {
      syntax("unknown statement '" + kw + "'", st.line);
    }
  }

  void task(const Statement &st) {
    Node n;
    n.kind = NodeKind::kTask;
    n.name = ident(st, 1, "task name");
    TaskDefinition t;
    bool lane = false;
    for (size_t i = 2; i < st.tokens.size(); ++i) {
      const std::string &k = word(st, i, "task attribute");
      if (k == "lane") {
        t.swimlane = ident(st, ++i, "swimlane name");
        lane = true;
      } else if (k == "form") {
        t.form = ident(st, ++i, "form name");
      } else if (k == "annotation") {
        t.annotation = iri(st, ++i);
      } else if (k == "subject") {
        t.subject = ident(st, ++i, "subject variable");
      } else if (k == "notify") {
        t.notify = true;
      } else {
        syntax("unknown task attribute '" + k + "'", st.line);
      }
    }
    if (!lane) syntax("task '" + n.name + "' needs a lane", st.line);
    n.task = std::move(t);
    d_.nodes.push_back(std::move(n));
  }

  void transition(const Statement &st) {
    Transition t;
    t.from = ident(st, 1, "source node");
    if (word(st, 2, "'->'") != "->") syntax("expected '->'", st.line);
    t.to = ident(st, 3, "target node");
    t.name = t.to;
    for (size_t i = 4; i < st.tokens.size(); ++i) {
      const std::string &k = word(st, i, "transition attribute");
      if (k == "default") {
        t.is_default = true;
      } else if (k == "guard") {
        t.guard = string_arg(st, ++i, "guard");
      } else if (k == "name") {
        t.name = ident(st, ++i, "transition name");
      } else {
        syntax("unknown transition attribute '" + k + "'", st.line);
      }
    }
    t.index = d_.transitions.size();
    d_.transitions.push_back(std::move(t));
  }

  void expect_end(const Statement &st, size_t n) {
    if (st.tokens.size() > n) syntax("unexpected '" + st.tokens[n].text + "'", st.line);
  }

  ProcessDefinition d_;
  bool seen_header_ = false;
};

}  // namespace

ProcessDefinition parse_definition(std::string_view text) {
  return DefinitionParser().run(text);
}

std::string serialize_definition(const ProcessDefinition &d) {
  std::string out = "process " + d.name + " version " + std::to_string(d.version) + "\n";
  for (const auto &[k, v] : d.prefixes) out += "prefix " + k + " <" + v + ">\n";
  for (const Swimlane &l : d.swimlanes) {
    out += "swimlane " + l.name;
    if (l.kind == Swimlane::Kind::kStaticRole) {
      out += " role <" + l.role + ">\n";
    } else {
      out += " query \"\"\"" + l.query + "\"\"\"\n";
    }
  }
  for (const Node &n : d.nodes) {
    out += std::string(to_string(n.kind)) + " " + n.name;
    if (n.task) {
      const TaskDefinition &t = *n.task;
      out += " lane " + t.swimlane;
      if (!t.form.empty()) out += " form " + t.form;
      if (!t.annotation.empty()) out += " annotation <" + t.annotation + ">";
      if (!t.subject.empty()) out += " subject " + t.subject;
      if (t.notify) out += " notify";
      out += "\n";
      for (const ActionBinding &a : t.actions) {
        out += "  action " + a.name;
        for (const std::string &arg : a.args) out += " " + arg;
        out += "\n";
      }
    } else {
      out += "\n";
    }
  }
  std::vector<const Transition *> ordered;
  for (const Transition &t : d.transitions) ordered.push_back(&t);
  std::sort(ordered.begin(), ordered.end(),
            [](const Transition *a, const Transition *b) { return a->index < b->index; });
  for (const Transition *t : ordered) {
    out += "transition " + t->from + " -> " + t->to;
    if (t->name != t->to) out += " name " + t->name;
    if (t->is_default) out += " default";
    if (t->guard) out += " guard \"\"\"" + *t->guard + "\"\"\"";
    out += "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Validation

std::vector<std::string> validate(const ProcessDefinition &d) {
  std::vector<std::string> v;
  std::set<std::string> names;
  const Node *start = nullptr;
  size_t starts = 0, ends = 0;
  for (const Node &n : d.nodes) {
    if (!names.insert(n.name).second) v.push_back("duplicate-node(" + n.name + ")");
    if (n.kind == NodeKind::kStart) {
      ++starts;
      if (!start) start = &n;
    }
    if (n.kind == NodeKind::kEnd) ++ends;
  }
  if (starts == 0) v.push_back("missing-start");
  if (starts > 1) v.push_back("multiple-start");
  if (ends == 0) v.push_back("missing-end");

  std::set<std::string> lanes;
  PrefixMap prefixes = d.query_prefixes();
  for (const Swimlane &l : d.swimlanes) {
    if (!lanes.insert(l.name).second) v.push_back("duplicate-swimlane(" + l.name + ")");
    if (l.kind == Swimlane::Kind::kSemanticQuery) {
      bool ok = false;
      try {
        sparql::Query q = sparql::parse_query(with_placeholders(l.query), prefixes);
        ok = q.form == sparql::QueryForm::kSelect && q.projection.size() == 1;
      } catch (const Error &) {
      }
      if (!ok) v.push_back("invalid-assignment-query(" + l.name + ")");
    }
  }

  for (const Node &n : d.nodes) {
    if (n.task && !lanes.count(n.task->swimlane)) {
      v.push_back("unknown-swimlane(" + n.task->swimlane + ")");
    }
  }

  std::map<std::string, std::set<std::string>> names_per_source;
  for (const Transition &t : d.transitions) {
    std::string label = t.from + "->" + t.to;
    if (!names.count(t.from)) v.push_back("unknown-node(" + t.from + ")");
    if (!names.count(t.to)) v.push_back("unknown-node(" + t.to + ")");
    if (!names_per_source[t.from].insert(t.name).second) {
      v.push_back("duplicate-transition-name(" + t.from + ":" + t.name + ")");
    }
    if (t.guard) {
      bool ok = false;
      try {
        ok = sparql::parse_query(with_placeholders(*t.guard), prefixes).form == sparql::QueryForm::kAsk;
      } catch (const Error &) {
      }
      if (!ok) v.push_back("invalid-guard(" + label + ")");
    }
  }

  for (const Node &n : d.nodes) {
    auto out = d.outgoing(n.name);
    size_t in = d.in_degree(n.name);
    size_t defaults = std::count_if(out.begin(), out.end(),
                                    [](const Transition *t) { return t->is_default; });
    if (defaults > 1) v.push_back("multiple-default(" + n.name + ")");
    switch (n.kind) {
      case NodeKind::kStart:
        if (in > 0) v.push_back("start-has-incoming(" + n.name + ")");
        break;
      case NodeKind::kEnd:
        if (!out.empty()) v.push_back("end-has-outgoing(" + n.name + ")");
        break;
      case NodeKind::kJoin:
        if (in < 2) v.push_back("join-in-degree(" + n.name + ")");
        break;
      case NodeKind::kFork:
        if (out.size() < 2) v.push_back("fork-out-degree(" + n.name + ")");
        break;
      case NodeKind::kDecision: {
        bool all_guarded = std::all_of(out.begin(), out.end(), [](const Transition *t) {
          return t->guard.has_value() || t->is_default;
        });
        if (defaults == 0 && !all_guarded) {
          v.push_back("decision-without-default(" + n.name + ")");
        }
        break;
      }
      case NodeKind::kTask:
        break;
    }
    if (n.kind != NodeKind::kEnd && out.empty()) v.push_back("dead-end(" + n.name + ")");
  }

  if (start) {
    std::set<std::string> seen{start->name};
    std::deque<std::string> queue{start->name};
    while (!queue.empty()) {
      std::string cur = queue.front();
      queue.pop_front();
      for (const Transition *t : d.outgoing(cur)) {
        if (seen.insert(t->to).second) queue.push_back(t->to);
      }
    }
    for (const Node &n : d.nodes) {
      if (!seen.count(n.name)) v.push_back("unreachable(" + n.name + ")");
    }
  }
  return v;
}

// ---------------------------------------------------------------------------
// URIs and registration

ProcessDefinition mint_uris(ProcessDefinition d, std::string_view base) {
  if (base.empty() || (base.back() != '/' && base.back() != '#') ||
      !is_absolute_iri(base)) {
    throw Error("invalid-namespace", std::string(base));
  }
  d.uri = std::string(base) + "process/" + d.name + "/" + std::to_string(d.version);
  for (Node &n : d.nodes) n.uri = d.uri + "/node/" + n.name;
  for (Transition &t : d.transitions) t.uri = d.uri + "/transition/" + std::to_string(t.index);
  for (Swimlane &l : d.swimlanes) l.uri = d.uri + "/swimlane/" + l.name;
  return d;
}

std::vector<Triple> describe(const ProcessDefinition &d) {
  if (d.uri.empty()) throw Error("not-minted", d.name);
  auto iri = [](const std::string &s) { return Term::iri(s); };
  auto pm = [](std::string_view local) { return Term::iri(vocab::pm(local)); };
  const Term type = Term::iri(vocab::kRdfType);
  const Term def = iri(d.uri);
  std::vector<Triple> out;
  out.push_back({def, type, pm("ProcessDefinition")});
  out.push_back({def, pm("name"), Term::literal(d.name)});
  out.push_back({def, pm("version"), Term::integer(d.version)});
  for (const Swimlane &l : d.swimlanes) {
    out.push_back({def, pm("hasSwimlane"), iri(l.uri)});
    out.push_back({iri(l.uri), pm("name"), Term::literal(l.name)});
    if (l.kind == Swimlane::Kind::kStaticRole) {
      out.push_back({iri(l.uri), pm("role"), iri(l.role)});
    }
  }
  for (const Node &n : d.nodes) {
    Term node = iri(n.uri);
    out.push_back({def, pm("hasNode"), node});
    out.push_back({node, type, pm("Node")});
    out.push_back({node, pm("name"), Term::literal(n.name)});
    out.push_back({node, pm("nodeKind"), Term::literal(std::string(to_string(n.kind)))});
    if (n.task) {
      if (const Swimlane *l = d.swimlane(n.task->swimlane)) {
        out.push_back({node, pm("inSwimlane"), iri(l->uri)});
      }
      if (!n.task->form.empty()) {
        out.push_back({node, pm("form"), Term::literal(n.task->form)});
      }
      if (!n.task->annotation.empty()) {
        out.push_back({node, pm("annotation"), iri(n.task->annotation)});
      }
    }
  }
  for (const Transition &t : d.transitions) {
    Term tr = iri(t.uri);
    out.push_back({def, pm("hasTransition"), tr});
    out.push_back({tr, type, pm("Transition")});
    if (const Node *f = d.node(t.from)) out.push_back({tr, pm("from"), iri(f->uri)});
    if (const Node *x = d.node(t.to)) out.push_back({tr, pm("to"), iri(x->uri)});
    out.push_back({tr, pm("name"), Term::literal(t.name)});
    if (t.is_default) out.push_back({tr, pm("isDefault"), Term::boolean(true)});
    if (t.guard) out.push_back({tr, pm("guard"), Term::literal(*t.guard)});
  }
  return out;
}

uint64_t register_definition(const ProcessDefinition &d, TripleStore &store) {
  std::vector<Triple> triples = describe(d);
  const Triple &marker = triples.front();
  store.write([&](WriteTxn &txn) {
    if (txn.view().contains(marker)) {
      throw Error("duplicate-version", d.name + "/" + std::to_string(d.version));
    }
    for (const Triple &t : triples) txn.insert(t);
  });
  return store.revision();
}

}  // namespace semflow::procdef
