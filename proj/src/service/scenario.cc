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

#include "semflow/service/scenario.h"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "semflow/base/error.h"

namespace semflow::service {
namespace {

using nlohmann::json;

std::string read_file(const std::filesystem::path &p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("io-error", p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines_of(std::string_view text) {
  std::vector<std::string> out;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string line(text.substr(pos, eol - pos));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(line);
    pos = eol + 1;
  }
  return out;
}

// First word and the rest with leading blanks removed.
std::pair<std::string, std::string> take_word(const std::string &s) {
  size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {"", ""};
  size_t e = s.find_first_of(" \t", b);
  if (e == std::string::npos) return {s.substr(b), ""};
  size_t r = s.find_first_not_of(" \t", e);
  return {s.substr(b, e - b), r == std::string::npos ? "" : s.substr(r)};
}

std::string field(std::string_view line, size_t n) {
  size_t pos = 0;
  for (size_t i = 0; i < n; ++i) {
    pos = line.find('\t', pos);
    if (pos == std::string_view::npos) return "";
    ++pos;
  }
  size_t end = line.find('\t', pos);
  return std::string(line.substr(pos, end == std::string_view::npos ? end : end - pos));
}

struct ScriptError {
  std::string why;
  size_t line;
};

bool is_method(const std::string &w) {
  return w == "GET" || w == "POST" || w == "PUT" || w == "DELETE";
}

}  // namespace

std::string normalize_log(std::string_view log) {
  std::string out;
  for (const std::string &line : lines_of(log)) {
    if (line.empty()) continue;
    size_t last = line.rfind('\t');
    out += (last == std::string::npos ? line : line.substr(0, last + 1) + "*") + "\n";
  }
  return out;
}

std::vector<std::string> log_kinds(std::string_view log) {
  std::vector<std::string> out;
  for (const std::string &line : lines_of(log)) {
    if (!line.empty()) out.push_back(field(line, 1));
  }
  return out;
}

ScenarioResult ScenarioRunner::run(std::string_view script) {
  ScenarioResult result;
  std::map<std::string, std::string> tokens;
  Response last;
  std::vector<std::string> last_events;
  bool have_last = false;

  std::vector<std::string> lines = lines_of(script);
  auto substitute = [&](const std::string &s, size_t line_no) {
    std::string out;
    size_t pos = 0;
    while (pos < s.size()) {
      size_t at = s.find("${", pos);
      if (at == std::string::npos) {
        out += s.substr(pos);
        break;
      }
      size_t close = s.find('}', at);
      if (close == std::string::npos) throw ScriptError{"unclosed ${", line_no};
      std::string name = s.substr(at + 2, close - at - 2);
      out += s.substr(pos, at - pos);
      auto it = result.vars.find(name);
      // Unknown names pass through for the server's own placeholders.
      out += it != result.vars.end() ? it->second : s.substr(at, close - at + 1);
      pos = close + 1;
    }
    return out;
  };
  auto fail = [&](size_t line_no, const std::string &why) {
    result.ok = false;
    result.failures.push_back("line " + std::to_string(line_no) + ": " + why);
  };
  auto need_last = [&](size_t line_no) {
    if (!have_last) throw ScriptError{"EXPECT or CAPTURE before any call", line_no};
  };
  auto call = [&](const std::string &user, const std::string &method, const std::string &target,
                  const std::string &body) {
    Request r;
    r.method = method;
    size_t q = target.find('?');
    r.path = target.substr(0, q);
    if (q != std::string::npos) {
      std::string qs = target.substr(q + 1);
      size_t pos = 0;
      while (pos <= qs.size()) {
        size_t amp = qs.find('&', pos);
        if (amp == std::string::npos) amp = qs.size();
        std::string kv = qs.substr(pos, amp - pos);
        size_t eq = kv.find('=');
        if (!kv.empty()) {
          r.query[wiki::url_decode(kv.substr(0, eq))] =
              eq == std::string::npos ? "" : wiki::url_decode(kv.substr(eq + 1));
        }
        pos = amp + 1;
      }
    }
    if (!user.empty()) {
      auto it = tokens.find(user);
      if (it != tokens.end()) r.headers["authorization"] = "Bearer " + it->second;
    }
    r.body = body;
    uint64_t before = svc_.engine().last_seq();
    last = svc_.handle(r);
    uint64_t after = svc_.engine().last_seq();
    last_events.clear();
    for (const rules::Event &e : svc_.engine().events(before)) {
      if (e.seq <= after) last_events.push_back(e.kind);
    }
    have_last = true;
    ++result.calls;
  };
  auto pointer = [&](const std::string &p, size_t line_no) -> json {
    json doc;
    try {
      doc = json::parse(last.body);
    } catch (const json::exception &) {
      throw Error("expectation", "response is not JSON");
    }
    json::json_pointer ptr(p == "." ? "" : p);
    if (!doc.contains(ptr)) throw Error("expectation", "no value at " + p);
    return doc.at(ptr);
  };

  for (size_t i = 0; i < lines.size() && result.ok; ++i) {
    size_t line_no = i + 1;
    std::string raw = lines[i];
    size_t first = raw.find_first_not_of(" \t");
    if (first == std::string::npos || raw[first] == '#') continue;
    auto [cmd, rest] = take_word(raw);
    try {
      if (cmd == "USER") {
        auto [name, r1] = take_word(substitute(rest, line_no));
        auto [iri, pw] = take_word(r1);
        if (name.empty() || iri.empty() || pw.empty()) {
          throw ScriptError{"USER <name> <iri> <password>", line_no};
        }
        svc_.add_user(name, Term::iri(iri), pw, strength_);
      } else if (cmd == "LOGIN") {
        auto [name, pw] = take_word(substitute(rest, line_no));
        call("", "POST", "/login", json{{"user", name}, {"password", pw}}.dump());
        if (last.status == 200) tokens[name] = json::parse(last.body).at("token");
      } else if (cmd == "IMPORT") {
        svc_.import_ontology(base_dir_ / substitute(rest, line_no));
      } else if (cmd == "TEMPLATE") {
        svc_.add_template_text(read_file(base_dir_ / substitute(rest, line_no)));
      } else if (cmd == "DEPLOY") {
        svc_.deploy_text(read_file(base_dir_ / substitute(rest, line_no)));
      } else if (cmd == "SET") {
        auto [name, value] = take_word(rest);
        result.vars[name] = substitute(value, line_no);
      } else if (cmd == "AS" || is_method(cmd)) {
        std::string user;
        std::string spec = rest;
        std::string method = cmd;
        if (cmd == "AS") {
          auto [u, r1] = take_word(rest);
          auto [m, r2] = take_word(r1);
          user = u;
          method = m;
          spec = r2;
          if (!is_method(method)) throw ScriptError{"unknown method " + method, line_no};
        }
        auto [target, body] = take_word(substitute(spec, line_no));
        if (target.empty()) throw ScriptError{"missing path", line_no};
        if (body == "<<<") {
          body.clear();
          size_t j = i + 1;
          for (; j < lines.size() && lines[j] != ">>>"; ++j) {
            body += substitute(lines[j], j + 1) + "\n";
          }
          if (j == lines.size()) throw ScriptError{"unterminated <<<", line_no};
          i = j;
        }
        call(user, method, target, body);
      } else if (cmd == "EXPECT") {
        need_last(line_no);
        auto [what, arg] = take_word(substitute(rest, line_no));
        if (what == "status") {
          if (std::to_string(last.status) != arg) {
            fail(line_no, "status " + std::to_string(last.status) + ", expected " + arg + ": " +
                              last.body.substr(0, 300));
          }
        } else if (what == "event") {
          if (std::find(last_events.begin(), last_events.end(), arg) == last_events.end()) {
            std::string seen;
            for (const std::string &k : last_events) seen += " " + k;
            fail(line_no, "no " + arg + " event; saw" + seen);
          }
        } else if (what == "json") {
          auto [ptr, value] = take_word(arg);
          json want = json::parse(value);
          json got = pointer(ptr, line_no);
          if (got != want) fail(line_no, ptr + " is " + got.dump() + ", expected " + want.dump());
        } else if (what == "contains") {
          if (last.body.find(arg) == std::string::npos) {
            fail(line_no, "body lacks " + arg + ": " + last.body.substr(0, 300));
          }
        } else {
          throw ScriptError{"unknown expectation " + what, line_no};
        }
      } else if (cmd == "CAPTURE") {
        need_last(line_no);
        auto [name, ptr] = take_word(rest);
        json v = pointer(ptr, line_no);
        result.vars[name] = v.is_string() ? v.get<std::string>() : v.dump();
      } else {
        throw ScriptError{"unknown command " + cmd, line_no};
      }
    } catch (const ScriptError &e) {
      throw Error("syntax-error", e.why, e.line);
    } catch (const Error &e) {
      fail(line_no, e.what());
    } catch (const json::exception &e) {
      fail(line_no, e.what());
    }
  }
  return result;
}

}  // namespace semflow::service
