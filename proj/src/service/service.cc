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

#include "semflow/service/service.h"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <fstream>
#include <regex>
#include <sstream>

#include "json.hpp"
#include "semflow/base/error.h"
#include "semflow/procdef/definition.h"
#include "semflow/sparql/query.h"

namespace semflow::service {

using nlohmann::json;

namespace {

std::string read_file(const std::filesystem::path &p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("io-error", p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::filesystem::path &p, const std::string &text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
  if (!out) throw Error("io-error", p.string());
}

std::vector<std::string> split(const std::string &s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

json term_json(const Term &t) {
  if (t.is_iri()) return {{"type", "uri"}, {"value", t.value()}};
  json j = {{"type", "literal"}, {"value", t.value()}};
  if (!t.lang().empty()) j["xml:lang"] = t.lang();
  if (!t.datatype().empty()) j["datatype"] = t.datatype();
  return j;
}

json opt_term(const std::optional<Term> &t) { return t ? term_json(*t) : json(nullptr); }

json opt_iri(const std::optional<Term> &t) { return t ? json(t->value()) : json(nullptr); }

json statement_json(const Triple &t) {
  return {{"s", term_json(t.subject)}, {"p", term_json(t.predicate)}, {"o", term_json(t.object)}};
}

json page_json(const wiki::WikiPage &p) {
  json st = json::array();
  for (const Triple &t : p.statements) st.push_back(statement_json(t));
  return {{"name", p.name},         {"iri", p.iri},
          {"version", p.version},   {"markup", p.markup},
          {"author", p.author.value()}, {"timestamp", p.timestamp},
          {"route", wiki::page_route(p.name)}, {"statements", st}};
}

json version_json(const std::string &name, const wiki::PageVersion &v) {
  return {{"name", name},
          {"version", v.version},
          {"markup", v.markup},
          {"author", v.author.value()},
          {"timestamp", v.timestamp}};
}

json fields_json(const wiki::Template &t) {
  json out = json::array();
  for (const wiki::TemplateField &f : t.fields) {
    out.push_back({{"name", f.name},
                   {"type", wiki::to_string(f.type)},
                   {"predicate", f.predicate},
                   {"required", f.required},
                   {"default", f.default_value}});
  }
  return out;
}

json task_json(const engine::TaskInstance &t, const wiki::Wiki &w) {
  json data = json::object();
  for (const auto &[k, v] : t.form_data) data[k] = term_json(v);
  json j = {{"id", task_id(t.uri)},
            {"uri", t.uri},
            {"node", t.node},
            {"instance", t.instance},
            {"form", t.form},
            {"state", engine::to_string(t.state)},
            {"assignee", opt_iri(t.assignee)},
            {"about", opt_iri(t.about)},
            {"form_data", data},
            {"notes", t.notes},
            {"created", t.created}};
  if (!t.form.empty()) {
    if (std::optional<wiki::Template> tpl = w.find_template(t.form)) j["fields"] = fields_json(*tpl);
  }
  return j;
}

json instance_json(const engine::ProcessInstance &p) {
  json vars = json::object();
  for (const auto &[k, v] : p.variables) vars[k] = term_json(v);
  json tasks = json::array();
  for (const std::string &t : p.tasks) tasks.push_back(task_id(t));
  return {{"uri", p.uri},
          {"definition", p.definition},
          {"name", p.name},
          {"version", p.version},
          {"number", p.number},
          {"state", engine::to_string(p.state)},
          {"initiator", p.initiator.value()},
          {"variables", vars},
          {"tasks", tasks},
          {"created", p.created},
          {"ended", p.ended}};
}

json event_json(const rules::Event &e) {
  return {{"seq", e.seq},
          {"kind", e.kind},
          {"timestamp", e.timestamp},
          {"instance", opt_iri(e.instance)},
          {"subject", opt_iri(e.subject)},
          {"actor", opt_iri(e.actor)},
          {"aux", opt_term(e.aux)}};
}

json results_json(const sparql::ResultSet &rs) {
  json bindings = json::array();
  for (const auto &row : rs.rows) {
    json b = json::object();
    for (size_t i = 0; i < row.size() && i < rs.variables.size(); ++i) {
      if (row[i]) b[rs.variables[i]] = term_json(*row[i]);
    }
    bindings.push_back(b);
  }
  return {{"head", {{"vars", rs.variables}}}, {"results", {{"bindings", bindings}}}};
}

json notification_json(const Notification &n) {
  return {{"id", n.id},       {"recipient", n.recipient.value()},
          {"kind", n.kind},   {"subjects", n.subjects},
          {"created", n.created}, {"read", n.read}, {"event_seq", n.event_seq}};
}

Response json_response(const json &j, int status = 200) {
  return Response{status, "application/json", j.dump()};
}

engine::FormInput form_input(const std::string &body) {
  engine::FormInput out;
  if (body.empty()) return out;
  json j = json::parse(body);
  if (!j.is_object()) throw Error("bad-request", "form data must be a JSON object");
  for (const auto &[k, v] : j.items()) {
    if (v.is_null()) continue;
    out[k] = v.is_string() ? v.get<std::string>() : v.dump();
  }
  return out;
}

int64_t parse_int(const std::string &s, const std::string &what) {
  try {
    size_t used = 0;
    int64_t v = std::stoll(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception &) {
  }
  throw Error("bad-request", what + " must be an integer");
}

}  // namespace

int status_for(const std::string &code) {
  static const std::map<std::string, int> fixed = {
      {"unauthenticated", 401},     {"wrong-user", 403},         {"forbidden", 403},
      {"not-found", 404},           {"method-not-allowed", 405}, {"conflict", 409},
      {"wrong-state", 409},         {"duplicate-version", 409},  {"page-exists", 409},
      {"form-validation", 422},     {"missing-required", 422},   {"invalid-iri", 422},
      {"malformed-markup", 422},    {"invalid-page-name", 422},  {"invalid-definition", 422},
      {"invalid-template", 422},    {"invalid-term", 422},       {"unknown-prefix", 400},
      {"unknown-context-key", 400}, {"syntax-error", 400},       {"bad-request", 400},
      {"invalid-argument", 400},    {"malformed-xml", 400},      {"parse-error", 400},
  };
  auto it = fixed.find(code);
  if (it != fixed.end()) return it->second;
  if (code.rfind("unknown-", 0) == 0) return 404;
  return 500;
}

std::vector<std::string> path_segments(std::string_view path) {
  std::vector<std::string> out;
  size_t pos = 0;
  while (pos < path.size()) {
    if (path[pos] == '/') {
      ++pos;
      continue;
    }
    size_t end = path.find('/', pos);
    if (end == std::string_view::npos) end = path.size();
    out.push_back(wiki::url_decode(path.substr(pos, end - pos)));
    pos = end;
  }
  return out;
}

std::string task_id(const std::string &task_uri) {
  static const std::regex shape(R"(/instance/(\d+)/task/(\d+)$)");
  std::smatch m;
  if (!std::regex_search(task_uri, m, shape)) return "";
  return m[1].str() + "." + m[2].str();
}

struct Service::Call {
  const Request &req;
  std::vector<std::string> seg;
  std::optional<Session> session;

  const Session &require_session() const {
    if (!session) throw Error("unauthenticated", "missing or expired session");
    return *session;
  }
  std::string param(const std::string &name) const {
    auto it = req.query.find(name);
    return it == req.query.end() ? "" : it->second;
  }
  bool is(const std::string &method) const { return req.method == method; }
};

Service::Service(ServiceConfig config, Clock &clock)
    : config_(std::move(config)),
      clock_(clock),
      wiki_(store_, config_.base_iri, clock),
      sessions_(clock, config_.session_ttl),
      notifications_(clock) {
  engine::EngineConfig ec;
  ec.base_iri = config_.base_iri;
  ec.grouping = config_.grouping;
  engine_ = std::make_unique<engine::Engine>(store_, clock_, std::move(ec));
  for (const rules::Rulebase &rb : config_.extra_rules) engine_->add_rules(rb);
  for (const wiki::CannedSearch &s : wiki::default_canned_searches(config_.domain_ns)) {
    wiki_.add_canned_search(s);
  }
  wire();
}

Service::~Service() { shutdown(); }

void Service::wire() {
  engine_->set_form_lookup([this](const std::string &form) -> std::optional<engine::FormSchema> {
    std::optional<wiki::Template> t = wiki_.find_template(form);
    if (!t) return std::nullopt;
    engine::FormSchema schema{t->name, {}};
    for (const wiki::TemplateField &f : t->fields) {
      engine::FieldType type = f.type == wiki::FieldType::kLiteral   ? engine::FieldType::kLiteral
                               : f.type == wiki::FieldType::kConcept ? engine::FieldType::kConcept
                                                                     : engine::FieldType::kResource;
      schema.fields.push_back({f.name, type, f.required, f.predicate, f.default_value});
    }
    return schema;
  });

  // create-page <template> <title> <variable>: {instance} in the title is
  // the instance number; the task's form data fills the template.
  engine_->register_action("create-page", [this](engine::ActionContext &ctx) {
    const auto &args = ctx.binding.args;
    if (args.size() != 3) throw Error("bad-action", "create-page takes 3 arguments");
    std::string title = args[1];
    for (size_t at = title.find("{instance}"); at != std::string::npos;
         at = title.find("{instance}")) {
      title.replace(at, 10, std::to_string(ctx.instance.number));
    }
    std::map<std::string, std::string> inputs;
    for (const auto &[field, value] : ctx.task.form_data) {
      inputs[field] = value.is_iri() ? "<" + value.value() + ">" : value.value();
    }
    wiki::WikiPage p = wiki_.instantiate_template(args[0], inputs, title, ctx.user);
    ctx.instance.variables[args[2]] = Term::iri(p.iri);
  });

  // link <from variable> <predicate> <to variable>, both naming pages.
  engine_->register_action("link", [this](engine::ActionContext &ctx) {
    const auto &args = ctx.binding.args;
    if (args.size() != 3) throw Error("bad-action", "link takes 3 arguments");
    auto page_of = [&](const std::string &var) {
      auto it = ctx.instance.variables.find(var);
      if (it == ctx.instance.variables.end()) throw Error("unknown-variable", var);
      std::optional<std::string> name = wiki::page_name_of(config_.base_iri, it->second.value());
      if (!name) throw Error("not-a-page", it->second.value());
      return *name;
    };
    std::string pred = args[1];
    PrefixMap prefixes = store_.prefixes();
    if (std::optional<procdef::ProcessDefinition> d =
            engine_->definition(ctx.instance.name, ctx.instance.version)) {
      prefixes = d->query_prefixes();
    }
    std::optional<std::string> iri = wiki::resolve_name(pred, prefixes);
    if (!iri) iri = wiki::resolve_name("<" + pred + ">", prefixes);
    if (!iri) throw Error("invalid-iri", pred);
    if (wiki::resolve_name(pred, store_.prefixes()) != iri) pred = "<" + *iri + ">";
    wiki_.insert_typed_link(page_of(args[0]), pred, page_of(args[2]), ctx.user);
  });

  rules::ActionHooks hooks;
  hooks.notify = [this](const Term &recipient, const std::string &kind, const rules::Event &e) {
    std::vector<std::string> subjects;
    if (e.subject) subjects.push_back(e.subject->value());
    if (e.instance) subjects.push_back(e.instance->value());
    notifications_.notify(recipient, kind, subjects, e.seq);
  };
  hooks.mint_page = [this](const std::string &page, const std::string &tpl, const rules::Event &e) {
    Term author = e.actor && e.actor->is_iri() ? *e.actor : Term::iri(config_.base_iri + "agent/engine");
    if (tpl.empty() || tpl == "none") {
      wiki_.save_page(page, "", author, 0);
    } else {
      wiki_.instantiate_template(tpl, {}, page, author);
    }
  };
  engine_->set_action_hooks(hooks);

  engine_->on_unassigned([this](const engine::TaskInstance &t, const engine::ProcessInstance &p) {
    notifications_.notify(p.initiator, std::string(kTaskUnassignedPool), {t.uri, p.uri});
  });

  engine_->subscribe([this](const rules::Event &e) {
    try {
      notifications_.on_event(e, store_.snapshot());
    } catch (const std::exception &ex) {
      spdlog::warn("notification for event {} failed: {}", e.seq, ex.what());
    }
    delivered(e.seq);
  });
}

void Service::delivered(uint64_t seq) {
  {
    std::lock_guard lock(feed_mu_);
    ahead_.insert(seq);
    while (!ahead_.empty() && *ahead_.begin() == watermark_ + 1) {
      ahead_.erase(ahead_.begin());
      ++watermark_;
    }
  }
  feed_cv_.notify_all();
}

std::vector<rules::Event> Service::wait_events(uint64_t after, std::chrono::milliseconds timeout) {
  uint64_t upto;
  {
    std::unique_lock lock(feed_mu_);
    feed_cv_.wait_for(lock, timeout, [&] { return watermark_ > after || stopping_; });
    upto = watermark_;
  }
  if (upto <= after) return {};
  std::vector<rules::Event> out = engine_->events(after);
  if (out.size() > upto - after) out.resize(upto - after);
  return out;
}

void Service::shutdown() {
  {
    std::lock_guard lock(feed_mu_);
    stopping_ = true;
  }
  feed_cv_.notify_all();
}

void Service::add_user(const std::string &name, const Term &iri, const std::string &password,
                       HashStrength strength) {
  users_.add(User{name, iri, hash_password(password, strength)});
}

size_t Service::import_ontology(const std::filesystem::path &file) { return store_.import(file); }

const procdef::ProcessDefinition &Service::deploy_text(const std::string &text) {
  const procdef::ProcessDefinition &d = engine_->deploy(procdef::parse_definition(text));
  std::lock_guard lock(sources_mu_);
  process_sources_[d.name + "-" + std::to_string(d.version)] = text;
  return d;
}

wiki::Template Service::add_template_text(const std::string &text) {
  wiki::Template t = wiki::parse_template(text, store_.prefixes());
  wiki_.add_template(t);
  std::lock_guard lock(sources_mu_);
  template_sources_[t.name] = text;
  return t;
}

void Service::load() {
  namespace fs = std::filesystem;
  const fs::path &dir = config_.data_dir;
  if (dir.empty() || !fs::exists(dir)) return;
  auto sorted_files = [&](const fs::path &sub, const std::string &ext) {
    std::vector<fs::path> out;
    if (!fs::is_directory(dir / sub)) return out;
    for (const auto &e : fs::directory_iterator(dir / sub)) {
      if (e.path().extension() == ext) out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  for (const fs::path &p : sorted_files("processes", ".process")) deploy_text(read_file(p));
  if (fs::exists(dir / "store.nt")) store_.load(dir / "store.nt");
  if (fs::exists(dir / "users.json")) users_.load(dir / "users.json");
  for (const fs::path &p : sorted_files("templates", ".template")) add_template_text(read_file(p));
  if (fs::is_directory(dir / "pages")) wiki_.load_from(dir / "pages");
}

void Service::save() const {
  namespace fs = std::filesystem;
  const fs::path &dir = config_.data_dir;
  if (dir.empty()) return;
  fs::create_directories(dir / "processes");
  fs::create_directories(dir / "templates");
  store_.save(dir / "store.nt");
  wiki_.save_to(dir / "pages");
  users_.save(dir / "users.json");
  {
    std::lock_guard lock(sources_mu_);
    for (const auto &[key, text] : process_sources_) {
      write_file(dir / "processes" / (key + ".process"), text);
    }
    for (const auto &[name, text] : template_sources_) {
      write_file(dir / "templates" / (wiki::url_encode(name) + ".template"), text);
    }
  }
  write_file(dir / "events.log", engine_->event_log());
}

Term Service::resolve_resource(const std::string &text) const {
  if (std::optional<std::string> iri = wiki::resolve_name(text, store_.prefixes())) {
    return Term::iri(*iri);
  }
  if (is_absolute_iri(text)) return Term::iri(text);
  throw Error("bad-request", "not a resource: " + text);
}

std::string Service::find_task(const std::string &id) const {
  for (const engine::TaskInstance &t : engine_->tasks()) {
    if (task_id(t.uri) == id || t.uri == id) return t.uri;
  }
  throw Error("unknown-task", id);
}

Response Service::handle(const Request &r) {
  Call c{r, path_segments(r.path), std::nullopt};
  auto auth = r.headers.find("authorization");
  if (auth != r.headers.end() && auth->second.rfind("Bearer ", 0) == 0) {
    c.session = sessions_.check(auth->second.substr(7));
  }
  try {
    return route(c);
  } catch (const Error &e) {
    json body = {{"error", e.code()}, {"detail", e.detail()}};
    if (e.position()) body["position"] = *e.position();
    if (e.code() == "form-validation" || e.code() == "missing-required" ||
        e.code() == "invalid-iri") {
      body["fields"] = split(e.detail(), ',');
    }
    return json_response(body, status_for(e.code()));
  } catch (const json::exception &e) {
    return json_response({{"error", "bad-request"}, {"detail", e.what()}}, 400);
  } catch (const std::exception &e) {
    spdlog::error("{} {}: {}", r.method, r.path, e.what());
    return json_response({{"error", "internal"}, {"detail", e.what()}}, 500);
  }
}

Response Service::route(Call &c) {
  if (c.seg.empty()) throw Error("not-found", c.req.path);
  const std::string &head = c.seg[0];
  if (head == "login" || head == "logout") return login(c);
  if (head == "pages") return pages(c);
  if (head == "templates") return templates(c);
  if (head == "processes") return processes(c);
  if (head == "tasks") return tasks(c);
  if (head == "search" || head == "searches") return search(c);
  if (head == "query") return query(c);
  if (head == "notifications") return notifications(c);
  if (head == "events") return events(c);
  throw Error("not-found", c.req.path);
}

Response Service::login(Call &c) {
  if (c.seg.size() != 1 || !c.is("POST")) throw Error("not-found", c.req.path);
  if (c.seg[0] == "logout") {
    c.require_session();
    sessions_.close(c.session->token);
    return Response{204, "application/json", ""};
  }
  json body = json::parse(c.req.body.empty() ? "{}" : c.req.body);
  std::string name = body.value("user", "");
  std::optional<User> u = users_.find(name);
  if (!u || !verify_password(u->password_hash, body.value("password", ""))) {
    throw Error("unauthenticated", "bad credentials");
  }
  std::vector<Term> roles;
  for (const Triple &t : store_.snapshot()->find(u->iri, Term::iri(vocab::pm("hasRole")), std::nullopt)) {
    roles.push_back(t.object);
  }
  Session s = sessions_.open(u->iri, roles);
  json jr = json::array();
  for (const Term &r : s.roles) jr.push_back(r.value());
  return json_response({{"token", s.token},
                        {"user", s.user.value()},
                        {"roles", jr},
                        {"expires", iso8601(s.expires)}});
}

Response Service::pages(Call &c) {
  if (c.seg.size() == 1) {
    if (!c.is("GET")) throw Error("method-not-allowed", c.req.method);
    return json_response(wiki_.page_names());
  }
  const std::string &name = c.seg[1];
  if (c.seg.size() == 2) {
    if (c.is("GET")) {
      std::string v = c.param("version");
      if (!v.empty()) {
        std::optional<wiki::PageVersion> pv = wiki_.version(name, parse_int(v, "version"));
        if (!pv) throw Error("unknown-page", name + "@" + v);
        return json_response(version_json(name, *pv));
      }
      std::optional<wiki::WikiPage> p = wiki_.page(name);
      if (!p) throw Error("unknown-page", name);
      return json_response(page_json(*p));
    }
    if (c.is("PUT")) {
      const Session &s = c.require_session();
      std::optional<int64_t> base;
      std::string b = c.param("base");
      auto match = c.req.headers.find("if-match");
      if (b.empty() && match != c.req.headers.end()) b = match->second;
      if (!b.empty()) base = parse_int(b, "base");
      wiki::WikiPage p = wiki_.save_page(name, c.req.body, s.user, base);
      return json_response(page_json(p), p.version == 1 ? 201 : 200);
    }
    throw Error("method-not-allowed", c.req.method);
  }
  const std::string &sub = c.seg[2];
  if (c.seg.size() == 3 && sub == "html" && c.is("GET")) {
    sparql::RenderContext ctx;
    if (c.session) ctx.current_user = c.session->user;
    return Response{200, "text/html; charset=utf-8", wiki_.render(name, ctx).html};
  }
  if (c.seg.size() == 3 && sub == "history" && c.is("GET")) {
    if (!wiki_.exists(name)) throw Error("unknown-page", name);
    json out = json::array();
    for (const wiki::PageVersion &v : wiki_.history(name)) out.push_back(version_json(name, v));
    return json_response(out);
  }
  if (c.seg.size() == 3 && sub == "links" && c.is("POST")) {
    const Session &s = c.require_session();
    json body = json::parse(c.req.body);
    return json_response(page_json(wiki_.insert_typed_link(
        name, body.at("predicate").get<std::string>(), body.at("target").get<std::string>(),
        s.user)));
  }
  throw Error("not-found", c.req.path);
}

Response Service::templates(Call &c) {
  const Session &s = c.require_session();
  if (c.seg.size() == 1 && c.is("GET")) {
    json out = json::array();
    for (const wiki::Template &t : wiki_.templates()) {
      out.push_back({{"name", t.name}, {"fields", fields_json(t)}});
    }
    return json_response(out);
  }
  if (c.seg.size() == 3 && c.seg[2] == "instantiate" && c.is("POST")) {
    json body = json::parse(c.req.body);
    std::map<std::string, std::string> inputs;
    if (body.contains("fields")) {
      for (const auto &[k, v] : body.at("fields").items()) {
        inputs[k] = v.is_string() ? v.get<std::string>() : v.dump();
      }
    }
    wiki::WikiPage p =
        wiki_.instantiate_template(c.seg[1], inputs, body.at("page").get<std::string>(), s.user);
    return json_response(page_json(p), 201);
  }
  throw Error("not-found", c.req.path);
}

Response Service::processes(Call &c) {
  const Session &s = c.require_session();
  if (c.seg.size() == 1 && c.is("GET")) {
    std::vector<engine::ProcessInstance> instances = engine_->instances();
    json out = json::array();
    for (const procdef::ProcessDefinition &d : engine_->definitions()) {
      std::string start_form;
      for (const procdef::Node &n : d.nodes) {
        if (n.kind != procdef::NodeKind::kStart) continue;
        for (const procdef::Transition *t : d.outgoing(n.name)) {
          const procdef::Node *next = d.node(t->to);
          if (next && next->task && start_form.empty()) start_form = next->task->form;
        }
      }
      json inst = json::array();
      for (const engine::ProcessInstance &p : instances) {
        if (p.definition == d.uri) inst.push_back(instance_json(p));
      }
      out.push_back({{"name", d.name},
                     {"version", d.version},
                     {"uri", d.uri},
                     {"start_form", start_form},
                     {"instances", inst}});
    }
    return json_response(out);
  }
  if (c.seg.size() == 4 && c.seg[3] == "start" && c.is("POST")) {
    engine::ProcessInstance p = engine_->start_process(
        c.seg[1], parse_int(c.seg[2], "version"), s.user, form_input(c.req.body));
    return json_response(instance_json(p), 201);
  }
  if (c.seg.size() == 2 && c.is("GET")) {
    for (const engine::ProcessInstance &p : engine_->instances()) {
      if (std::to_string(p.number) == c.seg[1] || p.uri == c.seg[1]) {
        return json_response(instance_json(p));
      }
    }
    throw Error("unknown-instance", c.seg[1]);
  }
  throw Error("not-found", c.req.path);
}

Response Service::tasks(Call &c) {
  const Session &s = c.require_session();
  if (c.seg.size() == 1 && c.is("GET")) {
    std::string who = c.param("user");
    if (!who.empty() && who != "me" && who != s.user.value()) {
      throw Error("forbidden", "task lists are private to their user");
    }
    Snapshot view = store_.snapshot();
    json out = json::array();
    for (const engine::TaskGroup &g : engine_->list_tasks(s.user)) {
      json label = nullptr;
      if (g.category) {
        std::vector<Triple> ls =
            view->find(*g.category, Term::iri(std::string(vocab::kRdfs) + "label"), std::nullopt);
        if (!ls.empty()) label = ls.front().object.value();
      }
      json ts = json::array();
      for (const engine::TaskInstance &t : g.tasks) ts.push_back(task_json(t, wiki_));
      out.push_back({{"category", opt_iri(g.category)}, {"label", label}, {"tasks", ts}});
    }
    return json_response(out);
  }
  if (c.seg.size() < 2) throw Error("not-found", c.req.path);
  std::string uri = find_task(c.seg[1]);
  if (c.seg.size() == 2 && c.is("GET")) {
    return json_response(task_json(*engine_->task(uri), wiki_));
  }
  if (c.seg.size() == 3 && c.is("POST")) {
    if (c.seg[2] == "start") return json_response(task_json(engine_->start_task(uri, s.user), wiki_));
    if (c.seg[2] == "complete") {
      return json_response(
          task_json(engine_->complete_task(uri, s.user, form_input(c.req.body)), wiki_));
    }
  }
  throw Error("not-found", c.req.path);
}

Response Service::search(Call &c) {
  c.require_session();
  if (c.seg[0] == "search" && c.seg.size() == 1 && c.is("GET")) {
    std::string resource = c.param("resource");
    if (resource.empty()) throw Error("bad-request", "resource is required");
    std::string facet = c.param("facet");
    sparql::ResultSet rs = wiki_.click_search(resolve_resource(resource),
                                              wiki::parse_facet(facet.empty() ? "subject" : facet));
    return json_response(results_json(rs));
  }
  if (c.seg[0] == "searches" && c.is("GET")) {
    if (c.seg.size() == 1) {
      json out = json::array();
      for (const wiki::CannedSearch &s : wiki_.canned_searches()) {
        out.push_back({{"name", s.name}, {"params", s.params}, {"query", s.query}});
      }
      return json_response(out);
    }
    if (c.seg.size() == 2) {
      std::map<std::string, Term> params;
      for (const auto &[k, v] : c.req.query) params.emplace(k, resolve_resource(v));
      return json_response(results_json(wiki_.run_canned_search(c.seg[1], params)));
    }
  }
  throw Error("not-found", c.req.path);
}

Response Service::query(Call &c) {
  const Session &s = c.require_session();
  if (c.seg.size() != 1 || !c.is("POST")) throw Error("not-found", c.req.path);
  sparql::RenderContext ctx;
  ctx.current_user = s.user;
  std::string text = sparql::substitute_context(c.req.body, ctx);
  sparql::Query q = sparql::parse_query(text, store_.prefixes());
  Snapshot view = store_.snapshot();
  std::string body = q.form == sparql::QueryForm::kAsk
                         ? sparql::serialize_boolean_xml(sparql::evaluate_ask(q, view))
                         : sparql::serialize_results_xml(sparql::evaluate_select(q, view));
  return Response{200, "application/sparql-results+xml", body};
}

Response Service::notifications(Call &c) {
  const Session &s = c.require_session();
  if (c.seg.size() == 1 && c.is("GET")) {
    json out = json::array();
    for (const Notification &n : notifications_.for_recipient(s.user)) {
      out.push_back(notification_json(n));
    }
    return json_response(out);
  }
  if (c.seg.size() == 3 && c.seg[2] == "read" && c.is("POST")) {
    return json_response(
        notification_json(notifications_.mark_read(parse_int(c.seg[1], "id"), s.user)));
  }
  throw Error("not-found", c.req.path);
}

Response Service::events(Call &c) {
  c.require_session();
  if (c.seg.size() != 1 || !c.is("GET")) throw Error("not-found", c.req.path);
  std::string a = c.param("after");
  uint64_t after = a.empty() ? 0 : static_cast<uint64_t>(std::max<int64_t>(0, parse_int(a, "after")));
  std::chrono::milliseconds timeout = config_.poll_timeout;
  std::string t = c.param("timeout");
  if (!t.empty()) timeout = std::chrono::milliseconds(std::max<int64_t>(0, parse_int(t, "timeout")));
  timeout = std::min(timeout, config_.max_poll_timeout);
  json out = json::array();
  uint64_t last = after;
  for (const rules::Event &e : wait_events(after, timeout)) {
    out.push_back(event_json(e));
    last = e.seq;
  }
  return json_response({{"events", out}, {"last", last}});
}

}  // namespace semflow::service
