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

#include "semflow/rules/messaging.h"

#include <regex>

#include "httplib.h"
#include "json.hpp"
#include "semflow/base/error.h"

namespace semflow::rules {

std::string text_of(const Value &v) {
  switch (v.kind) {
    case Value::Kind::kAtom: return v.name;
    case Value::Kind::kRdf: return v.term.value();
    default: throw Error("invalid-argument", "expected an atom, got " + to_string(v));
  }
}

std::vector<Value> Message::slots() const {
  return {Value::atom(conversation), Value::atom(protocol), Value::atom(sender),
          Value::atom(performative), Value::list(payload)};
}

std::string Message::to_string() const {
  return performative + "(" + conversation + ", " + protocol + ", " + sender + " -> " +
         receiver + ", " + rules::to_string(Value::list(payload)) + ")";
}

std::string message_to_json(const Message &m) {
  nlohmann::json j;
  j["conversation"] = m.conversation;
  j["protocol"] = m.protocol;
  j["sender"] = m.sender;
  j["receiver"] = m.receiver;
  j["performative"] = m.performative;
  j["payload"] = nlohmann::json::array();
  for (const Value &v : m.payload) j["payload"].push_back(to_string(v));
  return j.dump();
}

Message message_from_json(std::string_view text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error("invalid-message", "not a JSON object");
  Message m;
  try {
    m.conversation = j.at("conversation").get<std::string>();
    m.protocol = j.at("protocol").get<std::string>();
    m.sender = j.at("sender").get<std::string>();
    m.receiver = j.value("receiver", "");
    m.performative = j.at("performative").get<std::string>();
    for (const auto &item : j.at("payload")) {
      Value v = parse_value(item.get<std::string>());
      if (!v.ground()) throw Error("invalid-message", "payload must be ground");
      m.payload.push_back(std::move(v));
    }
  } catch (const nlohmann::json::exception &e) {
    throw Error("invalid-message", e.what());
  }
  if (m.conversation.empty()) throw Error("invalid-message", "empty conversation id");
  return m;
}

// ---------------------------------------------------------------------------
// Transports

Receipt InMemoryTransport::send(const Message &m) {
  std::lock_guard lock(mu_);
  queue_.push_back(m);
  log_.push_back(m);
  return {name_, ++seq_};
}

std::vector<Message> InMemoryTransport::drain() {
  std::lock_guard lock(mu_);
  std::vector<Message> out(queue_.begin(), queue_.end());
  queue_.clear();
  return out;
}

std::vector<Message> InMemoryTransport::sent() const {
  std::lock_guard lock(mu_);
  return log_;
}

size_t InMemoryTransport::pending() const {
  std::lock_guard lock(mu_);
  return queue_.size();
}

HttpTransport::HttpTransport(std::string url, int timeout_ms) : timeout_ms_(timeout_ms) {
  static const std::regex re(R"(http://([^/:]+)(?::(\d+))?(/.*)?)");
  std::smatch m;
  if (!std::regex_match(url, m, re)) throw Error("invalid-endpoint", url);
  host_ = m[1];
  if (m[2].matched) port_ = std::stoi(m[2]);
  path_ = m[3].matched ? std::string(m[3]) : "/";
}

Receipt HttpTransport::send(const Message &m) {
  httplib::Client client(host_, port_);
  client.set_connection_timeout(0, timeout_ms_ * 1000);
  client.set_read_timeout(0, timeout_ms_ * 1000);
  auto res = client.Post(path_, message_to_json(m), "application/json");
  if (!res || res->status / 100 != 2) {
    throw Error("unreachable-endpoint", host_ + ":" + std::to_string(port_) + path_);
  }
  std::lock_guard lock(mu_);
  return {"http://" + host_ + ":" + std::to_string(port_) + path_, ++seq_};
}

void TransportRegistry::add(const std::string &protocol, std::shared_ptr<Transport> t) {
  std::lock_guard lock(mu_);
  transports_[protocol] = std::move(t);
}

std::shared_ptr<Transport> TransportRegistry::find(const std::string &protocol) const {
  std::lock_guard lock(mu_);
  auto it = transports_.find(protocol);
  return it == transports_.end() ? nullptr : it->second;
}

Receipt TransportRegistry::send(const Message &m) const {
  std::shared_ptr<Transport> t = find(m.protocol);
  if (!t) throw Error("unknown-transport", m.protocol);
  return t->send(m);
}

// ---------------------------------------------------------------------------
// Messenger

Messenger::Messenger(std::string agent, Rulebase rules, const TransportRegistry &transports,
                     const TripleStore *store, size_t depth_limit)
    : agent_(std::move(agent)),
      rules_(std::move(rules)),
      transports_(transports),
      store_(store),
      depth_limit_(depth_limit) {}

std::shared_ptr<Messenger::Conversation> Messenger::conversation(const std::string &id) {
  std::lock_guard lock(mu_);
  auto &slot = conversations_[id];
  if (!slot) slot = std::make_shared<Conversation>();
  return slot;
}

DeliveryResult Messenger::deliver(const Message &m) {
  if (m.conversation.empty()) throw Error("invalid-message", "empty conversation id");
  std::shared_ptr<Conversation> c = conversation(m.conversation);
  std::lock_guard lock(c->mu);
  DeliveryResult r;
  if (resume(*c, m, r.branches)) {
    r.disposition = DeliveryResult::Disposition::kResumed;
  } else {
    std::vector<Value> slots = m.slots();
    for (const MessagingRule &rule : rules_.messaging) {
      Substitution s;
      bool ok = true;
      for (size_t i = 0; i < 5 && ok; ++i) ok = unify(rule.trigger[i], slots[i], s);
      if (!ok) continue;
      ++c->branches;
      r.branches.push_back(run(*c, rule.id, rule.body, std::move(s)));
      r.disposition = DeliveryResult::Disposition::kStarted;
    }
    if (r.disposition == DeliveryResult::Disposition::kParked) {
      c->mailbox.push_back(m);
      return r;
    }
  }
  // New continuations may accept parked messages.
  bool progress = true;
  while (progress && !c->mailbox.empty()) {
    progress = false;
    for (auto it = c->mailbox.begin(); it != c->mailbox.end(); ++it) {
      Message parked = *it;
      std::vector<BranchOutcome> out;
      if (resume(*c, parked, out)) {
        c->mailbox.erase(it);
        for (BranchOutcome &b : out) r.branches.push_back(std::move(b));
        progress = true;
        break;
      }
    }
  }
  return r;
}

bool Messenger::resume(Conversation &c, const Message &m, std::vector<BranchOutcome> &out) {
  std::vector<Value> slots = m.slots();
  for (auto it = c.pending.begin(); it != c.pending.end(); ++it) {
    Substitution s = it->bindings;
    bool ok = true;
    for (size_t i = 0; i < 5 && ok; ++i) ok = unify(it->pattern[i], slots[i], s);
    if (!ok) continue;
    Continuation k = std::move(*it);
    c.pending.erase(it);
    out.push_back(run(c, k.rule, std::move(k.rest), std::move(s)));
    return true;
  }
  return false;
}

BranchOutcome Messenger::run(Conversation &c, const std::string &rule, std::vector<Step> steps,
                             Substitution s) {
  BranchOutcome out;
  out.rule = rule;
  for (size_t i = 0; i < steps.size(); ++i) {
    const Step &step = steps[i];
    try {
      switch (step.kind) {
        case Step::Kind::kGoal: {
          Snapshot snap = store_ ? store_->snapshot() : Snapshot();
          Solver solver(rules_, &snap.graph(), depth_limit_);
          std::optional<Substitution> next = solver.first({step.goal}, s);
          if (!next) {
            out.state = BranchOutcome::State::kFailed;
            out.detail = "goal failed: " + to_string(step.goal);
            return out;
          }
          s = std::move(*next);
          break;
        }
        case Step::Kind::kSend: {
          std::vector<Value> a;
          for (const Value &v : step.args) {
            a.push_back(resolve(v, s));
            if (!a.back().ground()) throw Error("unbound-variable", to_string(v));
          }
          Message m;
          m.conversation = text_of(a[0]);
          m.protocol = text_of(a[1]);
          m.sender = agent_;
          m.receiver = text_of(a[2]);
          m.performative = text_of(a[3]);
          m.payload = a[4].kind == Value::Kind::kList ? a[4].items : std::vector<Value>{a[4]};
          transports_.send(m);
          out.sent.push_back(std::move(m));
          break;
        }
        case Step::Kind::kReceive: {
          Continuation k;
          k.rule = rule;
          k.pattern = step.args;
          k.bindings = s;
          k.rest.assign(steps.begin() + i + 1, steps.end());
          c.pending.push_back(std::move(k));
          out.state = BranchOutcome::State::kSuspended;
          return out;
        }
      }
    } catch (const Error &e) {
      out.state = BranchOutcome::State::kFailed;
      out.detail = e.what();
      return out;
    }
  }
  out.state = BranchOutcome::State::kCompleted;
  return out;
}

std::vector<ConversationReport> Messenger::export_conversation_state() const {
  std::vector<std::pair<std::string, std::shared_ptr<Conversation>>> all;
  {
    std::lock_guard lock(mu_);
    all.assign(conversations_.begin(), conversations_.end());
  }
  std::vector<ConversationReport> out;
  for (const auto &[id, c] : all) {
    std::lock_guard lock(c->mu);
    out.push_back({id, c->pending.size(), c->mailbox.size(),
                   c->branches > 0 && c->pending.empty()});
  }
  return out;
}

size_t Messenger::conversation_count() const {
  std::lock_guard lock(mu_);
  return conversations_.size();
}

}  // namespace semflow::rules
