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


#ifndef SEMFLOW_RULES_MESSAGING_H_
#define SEMFLOW_RULES_MESSAGING_H_

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "semflow/rules/rulebase.h"
#include "semflow/rules/solve.h"

namespace semflow::rules {

struct Message {
  std::string conversation;
  std::string protocol;
  std::string sender;
  std::string receiver;
  std::string performative;
  std::vector<Value> payload;  // ground

  // The five slots matched by rcvMsg(Cid, Protocol, From, Performative, Payload).
  std::vector<Value> slots() const;
  std::string to_string() const;

  bool operator==(const Message &) const = default;
};

// JSON wire form used by the HTTP transport: payload items are written in
// rule syntax.
std::string message_to_json(const Message &m);
Message message_from_json(std::string_view json);

struct Receipt {
  std::string transport;
  uint64_t seq = 0;
};

class Transport {
 public:
  virtual ~Transport() = default;
  virtual Receipt send(const Message &m) = 0;
};

// Thread-safe FIFO; receipts number sends from 1.
class InMemoryTransport : public Transport {
 public:
  explicit InMemoryTransport(std::string name = "inmem") : name_(std::move(name)) {}

  Receipt send(const Message &m) override;
  std::vector<Message> drain();
  std::vector<Message> sent() const;  // everything ever sent, in order
  size_t pending() const;

 private:
  std::string name_;
  mutable std::mutex mu_;
  std::deque<Message> queue_;
  std::vector<Message> log_;
  uint64_t seq_ = 0;
};

// POSTs the JSON wire form to `url` (http://host:port/path). Throws
// Error("unreachable-endpoint") when the request fails.
class HttpTransport : public Transport {
 public:
  explicit HttpTransport(std::string url, int timeout_ms = 2000);
  Receipt send(const Message &m) override;

 private:
  std::string host_;
  int port_ = 80;
  std::string path_;
  int timeout_ms_;
  std::mutex mu_;
  uint64_t seq_ = 0;
};

// Transports by protocol tag.
class TransportRegistry {
 public:
  void add(const std::string &protocol, std::shared_ptr<Transport> t);
  // Throws Error("unknown-transport", protocol).
  Receipt send(const Message &m) const;
  std::shared_ptr<Transport> find(const std::string &protocol) const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Transport>> transports_;
};

struct BranchOutcome {
  enum class State { kSuspended, kCompleted, kFailed };

  std::string rule;
  State state = State::kCompleted;
  std::vector<Message> sent;
  std::string detail;  // failure reason
};

struct DeliveryResult {
  enum class Disposition { kResumed, kStarted, kParked };

  Disposition disposition = Disposition::kParked;
  // Branches run for this message, then for parked messages it unblocked.
  std::vector<BranchOutcome> branches;
};

struct ConversationReport {
  std::string id;
  size_t pending = 0;
  size_t mailbox = 0;
  bool completed = false;

  bool operator==(const ConversationReport &) const = default;
};

// Runs the messaging rules of one agent. Deliveries to different
// conversations may run concurrently; deliveries within a conversation are
// serialized.
class Messenger {
 public:
  Messenger(std::string agent, Rulebase rules, const TransportRegistry &transports,
            const TripleStore *store = nullptr, size_t depth_limit = kDefaultDepthLimit);

  DeliveryResult deliver(const Message &m);
  // Ordered by conversation id.
  std::vector<ConversationReport> export_conversation_state() const;
  size_t conversation_count() const;
  const std::string &agent() const { return agent_; }

 private:
  struct Continuation {
    std::string rule;
    std::vector<Value> pattern;
    Substitution bindings;
    std::vector<Step> rest;
  };

  struct Conversation {
    std::mutex mu;
    std::deque<Continuation> pending;
    std::deque<Message> mailbox;
    size_t branches = 0;
  };

  std::shared_ptr<Conversation> conversation(const std::string &id);
  bool resume(Conversation &c, const Message &m, std::vector<BranchOutcome> &out);
  BranchOutcome run(Conversation &c, const std::string &rule, std::vector<Step> steps,
                    Substitution s);

  std::string agent_;
  Rulebase rules_;
  const TransportRegistry &transports_;
  const TripleStore *store_;
  size_t depth_limit_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Conversation>> conversations_;
};

// Converts a ground atom or RDF value to plain text (atom name, IRI, or
// lexical form).
std::string text_of(const Value &v);

}  // namespace semflow::rules

#endif  // SEMFLOW_RULES_MESSAGING_H_
