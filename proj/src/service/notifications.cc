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

#include "semflow/service/notifications.h"

#include <spdlog/spdlog.h>

#include "semflow/base/error.h"

namespace semflow::service {

void NotificationCenter::add_notifier(std::shared_ptr<Notifier> n) {
  std::lock_guard lock(mu_);
  notifiers_.push_back(std::move(n));
}

std::optional<Notification> NotificationCenter::notify(const Term &recipient,
                                                       const std::string &kind,
                                                       std::vector<std::string> subjects,
                                                       uint64_t event_seq) {
  Notification n;
  std::vector<std::shared_ptr<Notifier>> targets;
  {
    std::lock_guard lock(mu_);
    if (!seen_.emplace(recipient, kind, subjects, event_seq).second) return std::nullopt;
    n.id = log_.size() + 1;
    n.recipient = recipient;
    n.kind = kind;
    n.subjects = std::move(subjects);
    n.created = iso8601(clock_.now());
    n.event_seq = event_seq;
    log_.push_back(n);
    targets = notifiers_;
  }
  for (const auto &t : targets) {
    try {
      t->deliver(n);
    } catch (const std::exception &e) {
      spdlog::warn("notifier failed for notification {}: {}", n.id, e.what());
    }
  }
  return n;
}

std::optional<Notification> NotificationCenter::on_event(const rules::Event &e,
                                                         const Snapshot &view) {
  if (!e.instance) return std::nullopt;
  if (e.kind == "task-assign" && e.actor && e.subject) {
    return notify(*e.actor, std::string(kTaskAssigned), {e.subject->value(), e.instance->value()},
                  e.seq);
  }
  if (e.kind == "process-end") {
    std::vector<Triple> initiator =
        view->find(*e.instance, Term::iri(vocab::pm("initiator")), std::nullopt);
    if (initiator.empty() || !initiator.front().object.is_iri()) return std::nullopt;
    return notify(initiator.front().object, std::string(kProcessEnded), {e.instance->value()},
                  e.seq);
  }
  return std::nullopt;
}

std::vector<Notification> NotificationCenter::for_recipient(const Term &recipient) const {
  std::lock_guard lock(mu_);
  std::vector<Notification> out;
  for (const Notification &n : log_) {
    if (n.recipient == recipient) out.push_back(n);
  }
  return out;
}

std::vector<Notification> NotificationCenter::all() const {
  std::lock_guard lock(mu_);
  return log_;
}

Notification NotificationCenter::mark_read(uint64_t id, const Term &recipient) {
  std::lock_guard lock(mu_);
  if (id == 0 || id > log_.size() || log_[id - 1].recipient != recipient) {
    throw Error("unknown-notification", std::to_string(id));
  }
  log_[id - 1].read = true;
  return log_[id - 1];
}

}  // namespace semflow::service
