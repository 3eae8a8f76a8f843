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

#ifndef SEMFLOW_SERVICE_NOTIFICATIONS_H_
#define SEMFLOW_SERVICE_NOTIFICATIONS_H_

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "semflow/base/clock.h"
#include "semflow/rules/eca.h"
#include "semflow/store/triple_store.h"

namespace semflow::service {

inline constexpr std::string_view kTaskAssigned = "task-assigned";
inline constexpr std::string_view kTaskUnassignedPool = "task-unassigned-pool";
inline constexpr std::string_view kProcessEnded = "process-ended";

struct Notification {
  uint64_t id = 0;
  Term recipient;
  std::string kind;
  std::vector<std::string> subjects;
  std::string created;
  bool read = false;
  uint64_t event_seq = 0;  // 0 when not caused by an engine event
};

// Delivery channel; the in-app record is kept regardless.
class Notifier {
 public:
  virtual ~Notifier() = default;
  virtual void deliver(const Notification &n) = 0;
};

class NotificationCenter {
 public:
  explicit NotificationCenter(Clock &clock) : clock_(clock) {}

  void add_notifier(std::shared_ptr<Notifier> n);

  // Records and delivers unless (recipient, kind, subjects, event_seq) was
  // seen before. Notifier failures are logged and swallowed.
  std::optional<Notification> notify(const Term &recipient, const std::string &kind,
                                     std::vector<std::string> subjects, uint64_t event_seq = 0);

  // task-assign notifies the assignee; process-end notifies the initiator
  // read from `view`. Other kinds produce nothing.
  std::optional<Notification> on_event(const rules::Event &e, const Snapshot &view);

  std::vector<Notification> for_recipient(const Term &recipient) const;
  std::vector<Notification> all() const;
  // Throws Error("unknown-notification").
  Notification mark_read(uint64_t id, const Term &recipient);

 private:
  Clock &clock_;
  mutable std::mutex mu_;
  std::vector<Notification> log_;
  std::set<std::tuple<Term, std::string, std::vector<std::string>, uint64_t>> seen_;
  std::vector<std::shared_ptr<Notifier>> notifiers_;
};

}  // namespace semflow::service

#endif  // SEMFLOW_SERVICE_NOTIFICATIONS_H_
