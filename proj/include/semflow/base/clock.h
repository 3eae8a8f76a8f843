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

#ifndef SEMFLOW_BASE_CLOCK_H_
#define SEMFLOW_BASE_CLOCK_H_

#include <chrono>
#include <mutex>
#include <string>

namespace semflow {

class Clock {
 public:
  using time_point = std::chrono::system_clock::time_point;
  virtual ~Clock() = default;
  virtual time_point now() = 0;
};

class SystemClock : public Clock {
 public:
  time_point now() override { return std::chrono::system_clock::now(); }
};

// Returns `start`, then advances by `step` on every call.
class ManualClock : public Clock {
 public:
  explicit ManualClock(time_point start = time_point{},
                       std::chrono::milliseconds step = std::chrono::milliseconds(1))
      : next_(start), step_(step) {}
  time_point now() override;

 private:
  std::mutex mu_;
  time_point next_;
  std::chrono::milliseconds step_;
};

// UTC, millisecond precision: 2026-01-01T00:00:00.000Z
std::string iso8601(Clock::time_point t);

}  // namespace semflow

#endif  // SEMFLOW_BASE_CLOCK_H_
