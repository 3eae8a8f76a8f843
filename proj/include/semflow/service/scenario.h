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

#ifndef SEMFLOW_SERVICE_SCENARIO_H_
#define SEMFLOW_SERVICE_SCENARIO_H_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "semflow/service/service.h"

namespace semflow::service {

struct ScenarioResult {
  bool ok = true;
  size_t calls = 0;
  std::vector<std::string> failures;  // "line N: what"
  std::map<std::string, std::string> vars;
};

// Drives a Service with a scenario script (docs/scenario-format.md). File
// arguments resolve against `base_dir`.
class ScenarioRunner {
 public:
  ScenarioRunner(Service &svc, std::filesystem::path base_dir,
                 HashStrength strength = HashStrength::kMinimal)
      : svc_(svc), base_dir_(std::move(base_dir)), strength_(strength) {}

  // Stops at the first failed expectation. Throws Error("syntax-error",
  // why, line) for malformed scripts.
  ScenarioResult run(std::string_view script);

 private:
  Service &svc_;
  std::filesystem::path base_dir_;
  HashStrength strength_;
};

// Event log with the timestamp column replaced by "*".
std::string normalize_log(std::string_view log);
// Kind column of an event log.
std::vector<std::string> log_kinds(std::string_view log);

}  // namespace semflow::service

#endif  // SEMFLOW_SERVICE_SCENARIO_H_
