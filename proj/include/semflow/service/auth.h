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

#ifndef SEMFLOW_SERVICE_AUTH_H_
#define SEMFLOW_SERVICE_AUTH_H_

#include <chrono>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "semflow/base/clock.h"
#include "semflow/store/triple_store.h"

namespace semflow::service {

struct User {
  std::string name;  // login name
  Term iri;
  std::string password_hash;  // argon2id string
};

enum class HashStrength { kInteractive, kMinimal };

// Argon2id via libsodium. kMinimal is for throwaway scenario accounts.
std::string hash_password(const std::string &password,
                          HashStrength strength = HashStrength::kInteractive);
bool verify_password(const std::string &hash, const std::string &password);

// users.json: [{"name": ..., "iri": ..., "password_hash": ...}]
class UserDirectory {
 public:
  void add(User u);
  std::optional<User> find(const std::string &name) const;
  std::optional<User> find_by_iri(const Term &iri) const;
  std::vector<User> all() const;

  // Throws Error("io-error") or Error("parse-error", path).
  void load(const std::filesystem::path &file);
  void save(const std::filesystem::path &file) const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, User> users_;
};

struct Session {
  std::string token;  // 32 hex digits from 16 random bytes
  Term user;
  std::vector<Term> roles;
  Clock::time_point expires;
};

class SessionStore {
 public:
  SessionStore(Clock &clock, std::chrono::seconds ttl) : clock_(clock), ttl_(ttl) {}

  Session open(const Term &user, std::vector<Term> roles);
  // nullopt for unknown or expired tokens; expired ones are dropped.
  std::optional<Session> check(const std::string &token);
  void close(const std::string &token);
  size_t size() const;

 private:
  Clock &clock_;
  std::chrono::seconds ttl_;
  mutable std::mutex mu_;
  std::map<std::string, Session> sessions_;
};

}  // namespace semflow::service

#endif  // SEMFLOW_SERVICE_AUTH_H_
