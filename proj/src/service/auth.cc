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

#include "semflow/service/auth.h"

#include <sodium.h>

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "semflow/base/error.h"

namespace semflow::service {
namespace {

void init_sodium() {
  static const bool ok = sodium_init() >= 0;
  if (!ok) throw Error("crypto-unavailable", "sodium_init");
}

}  // namespace

std::string hash_password(const std::string &password, HashStrength strength) {
  init_sodium();
  char out[crypto_pwhash_STRBYTES];
  unsigned long long ops = strength == HashStrength::kMinimal ? crypto_pwhash_OPSLIMIT_MIN
                                                              : crypto_pwhash_OPSLIMIT_INTERACTIVE;
  size_t mem = strength == HashStrength::kMinimal ? crypto_pwhash_MEMLIMIT_MIN
                                                  : crypto_pwhash_MEMLIMIT_INTERACTIVE;
  if (crypto_pwhash_str(out, password.data(), password.size(), ops, mem) != 0) {
    throw Error("crypto-unavailable", "crypto_pwhash_str");
  }
  return out;
}

bool verify_password(const std::string &hash, const std::string &password) {
  init_sodium();
  return crypto_pwhash_str_verify(hash.c_str(), password.data(), password.size()) == 0;
}

void UserDirectory::add(User u) {
  std::lock_guard lock(mu_);
  std::string name = u.name;
  users_[name] = std::move(u);
}

std::optional<User> UserDirectory::find(const std::string &name) const {
  std::lock_guard lock(mu_);
  auto it = users_.find(name);
  if (it == users_.end()) return std::nullopt;
  return it->second;
}

std::optional<User> UserDirectory::find_by_iri(const Term &iri) const {
  std::lock_guard lock(mu_);
  for (const auto &[name, u] : users_) {
    if (u.iri == iri) return u;
  }
  return std::nullopt;
}

std::vector<User> UserDirectory::all() const {
  std::lock_guard lock(mu_);
  std::vector<User> out;
  for (const auto &[name, u] : users_) out.push_back(u);
  return out;
}

void UserDirectory::load(const std::filesystem::path &file) {
  std::ifstream in(file);
  if (!in) throw Error("io-error", file.string());
  std::map<std::string, User> loaded;
  try {
    nlohmann::json doc = nlohmann::json::parse(in);
    for (const auto &u : doc) {
      User user{u.at("name").get<std::string>(), Term::iri(u.at("iri").get<std::string>()),
                u.at("password_hash").get<std::string>()};
      loaded[user.name] = std::move(user);
    }
  } catch (const nlohmann::json::exception &e) {
    throw Error("parse-error", file.string() + ": " + e.what());
  } catch (const Error &e) {
    throw Error("parse-error", file.string() + ": " + e.what());
  }
  std::lock_guard lock(mu_);
  users_ = std::move(loaded);
}

void UserDirectory::save(const std::filesystem::path &file) const {
  nlohmann::json doc = nlohmann::json::array();
  for (const User &u : all()) {
    doc.push_back({{"name", u.name}, {"iri", u.iri.value()}, {"password_hash", u.password_hash}});
  }
  std::ofstream out(file);
  out << doc.dump(2) << "\n";
  if (!out) throw Error("io-error", file.string());
}

Session SessionStore::open(const Term &user, std::vector<Term> roles) {
  init_sodium();
  unsigned char raw[16];
  randombytes_buf(raw, sizeof raw);
  char hex[sizeof raw * 2 + 1];
  sodium_bin2hex(hex, sizeof hex, raw, sizeof raw);
  Session s{hex, user, std::move(roles), clock_.now() + ttl_};
  std::lock_guard lock(mu_);
  sessions_[s.token] = s;
  return s;
}

std::optional<Session> SessionStore::check(const std::string &token) {
  auto now = clock_.now();
  std::lock_guard lock(mu_);
  auto it = sessions_.find(token);
  if (it == sessions_.end()) return std::nullopt;
  if (it->second.expires <= now) {
    sessions_.erase(it);
    return std::nullopt;
  }
  return it->second;
}

void SessionStore::close(const std::string &token) {
  std::lock_guard lock(mu_);
  sessions_.erase(token);
}

size_t SessionStore::size() const {
  std::lock_guard lock(mu_);
  return sessions_.size();
}

}  // namespace semflow::service
