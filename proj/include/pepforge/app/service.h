//
// Project pepforge - Copyright 2026 The pepforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

#include <json.hpp>

#include "pepforge/app/config.h"
#include "pepforge/properties/properties.h"
#include "pepforge/reward/reward.h"

namespace pepforge::app {

struct HttpResult {
  int status = 200;
  nlohmann::json body;
};

// Request handlers without any transport. Each session owns its own
// generation history; requests without a session share the default one.
class Service {
public:
  explicit Service(AppConfig cfg);

  // Routes by method and path; never throws for bad input.
  HttpResult handle(std::string_view method, std::string_view path,
                    std::string_view body);

  HttpResult score(const nlohmann::json &body);
  HttpResult advantages(const nlohmann::json &body);
  HttpResult objective(const nlohmann::json &body);
  HttpResult health() const;

  const AppConfig &config() const { return cfg_; }
  // Entries over all sessions.
  std::size_t history_size() const;

private:
  struct Session {
    std::mutex mutex;
    reward::GenerationHistory history;
    explicit Session(std::size_t capacity): history(capacity) { }
  };
  Session &session(const std::string &name);

  AppConfig cfg_;
  std::string hash_;
  properties::SurrogatePredictor predictor_;
  mutable std::mutex sessions_mutex_;
  std::map<std::string, std::unique_ptr<Session>> sessions_;
};

// HTTP transport around a Service.
class HttpServer {
public:
  explicit HttpServer(Service &service);
  ~HttpServer();

  // Port 0 picks a free port. Returns the bound port or -1.
  int bind(const std::string &host, int port);
  // Blocks until stop() is called.
  bool run();
  void stop();

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace pepforge::app
