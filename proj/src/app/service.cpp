//
// Project pepforge - Copyright 2026 The pepforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "pepforge/app/service.h"

#include <cmath>
#include <optional>

#include <httplib.h>

#include "pepforge/chem/canonical.h"
#include "pepforge/chem/smiles.h"
#include "pepforge/chem/valence.h"
#include "pepforge/grpo/grpo.h"

namespace pepforge::app {

using nlohmann::json;

namespace {

// 400 with the JSON path of the offending field.
struct BadRequest {
  std::string path;
  std::string message;
};

// 422: well-formed but meaningless.
struct Unprocessable {
  std::string message;
};

const json &member(const json &obj, const char *key, const std::string &path) {
  const auto it = obj.find(key);
  if (it == obj.end())
    throw BadRequest { path + "/" + key, "missing field" };
  return *it;
}

std::string string_at(const json &obj, const char *key,
                      const std::string &path) {
  const json &v = member(obj, key, path);
  if (!v.is_string())
    throw BadRequest { path + "/" + key, "expected a string" };
  return v.get<std::string>();
}

Eigen::VectorXd vector_at(const json &v, const std::string &path) {
  if (!v.is_array())
    throw BadRequest { path, "expected an array of numbers" };
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number())
      throw BadRequest { path + "/" + std::to_string(i), "expected a number" };
    out[static_cast<Eigen::Index>(i)] = v[i].get<double>();
  }
  return out;
}

std::vector<Eigen::VectorXd> sequences_at(const json &obj, const char *key) {
  const std::string path = std::string("/") + key;
  const json &v = member(obj, key, "");
  if (!v.is_array())
    throw BadRequest { path, "expected an array of arrays" };
  std::vector<Eigen::VectorXd> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(vector_at(v[i], path + "/" + std::to_string(i)));
  return out;
}

json vector_json(const Eigen::VectorXd &v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

json triple_json(const properties::PropertyTriple &p) {
  return { { "logd", p.logd }, { "mrt", p.mrt }, { "sif", p.sif } };
}

json breakdown_json(const reward::RewardBreakdown &b) {
  return { { "property_terms", b.property_terms },
           { "prop_smooth", b.prop_smooth },
           { "tanimoto", b.tanimoto },
           { "sim_fac", b.sim_fac },
           { "prior_count", b.prior_count },
           { "dup_fac", b.dup_fac },
           { "total", b.total } };
}

HttpResult error(int status, const std::string &message,
                 const std::string &path = "") {
  json body = { { "error", message } };
  if (!path.empty())
    body["path"] = path;
  return { status, body };
}

}  // namespace

Service::Service(AppConfig cfg)
    : cfg_(std::move(cfg)), hash_(config_hash(cfg_)),
      predictor_(cfg_.surrogate) {
  cfg_.validate();
}

Service::Session &Service::session(const std::string &name) {
  std::lock_guard lock(sessions_mutex_);
  auto &slot = sessions_[name];
  if (!slot)
    slot = std::make_unique<Session>(cfg_.reward.history_capacity);
  return *slot;
}

std::size_t Service::history_size() const {
  std::lock_guard lock(sessions_mutex_);
  std::size_t n = 0;
  for (const auto &[name, s]: sessions_)
    n += s->history.size();
  return n;
}

HttpResult Service::handle(std::string_view method, std::string_view path,
                           std::string_view body) {
  const bool get = method == "GET";
  const bool post = method == "POST";
  if (path == "/health")
    return get ? health() : error(405, "use GET");
  if (path != "/score" && path != "/advantages" && path != "/objective")
    return error(404, "no such endpoint");
  if (!post)
    return error(405, "use POST");

  try {
    const json j = json::parse(body);
    if (!j.is_object())
      throw BadRequest { "/", "expected a JSON object" };
    if (path == "/score")
      return score(j);
    if (path == "/advantages")
      return advantages(j);
    return objective(j);
  } catch (const json::parse_error &) {
    return error(400, "body is not valid JSON", "/");
  } catch (const BadRequest &e) {
    return error(400, e.message, e.path);
  } catch (const Unprocessable &e) {
    return error(422, e.message);
  } catch (const std::exception &e) {
    return error(500, e.what());
  }
}

HttpResult Service::score(const json &body) {
  const std::string seed_text = string_at(body, "seed_smiles", "");
  std::string name;
  if (const auto it = body.find("session"); it != body.end()) {
    if (!it->is_string())
      throw BadRequest { "/session", "expected a string" };
    name = it->get<std::string>();
  }
  const json &cands = member(body, "candidates", "");
  if (!cands.is_array())
    throw BadRequest { "/candidates", "expected an array" };
  std::vector<std::string> smiles;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    const std::string path = "/candidates/" + std::to_string(i);
    if (!cands[i].is_object())
      throw BadRequest { path, "expected an object" };
    smiles.push_back(string_at(cands[i], "smiles", path));
  }

  chem::MolGraph seed;
  try {
    seed = chem::parse_smiles(seed_text);
  } catch (const chem::SmilesError &e) {
    throw Unprocessable { std::string("seed_smiles: ") + e.what() };
  }
  if (!chem::validate_valence(seed).valid)
    throw Unprocessable { "seed_smiles: valence check failed" };

  // Everything but the history update happens before the session is
  // touched, so a request without valid candidates leaves no trace.
  struct Prepared {
    chem::MolGraph mol;
    std::string canonical;
    properties::PropertyTriple props;
  };
  std::vector<std::optional<Prepared>> prepared(smiles.size());
  json results = json::array();
  bool any_valid = false;
  for (std::size_t i = 0; i < smiles.size(); ++i) {
    json r = { { "index", i }, { "smiles", smiles[i] } };
    auto invalid = [&](const std::string &why) {
      r["valid"] = false;
      r["reward"] = 0.0;
      r["error"] = why;
    };
    try {
      chem::MolGraph mol = chem::parse_smiles(smiles[i]);
      if (!chem::validate_valence(mol).valid) {
        invalid("valence check failed");
      } else {
        const properties::PropertyTriple props =
            properties::predict(mol, predictor_);
        std::string canonical = chem::canonical_smiles(mol);
        prepared[i] = Prepared { std::move(mol), std::move(canonical), props };
        any_valid = true;
      }
    } catch (const chem::SmilesError &e) {
      invalid(e.what());
    } catch (const properties::PredictorError &e) {
      invalid(e.what());
    }
    results.push_back(std::move(r));
  }

  if (any_valid) {
    Session &s = session(name);
    std::lock_guard lock(s.mutex);
    for (std::size_t i = 0; i < smiles.size(); ++i) {
      if (!prepared[i])
        continue;
      const Prepared &p = *prepared[i];
      const reward::RewardBreakdown b = reward::score(
          seed, p.mol, p.canonical, p.props, s.history, cfg_.reward);
      json &r = results[i];
      r["valid"] = true;
      r["canonical"] = p.canonical;
      r["reward"] = b.total;
      r["breakdown"] = breakdown_json(b);
      r["props"] = triple_json(p.props);
    }
  }
  return { 200, { { "session", name }, { "results", results } } };
}

HttpResult Service::advantages(const json &body) {
  const Eigen::VectorXd r = vector_at(member(body, "rewards", ""), "/rewards");
  try {
    return { 200, { { "advantages", vector_json(grpo::advantages(r)) } } };
  } catch (const grpo::GrpoError &e) {
    throw Unprocessable { e.what() };
  }
}

HttpResult Service::objective(const json &body) {
  grpo::RolloutGroup g;
  g.rewards = vector_at(member(body, "rewards", ""), "/rewards");
  g.logp_theta = sequences_at(body, "logp_theta");
  g.logp_old = sequences_at(body, "logp_old");
  g.logp_ref = sequences_at(body, "logp_ref");
  grpo::GrpoConfig cfg = cfg_.grpo;
  for (const char *key: { "epsilon", "beta" }) {
    const auto it = body.find(key);
    if (it == body.end())
      continue;
    if (!it->is_number())
      throw BadRequest { std::string("/") + key, "expected a number" };
    (key[0] == 'e' ? cfg.epsilon : cfg.beta) = it->get<double>();
  }
  try {
    cfg.validate();
    g.validate();
    const Eigen::VectorXd adv = grpo::advantages(g.rewards);
    json grad = json::array();
    for (const Eigen::VectorXd &v: grpo::objective_gradient(g, adv, cfg))
      grad.push_back(vector_json(v));
    return { 200,
             { { "objective", grpo::surrogate_objective(g, adv, cfg) },
               { "mean_kl", grpo::mean_kl(g) },
               { "advantages", vector_json(adv) },
               { "gradient", grad } } };
  } catch (const grpo::GrpoError &e) {
    throw Unprocessable { e.what() };
  }
}

HttpResult Service::health() const {
  std::size_t sessions = 0;
  {
    std::lock_guard lock(sessions_mutex_);
    sessions = sessions_.size();
  }
  return { 200,
           { { "status", "ok" },
             { "config_hash", hash_ },
             { "history_size", history_size() },
             { "sessions", sessions } } };
}

struct HttpServer::Impl {
  Service &service;
  httplib::Server server;
};

HttpServer::HttpServer(Service &service)
    : impl_(new Impl { service, {} }) {
  auto route = [this](const httplib::Request &req, httplib::Response &res) {
    const HttpResult r = impl_->service.handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  impl_->server.Get(".*", route);
  impl_->server.Post(".*", route);
  impl_->server.Put(".*", route);
  impl_->server.Delete(".*", route);
}

HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string &host, int port) {
  if (port == 0)
    return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::run() {
  return impl_->server.listen_after_bind();
}

void HttpServer::stop() {
  impl_->server.stop();
}

}  // namespace pepforge::app
