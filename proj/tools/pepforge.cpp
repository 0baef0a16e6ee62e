//
// Project pepforge - Copyright 2026 The pepforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "pepforge/app/config.h"
#include "pepforge/app/pipeline.h"
#include "pepforge/app/service.h"
#include "pepforge/evalkit/evalkit.h"

namespace fs = std::filesystem;
using namespace pepforge;

namespace {

std::ifstream open_in(const std::string &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot read " + path);
  return in;
}

std::ofstream open_out(const std::string &path) {
  const fs::path p(path);
  if (p.has_parent_path())
    fs::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw std::runtime_error("cannot write " + path);
  return out;
}

void report(const app::StageSummary &s) {
  std::cerr << s.to_json().dump() << '\n';
}

app::AppConfig config_for(const std::optional<std::string> &flag) {
  if (const auto path = app::resolve_config_path(flag))
    return app::load_config(*path);
  app::AppConfig c = app::config_from_json(nlohmann::json::object(),
                                           PEPFORGE_DEFAULT_DATA_DIR);
  c.check_paths();
  return c;
}

app::HttpServer *g_server = nullptr;

void on_signal(int) {
  if (g_server)
    g_server->stop();
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App cli { "pepforge: cyclic peptide dataset, reward and GRPO tools" };
  cli.require_subcommand(1);
  std::optional<std::string> config_path;
  cli.add_option("--config", config_path,
                 "config JSON (falls back to $PEPFORGE_CONFIG)");

  // Per-command overrides of config fields.
  std::optional<std::uint64_t> rng_seed;
  std::string in_path, out_path, out_dir;

  auto *augment = cli.add_subcommand("augment", "random single-site mutants");
  std::optional<std::string> seeds_path;
  std::optional<int> k;
  augment->add_option("--seeds", seeds_path, "HELM seed file");
  augment->add_option("--k", k, "mutants per seed");
  augment->add_option("--rng-seed", rng_seed);
  augment->add_option("--out", out_path, "pairs JSONL")->required();

  auto *annotate = cli.add_subcommand("annotate", "predict and categorize");
  annotate->add_option("--in", in_path, "pairs JSONL")->required();
  annotate->add_option("--out", out_path, "annotated JSONL")->required();

  auto *split = cli.add_subcommand("split", "SFT, RL pool and test splits");
  std::optional<std::size_t> cap, rl_size, test_size;
  split->add_option("--in", in_path, "annotated JSONL")->required();
  split->add_option("--out-dir", out_dir, "directory for split files")
      ->required();
  split->add_option("--cap-per-group", cap);
  split->add_option("--rl-pool-size", rl_size);
  split->add_option("--test-size", test_size);
  split->add_option("--rng-seed", rng_seed);

  auto *build = cli.add_subcommand("build-prompts", "render prompt records");
  std::optional<std::string> kind;
  bool all_three = false;
  build->add_option("--in", in_path, "split JSONL")->required();
  build->add_option("--out", out_path, "prompt JSONL")->required();
  build->add_option("--kind", kind, "cot, non_cot or cot_one_shot");
  build->add_flag("--objective-all-three", all_three,
                  "always name all three properties");

  auto *score = cli.add_subcommand("score", "reward for candidate SMILES");
  std::string seed_smiles;
  std::vector<std::string> candidates;
  std::string session;
  score->add_option("--seed-smiles", seed_smiles)->required();
  score->add_option("--candidate", candidates)->required();
  score->add_option("--session", session);

  auto *evaluate = cli.add_subcommand("evaluate", "generation metrics");
  std::string dump_path, baseline_path, training_path, seed_props_path;
  auto *dump_opt = evaluate->add_option("--dump", dump_path,
                                        "generation dump JSONL");
  auto *base_opt = evaluate->add_option(
      "--baseline", baseline_path, "pairs JSONL scored as random mutation");
  dump_opt->excludes(base_opt);
  evaluate->add_option("--training", training_path,
                       "pairs JSONL forming the novelty reference");
  evaluate->add_option("--seed-props", seed_props_path,
                       "annotated JSONL with seed properties");
  evaluate->add_option("--out-dir", out_dir, "report directory");

  auto *serve = cli.add_subcommand("serve", "HTTP reward service");
  std::optional<std::string> host;
  std::optional<int> port;
  serve->add_option("--host", host);
  serve->add_option("--port", port);

  CLI11_PARSE(cli, argc, argv);

  try {
    app::AppConfig cfg = config_for(config_path);
    if (rng_seed)
      cfg.rng_seed = *rng_seed;

    if (*augment) {
      if (seeds_path)
        cfg.seeds_path = *seeds_path;
      if (k)
        cfg.augment_k = *k;
      cfg.validate();
      const auto vocab = peptide::load_vocabulary(cfg.vocabulary_path);
      std::ifstream in = open_in(cfg.seeds_path);
      std::ofstream out = open_out(out_path);
      const app::StageSummary s = app::run_augment(
          app::read_seeds(in), vocab, cfg.augment_k, cfg.rng_seed, out);
      report(s);
      return s.read == 0 ? 1 : 0;
    }
    if (*annotate) {
      const properties::SurrogatePredictor predictor(cfg.surrogate);
      std::ifstream in = open_in(in_path);
      std::ofstream out = open_out(out_path);
      report(app::run_annotate(in, predictor, cfg.thresholds, out));
      return 0;
    }
    if (*split) {
      if (cap)
        cfg.splits.cap_per_group = *cap;
      if (rl_size)
        cfg.splits.rl_pool_size = *rl_size;
      if (test_size)
        cfg.splits.test_size = *test_size;
      std::ifstream in = open_in(in_path);
      std::ofstream sft = open_out((fs::path(out_dir) / "sft.jsonl").string());
      std::ofstream rl =
          open_out((fs::path(out_dir) / "rl_pool.jsonl").string());
      std::ofstream test =
          open_out((fs::path(out_dir) / "test.jsonl").string());
      report(app::run_split(in, cfg.splits, cfg.rng_seed, { sft, rl, test }));
      return 0;
    }
    if (*build) {
      if (kind)
        cfg.prompt_style.kind = prompts::parse_kind(*kind);
      if (all_three)
        cfg.prompt_style.objective = prompts::ObjectiveMode::kAllThree;
      const auto vocab = peptide::load_vocabulary(cfg.vocabulary_path);
      std::ifstream in = open_in(in_path);
      std::ofstream out = open_out(out_path);
      report(app::run_build_prompts(in, vocab, cfg.prompt_style, out));
      return 0;
    }
    if (*score) {
      app::Service service(cfg);
      nlohmann::json body = { { "seed_smiles", seed_smiles },
                              { "session", session },
                              { "candidates", nlohmann::json::array() } };
      for (const std::string &c: candidates)
        body["candidates"].push_back({ { "smiles", c } });
      const app::HttpResult r = service.handle("POST", "/score", body.dump());
      std::cout << r.body.dump(2) << '\n';
      return r.status == 200 ? 0 : 1;
    }
    if (*evaluate) {
      const properties::SurrogatePredictor predictor(cfg.surrogate);
      evalkit::GenerationSet set;
      if (!baseline_path.empty()) {
        std::ifstream in = open_in(baseline_path);
        std::stringstream dump;
        app::write_baseline_dump(in, dump);
        set = app::read_generation_dump(dump, predictor);
      } else if (!dump_path.empty()) {
        std::ifstream in = open_in(dump_path);
        set = app::read_generation_dump(in, predictor);
      } else {
        throw std::runtime_error("evaluate needs --dump or --baseline");
      }
      if (!training_path.empty()) {
        std::ifstream in = open_in(training_path);
        set.training_index = app::read_training_index(in);
      }
      if (!seed_props_path.empty()) {
        std::ifstream in = open_in(seed_props_path);
        set.seed_props = app::read_seed_props(in);
      }
      const evalkit::EvalReport r = evalkit::evaluate(set, cfg.thresholds);
      const std::string table = evalkit::report_table(
          r, baseline_path.empty() ? "model" : "random mutation");
      std::cout << table;
      if (!out_dir.empty()) {
        const fs::path dir(out_dir);
        open_out((dir / "report.json").string())
            << evalkit::report_json(r).dump(2) << '\n';
        open_out((dir / "report.txt").string()) << table;
        if (r.transitions)
          for (const evalkit::TransitionMatrix &m: *r.transitions)
            open_out((dir / ("transitions_"
                             + std::string(properties::key(m.property))
                             + ".csv"))
                         .string())
                << evalkit::transition_csv(m);
      }
      return 0;
    }
    if (*serve) {
      if (host)
        cfg.host = *host;
      if (port)
        cfg.port = *port;
      cfg.validate();
      app::Service service(cfg);
      app::HttpServer server(service);
      const int bound = server.bind(cfg.host, cfg.port);
      if (bound < 0)
        throw std::runtime_error("cannot bind " + cfg.host + ":"
                                 + std::to_string(cfg.port));
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << "listening on " << cfg.host << ":" << bound
                << " config " << app::config_hash(cfg) << '\n';
      server.run();
      return 0;
    }
  } catch (const std::exception &e) {
    std::cerr << "pepforge: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
