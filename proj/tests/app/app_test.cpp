//
// Project pepforge - Copyright 2026 The pepforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <thread>

#include "pepforge/app/config.h"
#include "pepforge/app/pipeline.h"
#include "pepforge/app/service.h"

// After Eigen: resolv.h defines a _res macro.
#include <httplib.h>

namespace pepforge::app {
namespace {

using nlohmann::json;

AppConfig bundled_config() {
  return load_config(PEPFORGE_DATA_DIR "/config.json");
}

TEST(Config, BundledFileLoads) {
  const AppConfig c = bundled_config();
  EXPECT_EQ(c.splits.cap_per_group, 4000u);
  EXPECT_EQ(c.splits.rl_pool_size, 600u);
  EXPECT_EQ(c.splits.test_size, 1880u);
  EXPECT_EQ(c.reward.alpha, 10.0);
  EXPECT_NE(c.vocabulary_path.find("data/monomers.tsv"), std::string::npos);
}

TEST(Config, RoundTripAndHash) {
  const AppConfig c = bundled_config();
  const AppConfig back = config_from_json(config_to_json(c));
  EXPECT_EQ(config_to_json(back), config_to_json(c));
  EXPECT_EQ(config_hash(back), config_hash(c));
  EXPECT_EQ(config_hash(c).size(), 16u);
}

// Changing any single leaf changes the hash.
TEST(Config, HashTracksEveryField) {
  const AppConfig base = bundled_config();
  const std::string h0 = config_hash(base);
  const json j0 = config_to_json(base);
  const json flat = j0.flatten();
  int checked = 0;
  for (const auto &[ptr, value]: flat.items()) {
    json changed = flat;
    if (value.is_boolean())
      changed[ptr] = !value.get<bool>();
    else if (value.is_number_float())
      changed[ptr] = value.get<double>() * 0.5 + 0.01;
    else if (value.is_number())
      changed[ptr] = value.get<long long>() + 1;
    else if (value.is_string() && ptr != "/prompts/kind")
      changed[ptr] = value.get<std::string>() + "x";
    else if (ptr == "/prompts/kind")
      changed[ptr] = "non_cot";
    else
      continue;
    AppConfig c;
    try {
      c = config_from_json(changed.unflatten());
    } catch (const ConfigError &) {
      continue;  // the change broke a constraint
    }
    EXPECT_NE(config_hash(c), h0) << ptr;
    ++checked;
  }
  EXPECT_GT(checked, 40);
}

TEST(Config, ErrorsCarryPaths) {
  auto path_of = [](const json &j) -> std::string {
    try {
      config_from_json(j);
    } catch (const ConfigError &e) {
      return e.path();
    }
    return "";
  };
  EXPECT_EQ(path_of({ { "reward", { { "alpha", "x" } } } }), "/reward/alpha");
  EXPECT_EQ(path_of({ { "bogus", 1 } }), "/bogus");
  EXPECT_EQ(path_of({ { "reward", { { "w_prop", 0.5 } } } }), "/reward");
  EXPECT_EQ(path_of({ { "grpo", { { "epsilon", 2.0 } } } }), "/grpo");
  EXPECT_EQ(path_of({ { "thresholds", { { "logd", { { "lo", 5 } } } } } }),
            "/thresholds");
  EXPECT_EQ(path_of({ { "prompts", { { "kind", "long" } } } }),
            "/prompts/kind");
  EXPECT_EQ(path_of({ { "reward", { { "scales", { 1, 2 } } } } }),
            "/reward/scales");

  AppConfig c;
  c.vocabulary_path = "/nonexistent/monomers.tsv";
  EXPECT_THROW(c.check_paths(), ConfigError);
}

TEST(Config, EnvironmentFallback) {
  ::setenv("PEPFORGE_CONFIG", "/tmp/from_env.json", 1);
  EXPECT_EQ(resolve_config_path(std::nullopt).value_or(""),
            "/tmp/from_env.json");
  EXPECT_EQ(resolve_config_path(std::string("a.json")).value_or(""),
            "a.json");
  ::unsetenv("PEPFORGE_CONFIG");
  EXPECT_FALSE(resolve_config_path(std::nullopt));
}

const peptide::MonomerVocabulary &vocab() {
  static const peptide::MonomerVocabulary v =
      peptide::load_vocabulary(PEPFORGE_DATA_DIR "/monomers.tsv");
  return v;
}

std::vector<SeedEntry> bundled_seeds() {
  std::ifstream in(PEPFORGE_DATA_DIR "/seeds.helm");
  return read_seeds(in);
}

TEST(Pipeline, SeedsFileFormats) {
  std::istringstream in("# comment\n\nPEPTIDE1{G.G}$PEPTIDE1,PEPTIDE1,"
                        "2:R2-1:R1$$$\nmine\tPEPTIDE1{A.G}$PEPTIDE1,PEPTIDE1,"
                        "2:R2-1:R1$$$\n");
  const auto seeds = read_seeds(in);
  ASSERT_EQ(seeds.size(), 2u);
  EXPECT_EQ(seeds[0].id, "seed-001");
  EXPECT_EQ(seeds[0].line, 3u);
  EXPECT_EQ(seeds[1].id, "mine");
  EXPECT_EQ(bundled_seeds().size(), 20u);
}

TEST(Pipeline, AugmentDeterministicAndBounded) {
  auto seeds = bundled_seeds();
  seeds.resize(10);
  std::ostringstream a, b;
  const StageSummary s = run_augment(seeds, vocab(), 100, 5, a);
  run_augment(seeds, vocab(), 100, 5, b);
  EXPECT_EQ(a.str(), b.str());
  EXPECT_LE(s.written, 1000u);
  EXPECT_GT(s.written, 500u);

  std::ostringstream empty;
  const StageSummary e = run_augment({}, vocab(), 100, 5, empty);
  EXPECT_TRUE(empty.str().empty());
  EXPECT_FALSE(e.messages.empty());

  std::ostringstream bad;
  const StageSummary sb = run_augment(
      { { "x", "PEPTIDE1{G.Zzz}$PEPTIDE1,PEPTIDE1,2:R2-1:R1$$$", 7 } },
      vocab(), 5, 1, bad);
  EXPECT_EQ(sb.skipped, 1u);
  EXPECT_EQ(sb.messages.at(0).rfind("line 7", 0), 0u);
}

TEST(Pipeline, EndToEndInMemory) {
  const AppConfig cfg = bundled_config();
  std::ostringstream pairs;
  run_augment(bundled_seeds(), vocab(), 40, cfg.rng_seed, pairs);

  const properties::SurrogatePredictor predictor(cfg.surrogate);
  std::istringstream pin(pairs.str());
  std::ostringstream annotated;
  const StageSummary sa =
      run_annotate(pin, predictor, cfg.thresholds, annotated);
  EXPECT_EQ(sa.skipped, 0u);

  std::istringstream ain(annotated.str());
  std::ostringstream sft, rl, test;
  run_split(ain, cfg.splits, cfg.rng_seed, { sft, rl, test });
  std::istringstream sft_in(sft.str());
  const auto sft_records = read_pair_records(sft_in);
  ASSERT_FALSE(sft_records.empty());

  // Held-out seeds never appear in SFT.
  std::istringstream test_in(test.str());
  std::set<std::string> sft_seeds;
  for (const auto &r: sft_records)
    sft_seeds.insert(r.seed_id);
  for (const auto &r: read_pair_records(test_in))
    EXPECT_EQ(sft_seeds.count(r.seed_id), 0u) << r.seed_id;

  for (const prompts::PromptKind k:
       { prompts::PromptKind::kCot, prompts::PromptKind::kNonCot,
         prompts::PromptKind::kCotOneShot }) {
    std::istringstream in(sft.str());
    std::ostringstream out;
    run_build_prompts(in, vocab(), { k }, out);
    std::istringstream lines(out.str());
    std::string line;
    std::size_t n = 0;
    while (std::getline(lines, line)) {
      const json j = json::parse(line);
      const auto parsed = prompts::parse_output(j["target"].get<std::string>());
      ASSERT_TRUE(parsed.well_formed);
      EXPECT_EQ(*parsed.smiles, j["answer_smiles"].get<std::string>());
      ++n;
    }
    EXPECT_EQ(n, sft_records.size());
  }

  std::istringstream base_in(test.str());
  std::stringstream dump;
  write_baseline_dump(base_in, dump);
  evalkit::GenerationSet set = read_generation_dump(dump, predictor);
  std::istringstream train_in(sft.str());
  set.training_index = read_training_index(train_in);
  const evalkit::EvalReport r = evalkit::evaluate(set, cfg.thresholds);
  EXPECT_EQ(r.validity, 1.0);
  EXPECT_EQ(r.novelty, 1.0);
}

TEST(Pipeline, SchemaErrorsNameTheLine) {
  std::istringstream in("{\"seed_id\":\"a\"}\n");
  try {
    read_pair_records(in);
    FAIL();
  } catch (const RecordError &e) {
    EXPECT_EQ(e.line(), 1u);
    EXPECT_NE(std::string(e.what()).find("/position"), std::string::npos);
  }
  std::istringstream dump("\n{\"seed_id\":\"a\",\"smiles\":\"CC\"}\nnope\n");
  const properties::SurrogatePredictor p;
  try {
    read_generation_dump(dump, p);
    FAIL();
  } catch (const RecordError &e) {
    EXPECT_EQ(e.line(), 3u);
  }
  std::istringstream partial(
      "{\"seed_id\":\"a\",\"smiles\":\"CC\",\"logd\":1}\n");
  EXPECT_THROW(read_generation_dump(partial, p), RecordError);
}

TEST(Pipeline, DumpWithGivenProps) {
  std::istringstream dump(
      "{\"seed_id\":\"a\",\"output_text\":\"<SMILES>CCO</SMILES>\","
      "\"logd\":5,\"mrt\":2,\"sif\":11}\n"
      "{\"seed_id\":\"a\",\"output_text\":\"nothing\"}\n");
  const properties::SurrogatePredictor p;
  const evalkit::GenerationSet s = read_generation_dump(dump, p);
  ASSERT_EQ(s.records.size(), 2u);
  EXPECT_TRUE(s.records[0].valid);
  EXPECT_EQ(s.records[0].props->sif, 11);
  EXPECT_FALSE(s.records[1].valid);
  EXPECT_EQ(evalkit::hqsr(s), 0.5);
}

const char *const kSeed = "O=C1CNC(=O)CN1";

json score_body(const std::string &session,
                const std::vector<std::string> &cands) {
  json body = { { "seed_smiles", kSeed }, { "session", session } };
  body["candidates"] = json::array();
  for (const auto &c: cands)
    body["candidates"].push_back({ { "smiles", c } });
  return body;
}

TEST(Service, SelfCandidateSimilarityTerm) {
  Service s(bundled_config());
  const HttpResult r =
      s.handle("POST", "/score", score_body("fresh", { kSeed }).dump());
  ASSERT_EQ(r.status, 200);
  const json &b = r.body["results"][0]["breakdown"];
  EXPECT_EQ(b["tanimoto"].get<double>(), 1.0);
  // sigma(alpha * (1 - s0)) = sigma(4)
  EXPECT_NEAR(b["sim_fac"].get<double>(), 1.0 / (1.0 + std::exp(-4.0)),
              1e-12);
  EXPECT_NEAR(b["sim_fac"].get<double>(), 0.98201379003790845, 1e-12);
}

TEST(Service, DuplicateHalvesAndSessionsPartition) {
  Service s(bundled_config());
  const std::string body = score_body("a", { "CCO", "CCO" }).dump();
  const HttpResult r = s.handle("POST", "/score", body);
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.body["results"][0]["breakdown"]["dup_fac"].get<double>(), 1.0);
  EXPECT_EQ(r.body["results"][1]["breakdown"]["dup_fac"].get<double>(), 0.5);
  const HttpResult other =
      s.handle("POST", "/score", score_body("b", { "CCO" }).dump());
  EXPECT_EQ(other.body["results"][0]["breakdown"]["dup_fac"].get<double>(),
            1.0);
  EXPECT_EQ(s.history_size(), 2u);
}

TEST(Service, InvalidCandidatesLeaveNoTrace) {
  Service s(bundled_config());
  const json before = s.health().body;
  const HttpResult r = s.handle(
      "POST", "/score", score_body("x", { "C1CC", "C(C)(C)(C)(C)C" }).dump());
  ASSERT_EQ(r.status, 200);
  for (const json &c: r.body["results"]) {
    EXPECT_FALSE(c["valid"].get<bool>());
    EXPECT_EQ(c["reward"].get<double>(), 0.0);
  }
  EXPECT_EQ(s.health().body, before);

  // Mixed: order kept, only the valid one recorded.
  const HttpResult m =
      s.handle("POST", "/score", score_body("", { "C1CC", "CC" }).dump());
  EXPECT_FALSE(m.body["results"][0]["valid"].get<bool>());
  EXPECT_TRUE(m.body["results"][1]["valid"].get<bool>());
  EXPECT_EQ(m.body["results"][1]["index"].get<int>(), 1);
  EXPECT_EQ(s.history_size(), 1u);
}

TEST(Service, FreshSessionsAreDeterministic) {
  Service s(bundled_config());
  const std::vector<std::string> cands = { "CCO", kSeed, "c1ccccc1", "CCO" };
  const json a = s.handle("POST", "/score", score_body("r1", cands).dump()).body;
  const json b = s.handle("POST", "/score", score_body("r2", cands).dump()).body;
  EXPECT_EQ(a["results"], b["results"]);
}

TEST(Service, AdvantagesAndObjective) {
  Service s(bundled_config());
  const HttpResult a =
      s.handle("POST", "/advantages", R"({"rewards":[1,2,3]})");
  ASSERT_EQ(a.status, 200);
  EXPECT_NEAR(a.body["advantages"][0].get<double>(), -1.224744871391589, 1e-12);
  EXPECT_NEAR(a.body["advantages"][1].get<double>(), 0.0, 1e-12);
  EXPECT_NEAR(a.body["advantages"][2].get<double>(), 1.224744871391589, 1e-12);

  const json obj = { { "rewards", { 1.0, 0.0 } },
                     { "logp_theta", { { -1.0, -2.0 }, { -0.5 } } },
                     { "logp_old", { { -1.0, -2.0 }, { -0.5 } } },
                     { "logp_ref", { { -1.0, -2.0 }, { -0.5 } } } };
  const HttpResult o = s.handle("POST", "/objective", obj.dump());
  ASSERT_EQ(o.status, 200) << o.body.dump();
  // Ratios 1, KL 0: mean of advantages over sequences is 0.
  EXPECT_NEAR(o.body["objective"].get<double>(), 0.0, 1e-12);
  EXPECT_EQ(o.body["mean_kl"].get<double>(), 0.0);
  EXPECT_EQ(o.body["gradient"][1].size(), 1u);

  json bad = obj;
  bad["logp_old"][1] = { -0.5, -0.1 };
  EXPECT_EQ(s.handle("POST", "/objective", bad.dump()).status, 422);
}

TEST(Service, StatusCodes) {
  Service s(bundled_config());
  auto status = [&](const char *m, const char *p, const std::string &b) {
    return s.handle(m, p, b).status;
  };
  EXPECT_EQ(status("POST", "/score", "{"), 400);
  EXPECT_EQ(status("POST", "/score", "[]"), 400);
  const HttpResult missing = s.handle("POST", "/score", R"({"candidates":[]})");
  EXPECT_EQ(missing.status, 400);
  EXPECT_EQ(missing.body["path"], "/seed_smiles");
  const HttpResult deep = s.handle(
      "POST", "/score",
      R"({"seed_smiles":"CC","candidates":[{"smiles":"C"},{"smiles":3}]})");
  EXPECT_EQ(deep.status, 400);
  EXPECT_EQ(deep.body["path"], "/candidates/1/smiles");
  EXPECT_EQ(status("POST", "/score",
                   R"({"seed_smiles":"C1CC","candidates":[]})"), 422);
  const HttpResult adv =
      s.handle("POST", "/advantages", R"({"rewards":[1,"a"]})");
  EXPECT_EQ(adv.status, 400);
  EXPECT_EQ(adv.body["path"], "/rewards/1");
  EXPECT_EQ(status("POST", "/advantages", R"({"rewards":[1]})"), 422);
  EXPECT_EQ(status("POST", "/objective", R"({"rewards":[1,2]})"), 400);
  EXPECT_EQ(status("GET", "/score", ""), 405);
  EXPECT_EQ(status("POST", "/health", ""), 405);
  EXPECT_EQ(status("GET", "/nope", ""), 404);
  const HttpResult h = s.health();
  EXPECT_EQ(h.body["config_hash"], config_hash(s.config()));
}

TEST(Service, OverTheWire) {
  Service service(bundled_config());
  HttpServer server(service);
  const int port = server.bind("127.0.0.1", 0);
  ASSERT_GT(port, 0);
  std::thread t([&] { server.run(); });
  httplib::Client client("127.0.0.1", port);
  httplib::Result health;
  for (int i = 0; i < 100 && !health; ++i) {
    health = client.Get("/health");
    if (!health)
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);
  const auto r = client.Post("/advantages", R"({"rewards":[1,2,3]})",
                             "application/json");
  ASSERT_TRUE(r);
  const json j = json::parse(r->body);
  EXPECT_NEAR(j["advantages"][2].get<double>(), 1.22474, 1e-5);
  const auto bad = client.Post("/score", "nope", "application/json");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);
  server.stop();
  t.join();
}

}  // namespace
}  // namespace pepforge::app
