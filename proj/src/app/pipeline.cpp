//
// Project pepforge - Copyright 2026 The pepforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "pepforge/app/pipeline.h"

#include <cstdio>
#include <istream>
#include <ostream>

#include "pepforge/chem/smiles.h"
#include "pepforge/util/hash.h"

namespace pepforge::app {

using nlohmann::json;
using properties::PropertyTriple;

RecordError::RecordError(std::size_t line, const std::string &path,
                         const std::string &what)
    : std::runtime_error("line " + std::to_string(line)
                         + (path.empty() ? "" : " " + path) + ": " + what),
      line_(line) { }

namespace {

std::string trim(const std::string &s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos)
    return {};
  return s.substr(a, s.find_last_not_of(" \t\r\n") - a + 1);
}

json triple_json(const PropertyTriple &p) {
  return { { "logd", p.logd }, { "mrt", p.mrt }, { "sif", p.sif } };
}

PropertyTriple triple_from(const json &j, std::size_t line,
                           const std::string &path) {
  if (!j.is_object())
    throw RecordError(line, path, "expected an object");
  PropertyTriple p;
  for (const properties::Property q: properties::kAllProperties) {
    const std::string key(properties::key(q));
    const auto it = j.find(key);
    if (it == j.end() || !it->is_number())
      throw RecordError(line, path + "/" + key, "expected a number");
    double &slot = q == properties::Property::kLogD ? p.logd
                   : q == properties::Property::kMrt ? p.mrt
                                                     : p.sif;
    slot = it->get<double>();
  }
  return p;
}

template <class T>
T field(const json &j, const char *key, std::size_t line) {
  const auto it = j.find(key);
  if (it == j.end())
    throw RecordError(line, std::string("/") + key, "missing field");
  try {
    return it->get<T>();
  } catch (const json::exception &) {
    throw RecordError(line, std::string("/") + key, "wrong type");
  }
}

json parse_line(const std::string &text, std::size_t line) {
  try {
    return json::parse(text);
  } catch (const json::parse_error &e) {
    throw RecordError(line, "", "not valid JSON");
  }
}

// Calls `fn(json, line)` for every non-blank line.
template <class Fn> void each_line(std::istream &in, Fn fn) {
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (trim(text).empty())
      continue;
    fn(parse_line(text, line), line);
  }
}

void write_line(std::ostream &out, const json &j) {
  out << j.dump() << '\n';
}

properties::ImprovementLabel label_from_group(const std::string &g,
                                              std::size_t line) {
  properties::ImprovementLabel l;
  if (g == "none")
    return l;
  std::size_t start = 0;
  for (;;) {
    const auto plus = g.find('+', start);
    const std::string part = g.substr(start, plus - start);
    bool found = false;
    for (const properties::Property p: properties::kAllProperties)
      if (properties::key(p) == part) {
        l.improved[static_cast<int>(p)] = true;
        found = true;
      }
    if (!found)
      throw RecordError(line, "/group", "unknown group '" + g + "'");
    if (plus == std::string::npos)
      break;
    start = plus + 1;
  }
  return l;
}

}  // namespace

std::vector<SeedEntry> read_seeds(std::istream &in) {
  std::vector<SeedEntry> out;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    const std::string t = trim(text);
    if (t.empty() || t[0] == '#')
      continue;
    SeedEntry e;
    e.line = line;
    const auto tab = t.find('\t');
    if (tab == std::string::npos) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "seed-%03zu", out.size() + 1);
      e.id = buf;
      e.helm = t;
    } else {
      e.id = trim(t.substr(0, tab));
      e.helm = trim(t.substr(tab + 1));
    }
    out.push_back(std::move(e));
  }
  return out;
}

json to_json(const PairRecord &r) {
  json j = { { "seed_id", r.seed_id },
             { "position", r.position },
             { "leaving", r.leaving },
             { "incoming", r.incoming },
             { "original_helm", r.original_helm },
             { "original_smiles", r.original_smiles },
             { "mutated_helm", r.mutated_helm },
             { "mutated_smiles", r.mutated_smiles } };
  if (r.original_props)
    j["original_props"] = triple_json(*r.original_props);
  if (r.mutated_props)
    j["mutated_props"] = triple_json(*r.mutated_props);
  if (r.label)
    j["group"] = r.label->group();
  return j;
}

PairRecord pair_record_from_json(const json &j, std::size_t line) {
  if (!j.is_object())
    throw RecordError(line, "", "expected an object");
  PairRecord r;
  r.seed_id = field<std::string>(j, "seed_id", line);
  r.position = field<int>(j, "position", line);
  if (r.position < 1)
    throw RecordError(line, "/position", "must be at least 1");
  r.leaving = field<std::string>(j, "leaving", line);
  r.incoming = field<std::string>(j, "incoming", line);
  r.original_helm = field<std::string>(j, "original_helm", line);
  r.original_smiles = field<std::string>(j, "original_smiles", line);
  r.mutated_helm = field<std::string>(j, "mutated_helm", line);
  r.mutated_smiles = field<std::string>(j, "mutated_smiles", line);
  if (const auto it = j.find("original_props"); it != j.end())
    r.original_props = triple_from(*it, line, "/original_props");
  if (const auto it = j.find("mutated_props"); it != j.end())
    r.mutated_props = triple_from(*it, line, "/mutated_props");
  if (const auto it = j.find("group"); it != j.end()) {
    if (!it->is_string())
      throw RecordError(line, "/group", "wrong type");
    r.label = label_from_group(it->get<std::string>(), line);
  }
  return r;
}

std::vector<PairRecord> read_pair_records(std::istream &in) {
  std::vector<PairRecord> out;
  each_line(in, [&](const json &j, std::size_t line) {
    out.push_back(pair_record_from_json(j, line));
  });
  return out;
}

json StageSummary::to_json() const {
  return { { "stage", stage },
           { "read", read },
           { "written", written },
           { "skipped", skipped },
           { "messages", messages } };
}

StageSummary run_augment(const std::vector<SeedEntry> &seeds,
                         const peptide::MonomerVocabulary &vocab, int k,
                         std::uint64_t rng_seed, std::ostream &out) {
  StageSummary s;
  s.stage = "augment";
  if (seeds.empty())
    s.messages.push_back("warning: no seeds in input");
  for (const SeedEntry &e: seeds) {
    ++s.read;
    peptide::Peptide seed;
    try {
      seed = peptide::parse_helm(e.helm, vocab);
    } catch (const peptide::PeptideError &err) {
      ++s.skipped;
      s.messages.push_back("line " + std::to_string(e.line) + ": "
                           + err.what());
      continue;
    }
    const std::uint64_t stream = hash_combine(hash_bytes(e.id), rng_seed);
    const auto pairs = peptide::augment(seed, vocab, k, stream);
    if (static_cast<int>(pairs.size()) < k)
      s.messages.push_back(e.id + ": " + std::to_string(pairs.size())
                           + " unique mutants of " + std::to_string(k)
                           + " requested");
    for (const peptide::PeptidePair &p: pairs) {
      PairRecord r;
      r.seed_id = e.id;
      r.position = p.position;
      r.leaving = p.leaving;
      r.incoming = p.incoming;
      r.original_helm = peptide::to_helm(p.original.monomer_ids);
      r.original_smiles = p.original.canonical;
      r.mutated_helm = peptide::to_helm(p.mutated.monomer_ids);
      r.mutated_smiles = p.mutated.canonical;
      write_line(out, to_json(r));
      ++s.written;
    }
  }
  return s;
}

StageSummary run_annotate(std::istream &pairs,
                          const properties::PropertyPredictor &predictor,
                          const properties::BucketThresholds &t,
                          std::ostream &out) {
  StageSummary s;
  s.stage = "annotate";
  each_line(pairs, [&](const json &j, std::size_t line) {
    ++s.read;
    PairRecord r = pair_record_from_json(j, line);
    try {
      r.original_props = properties::predict(
          chem::parse_smiles(r.original_smiles), predictor);
      r.mutated_props = properties::predict(
          chem::parse_smiles(r.mutated_smiles), predictor);
    } catch (const std::exception &e) {
      ++s.skipped;
      s.messages.push_back("line " + std::to_string(line) + ": " + e.what());
      return;
    }
    r.label = properties::categorize(*r.original_props, *r.mutated_props, t);
    write_line(out, to_json(r));
    ++s.written;
  });
  return s;
}

StageSummary run_split(std::istream &annotated,
                       const properties::SplitConfig &config,
                       std::uint64_t rng_seed, SplitStreams out) {
  StageSummary s;
  s.stage = "split";
  std::vector<PairRecord> records;
  std::vector<properties::ImprovementLabel> labels;
  std::vector<std::string> keys;
  each_line(annotated, [&](const json &j, std::size_t line) {
    ++s.read;
    PairRecord r = pair_record_from_json(j, line);
    if (!r.label)
      throw RecordError(line, "/group", "pair is not annotated");
    labels.push_back(*r.label);
    keys.push_back(r.seed_id);
    records.push_back(std::move(r));
  });
  const properties::Splits splits =
      properties::build_splits(labels, keys, config, rng_seed);
  for (const std::size_t i: splits.sft)
    write_line(out.sft, to_json(records[i]));
  for (const std::size_t i: splits.rl_pool)
    write_line(out.rl_pool, to_json(records[i]));
  for (const std::size_t i: splits.test)
    write_line(out.test, to_json(records[i]));
  s.written = splits.sft.size() + splits.rl_pool.size() + splits.test.size();
  s.messages = splits.warnings;
  s.messages.push_back("sft " + std::to_string(splits.sft.size())
                       + ", rl_pool " + std::to_string(splits.rl_pool.size())
                       + ", test " + std::to_string(splits.test.size()));
  return s;
}

StageSummary run_build_prompts(std::istream &pairs,
                               const peptide::MonomerVocabulary &vocab,
                               const prompts::PromptStyle &style,
                               std::ostream &out) {
  StageSummary s;
  s.stage = "build-prompts";
  each_line(pairs, [&](const json &j, std::size_t line) {
    ++s.read;
    const PairRecord r = pair_record_from_json(j, line);
    if (!vocab.contains(r.leaving) || !vocab.contains(r.incoming)) {
      ++s.skipped;
      s.messages.push_back("line " + std::to_string(line)
                           + ": monomer not in vocabulary");
      return;
    }
    prompts::PairContext ctx;
    ctx.position = r.position;
    ctx.leaving_smiles = vocab.at(r.leaving).smiles;
    ctx.incoming_smiles = vocab.at(r.incoming).smiles;
    ctx.input_smiles = r.original_smiles;
    ctx.output_smiles = r.mutated_smiles;
    ctx.label = r.label;
    const prompts::CotSample p = prompts::build_prompt(ctx, style);
    write_line(out, { { "seed_id", r.seed_id },
                      { "kind", prompts::kind_name(style.kind) },
                      { "group", r.label ? r.label->group() : "" },
                      { "prompt", p.prompt },
                      { "target", p.target },
                      { "think", p.think },
                      { "input_smiles", r.original_smiles },
                      { "answer_smiles", p.answer_smiles },
                      { "position", p.position },
                      { "leaving", r.leaving },
                      { "incoming", r.incoming } });
    ++s.written;
  });
  return s;
}

evalkit::GenerationSet read_generation_dump(
    std::istream &dump, const properties::PropertyPredictor &predictor) {
  evalkit::GenerationSet set;
  each_line(dump, [&](const json &j, std::size_t line) {
    if (!j.is_object())
      throw RecordError(line, "", "expected an object");
    const std::string seed = field<std::string>(j, "seed_id", line);
    std::optional<PropertyTriple> props;
    const bool any = j.contains("logd") || j.contains("mrt")
                     || j.contains("sif");
    if (any)
      props = triple_from(j, line, "");
    if (j.contains("output_text"))
      set.records.push_back(evalkit::record_from_text(
          seed, field<std::string>(j, "output_text", line), props,
          &predictor));
    else if (j.contains("smiles"))
      set.records.push_back(evalkit::record_from_smiles(
          seed, field<std::string>(j, "smiles", line), props, &predictor));
    else
      throw RecordError(line, "/output_text", "missing output_text or smiles");
  });
  return set;
}

StageSummary write_baseline_dump(std::istream &pairs, std::ostream &dump) {
  StageSummary s;
  s.stage = "baseline";
  for (const PairRecord &r: read_pair_records(pairs)) {
    ++s.read;
    write_line(dump, { { "seed_id", r.seed_id },
                       { "smiles", r.mutated_smiles } });
    ++s.written;
  }
  return s;
}

std::set<std::string> read_training_index(std::istream &pairs) {
  std::set<std::string> out;
  for (const PairRecord &r: read_pair_records(pairs)) {
    out.insert(r.original_smiles);
    out.insert(r.mutated_smiles);
  }
  return out;
}

std::map<std::string, PropertyTriple> read_seed_props(std::istream &pairs) {
  std::map<std::string, PropertyTriple> out;
  for (const PairRecord &r: read_pair_records(pairs))
    if (r.original_props)
      out.emplace(r.seed_id, *r.original_props);
  return out;
}

}  // namespace pepforge::app
