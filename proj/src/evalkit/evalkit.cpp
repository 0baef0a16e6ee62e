//
// Project pepforge - Copyright 2026 The pepforge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "pepforge/evalkit/evalkit.h"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "pepforge/chem/canonical.h"
#include "pepforge/chem/smiles.h"
#include "pepforge/chem/valence.h"
#include "pepforge/prompts/prompts.h"

namespace pepforge::evalkit {

using properties::Bucket;
using properties::BucketThresholds;
using properties::Property;
using properties::PropertyTriple;

GenerationRecord record_from_smiles(
    std::string seed_id, std::string_view smiles,
    std::optional<PropertyTriple> props,
    const properties::PropertyPredictor *predictor) {
  GenerationRecord r;
  r.seed_id = std::move(seed_id);
  if (r.raw_output.empty())
    r.raw_output = std::string(smiles);
  chem::MolGraph mol;
  try {
    mol = chem::parse_smiles(smiles);
  } catch (const chem::SmilesError &e) {
    r.error = e.what();
    return r;
  }
  r.smiles = chem::canonical_smiles(mol);
  const chem::ValenceReport v = chem::validate_valence(mol);
  if (!v.valid) {
    r.error = "valence check failed";
    return r;
  }
  if (props) {
    r.props = props;
  } else if (predictor) {
    try {
      r.props = properties::predict(mol, *predictor);
    } catch (const properties::PredictorError &e) {
      r.error = e.what();
      return r;
    }
  } else {
    r.error = "no properties";
    return r;
  }
  r.valid = true;
  return r;
}

GenerationRecord record_from_text(
    std::string seed_id, std::string_view output_text,
    std::optional<PropertyTriple> props,
    const properties::PropertyPredictor *predictor) {
  const prompts::ParsedOutput parsed = prompts::parse_output(output_text);
  GenerationRecord r;
  if (!parsed.well_formed) {
    r.seed_id = std::move(seed_id);
    r.raw_output = std::string(output_text);
    r.error = parsed.diagnostics.empty() ? "malformed output"
                                         : parsed.diagnostics.front();
    return r;
  }
  r = record_from_smiles(std::move(seed_id), *parsed.smiles, props,
                         predictor);
  r.raw_output = std::string(output_text);
  return r;
}

bool high_quality(const PropertyTriple &p, const BucketThresholds &t) {
  for (const Property q: properties::kAllProperties)
    if (!(p[q] > t[q].hi))
      return false;
  return true;
}

void Tally::add(const GenerationRecord &r) {
  ++total_;
  ++seed_samples_[r.seed_id];
  std::set<std::string> &hq = per_seed_[r.seed_id];
  if (!r.valid)
    return;
  ++valid_;
  unique_.insert(*r.smiles);
  if (high_quality(*r.props, t_)) {
    ++hq_records_;
    hq.insert(*r.smiles);
  }
}

void Tally::merge(const Tally &other) {
  total_ += other.total_;
  valid_ += other.valid_;
  hq_records_ += other.hq_records_;
  unique_.insert(other.unique_.begin(), other.unique_.end());
  for (const auto &[seed, hq]: other.per_seed_)
    per_seed_[seed].insert(hq.begin(), hq.end());
  for (const auto &[seed, n]: other.seed_samples_)
    seed_samples_[seed] += n;
}

std::size_t Tally::max_seed_samples() const {
  std::size_t m = 0;
  for (const auto &[seed, n]: seed_samples_)
    m = std::max(m, n);
  return m;
}

namespace {

Tally tally(const GenerationSet &s, const BucketThresholds &t) {
  Tally out(t);
  for (const GenerationRecord &r: s.records)
    out.add(r);
  return out;
}

double ratio(std::size_t a, std::size_t b) {
  return static_cast<double>(a) / static_cast<double>(b);
}

double novelty_of(const Tally &t, const std::set<std::string> &training,
                  std::vector<std::string> *warnings) {
  if (t.unique_valid().empty()) {
    if (warnings)
      warnings->push_back("novelty: no valid molecules, reported as 0");
    return 0.0;
  }
  std::size_t novel = 0;
  for (const std::string &s: t.unique_valid())
    novel += training.count(s) == 0 ? 1 : 0;
  return ratio(novel, t.unique_valid().size());
}

double uhqs_of(const Tally &t) {
  if (t.per_seed().empty())
    throw EvalError("uhqs: no seeds");
  std::size_t sum = 0;
  for (const auto &[seed, hq]: t.per_seed())
    sum += hq.size();
  return ratio(sum, t.per_seed().size());
}

double hqsr_s_of(const Tally &t) {
  if (t.per_seed().empty())
    throw EvalError("hqsr_s: no seeds");
  std::size_t hit = 0;
  for (const auto &[seed, hq]: t.per_seed())
    hit += hq.empty() ? 0 : 1;
  return ratio(hit, t.per_seed().size());
}

}  // namespace

double validity(const GenerationSet &s) {
  if (s.records.empty())
    throw EvalError("validity: empty generation set");
  return ratio(tally(s, {}).valid(), s.records.size());
}

double novelty(const GenerationSet &s, std::vector<std::string> *warnings) {
  return novelty_of(tally(s, {}), s.training_index, warnings);
}

double uniqueness(const GenerationSet &s) {
  const Tally t = tally(s, {});
  if (t.valid() == 0)
    throw EvalError("uniqueness: no valid records");
  return ratio(t.unique_valid().size(), t.valid());
}

double hqsr(const GenerationSet &s, const BucketThresholds &t) {
  if (s.records.empty())
    throw EvalError("hqsr: empty generation set");
  return ratio(tally(s, t).high_quality_records(), s.records.size());
}

double uhqs(const GenerationSet &s, const BucketThresholds &t) {
  return uhqs_of(tally(s, t));
}

double hqsr_s(const GenerationSet &s, const BucketThresholds &t) {
  return hqsr_s_of(tally(s, t));
}

TransitionMatrix transition_matrix(const std::vector<TriplePair> &pairs,
                                   Property property,
                                   const BucketThresholds &t) {
  if (pairs.empty())
    throw EvalError("transition_matrix: no pairs");
  TransitionMatrix m;
  m.property = property;
  for (const auto &[before, after]: pairs) {
    const int i = static_cast<int>(
        properties::bucketize(before[property], property, t));
    const int j = static_cast<int>(
        properties::bucketize(after[property], property, t));
    m.counts(i, j) += 1;
  }
  for (int i = 0; i < 3; ++i) {
    const double row = m.counts.row(i).sum();
    m.row_has_mass[i] = row > 0;
    if (row > 0)
      m.fractions.row(i) = m.counts.row(i) / row;
  }
  return m;
}

EvalReport evaluate(const GenerationSet &s, const BucketThresholds &t) {
  if (s.records.empty())
    throw EvalError("evaluate: empty generation set");
  const Tally tl = tally(s, t);
  EvalReport r;
  r.records = tl.total();
  r.seeds = tl.per_seed().size();
  r.samples_per_seed = tl.max_seed_samples();
  r.validity = ratio(tl.valid(), tl.total());
  r.novelty = novelty_of(tl, s.training_index, &r.warnings);
  if (tl.valid() == 0)
    r.warnings.push_back("uniqueness: no valid records, reported as 0");
  else
    r.uniqueness = ratio(tl.unique_valid().size(), tl.valid());
  r.hqsr = ratio(tl.high_quality_records(), tl.total());
  r.uhqs = uhqs_of(tl);
  r.hqsr_s = hqsr_s_of(tl);

  std::vector<TriplePair> pairs;
  for (const GenerationRecord &rec: s.records) {
    if (!rec.valid)
      continue;
    const auto it = s.seed_props.find(rec.seed_id);
    if (it != s.seed_props.end())
      pairs.emplace_back(it->second, *rec.props);
  }
  if (!pairs.empty()) {
    r.transitions = std::array<TransitionMatrix, 3> {
      transition_matrix(pairs, Property::kLogD, t),
      transition_matrix(pairs, Property::kMrt, t),
      transition_matrix(pairs, Property::kSif, t)
    };
  }
  return r;
}

namespace {

nlohmann::json matrix_json(const TransitionMatrix &m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < 3; ++i)
    rows.push_back({ m.fractions(i, 0), m.fractions(i, 1),
                     m.fractions(i, 2) });
  nlohmann::json counts = nlohmann::json::array();
  for (int i = 0; i < 3; ++i)
    counts.push_back({ m.counts(i, 0), m.counts(i, 1), m.counts(i, 2) });
  return { { "property", properties::key(m.property) },
           { "fractions", rows },
           { "counts", counts },
           { "row_has_mass", m.row_has_mass } };
}

std::string fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

}  // namespace

nlohmann::json report_json(const EvalReport &r) {
  nlohmann::json j = { { "validity", r.validity },
                       { "novelty", r.novelty },
                       { "uniqueness", r.uniqueness },
                       { "hqsr", r.hqsr },
                       { "uhqs", r.uhqs },
                       { "hqsr_s", r.hqsr_s },
                       { "records", r.records },
                       { "seeds", r.seeds },
                       { "samples_per_seed", r.samples_per_seed },
                       { "warnings", r.warnings } };
  if (r.transitions) {
    nlohmann::json t = nlohmann::json::object();
    for (const TransitionMatrix &m: *r.transitions)
      t[std::string(properties::key(m.property))] = matrix_json(m);
    j["transitions"] = t;
  }
  return j;
}

std::string report_table(const EvalReport &r, std::string_view label) {
  const std::vector<std::string> head = { "Method", "Val",  "Nov",   "Uni",
                                          "HQSR",   "UHQS", "HQSR-S" };
  const std::vector<std::string> row = {
    std::string(label),
    fixed(r.validity, 3),
    fixed(r.novelty, 3),
    fixed(r.uniqueness, 3),
    fixed(r.hqsr, 3),
    fixed(r.uhqs, 2) + "/" + std::to_string(r.samples_per_seed),
    fixed(r.hqsr_s, 3)
  };
  std::ostringstream os;
  auto line = [&](const std::vector<std::string> &cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const std::size_t w = std::max(head[i].size(), row[i].size());
      if (i == 0) {
        os << cells[i] << std::string(w - cells[i].size(), ' ');
      } else {
        os << "  " << std::string(w - cells[i].size(), ' ') << cells[i];
      }
    }
    os << '\n';
  };
  line(head);
  line(row);
  return os.str();
}

std::string transition_csv(const TransitionMatrix &m) {
  std::ostringstream os;
  os.precision(17);
  os << "before\\after,low,medium,high,count\n";
  for (int i = 0; i < 3; ++i) {
    os << properties::bucket_name(static_cast<Bucket>(i));
    for (int j = 0; j < 3; ++j)
      os << ',' << m.fractions(i, j);
    os << ',' << m.counts.row(i).sum() << '\n';
  }
  return os.str();
}

}  // namespace pepforge::evalkit
