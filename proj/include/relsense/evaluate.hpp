#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "relsense/cascade.hpp"
#include "relsense/lexicon.hpp"
#include "relsense/util.hpp"

namespace relsense::eval {

/// Answer key: acceptable sense keys per instance.
class GoldStandard {
public:
  static GoldStandard parse(std::string_view content,
                            std::string_view origin = "") {
    GoldStandard gold;
    std::size_t lineno = 0;
    for (const auto& line : split(content, '\n')) {
      ++lineno;
      if (line.empty() || line[0] == '#') continue;
      auto cols = split_ws(line);
      if (cols.size() < 2)
        throw DataError(std::string(origin) + ":" + std::to_string(lineno) +
                        ": expected `instance_id sense_key...`");
      auto& keys = gold.keys_[cols[0]];
      if (!keys.empty())
        throw DataError(std::string(origin) + ":" + std::to_string(lineno) +
                        ": duplicate instance id " + cols[0]);
      keys.insert(cols.begin() + 1, cols.end());
    }
    return gold;
  }

  std::string format() const {
    std::string out;
    for (const auto& [id, keys] : keys_) {
      out += id;
      for (const auto& k : keys) {
        out += ' ';
        out += k;
      }
      out += '\n';
    }
    return out;
  }

  const std::set<std::string>* find(const std::string& id) const {
    auto it = keys_.find(id);
    return it == keys_.end() ? nullptr : &it->second;
  }

  void add(const std::string& id, std::set<std::string> keys) {
    keys_[id] = std::move(keys);
  }

  std::size_t size() const { return keys_.size(); }

private:
  std::map<std::string, std::set<std::string>> keys_;
};

struct ReportRow {
  std::string label;
  std::uint64_t attempted = 0;
  double score = 0.0;
  double precision = 0.0;  // NaN when attempted == 0
  double recall = 0.0;
};

struct EvalReport {
  std::vector<ReportRow> rows;  // per heuristic, in first-answer order
  ReportRow total;
  std::uint64_t total_instances = 0;
};

/// Row arithmetic: precision = score/attempted, recall = score/total.
inline ReportRow make_row(std::string label, std::uint64_t attempted,
                          double score, std::uint64_t total_instances) {
  ReportRow row;
  row.label = std::move(label);
  row.attempted = attempted;
  row.score = score;
  row.precision = attempted > 0
                      ? score / static_cast<double>(attempted)
                      : std::numeric_limits<double>::quiet_NaN();
  row.recall = total_instances > 0
                   ? score / static_cast<double>(total_instances)
                   : std::numeric_limits<double>::quiet_NaN();
  return row;
}

/// Exact-match scoring against the gold sets, grouped by heuristic.
/// Every answered id must exist in the gold standard.
inline EvalReport score_answers(const std::vector<cascade::Answer>& answers,
                                const GoldStandard& gold,
                                std::uint64_t total_instances) {
  std::vector<std::string> missing;
  std::set<std::string> seen;
  for (const auto& a : answers) {
    if (!gold.find(a.instance_id)) missing.push_back(a.instance_id);
    if (!seen.insert(a.instance_id).second)
      throw DataError("duplicate answer for instance " + a.instance_id);
  }
  if (!missing.empty()) {
    std::string msg = "answered ids missing from gold standard:";
    for (const auto& id : missing) msg += ' ' + id;
    throw DataError(msg);
  }
  if (total_instances < answers.size())
    throw DataError("total_instances smaller than the number of answers");

  std::vector<std::string> order;
  std::map<std::string, std::pair<std::uint64_t, double>> by_heuristic;
  std::uint64_t attempted = 0;
  double score = 0.0;
  for (const auto& a : answers) {
    if (by_heuristic.find(a.heuristic) == by_heuristic.end())
      order.push_back(a.heuristic);
    auto& bucket = by_heuristic[a.heuristic];
    double item = gold.find(a.instance_id)->count(a.sense_key) ? 1.0 : 0.0;
    bucket.first += 1;
    bucket.second += item;
    attempted += 1;
    score += item;
  }

  EvalReport report;
  report.total_instances = total_instances;
  for (const auto& name : order) {
    const auto& [att, sc] = by_heuristic[name];
    report.rows.push_back(make_row(name, att, sc, total_instances));
  }
  report.total = make_row("total", attempted, score, total_instances);
  return report;
}

inline std::string format_percent(double fraction) {
  if (std::isnan(fraction)) return "—";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f%%", fraction * 100.0);
  return buf;
}

/// Aligned text table in the Att./Score/Prec/Rec shape.
inline std::string format_report(const EvalReport& report) {
  std::vector<std::array<std::string, 5>> lines;
  lines.push_back({"heuristic", "att.", "score", "prec", "rec"});
  auto add = [&](const ReportRow& r) {
    char score_buf[32];
    std::snprintf(score_buf, sizeof(score_buf), "%.2f", r.score);
    lines.push_back({r.label, std::to_string(r.attempted), score_buf,
                     format_percent(r.precision), format_percent(r.recall)});
  };
  for (const auto& r : report.rows) add(r);
  add(report.total);

  std::array<std::size_t, 5> width{};
  for (const auto& line : lines)
    for (std::size_t c = 0; c < 5; ++c)
      width[c] = std::max(width[c], line[c].size());
  std::string out;
  for (const auto& line : lines) {
    for (std::size_t c = 0; c < 5; ++c) {
      std::string cell = line[c];
      cell.resize(std::max(cell.size(), width[c]), ' ');
      // the em dash is 3 bytes; pad so columns stay aligned on screen
      if (line[c] == "—") cell = line[c] + std::string(width[c] - 1, ' ');
      out += cell;
      if (c + 1 < 5) out += "  ";
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    out += '\n';
  }
  return out;
}

inline nlohmann::json report_to_json(const EvalReport& report) {
  nlohmann::json doc;
  doc["total_instances"] = report.total_instances;
  auto row_json = [](const ReportRow& r) {
    nlohmann::json j;
    j["label"] = r.label;
    j["attempted"] = r.attempted;
    j["score"] = r.score;
    if (std::isnan(r.precision)) j["precision"] = nullptr;
    else j["precision"] = r.precision;
    if (std::isnan(r.recall)) j["recall"] = nullptr;
    else j["recall"] = r.recall;
    return j;
  };
  auto& rows = doc["rows"] = nlohmann::json::array();
  for (const auto& r : report.rows) rows.push_back(row_json(r));
  doc["total"] = row_json(report.total);
  return doc;
}

// ---------------------------------------------------------------------------
// Baselines
// ---------------------------------------------------------------------------

/// Uniform random sense per instance; deterministic under the seed.
/// Unknown lemmas are omitted, mirroring the cascade's abstention.
inline std::vector<cascade::Answer> baseline_random(
    const std::vector<cascade::DisambiguationInstance>& instances,
    const lex::Lexicon& lexicon, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<cascade::Answer> out;
  for (const auto& inst : instances) {
    const auto* entry = lexicon.find(inst.lemma, inst.pos);
    if (!entry) continue;
    const auto& sense = entry->senses[rng.below(entry->senses.size())];
    out.push_back(cascade::Answer{inst.id, sense.key, "random"});
  }
  return out;
}

inline std::vector<cascade::Answer> baseline_first_sense(
    const std::vector<cascade::DisambiguationInstance>& instances,
    const lex::Lexicon& lexicon) {
  std::vector<cascade::Answer> out;
  for (const auto& inst : instances) {
    const auto* entry = lexicon.find(inst.lemma, inst.pos);
    if (!entry) continue;
    out.push_back(
        cascade::Answer{inst.id, entry->senses.front().key, "first_sense"});
  }
  return out;
}

}  // namespace relsense::eval
