#pragma once

#include <map>
#include <string>

#include "relsense/cascade.hpp"
#include "relsense/util.hpp"

namespace relsense::config {

/// Effective run parameters. Defaults are the reference values: vocabulary
/// of 20000, window radius 30, threshold 2, sense cutoff 10%, at most six
/// senses, five hyponym levels, context radii 25/25/5/5.
struct RunConfig {
  // paths
  std::string corpus;
  std::string vocab;
  std::string matrix;
  std::string lexicon;
  std::string cascade_file;
  std::string instances;
  std::string gold;
  std::string out;
  std::string stopwords = "data/stopwords_en.txt";
  std::string lemma_rules = "data/lemma_rules.tsv";
  std::string lemma_exceptions = "data/lemma_exceptions.tsv";
  std::string inflections;

  // corpus pipeline
  std::string lemmatizer = "suffix";  // suffix | identity
  std::string start_marker;
  std::string end_marker;
  double english_threshold = 0.02;

  // matrix
  std::int64_t vocab_size = 20000;
  std::int64_t radius = 30;
  double threshold = 2.0;

  // cascade
  double cutoff = 0.10;
  std::int64_t max_senses = 6;
  std::int64_t expand_depth = 5;
  std::int64_t radius_noun = 25;
  std::int64_t radius_verb = 25;
  std::int64_t radius_adj = 5;
  std::int64_t radius_adv = 5;
  bool pos_compat = true;

  // pseudoword
  double holdout = 0.5;
  std::int64_t gloss_size = 20;
  std::int64_t min_occurrences = 20;
  std::int64_t context_radius = 50;

  std::uint64_t seed = 1;
  std::int64_t jobs = 1;

  cascade::CascadeDefaults cascade_defaults() const {
    cascade::CascadeDefaults d;
    d.radius_noun = radius_noun;
    d.radius_verb = radius_verb;
    d.radius_adj = radius_adj;
    d.radius_adv = radius_adv;
    d.cutoff = cutoff;
    d.max_senses = max_senses;
    d.pos_compat = pos_compat;
    d.expand_depth = expand_depth;
    return d;
  }
};

namespace detail {

inline bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "on" || v == "true") return true;
  if (v == "off" || v == "false") return false;
  throw DataError("config key `" + key + "` expects on|off");
}

inline std::string unquote(std::string v) {
  if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') ||
                        (v.front() == '\'' && v.back() == '\'')))
    return v.substr(1, v.size() - 2);
  return v;
}

}  // namespace detail

/// Flat `key = value` file; `#` comments; values optionally quoted.
/// Unknown keys are config violations.
inline void apply_config_file(RunConfig& cfg, const std::string& content,
                              std::string_view origin = "") {
  std::size_t lineno = 0;
  for (const auto& raw : split(content, '\n')) {
    ++lineno;
    std::string line(raw);
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    auto stripped = trim(line);
    if (stripped.empty()) continue;
    auto eq = stripped.find('=');
    if (eq == std::string_view::npos)
      throw DataError(std::string(origin) + ":" + std::to_string(lineno) +
                      ": expected `key = value`");
    std::string key(trim(stripped.substr(0, eq)));
    std::string value = detail::unquote(std::string(trim(stripped.substr(eq + 1))));

    if (key == "corpus") cfg.corpus = value;
    else if (key == "vocab") cfg.vocab = value;
    else if (key == "matrix") cfg.matrix = value;
    else if (key == "lexicon") cfg.lexicon = value;
    else if (key == "cascade") cfg.cascade_file = value;
    else if (key == "instances") cfg.instances = value;
    else if (key == "gold") cfg.gold = value;
    else if (key == "out") cfg.out = value;
    else if (key == "stopwords") cfg.stopwords = value;
    else if (key == "lemma_rules") cfg.lemma_rules = value;
    else if (key == "lemma_exceptions") cfg.lemma_exceptions = value;
    else if (key == "inflections") cfg.inflections = value;
    else if (key == "lemmatizer") cfg.lemmatizer = value;
    else if (key == "start_marker") cfg.start_marker = value;
    else if (key == "end_marker") cfg.end_marker = value;
    else if (key == "english_threshold") cfg.english_threshold = parse_double(value);
    else if (key == "vocab_size") cfg.vocab_size = parse_int(value);
    else if (key == "radius") cfg.radius = parse_int(value);
    else if (key == "threshold") cfg.threshold = parse_double(value);
    else if (key == "cutoff") cfg.cutoff = parse_double(value);
    else if (key == "max_senses") cfg.max_senses = parse_int(value);
    else if (key == "expand_depth") cfg.expand_depth = parse_int(value);
    else if (key == "radius_noun") cfg.radius_noun = parse_int(value);
    else if (key == "radius_verb") cfg.radius_verb = parse_int(value);
    else if (key == "radius_adj") cfg.radius_adj = parse_int(value);
    else if (key == "radius_adv") cfg.radius_adv = parse_int(value);
    else if (key == "pos_compat") cfg.pos_compat = detail::parse_bool(value, key);
    else if (key == "holdout") cfg.holdout = parse_double(value);
    else if (key == "gloss_size") cfg.gloss_size = parse_int(value);
    else if (key == "min_occurrences") cfg.min_occurrences = parse_int(value);
    else if (key == "context_radius") cfg.context_radius = parse_int(value);
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(value));
    else if (key == "jobs") cfg.jobs = parse_int(value);
    else
      throw DataError(std::string(origin) + ":" + std::to_string(lineno) +
                      ": unknown config key `" + key + "`");
  }
}

/// Hash of the effective parameters, recorded in artifact metadata.
inline std::uint64_t config_hash(const RunConfig& cfg) {
  std::map<std::string, std::string> kv{
      {"lemmatizer", cfg.lemmatizer},
      {"start_marker", cfg.start_marker},
      {"end_marker", cfg.end_marker},
      {"english_threshold", format_double(cfg.english_threshold)},
      {"vocab_size", std::to_string(cfg.vocab_size)},
      {"radius", std::to_string(cfg.radius)},
      {"threshold", format_double(cfg.threshold)},
      {"cutoff", format_double(cfg.cutoff)},
      {"max_senses", std::to_string(cfg.max_senses)},
      {"expand_depth", std::to_string(cfg.expand_depth)},
      {"radius_noun", std::to_string(cfg.radius_noun)},
      {"radius_verb", std::to_string(cfg.radius_verb)},
      {"radius_adj", std::to_string(cfg.radius_adj)},
      {"radius_adv", std::to_string(cfg.radius_adv)},
      {"pos_compat", cfg.pos_compat ? "on" : "off"},
      {"holdout", format_double(cfg.holdout)},
      {"gloss_size", std::to_string(cfg.gloss_size)},
      {"min_occurrences", std::to_string(cfg.min_occurrences)},
      {"context_radius", std::to_string(cfg.context_radius)},
      {"seed", std::to_string(cfg.seed)},
  };
  std::string blob;
  for (const auto& [k, v] : kv) blob += k + '=' + v + '\n';
  return fnv1a64(blob);
}

}  // namespace relsense::config
