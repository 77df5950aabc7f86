#pragma once

#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "relsense/corpus.hpp"
#include "relsense/lexicon.hpp"
#include "relsense/relmatrix.hpp"
#include "relsense/util.hpp"

namespace relsense::cascade {

struct DisambiguationInstance {
  std::string id;
  std::string lemma;
  lex::Pos pos = lex::Pos::Noun;
  std::vector<corpus::Token> context;
  std::size_t target_index = 0;
};

/// Weighted lemma vector; zero entries are never stored. std::map keeps
/// iteration deterministic.
using SenseVector = std::map<std::string, double>;

struct HeuristicVerdict {
  bool answered = false;
  std::string sense_key;
  double score = 0.0;
  std::string heuristic;
  std::string note;

  static HeuristicVerdict answer(std::string key, double score,
                                 std::string name) {
    return HeuristicVerdict{true, std::move(key), score, std::move(name), {}};
  }
  static HeuristicVerdict abstain(std::string name, std::string note = {}) {
    return HeuristicVerdict{false, {}, 0.0, std::move(name), std::move(note)};
  }
};

// ---------------------------------------------------------------------------
// Instance files: JSON lines, one instance per line.
// ---------------------------------------------------------------------------

inline DisambiguationInstance instance_from_json(const nlohmann::json& j) {
  DisambiguationInstance inst;
  inst.id = j.at("id").get<std::string>();
  inst.lemma = j.at("lemma").get<std::string>();
  inst.pos = lex::pos_from_string(j.at("pos").get<std::string>());
  inst.target_index = j.at("target").get<std::size_t>();
  std::uint32_t position = 0;
  for (const auto& jt : j.at("tokens")) {
    corpus::Token t;
    t.lemma = jt.at("lemma").get<std::string>();
    t.surface = jt.contains("surface") ? jt["surface"].get<std::string>()
                                       : t.lemma;
    t.label = jt.contains("label")
                  ? corpus::label_from_string(jt["label"].get<std::string>())
                  : corpus::TokenLabel::Word;
    if (jt.contains("pos_tag"))
      t.pos = corpus::pos_tag_from_string(jt["pos_tag"].get<std::string>());
    t.position = position++;
    inst.context.push_back(std::move(t));
  }
  // an empty context is legal (target 0); otherwise the target must point
  // at a context token
  if (!inst.context.empty() && inst.target_index >= inst.context.size())
    throw DataError("instance " + inst.id + ": target index out of range");
  if (inst.context.empty() && inst.target_index != 0)
    throw DataError("instance " + inst.id + ": target index out of range");
  return inst;
}

inline nlohmann::json instance_to_json(const DisambiguationInstance& inst) {
  nlohmann::json j;
  j["id"] = inst.id;
  j["lemma"] = inst.lemma;
  j["pos"] = lex::to_string(inst.pos);
  j["target"] = inst.target_index;
  auto& toks = j["tokens"] = nlohmann::json::array();
  for (const auto& t : inst.context) {
    nlohmann::json jt;
    jt["lemma"] = t.lemma;
    if (t.label != corpus::TokenLabel::Word)
      jt["label"] = corpus::to_string(t.label);
    if (t.surface != t.lemma) jt["surface"] = t.surface;
    if (t.pos) jt["pos_tag"] = corpus::to_string(*t.pos);
    toks.push_back(std::move(jt));
  }
  return j;
}

inline std::vector<DisambiguationInstance> parse_instances(
    std::string_view content, std::string_view origin = "") {
  std::vector<DisambiguationInstance> out;
  std::size_t lineno = 0;
  for (const auto& line : split(content, '\n')) {
    ++lineno;
    auto trimmed = trim(line);
    if (trimmed.empty()) continue;
    try {
      out.push_back(instance_from_json(nlohmann::json::parse(trimmed)));
    } catch (const std::exception& e) {
      throw DataError(std::string(origin) + ":" + std::to_string(lineno) +
                      ": " + e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cascade DSL: one step per line, `name key=value ...`, `#` comments.
// ---------------------------------------------------------------------------

using ParamValue = std::variant<std::int64_t, double, bool>;

struct CascadeStep {
  std::string name;
  std::map<std::string, ParamValue> params;

  bool operator==(const CascadeStep&) const = default;
};

struct CascadeSpec {
  std::vector<CascadeStep> steps;

  bool operator==(const CascadeSpec&) const = default;
};

namespace detail {

enum class ParamType { Int, Double, Bool };

struct ParamSchema {
  ParamType type;
  double min = 0, max = 0;  // numeric range, inclusive
};

inline const std::map<std::string, std::map<std::string, ParamSchema>>&
heuristic_registry() {
  static const std::map<std::string, std::map<std::string, ParamSchema>> reg{
      {"monosemous", {}},
      {"statistical", {{"cutoff", {ParamType::Double, 1e-12, 1.0 - 1e-12}}}},
      {"relevance_filter",
       {{"radius_noun", {ParamType::Int, 1, 1e9}},
        {"radius_verb", {ParamType::Int, 1, 1e9}},
        {"radius_adj", {ParamType::Int, 1, 1e9}},
        {"radius_adv", {ParamType::Int, 1, 1e9}},
        {"cutoff", {ParamType::Double, 0.0, 1.0 - 1e-12}},
        {"max_senses", {ParamType::Int, 1, 1e9}},
        {"pos_compat", {ParamType::Bool}},
        {"expand_depth", {ParamType::Int, 0, 1e9}},
        {"supervised", {ParamType::Bool}}}},
      {"enriched",
       {{"cutoff", {ParamType::Double, 0.0, 1.0 - 1e-12}},
        {"expand_depth", {ParamType::Int, 0, 1e9}}}},
      {"mixed",
       {{"cutoff", {ParamType::Double, 0.0, 1.0 - 1e-12}},
        {"expand_depth", {ParamType::Int, 0, 1e9}}}},
      {"first_sense", {}},
  };
  return reg;
}

inline ParamValue parse_param_value(const std::string& heuristic,
                                    const std::string& key,
                                    const std::string& raw,
                                    std::size_t lineno) {
  auto loc = [&] { return "line " + std::to_string(lineno) + ": "; };
  const auto& reg = heuristic_registry();
  const auto& params = reg.at(heuristic);
  auto it = params.find(key);
  if (it == params.end())
    throw DataError(loc() + "unknown parameter `" + key + "` for heuristic `" +
                    heuristic + "`");
  const auto& schema = it->second;
  switch (schema.type) {
    case ParamType::Bool:
      if (raw == "on" || raw == "true") return true;
      if (raw == "off" || raw == "false") return false;
      throw DataError(loc() + "parameter `" + key + "` expects on|off");
    case ParamType::Int: {
      std::int64_t v;
      try {
        v = parse_int(raw);
      } catch (const DataError&) {
        throw DataError(loc() + "parameter `" + key + "` expects an integer");
      }
      if (v < schema.min || v > schema.max)
        throw DataError(loc() + "parameter `" + key + "` out of range");
      return v;
    }
    case ParamType::Double: {
      double v;
      try {
        v = parse_double(raw);
      } catch (const DataError&) {
        throw DataError(loc() + "parameter `" + key + "` expects a number");
      }
      if (v < schema.min || v > schema.max)
        throw DataError(loc() + "parameter `" + key + "` out of range");
      return v;
    }
  }
  throw DataError(loc() + "unreachable");
}

}  // namespace detail

inline CascadeSpec parse_cascade(std::string_view text) {
  CascadeSpec spec;
  std::size_t lineno = 0;
  for (const auto& raw : split(text, '\n')) {
    ++lineno;
    std::string line(raw);
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    auto fields = split_ws(line);
    if (fields.empty()) continue;
    CascadeStep step;
    step.name = fields[0];
    if (detail::heuristic_registry().count(step.name) == 0)
      throw DataError("line " + std::to_string(lineno) +
                      ": unknown heuristic `" + step.name + "`");
    for (std::size_t i = 1; i < fields.size(); ++i) {
      auto eq = fields[i].find('=');
      if (eq == std::string::npos || eq == 0)
        throw DataError("line " + std::to_string(lineno) +
                        ": expected key=value, got `" + fields[i] + "`");
      std::string key = fields[i].substr(0, eq);
      std::string value = fields[i].substr(eq + 1);
      if (step.params.count(key))
        throw DataError("line " + std::to_string(lineno) +
                        ": duplicate parameter `" + key + "`");
      step.params[key] =
          detail::parse_param_value(step.name, key, value, lineno);
    }
    spec.steps.push_back(std::move(step));
  }
  if (spec.steps.empty()) throw DataError("cascade has no steps");
  return spec;
}

inline std::string print_cascade(const CascadeSpec& spec) {
  std::string out;
  for (const auto& step : spec.steps) {
    out += step.name;
    for (const auto& [key, value] : step.params) {
      out += ' ';
      out += key;
      out += '=';
      if (std::holds_alternative<bool>(value))
        out += std::get<bool>(value) ? "on" : "off";
      else if (std::holds_alternative<std::int64_t>(value))
        out += std::to_string(std::get<std::int64_t>(value));
      else
        out += format_double(std::get<double>(value));
    }
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Scoring
// ---------------------------------------------------------------------------

/// Token-frequency vector of the tokens in [begin, end) excluding the target
/// position. Optional POS-compatibility filter; untagged tokens always pass.
inline SenseVector context_frequencies(
    std::span<const corpus::Token> context, std::size_t target_index,
    std::size_t begin, std::size_t end,
    std::optional<lex::Pos> compat_with = std::nullopt) {
  auto compatible = [&](const corpus::Token& t) {
    if (!compat_with || !t.pos) return true;
    using corpus::PosTag;
    switch (*compat_with) {
      case lex::Pos::Noun:
        return *t.pos == PosTag::Noun || *t.pos == PosTag::Verb ||
               *t.pos == PosTag::Adj;
      case lex::Pos::Verb:
        return *t.pos == PosTag::Verb || *t.pos == PosTag::Noun ||
               *t.pos == PosTag::Adv;
      case lex::Pos::Adj: return *t.pos == PosTag::Noun;
      case lex::Pos::Adv: return *t.pos == PosTag::Verb;
    }
    return true;
  };
  SenseVector freq;
  for (std::size_t i = begin; i < end && i < context.size(); ++i) {
    if (i == target_index) continue;
    if (!compatible(context[i])) continue;
    freq[context[i].lemma] += 1.0;
  }
  return freq;
}

inline SenseVector term_frequencies(const std::vector<std::string>& tokens) {
  SenseVector v;
  for (const auto& t : tokens) v[t] += 1.0;
  return v;
}

/// tf(gloss) + (1/m) * sum of example tfs: the definition carries the same
/// weight as all training examples together.
inline SenseVector build_supervised_vector(
    const SenseVector& gloss_tf,
    const std::vector<std::vector<std::string>>& examples) {
  SenseVector v = gloss_tf;
  if (examples.empty()) return v;
  double m = static_cast<double>(examples.size());
  for (const auto& ex : examples)
    for (const auto& t : ex) v[t] += 1.0 / m;
  return v;
}

inline SenseVector build_supervised_vector(const lex::SenseEntry& sense) {
  return build_supervised_vector(
      term_frequencies(sense.gloss),
      sense.examples ? *sense.examples
                     : std::vector<std::vector<std::string>>{});
}

/// Relevance-weighted gloss overlap:
///   sum over context lemmas w of R(w, alpha) * freq(w, C) * weight(w, S)
///   * ln(N / d_w)
/// where N is the lemma's sense count and d_w the number of its sense
/// vectors containing w. A target lemma outside the matrix vocabulary makes
/// every term zero.
inline double relevance_score(const SenseVector& context_freq,
                              const std::string& target_lemma,
                              const std::vector<SenseVector>& sense_vectors,
                              std::size_t sense_index,
                              const relmat::RelevanceMatrix& matrix,
                              const relmat::Vocabulary& vocab) {
  auto alpha = vocab.id_of(target_lemma);
  if (!alpha) return 0.0;
  const double n_senses = static_cast<double>(sense_vectors.size());
  const SenseVector& sv = sense_vectors[sense_index];
  double total = 0.0;
  for (const auto& [w, c_freq] : context_freq) {
    auto wit = sv.find(w);
    if (wit == sv.end() || wit->second == 0.0) continue;
    auto w_id = vocab.id_of(w);
    if (!w_id) continue;
    double rel = matrix.relevance(*w_id, *alpha);
    if (rel == 0.0) continue;
    int d_w = 0;
    for (const auto& vec : sense_vectors) {
      auto it = vec.find(w);
      if (it != vec.end() && it->second > 0.0) ++d_w;
    }
    total += rel * c_freq * wit->second * std::log(n_senses / d_w);
  }
  return total;
}

/// Spec-shaped entry point: scores `sense_tokens` against the instance's
/// full context (target token removed), with N and d_w computed over
/// `sibling_glosses`, the token lists of all the lemma's senses at the same
/// expansion depth.
inline double score_relevance(
    const DisambiguationInstance& inst,
    const std::vector<std::string>& sense_tokens,
    const std::vector<std::vector<std::string>>& sibling_glosses,
    const relmat::RelevanceMatrix& matrix, const relmat::Vocabulary& vocab) {
  auto alpha = vocab.id_of(inst.lemma);
  if (!alpha) return 0.0;
  std::vector<SenseVector> family;
  family.reserve(sibling_glosses.size());
  for (const auto& g : sibling_glosses) family.push_back(term_frequencies(g));
  SenseVector sv = term_frequencies(sense_tokens);
  auto ctx = context_frequencies(inst.context, inst.target_index, 0,
                                 inst.context.size());
  double n = static_cast<double>(sibling_glosses.size());
  double total = 0.0;
  for (const auto& [w, c_freq] : ctx) {
    auto wit = sv.find(w);
    if (wit == sv.end()) continue;
    auto w_id = vocab.id_of(w);
    if (!w_id) continue;
    double rel = matrix.relevance(*w_id, *alpha);
    if (rel == 0.0) continue;
    int d_w = 0;
    for (const auto& vec : family) {
      auto it = vec.find(w);
      if (it != vec.end() && it->second > 0.0) ++d_w;
    }
    if (d_w == 0) continue;  // w absent from every gloss
    total += rel * c_freq * wit->second * std::log(n / d_w);
  }
  return total;
}

/// Rv + v over the matrix vocabulary; entries outside the vocabulary pass
/// through unchanged. Zero entries are dropped.
inline SenseVector enrich_vector(const SenseVector& v,
                                 const relmat::RelevanceMatrix& matrix,
                                 const relmat::Vocabulary& vocab) {
  SenseVector out = v;
  for (const auto& [w, x] : v) {
    if (x == 0.0) continue;
    auto id = vocab.id_of(w);
    if (!id) continue;
    auto ids = matrix.row_ids(*id);
    auto weights = matrix.row_weights(*id);
    for (std::size_t j = 0; j < ids.size(); ++j)
      out[vocab.lemma_of(ids[j])] += weights[j] * x;
  }
  for (auto it = out.begin(); it != out.end();)
    it = it->second == 0.0 ? out.erase(it) : std::next(it);
  return out;
}

inline double dot(const SenseVector& a, const SenseVector& b) {
  const SenseVector& small = a.size() <= b.size() ? a : b;
  const SenseVector& large = a.size() <= b.size() ? b : a;
  double total = 0.0;
  for (const auto& [w, x] : small) {
    auto it = large.find(w);
    if (it != large.end()) total += x * it->second;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Cascade engine
// ---------------------------------------------------------------------------

/// Paper-default parameters; explicit DSL parameters override these.
struct CascadeDefaults {
  std::int64_t radius_noun = 25;
  std::int64_t radius_verb = 25;
  std::int64_t radius_adj = 5;
  std::int64_t radius_adv = 5;
  double cutoff = 0.10;
  std::int64_t max_senses = 6;
  bool pos_compat = true;
  std::int64_t expand_depth = 5;           // relevance filter glosses
  std::int64_t enriched_expand_depth = 0;  // enriched/mixed glosses
  bool supervised = false;
};

struct StepTrace {
  std::string heuristic;
  HeuristicVerdict verdict;
};

struct CascadeResult {
  HeuristicVerdict final;  // answered=false when every step abstained
  std::vector<StepTrace> trace;
};

class CascadeEngine {
public:
  CascadeEngine(const lex::Lexicon& lexicon,
                const relmat::RelevanceMatrix* matrix,
                const relmat::Vocabulary* vocab, CascadeDefaults defaults = {})
      : lex_(lexicon), matrix_(matrix), vocab_(vocab), defaults_(defaults) {}

  const CascadeDefaults& defaults() const { return defaults_; }

  CascadeResult run(const CascadeSpec& spec,
                    const DisambiguationInstance& inst) const {
    if (spec.steps.empty()) throw std::invalid_argument("empty cascade");
    CascadeResult result;
    for (const auto& step : spec.steps) {
      HeuristicVerdict v = run_step(step, inst);
      result.trace.push_back(StepTrace{step.name, v});
      if (v.answered) {
        result.final = v;
        return result;
      }
    }
    result.final = HeuristicVerdict::abstain("cascade", "all steps abstained");
    return result;
  }

  HeuristicVerdict run_step(const CascadeStep& step,
                            const DisambiguationInstance& inst) const {
    if (step.name == "monosemous") return monosemous(inst);
    if (step.name == "statistical")
      return statistical(inst, get_double(step, "cutoff", defaults_.cutoff));
    if (step.name == "relevance_filter") return relevance_filter(inst, step);
    if (step.name == "enriched")
      return enriched(inst, step, /*mixed=*/step.params.count("cutoff") > 0,
                      step.name);
    if (step.name == "mixed")
      return enriched(inst, step, /*mixed=*/true, step.name);
    if (step.name == "first_sense") return first_sense(inst);
    throw DataError("unknown heuristic `" + step.name + "`");
  }

  /// Unique sense of the lemma, or of a detected multiword covering the
  /// target token.
  HeuristicVerdict monosemous(const DisambiguationInstance& inst) const {
    static const std::string name = "monosemous";
    if (!lex_.multiwords().empty()) {
      auto spans = lex::detect_multiwords(inst.context, lex_.multiwords());
      for (const auto& span : spans) {
        if (!span.covers(inst.target_index)) continue;
        if (span.sense_keys.size() == 1)
          return HeuristicVerdict::answer(span.sense_keys.front(), 1.0, name);
        return HeuristicVerdict::abstain(name, "ambiguous multiword");
      }
    }
    const auto* entry = lex_.find(inst.lemma, inst.pos);
    if (!entry)
      return HeuristicVerdict::abstain(name, "unknown lemma");
    if (entry->senses.size() == 1)
      return HeuristicVerdict::answer(entry->senses.front().key, 1.0, name);
    return HeuristicVerdict::abstain(name);
  }

  /// Drops senses with rel_freq below the cutoff; answers iff exactly one
  /// survives.
  HeuristicVerdict statistical(const DisambiguationInstance& inst,
                               double cutoff) const {
    static const std::string name = "statistical";
    const auto* entry = lex_.find(inst.lemma, inst.pos);
    if (!entry) return HeuristicVerdict::abstain(name, "unknown lemma");
    const lex::SenseEntry* survivor = nullptr;
    int survivors = 0;
    for (const auto& s : entry->senses) {
      if (s.rel_freq >= cutoff) {
        ++survivors;
        survivor = &s;
      }
    }
    if (survivors == 1)
      return HeuristicVerdict::answer(survivor->key, survivor->rel_freq, name);
    return HeuristicVerdict::abstain(name);
  }

  HeuristicVerdict relevance_filter(const DisambiguationInstance& inst,
                                    const CascadeStep& step) const {
    static const std::string name = "relevance_filter";
    require_matrix(name);
    const auto* entry = lex_.find(inst.lemma, inst.pos);
    if (!entry) return HeuristicVerdict::abstain(name, "unknown lemma");

    double cutoff = get_double(step, "cutoff", defaults_.cutoff);
    auto max_senses =
        static_cast<std::size_t>(get_int(step, "max_senses",
                                         defaults_.max_senses));
    bool pos_compat = get_bool(step, "pos_compat", defaults_.pos_compat);
    auto depth = static_cast<std::size_t>(
        get_int(step, "expand_depth", defaults_.expand_depth));
    bool supervised = get_bool(step, "supervised", defaults_.supervised);
    std::int64_t radius = radius_for(inst.pos, step);

    std::vector<SenseVector> vectors = sense_vectors(*entry, depth, supervised);
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < entry->senses.size() && i < max_senses; ++i)
      if (entry->senses[i].rel_freq >= cutoff) candidates.push_back(i);
    if (candidates.empty())
      return HeuristicVerdict::abstain(name, "no candidate senses");

    std::size_t begin = inst.target_index >= static_cast<std::size_t>(radius)
                            ? inst.target_index - radius
                            : 0;
    std::size_t end = inst.target_index + radius + 1;
    auto ctx = context_frequencies(
        inst.context, inst.target_index, begin, end,
        pos_compat ? std::optional<lex::Pos>(inst.pos) : std::nullopt);

    const lex::SenseEntry* best = nullptr;
    double best_score = 0.0;
    for (std::size_t i : candidates) {
      double s =
          relevance_score(ctx, inst.lemma, vectors, i, *matrix_, *vocab_);
      if (s > best_score) {
        best_score = s;
        best = &entry->senses[i];
      }
    }
    if (!best || best_score <= 0.0)
      return HeuristicVerdict::abstain(name, "no positive score");
    return HeuristicVerdict::answer(best->key, best_score, name);
  }

  /// Dot product of the context frequencies with the enriched sense vector
  /// Rv + v; no idf. In mixed mode senses below the cntlist cutoff are
  /// excluded first.
  HeuristicVerdict enriched(const DisambiguationInstance& inst,
                            const CascadeStep& step, bool mixed,
                            std::string name = {}) const {
    if (name.empty()) name = mixed ? "mixed" : "enriched";
    require_matrix(name);
    const auto* entry = lex_.find(inst.lemma, inst.pos);
    if (!entry) return HeuristicVerdict::abstain(name, "unknown lemma");

    double cutoff = mixed ? get_double(step, "cutoff", defaults_.cutoff) : 0.0;
    auto depth = static_cast<std::size_t>(
        get_int(step, "expand_depth", defaults_.enriched_expand_depth));

    auto ctx = context_frequencies(inst.context, inst.target_index, 0,
                                   inst.context.size());
    const lex::SenseEntry* best = nullptr;
    double best_score = 0.0;
    for (const auto& sense : entry->senses) {
      if (mixed && sense.rel_freq < cutoff) continue;
      auto enriched_vec = enriched_vector_cached(sense, depth);
      double s = dot(ctx, *enriched_vec);
      if (s > best_score) {
        best_score = s;
        best = &sense;
      }
    }
    if (!best || best_score <= 0.0)
      return HeuristicVerdict::abstain(name, "no positive score");
    return HeuristicVerdict::answer(best->key, best_score, name);
  }

  HeuristicVerdict first_sense(const DisambiguationInstance& inst) const {
    static const std::string name = "first_sense";
    const auto* entry = lex_.find(inst.lemma, inst.pos);
    if (!entry) return HeuristicVerdict::abstain(name, "unknown lemma");
    return HeuristicVerdict::answer(entry->senses.front().key, 1.0, name);
  }

  /// Per-sense vectors at the given expansion depth, supervised variant
  /// optionally folding in example tfs.
  std::vector<SenseVector> sense_vectors(const lex::LexiconEntry& entry,
                                         std::size_t depth,
                                         bool supervised) const {
    std::vector<SenseVector> out;
    out.reserve(entry.senses.size());
    for (const auto& sense : entry.senses) {
      SenseVector v = term_frequencies(lex::expand_gloss(sense, lex_, depth));
      if (supervised && sense.examples)
        v = build_supervised_vector(v, *sense.examples);
      out.push_back(std::move(v));
    }
    return out;
  }

private:
  void require_matrix(const std::string& name) const {
    if (!matrix_ || !vocab_)
      throw DataError("heuristic `" + name + "` requires a relevance matrix");
  }

  std::int64_t radius_for(lex::Pos pos, const CascadeStep& step) const {
    switch (pos) {
      case lex::Pos::Noun:
        return get_int(step, "radius_noun", defaults_.radius_noun);
      case lex::Pos::Verb:
        return get_int(step, "radius_verb", defaults_.radius_verb);
      case lex::Pos::Adj:
        return get_int(step, "radius_adj", defaults_.radius_adj);
      case lex::Pos::Adv:
        return get_int(step, "radius_adv", defaults_.radius_adv);
    }
    return defaults_.radius_noun;
  }

  static double get_double(const CascadeStep& step, const std::string& key,
                           double fallback) {
    auto it = step.params.find(key);
    if (it == step.params.end()) return fallback;
    if (std::holds_alternative<double>(it->second))
      return std::get<double>(it->second);
    return static_cast<double>(std::get<std::int64_t>(it->second));
  }

  static std::int64_t get_int(const CascadeStep& step, const std::string& key,
                              std::int64_t fallback) {
    auto it = step.params.find(key);
    if (it == step.params.end()) return fallback;
    return std::get<std::int64_t>(it->second);
  }

  static bool get_bool(const CascadeStep& step, const std::string& key,
                       bool fallback) {
    auto it = step.params.find(key);
    if (it == step.params.end()) return fallback;
    return std::get<bool>(it->second);
  }

  /// Enriched vectors are memoized by sense, matrix content, and expansion
  /// depth; concurrent identical inserts are idempotent.
  std::shared_ptr<const SenseVector> enriched_vector_cached(
      const lex::SenseEntry& sense, std::size_t depth) const {
    std::string key = sense.key + '\x1f' + hash_hex(matrix_->content_hash()) +
                      '\x1f' + std::to_string(depth);
    {
      std::shared_lock lock(cache_mutex_);
      auto it = cache_.find(key);
      if (it != cache_.end()) return it->second;
    }
    auto vec = std::make_shared<SenseVector>(enrich_vector(
        term_frequencies(lex::expand_gloss(sense, lex_, depth)), *matrix_,
        *vocab_));
    std::unique_lock lock(cache_mutex_);
    auto [it, inserted] = cache_.try_emplace(key, std::move(vec));
    return it->second;
  }

  const lex::Lexicon& lex_;
  const relmat::RelevanceMatrix* matrix_;
  const relmat::Vocabulary* vocab_;
  CascadeDefaults defaults_;
  mutable std::shared_mutex cache_mutex_;
  mutable std::unordered_map<std::string, std::shared_ptr<const SenseVector>>
      cache_;
};

// ---------------------------------------------------------------------------
// Answer files: `instance_id<SPACE>sense_key<SPACE>heuristic_name`
// ---------------------------------------------------------------------------

struct Answer {
  std::string instance_id;
  std::string sense_key;
  std::string heuristic;
};

inline std::string format_answers(const std::vector<Answer>& answers,
                                  const std::string& meta_comment = {}) {
  std::string out;
  if (!meta_comment.empty()) out += "# " + meta_comment + '\n';
  for (const auto& a : answers)
    out += a.instance_id + ' ' + a.sense_key + ' ' + a.heuristic + '\n';
  return out;
}

inline std::vector<Answer> parse_answers(std::string_view content,
                                         std::string_view origin = "") {
  std::vector<Answer> out;
  std::size_t lineno = 0;
  for (const auto& line : split(content, '\n')) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto cols = split_ws(line);
    if (cols.size() != 3)
      throw DataError(std::string(origin) + ":" + std::to_string(lineno) +
                      ": expected `instance_id sense_key heuristic`");
    out.push_back(Answer{cols[0], cols[1], cols[2]});
  }
  return out;
}

}  // namespace relsense::cascade
