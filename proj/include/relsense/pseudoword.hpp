#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "relsense/cascade.hpp"
#include "relsense/corpus.hpp"
#include "relsense/evaluate.hpp"
#include "relsense/util.hpp"

namespace relsense::pseudo {

struct PseudowordParams {
  std::string word_a;
  std::string word_b;
  double holdout = 0.5;  // fraction of documents held out for evaluation
  std::uint64_t seed = 1;
  std::uint32_t cooc_radius = 30;   // gloss extraction window
  std::size_t gloss_size = 20;      // top cooccurring lemmas per sense
  std::size_t min_occurrences = 20;
  std::size_t context_radius = 50;  // instance context on each side
};

using TokenStream = std::pair<std::string, std::vector<corpus::Token>>;

struct PseudowordTask {
  std::string pseudo_lemma;
  std::vector<TokenStream> corpus;  // train unchanged, holdout conflated
  std::vector<cascade::DisambiguationInstance> instances;
  eval::GoldStandard gold;
  std::string lexicon_json;
  std::vector<std::string> train_ids;
  std::vector<std::string> holdout_ids;
};

namespace detail {

inline std::vector<std::string> top_cooccurring(
    const std::vector<const std::vector<corpus::Token>*>& docs,
    const std::string& target, const PseudowordParams& p) {
  std::map<std::string, std::uint64_t> counts;
  const std::int64_t r = p.cooc_radius;
  for (const auto* doc : docs) {
    const auto& toks = *doc;
    const std::int64_t n = static_cast<std::int64_t>(toks.size());
    for (std::int64_t i = 0; i < n; ++i) {
      if (toks[i].lemma != target) continue;
      std::int64_t lo = std::max<std::int64_t>(0, i - r);
      std::int64_t hi = std::min<std::int64_t>(n - 1, i + r);
      for (std::int64_t j = lo; j <= hi; ++j) {
        if (j == i) continue;
        const auto& lemma = toks[j].lemma;
        if (lemma == p.word_a || lemma == p.word_b) continue;
        if (lemma == "NUMBER" || lemma == "PROPER_NOUN") continue;
        ++counts[lemma];
      }
    }
  }
  std::vector<std::pair<std::string, std::uint64_t>> sorted(counts.begin(),
                                                            counts.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (sorted.size() > p.gloss_size) sorted.resize(p.gloss_size);
  std::vector<std::string> gloss;
  for (const auto& [lemma, _] : sorted) gloss.push_back(lemma);
  return gloss;
}

}  // namespace detail

/// Builds a two-sense pseudoword task: word_a and word_b occurrences in a
/// held-out document slice become the conflated token `word_a_word_b`; the
/// synthesized entry's glosses are the words most often cooccurring with
/// each source word in the training slice; gold records the source word.
inline PseudowordTask make_pseudoword_task(std::vector<TokenStream> docs,
                                           const PseudowordParams& p) {
  if (p.word_a.empty() || p.word_b.empty() || p.word_a == p.word_b)
    throw std::invalid_argument("need two distinct nonempty words");
  if (!(p.holdout > 0.0 && p.holdout < 1.0))
    throw std::invalid_argument("holdout fraction must be in (0, 1)");
  std::sort(docs.begin(), docs.end(),
            [](const TokenStream& a, const TokenStream& b) {
              return a.first < b.first;
            });
  if (docs.size() < 2)
    throw DataError("pseudoword task needs at least two documents");

  std::uint64_t occ_a = 0, occ_b = 0;
  for (const auto& [id, toks] : docs)
    for (const auto& t : toks) {
      if (t.lemma == p.word_a) ++occ_a;
      if (t.lemma == p.word_b) ++occ_b;
    }
  if (occ_a == 0 || occ_b == 0)
    throw DataError("pseudoword source words must occur in the corpus");
  if (occ_a < p.min_occurrences || occ_b < p.min_occurrences)
    throw DataError("pseudoword source words need at least " +
                    std::to_string(p.min_occurrences) + " occurrences (" +
                    p.word_a + "=" + std::to_string(occ_a) + ", " + p.word_b +
                    "=" + std::to_string(occ_b) + ")");

  std::vector<std::size_t> order(docs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(p.seed);
  rng.shuffle(order);
  std::size_t n_holdout = static_cast<std::size_t>(
      std::llround(p.holdout * static_cast<double>(docs.size())));
  n_holdout = std::clamp<std::size_t>(n_holdout, 1, docs.size() - 1);
  std::vector<bool> is_holdout(docs.size(), false);
  for (std::size_t i = 0; i < n_holdout; ++i) is_holdout[order[i]] = true;

  PseudowordTask task;
  task.pseudo_lemma = p.word_a + "_" + p.word_b;

  std::vector<const std::vector<corpus::Token>*> train_docs;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (is_holdout[i]) task.holdout_ids.push_back(docs[i].first);
    else {
      task.train_ids.push_back(docs[i].first);
      train_docs.push_back(&docs[i].second);
    }
  }

  auto gloss_a = detail::top_cooccurring(train_docs, p.word_a, p);
  auto gloss_b = detail::top_cooccurring(train_docs, p.word_b, p);
  if (gloss_a.empty() || gloss_b.empty())
    throw DataError("not enough training cooccurrences to build glosses");

  // conflate the holdout slice and cut instances around each occurrence
  std::size_t counter = 0;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    if (!is_holdout[d]) continue;
    auto& toks = docs[d].second;
    std::vector<char> source(toks.size(), 0);
    for (std::size_t i = 0; i < toks.size(); ++i) {
      if (toks[i].lemma == p.word_a) source[i] = 'a';
      else if (toks[i].lemma == p.word_b) source[i] = 'b';
      if (source[i]) {
        toks[i].lemma = task.pseudo_lemma;
        toks[i].surface = task.pseudo_lemma;
        toks[i].label = corpus::TokenLabel::Word;
      }
    }
    for (std::size_t i = 0; i < toks.size(); ++i) {
      if (!source[i]) continue;
      std::size_t begin = i >= p.context_radius ? i - p.context_radius : 0;
      std::size_t end = std::min(toks.size(), i + p.context_radius + 1);
      cascade::DisambiguationInstance inst;
      char buf[16];
      std::snprintf(buf, sizeof(buf), "pw%06zu", ++counter);
      inst.id = buf;
      inst.lemma = task.pseudo_lemma;
      inst.pos = lex::Pos::Noun;
      inst.target_index = i - begin;
      for (std::size_t j = begin; j < end; ++j) {
        corpus::Token t = toks[j];
        t.position = static_cast<std::uint32_t>(j - begin);
        inst.context.push_back(std::move(t));
      }
      task.gold.add(inst.id,
                    {task.pseudo_lemma + (source[i] == 'a' ? "%1" : "%2")});
      task.instances.push_back(std::move(inst));
    }
  }

  nlohmann::json doc;
  doc["format"] = "relsense-lexicon";
  doc["version"] = 1;
  doc["provenance"] = "pseudoword task " + p.word_a + "/" + p.word_b +
                      " seed=" + std::to_string(p.seed);
  nlohmann::json entry;
  entry["lemma"] = task.pseudo_lemma;
  entry["pos"] = "NOUN";
  nlohmann::json s1, s2;
  s1["key"] = task.pseudo_lemma + "%1";
  s1["rank"] = 1;
  s1["gloss"] = gloss_a;
  s1["rel_freq"] = 0.5;
  s2["key"] = task.pseudo_lemma + "%2";
  s2["rank"] = 2;
  s2["gloss"] = gloss_b;
  s2["rel_freq"] = 0.5;
  entry["senses"] = nlohmann::json::array({s1, s2});
  doc["entries"] = nlohmann::json::array({entry});
  task.lexicon_json = doc.dump(2) + "\n";

  task.corpus = std::move(docs);
  return task;
}

}  // namespace relsense::pseudo
