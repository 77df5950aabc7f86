#pragma once

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "relsense/corpus.hpp"
#include "relsense/util.hpp"

namespace relsense::lex {

enum class Pos { Noun, Verb, Adj, Adv };

inline const char* to_string(Pos p) {
  switch (p) {
    case Pos::Noun: return "NOUN";
    case Pos::Verb: return "VERB";
    case Pos::Adj: return "ADJ";
    case Pos::Adv: return "ADV";
  }
  return "NOUN";
}

inline Pos pos_from_string(std::string_view s) {
  if (s == "NOUN") return Pos::Noun;
  if (s == "VERB") return Pos::Verb;
  if (s == "ADJ") return Pos::Adj;
  if (s == "ADV") return Pos::Adv;
  throw DataError("unknown part of speech: " + std::string(s));
}

struct SenseEntry {
  std::string key;
  int rank = 1;
  std::vector<std::string> gloss;  // normalized token list, stopwords stripped
  double rel_freq = 0.0;           // relative sense probability, cntlist-style
  std::vector<std::string> hyponyms;  // sense keys
  std::optional<std::vector<std::vector<std::string>>> examples;
};

struct LexiconEntry {
  std::string lemma;
  Pos pos = Pos::Noun;
  std::vector<SenseEntry> senses;  // ordered by rank, 1..n
};

// ---------------------------------------------------------------------------
// Multiword index: component-sequence trie plus an inflection table.
// ---------------------------------------------------------------------------

class MultiwordIndex {
public:
  MultiwordIndex() { nodes_.emplace_back(); }

  void add(const std::vector<std::string>& components,
           const std::vector<std::string>& keys) {
    if (components.size() < 2)
      throw std::invalid_argument("multiword sequences need >= 2 components");
    std::size_t node = 0;
    for (const auto& c : components) {
      auto [it, inserted] = nodes_[node].children.try_emplace(c, 0);
      if (inserted) {
        it->second = nodes_.size();
        nodes_.emplace_back();
      }
      node = it->second;
    }
    auto& dst = nodes_[node].keys;
    for (const auto& k : keys)
      if (std::find(dst.begin(), dst.end(), k) == dst.end()) dst.push_back(k);
    std::sort(dst.begin(), dst.end());
  }

  /// `surface<TAB>base` lines; a surface may list several base candidates.
  void load_inflections(std::string_view tsv, std::string_view origin = "") {
    std::size_t lineno = 0;
    for (const auto& raw : split(tsv, '\n')) {
      ++lineno;
      auto line = std::string(trim(raw));
      if (line.empty() || line[0] == '#') continue;
      auto cols = split(line, '\t');
      if (cols.size() != 2 || cols[0].empty() || cols[1].empty())
        throw DataError(std::string(origin) + ":" + std::to_string(lineno) +
                        ": expected `surface<TAB>base`");
      auto& bases = inflections_[to_lower_ascii(cols[0])];
      if (std::find(bases.begin(), bases.end(), cols[1]) == bases.end())
        bases.push_back(cols[1]);
    }
  }

  bool empty() const { return nodes_.size() == 1; }

  /// Longest component-sequence match starting at tokens[start]; each token
  /// may match by surface, lemma, or any inflection base of its surface.
  /// Returns the match length and its sense keys, or length 0.
  std::pair<std::size_t, const std::vector<std::string>*> match_at(
      std::span<const corpus::Token> tokens, std::size_t start) const {
    std::size_t best_len = 0;
    const std::vector<std::string>* best_keys = nullptr;
    walk(tokens, start, 0, 0, best_len, best_keys);
    return {best_len, best_keys};
  }

private:
  struct Node {
    std::map<std::string, std::size_t> children;
    std::vector<std::string> keys;
  };

  std::vector<std::string> candidate_forms(const corpus::Token& t) const {
    std::vector<std::string> forms;
    auto push = [&](const std::string& f) {
      if (!f.empty() && std::find(forms.begin(), forms.end(), f) == forms.end())
        forms.push_back(f);
    };
    push(to_lower_ascii(t.surface));
    push(t.lemma);
    auto it = inflections_.find(to_lower_ascii(t.surface));
    if (it != inflections_.end())
      for (const auto& b : it->second) push(b);
    return forms;
  }

  void walk(std::span<const corpus::Token> tokens, std::size_t pos,
            std::size_t node, std::size_t depth, std::size_t& best_len,
            const std::vector<std::string>*& best_keys) const {
    if (!nodes_[node].keys.empty() && depth > best_len) {
      best_len = depth;
      best_keys = &nodes_[node].keys;
    }
    if (pos >= tokens.size() || nodes_[node].children.empty()) return;
    for (const auto& form : candidate_forms(tokens[pos])) {
      auto it = nodes_[node].children.find(form);
      if (it != nodes_[node].children.end())
        walk(tokens, pos + 1, it->second, depth + 1, best_len, best_keys);
    }
  }

  std::vector<Node> nodes_;
  std::unordered_map<std::string, std::vector<std::string>> inflections_;
};

struct MultiwordSpan {
  std::size_t begin = 0;
  std::size_t end = 0;  // half-open token range
  std::vector<std::string> sense_keys;

  bool covers(std::size_t index) const { return index >= begin && index < end; }
};

/// Left-to-right scan emitting maximal non-overlapping multiword spans;
/// longest match wins, leftmost among equals, consumed positions skipped.
inline std::vector<MultiwordSpan> detect_multiwords(
    std::span<const corpus::Token> tokens, const MultiwordIndex& index) {
  std::vector<MultiwordSpan> out;
  std::size_t i = 0;
  while (i < tokens.size()) {
    auto [len, keys] = index.match_at(tokens, i);
    if (len >= 2 && keys) {
      out.push_back(MultiwordSpan{i, i + len, *keys});
      i += len;
    } else {
      ++i;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lexicon
// ---------------------------------------------------------------------------

struct LexiconLoadOptions {
  const corpus::StopwordList* stopwords = nullptr;  // for multiword components
  const corpus::Lemmatizer* lemmatizer = nullptr;
  std::string inflections_tsv;  // optional, already-read file content
  std::optional<std::set<std::string>> multiword_allowlist;  // lemmas
};

class Lexicon {
public:
  static Lexicon parse(std::string_view json_text,
                       const LexiconLoadOptions& opts = {},
                       std::vector<std::string>* violations = nullptr);

  static Lexicon load(const std::filesystem::path& path,
                      const LexiconLoadOptions& opts = {}) {
    return parse(read_file(path), opts);
  }

  const LexiconEntry* find(const std::string& lemma, Pos pos) const {
    auto it = entry_index_.find(entry_key(lemma, pos));
    if (it == entry_index_.end()) return nullptr;
    return &entries_[it->second];
  }

  const SenseEntry* sense_by_key(const std::string& key) const {
    auto it = sense_index_.find(key);
    if (it == sense_index_.end()) return nullptr;
    const auto& [e, s] = it->second;
    return &entries_[e].senses[s];
  }

  const std::vector<LexiconEntry>& entries() const { return entries_; }
  const MultiwordIndex& multiwords() const { return mwi_; }
  const std::string& provenance() const { return provenance_; }

  std::string serialize() const {
    nlohmann::json doc;
    doc["format"] = "relsense-lexicon";
    doc["version"] = 1;
    if (!provenance_.empty()) doc["provenance"] = provenance_;
    auto& arr = doc["entries"] = nlohmann::json::array();
    for (const auto& e : entries_) {
      nlohmann::json je;
      je["lemma"] = e.lemma;
      je["pos"] = to_string(e.pos);
      auto& senses = je["senses"] = nlohmann::json::array();
      for (const auto& s : e.senses) {
        nlohmann::json js;
        js["key"] = s.key;
        js["rank"] = s.rank;
        js["gloss"] = s.gloss;
        js["rel_freq"] = s.rel_freq;
        if (!s.hyponyms.empty()) js["hyponyms"] = s.hyponyms;
        if (s.examples) js["examples"] = *s.examples;
        senses.push_back(std::move(js));
      }
      arr.push_back(std::move(je));
    }
    return doc.dump(2) + "\n";
  }

private:
  static std::string entry_key(const std::string& lemma, Pos pos) {
    return lemma + '\x1f' + to_string(pos);
  }

  void index_entries() {
    entry_index_.clear();
    sense_index_.clear();
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      entry_index_[entry_key(entries_[i].lemma, entries_[i].pos)] = i;
      for (std::size_t j = 0; j < entries_[i].senses.size(); ++j)
        sense_index_[entries_[i].senses[j].key] = {i, j};
    }
  }

  std::vector<LexiconEntry> entries_;
  std::unordered_map<std::string, std::size_t> entry_index_;
  std::unordered_map<std::string, std::pair<std::size_t, std::size_t>>
      sense_index_;
  MultiwordIndex mwi_;
  std::string provenance_;
};

namespace detail {

/// Multiword lemma -> normalized component sequence (lemmatized, stopwords
/// dropped). Returns empty if fewer than two components survive.
inline std::vector<std::string> multiword_components(
    const std::string& lemma, const LexiconLoadOptions& opts) {
  std::vector<std::string> out;
  for (const auto& part : split(lemma, '_')) {
    if (part.empty()) continue;
    std::string lower = to_lower_ascii(part);
    std::string comp =
        opts.lemmatizer ? opts.lemmatizer->lemma(lower) : lower;
    if (comp.empty()) comp = lower;
    if (opts.stopwords && opts.stopwords->contains(comp)) continue;
    out.push_back(comp);
  }
  if (out.size() < 2) out.clear();
  return out;
}

}  // namespace detail

inline Lexicon Lexicon::parse(std::string_view json_text,
                              const LexiconLoadOptions& opts,
                              std::vector<std::string>* violations) {
  auto fail = [&](const std::string& where,
                  const std::string& what) -> bool {
    std::string msg = where + ": " + what;
    if (violations) {
      violations->push_back(msg);
      return true;  // skip offending entry, keep checking
    }
    throw DataError(msg);
  };

  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    if (violations) {
      violations->push_back(std::string("json: ") + e.what());
      return Lexicon{};
    }
    throw DataError(std::string("lexicon json: ") + e.what());
  }

  Lexicon lx;
  if (!doc.is_object() || !doc.contains("entries") ||
      !doc["entries"].is_array()) {
    fail("lexicon", "missing `entries` array");
    return lx;
  }
  if (doc.contains("provenance") && doc["provenance"].is_string())
    lx.provenance_ = doc["provenance"].get<std::string>();

  std::set<std::string> seen_entries;
  std::set<std::string> seen_keys;
  for (std::size_t ei = 0; ei < doc["entries"].size(); ++ei) {
    const auto& je = doc["entries"][ei];
    std::string where = "entries[" + std::to_string(ei) + "]";
    LexiconEntry entry;
    try {
      entry.lemma = je.at("lemma").get<std::string>();
      entry.pos = pos_from_string(je.at("pos").get<std::string>());
    } catch (const std::exception& e) {
      if (fail(where, std::string("bad lemma/pos: ") + e.what())) continue;
    }
    where += " (" + entry.lemma + ")";
    if (entry.lemma.empty()) {
      if (fail(where, "empty lemma")) continue;
    }
    if (!seen_entries.insert(entry_key(entry.lemma, entry.pos)).second) {
      if (fail(where, "duplicate lemma/pos entry")) continue;
    }
    if (!je.contains("senses") || !je["senses"].is_array() ||
        je["senses"].empty()) {
      if (fail(where, "entry needs at least one sense")) continue;
    }

    bool entry_ok = true;
    bool any_count = false, any_rel = false;
    std::vector<std::uint64_t> counts;
    for (std::size_t si = 0; si < je["senses"].size() && entry_ok; ++si) {
      const auto& js = je["senses"][si];
      std::string swhere = where + ".senses[" + std::to_string(si) + "]";
      SenseEntry sense;
      try {
        sense.key = js.at("key").get<std::string>();
        sense.rank = js.at("rank").get<int>();
        sense.gloss = js.at("gloss").get<std::vector<std::string>>();
        if (js.contains("hyponyms"))
          sense.hyponyms = js["hyponyms"].get<std::vector<std::string>>();
        if (js.contains("examples"))
          sense.examples =
              js["examples"].get<std::vector<std::vector<std::string>>>();
        std::uint64_t count = 0;
        if (js.contains("count")) {
          any_count = true;
          count = js["count"].get<std::uint64_t>();
        }
        counts.push_back(count);
        if (js.contains("rel_freq")) {
          any_rel = true;
          sense.rel_freq = js["rel_freq"].get<double>();
        }
      } catch (const std::exception& e) {
        entry_ok = !fail(swhere, std::string("bad sense: ") + e.what());
        continue;
      }
      if (sense.key.empty()) {
        entry_ok = !fail(swhere, "empty sense key");
        continue;
      }
      if (sense.gloss.empty()) {
        entry_ok = !fail(swhere, "empty gloss after normalization");
        continue;
      }
      if (sense.rank < 1) {
        entry_ok = !fail(swhere, "rank must be >= 1");
        continue;
      }
      if (!seen_keys.insert(sense.key).second) {
        entry_ok = !fail(swhere, "duplicate sense key " + sense.key);
        continue;
      }
      entry.senses.push_back(std::move(sense));
    }
    if (!entry_ok || entry.senses.size() != je["senses"].size()) continue;

    std::stable_sort(entry.senses.begin(), entry.senses.end(),
                     [](const SenseEntry& a, const SenseEntry& b) {
                       return a.rank < b.rank;
                     });
    bool ranks_ok = true;
    for (std::size_t i = 0; i < entry.senses.size() && ranks_ok; ++i) {
      if (entry.senses[i].rank == static_cast<int>(i)) {
        ranks_ok = !fail(where, "duplicate sense rank " +
                                    std::to_string(entry.senses[i].rank));
      } else if (entry.senses[i].rank != static_cast<int>(i + 1)) {
        ranks_ok = !fail(where, "sense ranks must be 1..n without gaps");
      }
    }
    if (!ranks_ok) continue;

    // rel_freq: raw counts win, explicit rel_freq second, else uniform
    if (any_count && any_rel) {
      if (fail(where, "mix of count and rel_freq fields")) continue;
    }
    if (any_count) {
      // counts were collected pre-sort; recollect in rank order
      std::vector<double> by_rank(entry.senses.size(), 0.0);
      double total = 0;
      for (std::size_t si = 0; si < je["senses"].size(); ++si) {
        int rank = je["senses"][si].at("rank").get<int>();
        double c = je["senses"][si].contains("count")
                       ? je["senses"][si]["count"].get<double>()
                       : 0.0;
        by_rank[rank - 1] = c;
        total += c;
      }
      for (std::size_t i = 0; i < entry.senses.size(); ++i)
        entry.senses[i].rel_freq = total > 0 ? by_rank[i] / total : 0.0;
    } else if (any_rel) {
      double total = 0;
      for (const auto& s : entry.senses) total += s.rel_freq;
      if (total != 0.0 && std::abs(total - 1.0) > 1e-9) {
        if (fail(where, "rel_freq values must sum to 1")) continue;
      }
    } else {
      for (auto& s : entry.senses)
        s.rel_freq = 1.0 / static_cast<double>(entry.senses.size());
    }

    lx.entries_.push_back(std::move(entry));
  }

  std::sort(lx.entries_.begin(), lx.entries_.end(),
            [](const LexiconEntry& a, const LexiconEntry& b) {
              if (a.lemma != b.lemma) return a.lemma < b.lemma;
              return to_string(a.pos) < std::string(to_string(b.pos));
            });
  lx.index_entries();

  // hyponym keys must resolve
  for (const auto& e : lx.entries_)
    for (const auto& s : e.senses)
      for (const auto& h : s.hyponyms)
        if (!lx.sense_by_key(h))
          fail("sense " + s.key, "dangling hyponym key " + h);

  // multiword index from underscore lemmas
  if (!opts.inflections_tsv.empty())
    lx.mwi_.load_inflections(opts.inflections_tsv, "inflections");
  for (const auto& e : lx.entries_) {
    if (e.lemma.find('_') == std::string::npos) continue;
    if (opts.multiword_allowlist &&
        opts.multiword_allowlist->count(e.lemma) == 0)
      continue;
    auto components = detail::multiword_components(e.lemma, opts);
    if (components.empty()) continue;
    std::vector<std::string> keys;
    for (const auto& s : e.senses) keys.push_back(s.key);
    lx.mwi_.add(components, keys);
  }

  return lx;
}

/// Breadth-first hyponym gloss expansion, each sense included once.
/// Depth 0 is the sense's own gloss.
inline std::vector<std::string> expand_gloss(const SenseEntry& sense,
                                             const Lexicon& lx,
                                             std::size_t depth) {
  std::vector<std::string> out = sense.gloss;
  std::set<std::string> visited{sense.key};
  std::deque<std::pair<const SenseEntry*, std::size_t>> queue;
  queue.emplace_back(&sense, 0);
  while (!queue.empty()) {
    auto [cur, d] = queue.front();
    queue.pop_front();
    if (d >= depth) continue;
    for (const auto& key : cur->hyponyms) {
      if (!visited.insert(key).second) continue;
      const SenseEntry* child = lx.sense_by_key(key);
      if (!child) throw DataError("dangling hyponym key " + key);
      out.insert(out.end(), child->gloss.begin(), child->gloss.end());
      queue.emplace_back(child, d + 1);
    }
  }
  return out;
}

}  // namespace relsense::lex
