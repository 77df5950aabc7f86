#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "relsense/util.hpp"

namespace relsense::corpus {

/// Maps a lowercased surface form to its lemma. Implementations must be
/// deterministic and safe for concurrent readers.
class Lemmatizer {
public:
  virtual ~Lemmatizer() = default;
  virtual std::string lemma(const std::string& lower_surface) const = 0;
  virtual std::string name() const = 0;
};

class IdentityLemmatizer final : public Lemmatizer {
public:
  std::string lemma(const std::string& s) const override { return s; }
  std::string name() const override { return "identity"; }
};

/// Exception-table + ordered suffix rules. The exception table is consulted
/// first; otherwise the first rule whose suffix matches and leaves at least
/// min_stem characters is applied. No rule applies -> the form is its own
/// lemma.
class SuffixRuleLemmatizer final : public Lemmatizer {
public:
  struct Rule {
    std::string suffix;
    std::string replacement;
    std::size_t min_stem;
  };

  SuffixRuleLemmatizer(std::unordered_map<std::string, std::string> exceptions,
                       std::vector<Rule> rules)
      : exceptions_(std::move(exceptions)), rules_(std::move(rules)) {}

  /// exceptions: `surface<TAB>lemma` lines; rules: `suffix<TAB>replacement
  /// <TAB>min_stem` lines. `#` starts a comment in both files.
  static SuffixRuleLemmatizer from_files(const std::filesystem::path& exceptions_path,
                                         const std::filesystem::path& rules_path) {
    std::unordered_map<std::string, std::string> exc;
    for (const auto& line : data_lines(exceptions_path)) {
      auto cols = split(line, '\t');
      if (cols.size() != 2 || cols[0].empty() || cols[1].empty())
        throw DataError("bad exception line in " + exceptions_path.string() +
                        ": " + line);
      exc[cols[0]] = cols[1];
    }
    std::vector<Rule> rules;
    for (const auto& line : data_lines(rules_path)) {
      auto cols = split(line, '\t');
      if (cols.size() != 3 || cols[0].empty())
        throw DataError("bad rule line in " + rules_path.string() + ": " +
                        line);
      rules.push_back(Rule{cols[0], cols[1],
                           static_cast<std::size_t>(parse_int(cols[2]))});
    }
    if (rules.empty())
      throw DataError("no rules in " + rules_path.string());
    return SuffixRuleLemmatizer(std::move(exc), std::move(rules));
  }

  /// Applies exceptions and rules to a fixpoint, so lemma(lemma(x)) ==
  /// lemma(x) and re-normalizing a lemma stream is stable.
  std::string lemma(const std::string& s) const override {
    std::string cur = s;
    for (int iter = 0; iter < 8; ++iter) {
      std::string next = apply_once(cur);
      if (next == cur) return cur;
      cur = std::move(next);
    }
    return cur;
  }

  std::string name() const override { return "suffix"; }

private:
  std::string apply_once(const std::string& s) const {
    auto it = exceptions_.find(s);
    if (it != exceptions_.end()) return it->second;
    for (const auto& r : rules_) {
      if (s.size() < r.suffix.size()) continue;
      std::size_t stem_len = s.size() - r.suffix.size();
      if (stem_len < r.min_stem) continue;
      if (s.compare(stem_len, r.suffix.size(), r.suffix) != 0) continue;
      std::string out = s.substr(0, stem_len) + r.replacement;
      if (out.empty()) continue;
      return out;
    }
    return s;
  }

  static std::vector<std::string> data_lines(const std::filesystem::path& p) {
    std::vector<std::string> out;
    for (const auto& raw : split(read_file(p), '\n')) {
      auto line = std::string(trim(raw));
      if (line.empty() || line[0] == '#') continue;
      out.push_back(line);
    }
    return out;
  }

  std::unordered_map<std::string, std::string> exceptions_;
  std::vector<Rule> rules_;
};

}  // namespace relsense::corpus
