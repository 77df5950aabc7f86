#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "relsense/lemmatizer.hpp"
#include "relsense/util.hpp"

namespace relsense::corpus {

enum class TokenLabel { Word, Number, ProperNoun };
enum class PosTag { Noun, Verb, Adj, Adv, Other };

inline const char* to_string(TokenLabel l) {
  switch (l) {
    case TokenLabel::Word: return "WORD";
    case TokenLabel::Number: return "NUMBER";
    case TokenLabel::ProperNoun: return "PROPER_NOUN";
  }
  return "WORD";
}

inline TokenLabel label_from_string(std::string_view s) {
  if (s == "WORD") return TokenLabel::Word;
  if (s == "NUMBER") return TokenLabel::Number;
  if (s == "PROPER_NOUN") return TokenLabel::ProperNoun;
  throw DataError("unknown token label: " + std::string(s));
}

inline const char* to_string(PosTag p) {
  switch (p) {
    case PosTag::Noun: return "NOUN";
    case PosTag::Verb: return "VERB";
    case PosTag::Adj: return "ADJ";
    case PosTag::Adv: return "ADV";
    case PosTag::Other: return "OTHER";
  }
  return "OTHER";
}

inline PosTag pos_tag_from_string(std::string_view s) {
  if (s == "NOUN") return PosTag::Noun;
  if (s == "VERB") return PosTag::Verb;
  if (s == "ADJ") return PosTag::Adj;
  if (s == "ADV") return PosTag::Adv;
  if (s == "OTHER") return PosTag::Other;
  throw DataError("unknown pos tag: " + std::string(s));
}

struct RawDocument {
  std::string doc_id;
  std::string text;
};

struct Token {
  std::string surface;
  std::string lemma;
  TokenLabel label = TokenLabel::Word;
  std::uint32_t position = 0;
  std::optional<PosTag> pos;
};

/// Versioned stopword set. The hash is over the sorted entries, so it
/// identifies the list content independent of file formatting.
class StopwordList {
public:
  StopwordList() : hash_(fnv1a64("")) {}

  static StopwordList from_words(const std::vector<std::string>& words) {
    StopwordList sw;
    for (const auto& w : words) sw.entries_.insert(to_lower_ascii(trim(w)));
    sw.entries_.erase("");
    sw.rehash();
    return sw;
  }

  /// One lemma per line; `#` comments and blank lines ignored.
  static StopwordList from_file(const std::filesystem::path& path) {
    std::vector<std::string> words;
    for (const auto& raw : split(read_file(path), '\n')) {
      auto line = std::string(trim(raw));
      if (line.empty() || line[0] == '#') continue;
      words.push_back(line);
    }
    return from_words(words);
  }

  bool contains(const std::string& lemma) const {
    return lookup_.count(lemma) > 0;
  }

  std::uint64_t hash() const { return hash_; }
  std::size_t size() const { return entries_.size(); }

private:
  void rehash() {
    std::string blob;
    for (const auto& w : entries_) {
      blob += w;
      blob += '\n';
    }
    hash_ = fnv1a64(blob);
    lookup_ = {entries_.begin(), entries_.end()};
  }

  std::set<std::string> entries_;
  std::unordered_set<std::string> lookup_;
  std::uint64_t hash_ = 0;
};

struct BoilerplateMarkers {
  std::string start;  // header ends at the first line containing this
  std::string end;    // footer begins at the first later line containing this
};

/// Removes a header block ending at the start-marker line and a footer block
/// beginning at the end-marker line. Missing markers leave the corresponding
/// part untouched.
inline RawDocument strip_boilerplate(const RawDocument& doc,
                                     const BoilerplateMarkers& markers) {
  if (markers.start.empty() && markers.end.empty()) return doc;
  std::string_view text = doc.text;

  std::size_t body_begin = 0;
  if (!markers.start.empty()) {
    std::size_t line_start = 0;
    while (line_start < text.size()) {
      std::size_t line_end = text.find('\n', line_start);
      if (line_end == std::string_view::npos) line_end = text.size();
      auto line = text.substr(line_start, line_end - line_start);
      if (line.find(markers.start) != std::string_view::npos) {
        body_begin = std::min(line_end + 1, text.size());
        break;
      }
      line_start = line_end + 1;
    }
  }

  std::size_t body_end = text.size();
  if (!markers.end.empty()) {
    std::size_t line_start = body_begin;
    while (line_start < text.size()) {
      std::size_t line_end = text.find('\n', line_start);
      if (line_end == std::string_view::npos) line_end = text.size();
      auto line = text.substr(line_start, line_end - line_start);
      if (line.find(markers.end) != std::string_view::npos) {
        body_end = line_start;
        break;
      }
      line_start = line_end + 1;
    }
  }

  if (body_end < body_begin) body_end = body_begin;
  return RawDocument{doc.doc_id,
                     std::string(text.substr(body_begin, body_end - body_begin))};
}

/// Per-run tally. Mergeable so documents can be processed concurrently.
struct NormalizeDiagnostics {
  std::uint64_t documents_total = 0;
  std::uint64_t documents_kept = 0;
  std::uint64_t documents_dropped_language = 0;
  std::uint64_t raw_tokens = 0;
  std::uint64_t tokens_emitted = 0;
  std::uint64_t invalid_bytes_skipped = 0;

  void merge(const NormalizeDiagnostics& o) {
    documents_total += o.documents_total;
    documents_kept += o.documents_kept;
    documents_dropped_language += o.documents_dropped_language;
    raw_tokens += o.raw_tokens;
    tokens_emitted += o.tokens_emitted;
    invalid_bytes_skipped += o.invalid_bytes_skipped;
  }
};

namespace detail {

inline bool is_ascii_alnum(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9');
}

inline bool is_ascii_digit(unsigned char c) { return c >= '0' && c <= '9'; }

inline bool is_ascii_upper(unsigned char c) { return c >= 'A' && c <= 'Z'; }

/// Length of a valid UTF-8 sequence starting at s[i], or 0 if invalid.
inline std::size_t utf8_len(std::string_view s, std::size_t i) {
  unsigned char c = static_cast<unsigned char>(s[i]);
  std::size_t len;
  if (c < 0x80) return 1;
  if ((c & 0xe0) == 0xc0) len = 2;
  else if ((c & 0xf0) == 0xe0) len = 3;
  else if ((c & 0xf8) == 0xf0) len = 4;
  else return 0;
  if (i + len > s.size()) return 0;
  for (std::size_t k = 1; k < len; ++k)
    if ((static_cast<unsigned char>(s[i + k]) & 0xc0) != 0x80) return 0;
  // reject overlong 2-byte forms and out-of-range leads
  if (len == 2 && c < 0xc2) return 0;
  if (len == 4 && c > 0xf4) return 0;
  return len;
}

struct RawToken {
  std::string surface;
  bool sentence_initial = false;
};

/// Splits text into raw word tokens. Token characters are ASCII
/// alphanumerics; apostrophes and hyphens are kept between alphanumerics,
/// commas and periods between digits. Everything else separates tokens.
/// `.`, `!`, `?` additionally mark a sentence boundary. Invalid UTF-8 bytes
/// are skipped and counted.
inline std::vector<RawToken> scan_raw_tokens(std::string_view text,
                                             std::uint64_t* invalid_bytes) {
  std::vector<RawToken> out;
  std::string cur;
  bool sentence_start = true;
  bool cur_initial = true;

  auto flush = [&] {
    if (!cur.empty()) {
      out.push_back(RawToken{cur, cur_initial});
      cur.clear();
      sentence_start = false;
    }
  };

  std::size_t i = 0;
  while (i < text.size()) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (is_ascii_alnum(c)) {
      if (cur.empty()) cur_initial = sentence_start;
      cur.push_back(static_cast<char>(c));
      ++i;
      continue;
    }
    if (c < 0x80) {
      bool joiner = false;
      if (!cur.empty() && i + 1 < text.size()) {
        unsigned char prev = static_cast<unsigned char>(cur.back());
        unsigned char next = static_cast<unsigned char>(text[i + 1]);
        if ((c == '\'' || c == '-' || c == '_') && is_ascii_alnum(prev) &&
            is_ascii_alnum(next))
          joiner = true;
        if ((c == ',' || c == '.') && is_ascii_digit(prev) &&
            is_ascii_digit(next))
          joiner = true;
      }
      if (joiner) {
        cur.push_back(static_cast<char>(c));
        ++i;
        continue;
      }
      flush();
      if (c == '.' || c == '!' || c == '?') sentence_start = true;
      ++i;
      continue;
    }
    // non-ASCII: valid sequences act as separators, invalid bytes are skipped
    std::size_t len = utf8_len(text, i);
    if (len == 0) {
      if (invalid_bytes) ++*invalid_bytes;
      ++i;
    } else {
      flush();
      i += len;
    }
  }
  flush();
  return out;
}

/// Integer or decimal with optional comma thousands separators.
inline bool matches_number(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = 0;
  auto digits = [&](std::size_t min_n, std::size_t max_n) {
    std::size_t n = 0;
    while (i < s.size() && is_ascii_digit(static_cast<unsigned char>(s[i])) &&
           n < max_n) {
      ++i;
      ++n;
    }
    return n >= min_n;
  };
  constexpr std::size_t kNoCap = static_cast<std::size_t>(-1);
  if (!digits(1, kNoCap)) return false;
  std::size_t lead = i;
  if (i < s.size() && s[i] == ',') {
    if (lead > 3) return false;
    while (i < s.size() && s[i] == ',') {
      ++i;
      std::size_t before = i;
      if (!digits(3, 3) || i - before != 3) return false;
    }
  }
  if (i < s.size() && s[i] == '.') {
    ++i;
    if (!digits(1, kNoCap)) return false;
  }
  return i == s.size();
}

}  // namespace detail

/// Full normalization of one document: tokenize, label numbers and proper
/// nouns, lemmatize, strip stopwords, assign positions. A capitalized token
/// is a proper noun when it is not sentence-initial, or when sentence-initial
/// and its lowercase form occurs neither uncapitalized in the document nor in
/// the stopword list.
inline std::vector<Token> tokenize_and_normalize(
    const RawDocument& doc, const StopwordList& stopwords,
    const Lemmatizer& lemmatizer, NormalizeDiagnostics* diag = nullptr) {
  NormalizeDiagnostics local;
  auto raw = detail::scan_raw_tokens(doc.text, &local.invalid_bytes_skipped);
  local.raw_tokens = raw.size();

  std::unordered_set<std::string> seen_lowercase;
  for (const auto& t : raw)
    if (!detail::is_ascii_upper(static_cast<unsigned char>(t.surface[0])))
      seen_lowercase.insert(to_lower_ascii(t.surface));

  std::vector<Token> out;
  out.reserve(raw.size());
  auto is_proper = [&](const detail::RawToken& t) {
    if (!detail::is_ascii_upper(static_cast<unsigned char>(t.surface[0])))
      return false;
    if (!t.sentence_initial) return true;
    auto lower = to_lower_ascii(t.surface);
    return seen_lowercase.count(lower) == 0 && !stopwords.contains(lower);
  };

  for (const auto& t : raw) {
    Token tok;
    tok.surface = t.surface;
    // the marker lemmas pass through unchanged, so normalizing an already
    // normalized stream is idempotent
    if (t.surface == "NUMBER" || detail::matches_number(t.surface)) {
      tok.label = TokenLabel::Number;
      tok.lemma = "NUMBER";
    } else if (t.surface == "PROPER_NOUN" || is_proper(t)) {
      tok.label = TokenLabel::ProperNoun;
      tok.lemma = "PROPER_NOUN";
    } else {
      tok.label = TokenLabel::Word;
      tok.lemma = lemmatizer.lemma(to_lower_ascii(t.surface));
      if (tok.lemma.empty()) tok.lemma = to_lower_ascii(t.surface);
      if (stopwords.contains(tok.lemma)) continue;
    }
    tok.position = static_cast<std::uint32_t>(out.size());
    out.push_back(std::move(tok));
  }
  local.tokens_emitted = out.size();
  if (diag) diag->merge(local);
  return out;
}

/// Stopword-ratio language check: fraction of whitespace-delimited words
/// whose lowercase form is a stopword. Empty documents are not English.
inline bool is_english(const RawDocument& doc, const StopwordList& stopwords,
                       double threshold = 0.02) {
  std::uint64_t total = 0, hits = 0;
  for (const auto& w : split_ws(doc.text)) {
    ++total;
    if (stopwords.contains(to_lower_ascii(w))) ++hits;
  }
  if (total == 0) return false;
  return static_cast<double>(hits) / static_cast<double>(total) >= threshold;
}

// ---------------------------------------------------------------------------
// Token stream files: `position<TAB>lemma<TAB>label[<TAB>pos_tag]`
// ---------------------------------------------------------------------------

inline std::string format_token_stream(const std::vector<Token>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    out += std::to_string(t.position);
    out += '\t';
    out += t.lemma;
    out += '\t';
    out += to_string(t.label);
    if (t.pos) {
      out += '\t';
      out += to_string(*t.pos);
    }
    out += '\n';
  }
  return out;
}

inline std::vector<Token> parse_token_stream(std::string_view content,
                                             std::string_view origin = "") {
  std::vector<Token> out;
  std::size_t lineno = 0;
  for (const auto& line : split(content, '\n')) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto cols = split(line, '\t');
    if (cols.size() != 3 && cols.size() != 4)
      throw DataError(std::string(origin) + ":" + std::to_string(lineno) +
                      ": expected 3 or 4 tab-separated fields");
    Token t;
    t.position = static_cast<std::uint32_t>(parse_int(cols[0]));
    t.lemma = cols[1];
    t.surface = cols[1];
    t.label = label_from_string(cols[2]);
    if (cols.size() == 4 && !cols[3].empty())
      t.pos = pos_tag_from_string(cols[3]);
    if (t.position != out.size())
      throw DataError(std::string(origin) + ":" + std::to_string(lineno) +
                      ": positions must be consecutive from 0");
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace relsense::corpus
