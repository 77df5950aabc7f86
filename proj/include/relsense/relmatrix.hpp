#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "relsense/corpus.hpp"
#include "relsense/util.hpp"

namespace relsense::relmat {

// ---------------------------------------------------------------------------
// Vocabulary: the K most frequent lemmas/labels, descending frequency,
// lexicographic tie-break. Ids are 0..size-1 in that order.
// ---------------------------------------------------------------------------

class Vocabulary {
public:
  Vocabulary() = default;

  static Vocabulary from_counts(
      const std::unordered_map<std::string, std::uint64_t>& counts,
      std::size_t k) {
    if (k == 0) throw std::invalid_argument("vocabulary size must be >= 1");
    std::vector<std::pair<std::string, std::uint64_t>> all(counts.begin(),
                                                           counts.end());
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    if (all.size() > k) all.resize(k);
    Vocabulary v;
    v.entries_ = std::move(all);
    v.reindex();
    return v;
  }

  static Vocabulary from_streams(
      const std::vector<std::vector<corpus::Token>>& streams, std::size_t k) {
    std::unordered_map<std::string, std::uint64_t> counts;
    for (const auto& stream : streams)
      for (const auto& t : stream) ++counts[t.lemma];
    return from_counts(counts, k);
  }

  std::size_t size() const { return entries_.size(); }

  std::optional<std::uint32_t> id_of(const std::string& lemma) const {
    auto it = index_.find(lemma);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& lemma_of(std::uint32_t id) const {
    check_id(id);
    return entries_[id].first;
  }

  std::uint64_t frequency_of(std::uint32_t id) const {
    check_id(id);
    return entries_[id].second;
  }

  const std::vector<std::pair<std::string, std::uint64_t>>& entries() const {
    return entries_;
  }

  /// Content hash over `lemma<TAB>frequency` lines; binds matrices to the
  /// vocabulary they were built from.
  std::uint64_t hash() const {
    std::uint64_t h = kFnvOffset;
    for (const auto& [lemma, freq] : entries_) {
      h = fnv1a64(lemma, h);
      h = fnv1a64("\t", h);
      h = fnv1a64(std::to_string(freq), h);
      h = fnv1a64("\n", h);
    }
    return h;
  }

  std::string format() const {
    std::string out;
    out += "# relsense-vocabulary v1\n";
    out += "# tool\t";
    out += kToolVersion;
    out += '\n';
    out += "# hash\t" + hash_hex(hash()) + '\n';
    for (const auto& [lemma, freq] : entries_)
      out += lemma + '\t' + std::to_string(freq) + '\n';
    return out;
  }

  static Vocabulary parse(std::string_view content,
                          std::string_view origin = "") {
    Vocabulary v;
    std::size_t lineno = 0;
    for (const auto& line : split(content, '\n')) {
      ++lineno;
      if (line.empty() || line[0] == '#') continue;
      auto cols = split(line, '\t');
      if (cols.size() != 2)
        throw DataError(std::string(origin) + ":" + std::to_string(lineno) +
                        ": expected `lemma<TAB>frequency`");
      v.entries_.emplace_back(cols[0],
                              static_cast<std::uint64_t>(parse_int(cols[1])));
    }
    for (std::size_t i = 1; i < v.entries_.size(); ++i) {
      const auto& prev = v.entries_[i - 1];
      const auto& cur = v.entries_[i];
      if (cur.second > prev.second ||
          (cur.second == prev.second && cur.first < prev.first))
        throw DataError(std::string(origin) +
                        ": vocabulary not sorted by descending frequency");
    }
    v.reindex();
    return v;
  }

private:
  void reindex() {
    index_.clear();
    index_.reserve(entries_.size());
    for (std::uint32_t i = 0; i < entries_.size(); ++i)
      index_[entries_[i].first] = i;
  }

  void check_id(std::uint32_t id) const {
    if (id >= entries_.size())
      throw std::out_of_range("vocabulary id out of range: " +
                              std::to_string(id));
  }

  std::vector<std::pair<std::string, std::uint64_t>> entries_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

inline Vocabulary build_vocabulary(
    const std::vector<std::vector<corpus::Token>>& streams, std::size_t k) {
  return Vocabulary::from_streams(streams, k);
}

// ---------------------------------------------------------------------------
// Cooccurrence counts over sliding windows of radius r centered at every
// token position, clipped at document boundaries. occ(a) counts windows
// containing at least one a; pair(a,b) counts windows containing both.
// ---------------------------------------------------------------------------

inline std::uint64_t pack_pair(std::uint32_t a, std::uint32_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

struct CoocCounts {
  std::uint32_t radius = 0;
  std::uint64_t vocab_hash = 0;
  std::uint64_t stopword_hash = 0;
  std::uint64_t total_positions = 0;
  std::vector<std::uint64_t> occ;                     // indexed by vocab id
  std::unordered_map<std::uint64_t, std::uint64_t> pairs;  // packed id pair

  std::uint64_t occurrences(std::uint32_t id) const {
    return id < occ.size() ? occ[id] : 0;
  }

  std::uint64_t pair(std::uint32_t a, std::uint32_t b) const {
    if (a == b) return 0;
    auto it = pairs.find(pack_pair(a, b));
    return it == pairs.end() ? 0 : it->second;
  }
};

/// Adds one document to the counts. Presence intervals: word a is in the
/// window at position p iff p lies within radius of one of a's occurrences,
/// so the window positions containing a form a union of intervals. occ is
/// the measure of that union; pair(a,b) the measure of the intersection,
/// accumulated by a sweep whose active set is bounded by the window size.
inline void count_document(CoocCounts& counts, const Vocabulary& vocab,
                           std::span<const corpus::Token> tokens) {
  const std::int64_t n = static_cast<std::int64_t>(tokens.size());
  const std::int64_t r = counts.radius;
  counts.total_positions += tokens.size();
  if (counts.occ.size() < vocab.size()) counts.occ.resize(vocab.size(), 0);
  if (n == 0) return;

  // occurrence positions per vocab id, in order
  std::unordered_map<std::uint32_t, std::vector<std::int64_t>> occurrences;
  for (std::int64_t p = 0; p < n; ++p) {
    if (auto id = vocab.id_of(tokens[p].lemma))
      occurrences[*id].push_back(p);
  }

  struct Interval {
    std::int64_t begin, end;  // half-open
    std::uint32_t id;
  };
  std::vector<Interval> intervals;
  for (auto& [id, positions] : occurrences) {
    std::int64_t cur_b = -1, cur_e = -1;
    for (std::int64_t p : positions) {
      std::int64_t b = std::max<std::int64_t>(0, p - r);
      std::int64_t e = std::min<std::int64_t>(n, p + r + 1);
      if (cur_e >= b) {
        cur_e = e;
      } else {
        if (cur_e > cur_b) {
          counts.occ[id] += static_cast<std::uint64_t>(cur_e - cur_b);
          intervals.push_back(Interval{cur_b, cur_e, id});
        }
        cur_b = b;
        cur_e = e;
      }
    }
    if (cur_e > cur_b) {
      counts.occ[id] += static_cast<std::uint64_t>(cur_e - cur_b);
      intervals.push_back(Interval{cur_b, cur_e, id});
    }
  }

  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& a, const Interval& b) {
              if (a.begin != b.begin) return a.begin < b.begin;
              if (a.end != b.end) return a.end < b.end;
              return a.id < b.id;
            });

  // sweep: each overlapping interval pair is charged once, at the later start
  std::vector<Interval> active;
  for (const auto& iv : intervals) {
    std::size_t keep = 0;
    for (std::size_t i = 0; i < active.size(); ++i)
      if (active[i].end > iv.begin) active[keep++] = active[i];
    active.resize(keep);
    for (const auto& a : active) {
      std::uint64_t overlap =
          static_cast<std::uint64_t>(std::min(a.end, iv.end) - iv.begin);
      counts.pairs[pack_pair(a.id, iv.id)] += overlap;
    }
    active.push_back(iv);
  }
}

inline CoocCounts count_cooccurrences(
    const std::vector<std::vector<corpus::Token>>& streams,
    const Vocabulary& vocab, std::uint32_t radius,
    std::uint64_t stopword_hash = 0) {
  if (radius < 1) throw std::invalid_argument("radius must be >= 1");
  CoocCounts counts;
  counts.radius = radius;
  counts.vocab_hash = vocab.hash();
  counts.stopword_hash = stopword_hash;
  counts.occ.resize(vocab.size(), 0);
  for (const auto& stream : streams) count_document(counts, vocab, stream);
  return counts;
}

/// Fieldwise sum of per-shard counts. Parts must agree on radius and
/// vocabulary.
inline CoocCounts merge_counts(const std::vector<CoocCounts>& parts) {
  if (parts.empty()) throw std::invalid_argument("nothing to merge");
  CoocCounts out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto& p = parts[i];
    if (p.radius != out.radius)
      throw DataError("merge_counts: window radius mismatch");
    if (p.vocab_hash != out.vocab_hash)
      throw DataError("merge_counts: vocabulary mismatch");
    if (p.stopword_hash != out.stopword_hash)
      throw DataError("merge_counts: stopword list mismatch");
    out.total_positions += p.total_positions;
    if (out.occ.size() < p.occ.size()) out.occ.resize(p.occ.size(), 0);
    for (std::size_t id = 0; id < p.occ.size(); ++id) out.occ[id] += p.occ[id];
    for (const auto& [key, c] : p.pairs) out.pairs[key] += c;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Relevance matrix: thresholded pointwise mutual information
//   raw(a,b) = pair(a,b) * T / (occ(a) * occ(b))
// stored sparse and symmetric; absent cells read as zero.
// ---------------------------------------------------------------------------

struct MatrixCell {
  std::uint32_t a, b;  // a < b
  double weight;
};

struct MatrixMeta {
  std::uint64_t vocab_hash = 0;
  std::uint64_t stopword_hash = 0;
  std::uint32_t vocab_size = 0;
  std::uint32_t radius = 0;
  double threshold = 0.0;
  std::uint64_t total_positions = 0;
};

class RelevanceMatrix {
public:
  RelevanceMatrix() = default;

  /// Cells must use a < b and be unique; weights below the threshold are
  /// rejected so the stored matrix never violates the threshold gap.
  RelevanceMatrix(MatrixMeta meta, std::vector<MatrixCell> cells)
      : meta_(meta) {
    std::sort(cells.begin(), cells.end(),
              [](const MatrixCell& x, const MatrixCell& y) {
                if (x.a != y.a) return x.a < y.a;
                return x.b < y.b;
              });
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const auto& c = cells[i];
      if (c.a >= c.b)
        throw DataError("matrix cell ids must satisfy a < b");
      if (c.b >= meta_.vocab_size)
        throw DataError("matrix cell id out of vocabulary range");
      if (!(c.weight >= meta_.threshold))
        throw DataError("matrix cell below threshold");
      if (i > 0 && cells[i - 1].a == c.a && cells[i - 1].b == c.b)
        throw DataError("duplicate matrix cell");
    }
    cells_ = std::move(cells);
    build_csr();
  }

  const MatrixMeta& meta() const { return meta_; }
  const std::vector<MatrixCell>& cells() const { return cells_; }
  std::size_t cell_count() const { return cells_.size(); }

  /// Stored weight, or 0 for absent cells and the diagonal.
  double relevance(std::uint32_t a, std::uint32_t b) const {
    if (a >= meta_.vocab_size || b >= meta_.vocab_size)
      throw std::out_of_range("relevance: id out of range");
    if (a == b) return 0.0;
    auto begin = col_.begin() + row_ptr_[a];
    auto end = col_.begin() + row_ptr_[a + 1];
    auto it = std::lower_bound(begin, end, b);
    if (it == end || *it != b) return 0.0;
    return weight_[static_cast<std::size_t>(it - col_.begin())];
  }

  /// All neighbors of `a` with their weights, ascending by id.
  std::span<const std::uint32_t> row_ids(std::uint32_t a) const {
    if (a >= meta_.vocab_size)
      throw std::out_of_range("row_ids: id out of range");
    return {col_.data() + row_ptr_[a], col_.data() + row_ptr_[a + 1]};
  }

  std::span<const double> row_weights(std::uint32_t a) const {
    if (a >= meta_.vocab_size)
      throw std::out_of_range("row_weights: id out of range");
    return {weight_.data() + row_ptr_[a], weight_.data() + row_ptr_[a + 1]};
  }

  /// Hash of metadata and cells; used as the enrichment cache key.
  std::uint64_t content_hash() const {
    std::string blob;
    put_u64(blob, meta_.vocab_hash);
    put_u64(blob, meta_.stopword_hash);
    put_u32(blob, meta_.vocab_size);
    put_u32(blob, meta_.radius);
    put_f64(blob, meta_.threshold);
    put_u64(blob, meta_.total_positions);
    for (const auto& c : cells_) {
      put_u32(blob, c.a);
      put_u32(blob, c.b);
      put_f64(blob, c.weight);
    }
    return fnv1a64(blob);
  }

  // --- binary codec (byte-exact round trip) ---

  std::string to_binary() const {
    std::string out = "RSMX";
    put_u32(out, 1);
    put_u64(out, meta_.vocab_hash);
    put_u64(out, meta_.stopword_hash);
    put_u32(out, meta_.vocab_size);
    put_u32(out, meta_.radius);
    put_f64(out, meta_.threshold);
    put_u64(out, meta_.total_positions);
    put_u64(out, cells_.size());
    for (const auto& c : cells_) {
      put_u32(out, c.a);
      put_u32(out, c.b);
      put_f64(out, c.weight);
    }
    return out;
  }

  static RelevanceMatrix from_binary(std::string_view data) {
    ByteReader r(data);
    if (r.bytes(4) != "RSMX") throw DataError("bad matrix magic");
    if (r.u32() != 1) throw DataError("unsupported matrix version");
    MatrixMeta meta;
    meta.vocab_hash = r.u64();
    meta.stopword_hash = r.u64();
    meta.vocab_size = r.u32();
    meta.radius = r.u32();
    meta.threshold = r.f64();
    meta.total_positions = r.u64();
    std::uint64_t n = r.u64();
    std::vector<MatrixCell> cells;
    cells.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
      MatrixCell c;
      c.a = r.u32();
      c.b = r.u32();
      c.weight = r.f64();
      cells.push_back(c);
    }
    if (!r.at_end()) throw DataError("trailing bytes in matrix file");
    return RelevanceMatrix(meta, std::move(cells));
  }

  // --- TSV codec ---

  std::string to_tsv() const {
    std::string out;
    out += "#relsense-matrix\tv1\n";
    out += "#vocab_hash\t" + hash_hex(meta_.vocab_hash) + '\n';
    out += "#stopword_hash\t" + hash_hex(meta_.stopword_hash) + '\n';
    out += "#vocab_size\t" + std::to_string(meta_.vocab_size) + '\n';
    out += "#radius\t" + std::to_string(meta_.radius) + '\n';
    out += "#threshold\t" + format_double(meta_.threshold) + '\n';
    out += "#total_positions\t" + std::to_string(meta_.total_positions) + '\n';
    for (const auto& c : cells_) {
      out += std::to_string(c.a);
      out += '\t';
      out += std::to_string(c.b);
      out += '\t';
      out += format_double(c.weight);
      out += '\n';
    }
    return out;
  }

  static RelevanceMatrix from_tsv(std::string_view content,
                                  std::string_view origin = "") {
    MatrixMeta meta;
    bool saw_magic = false;
    std::vector<MatrixCell> cells;
    std::size_t lineno = 0;
    for (const auto& line : split(content, '\n')) {
      ++lineno;
      if (line.empty()) continue;
      auto loc = [&] {
        return std::string(origin) + ":" + std::to_string(lineno);
      };
      if (line[0] == '#') {
        auto cols = split(line, '\t');
        if (cols[0] == "#relsense-matrix") saw_magic = true;
        else if (cols.size() == 2 && cols[0] == "#vocab_hash")
          meta.vocab_hash = parse_hash_hex(cols[1]);
        else if (cols.size() == 2 && cols[0] == "#stopword_hash")
          meta.stopword_hash = parse_hash_hex(cols[1]);
        else if (cols.size() == 2 && cols[0] == "#vocab_size")
          meta.vocab_size = static_cast<std::uint32_t>(parse_int(cols[1]));
        else if (cols.size() == 2 && cols[0] == "#radius")
          meta.radius = static_cast<std::uint32_t>(parse_int(cols[1]));
        else if (cols.size() == 2 && cols[0] == "#threshold")
          meta.threshold = parse_double(cols[1]);
        else if (cols.size() == 2 && cols[0] == "#total_positions")
          meta.total_positions = static_cast<std::uint64_t>(parse_int(cols[1]));
        continue;
      }
      auto cols = split(line, '\t');
      if (cols.size() != 3)
        throw DataError(loc() + ": expected `id_a<TAB>id_b<TAB>weight`");
      MatrixCell c;
      c.a = static_cast<std::uint32_t>(parse_int(cols[0]));
      c.b = static_cast<std::uint32_t>(parse_int(cols[1]));
      c.weight = parse_double(cols[2]);
      cells.push_back(c);
    }
    if (!saw_magic)
      throw DataError(std::string(origin) + ": missing matrix header");
    return RelevanceMatrix(meta, std::move(cells));
  }

private:
  void build_csr() {
    row_ptr_.assign(meta_.vocab_size + 1, 0);
    for (const auto& c : cells_) {
      ++row_ptr_[c.a + 1];
      ++row_ptr_[c.b + 1];
    }
    for (std::size_t i = 1; i < row_ptr_.size(); ++i)
      row_ptr_[i] += row_ptr_[i - 1];
    col_.resize(cells_.size() * 2);
    weight_.resize(cells_.size() * 2);
    std::vector<std::uint32_t> cursor(row_ptr_.begin(), row_ptr_.end() - 1);
    // cells are sorted by (a, b); filling each row's below-diagonal columns
    // first and above-diagonal columns second keeps every row ascending
    for (const auto& c : cells_) {
      col_[cursor[c.b]] = c.a;
      weight_[cursor[c.b]] = c.weight;
      ++cursor[c.b];
    }
    for (const auto& c : cells_) {
      col_[cursor[c.a]] = c.b;
      weight_[cursor[c.a]] = c.weight;
      ++cursor[c.a];
    }
  }

  MatrixMeta meta_;
  std::vector<MatrixCell> cells_;  // upper triangle, sorted by (a, b)
  std::vector<std::uint32_t> row_ptr_;
  std::vector<std::uint32_t> col_;
  std::vector<double> weight_;
};

/// Raw MI value before thresholding; 0 when either word never occurs.
inline double raw_mi(const CoocCounts& counts, std::uint32_t a,
                     std::uint32_t b) {
  std::uint64_t oa = counts.occurrences(a), ob = counts.occurrences(b);
  if (oa == 0 || ob == 0) return 0.0;
  std::uint64_t p = counts.pair(a, b);
  return static_cast<double>(p) * static_cast<double>(counts.total_positions) /
         (static_cast<double>(oa) * static_cast<double>(ob));
}

inline RelevanceMatrix build_relevance(const CoocCounts& counts,
                                       double threshold) {
  if (counts.total_positions == 0) throw DataError("empty corpus");
  if (!(threshold > 0.0))
    throw std::invalid_argument("threshold must be positive");
  std::vector<MatrixCell> cells;
  for (const auto& [key, c] : counts.pairs) {
    auto a = static_cast<std::uint32_t>(key >> 32);
    auto b = static_cast<std::uint32_t>(key & 0xffffffffu);
    double raw = raw_mi(counts, a, b);
    if (raw >= threshold) cells.push_back(MatrixCell{a, b, raw});
  }
  MatrixMeta meta;
  meta.vocab_hash = counts.vocab_hash;
  meta.stopword_hash = counts.stopword_hash;
  meta.vocab_size = static_cast<std::uint32_t>(counts.occ.size());
  meta.radius = counts.radius;
  meta.threshold = threshold;
  meta.total_positions = counts.total_positions;
  return RelevanceMatrix(meta, std::move(cells));
}

}  // namespace relsense::relmat
