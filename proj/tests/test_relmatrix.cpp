#include <catch2/catch_amalgamated.hpp>

#include "relsense/relmatrix.hpp"
#include "support/helpers.hpp"
#include "support/oracles.hpp"

using namespace relsense;
using namespace relsense::relmat;
using helpers::stream;

TEST_CASE("build_vocabulary keeps the K most frequent lemmas") {
  auto v = build_vocabulary({stream("a a b")}, 2);
  REQUIRE(v.size() == 2);
  CHECK(v.lemma_of(0) == "a");
  CHECK(v.frequency_of(0) == 2);
  CHECK(v.lemma_of(1) == "b");
  CHECK(v.frequency_of(1) == 1);
}

TEST_CASE("build_vocabulary with K larger than the vocabulary") {
  auto v = build_vocabulary({stream("a a b")}, 10);
  CHECK(v.size() == 2);
}

TEST_CASE("build_vocabulary breaks frequency ties lexicographically") {
  auto v = build_vocabulary({stream("b a")}, 2);
  CHECK(v.lemma_of(0) == "a");
  CHECK(v.lemma_of(1) == "b");
}

TEST_CASE("build_vocabulary on an empty corpus") {
  CHECK(build_vocabulary({}, 5).size() == 0);
  CHECK_FALSE(build_vocabulary({}, 5).id_of("a").has_value());
}

TEST_CASE("vocabulary file round-trips and validates ordering") {
  auto v = build_vocabulary({stream("a a b c c c")}, 10);
  auto text = v.format();
  auto back = Vocabulary::parse(text, "test");
  CHECK(back.hash() == v.hash());
  REQUIRE(back.size() == v.size());
  CHECK(back.lemma_of(0) == "c");
  CHECK_THROWS_AS(Vocabulary::parse("a\t1\nb\t2\n", "bad"), DataError);
}

TEST_CASE("count_cooccurrences on the two-token fixture") {
  auto vocab = build_vocabulary({stream("a b")}, 10);
  auto counts = count_cooccurrences({stream("a b")}, vocab, 30);
  CHECK(counts.total_positions == 2);
  CHECK(counts.occurrences(*vocab.id_of("a")) == 2);
  CHECK(counts.occurrences(*vocab.id_of("b")) == 2);
  CHECK(counts.pair(*vocab.id_of("a"), *vocab.id_of("b")) == 2);
}

TEST_CASE("count_cooccurrences with a single token") {
  auto vocab = build_vocabulary({stream("a")}, 10);
  auto counts = count_cooccurrences({stream("a")}, vocab, 30);
  CHECK(counts.total_positions == 1);
  CHECK(counts.occurrences(0) == 1);
  CHECK(counts.pairs.empty());
}

TEST_CASE("windows never cross document boundaries") {
  auto vocab = build_vocabulary({stream("a"), stream("b")}, 10);
  auto counts = count_cooccurrences({stream("a"), stream("b")}, vocab, 30);
  CHECK(counts.pair(*vocab.id_of("a"), *vocab.id_of("b")) == 0);
  CHECK(counts.total_positions == 2);
}

TEST_CASE("out-of-vocabulary tokens occupy positions but are not counted") {
  auto vocab = build_vocabulary({stream("a b")}, 10);  // no "z"
  auto counts = count_cooccurrences({stream("a z z z b")}, vocab, 1);
  CHECK(counts.total_positions == 5);
  // a at 0, b at 4, radius 1: windows never contain both
  CHECK(counts.pair(*vocab.id_of("a"), *vocab.id_of("b")) == 0);
  CHECK(counts.occurrences(*vocab.id_of("a")) == 2);  // windows at 0 and 1
}

TEST_CASE("counts match the brute-force window enumerator") {
  Rng rng(7);
  for (int iter = 0; iter < 30; ++iter) {
    std::vector<std::vector<corpus::Token>> docs;
    std::size_t n_docs = 1 + rng.below(4);
    for (std::size_t d = 0; d < n_docs; ++d)
      docs.push_back(helpers::random_stream(rng, rng.below(200), 12));
    auto vocab = build_vocabulary(docs, 10);
    if (vocab.size() == 0) continue;
    for (std::uint32_t radius : {1u, 3u, 30u}) {
      auto fast = count_cooccurrences(docs, vocab, radius);
      auto brute = oracles::brute_force_counts(docs, vocab, radius);
      REQUIRE(fast.total_positions == brute.total_positions);
      for (std::uint32_t a = 0; a < vocab.size(); ++a) {
        auto it = brute.occ.find(a);
        REQUIRE(fast.occurrences(a) ==
                (it == brute.occ.end() ? 0 : it->second));
      }
      // every counted pair matches, in both directions
      for (std::uint32_t a = 0; a < vocab.size(); ++a)
        for (std::uint32_t b = a + 1; b < vocab.size(); ++b) {
          auto key = std::make_pair(a, b);
          std::uint64_t expected =
              brute.pairs.count(key) ? brute.pairs.at(key) : 0;
          REQUIRE(fast.pair(a, b) == expected);
          REQUIRE(fast.pair(b, a) == expected);
        }
    }
  }
}

TEST_CASE("merge_counts over a split corpus equals the unsplit count") {
  Rng rng(99);
  std::vector<std::vector<corpus::Token>> docs;
  for (int d = 0; d < 6; ++d)
    docs.push_back(helpers::random_stream(rng, 40 + rng.below(80), 8));
  auto vocab = build_vocabulary(docs, 8);

  auto whole = count_cooccurrences(docs, vocab, 5);
  std::vector<std::vector<corpus::Token>> left(docs.begin(), docs.begin() + 2);
  std::vector<std::vector<corpus::Token>> right(docs.begin() + 2, docs.end());
  auto a = count_cooccurrences(left, vocab, 5);
  auto b = count_cooccurrences(right, vocab, 5);

  auto merged = merge_counts({a, b});
  auto flipped = merge_counts({b, a});
  CHECK(merged.total_positions == whole.total_positions);
  CHECK(merged.occ == whole.occ);
  CHECK(merged.pairs == whole.pairs);
  CHECK(flipped.occ == whole.occ);
  CHECK(flipped.pairs == whole.pairs);

  auto single = merge_counts({whole});
  CHECK(single.occ == whole.occ);
  CHECK(single.pairs == whole.pairs);
}

TEST_CASE("merge_counts rejects mismatched parts") {
  auto vocab = build_vocabulary({stream("a b")}, 10);
  auto c1 = count_cooccurrences({stream("a b")}, vocab, 5);
  auto c2 = count_cooccurrences({stream("a b")}, vocab, 6);
  CHECK_THROWS_AS(merge_counts({c1, c2}), DataError);
  auto other_vocab = build_vocabulary({stream("a b c")}, 10);
  auto c3 = count_cooccurrences({stream("a b")}, other_vocab, 5);
  CHECK_THROWS_AS(merge_counts({c1, c3}), DataError);
}

TEST_CASE("build_relevance applies the MI formula and threshold") {
  // "a b": raw = 2*2/(2*2) = 1.0 < 2 -> absent
  auto vocab = build_vocabulary({stream("a b")}, 10);
  auto counts = count_cooccurrences({stream("a b")}, vocab, 30);
  auto matrix = build_relevance(counts, 2.0);
  CHECK(matrix.cell_count() == 0);
  CHECK(matrix.relevance(*vocab.id_of("a"), *vocab.id_of("b")) == 0.0);

  // occ(a)=1, occ(b)=1, pair=1 over 4 positions: raw = 1*4/(1*1) = 4 >= 2
  CoocCounts counts2;
  counts2.radius = 1;
  counts2.total_positions = 4;
  counts2.occ = {1, 1};
  counts2.pairs[pack_pair(0, 1)] = 1;
  auto matrix2 = build_relevance(counts2, 2.0);
  REQUIRE(matrix2.cell_count() == 1);
  CHECK(matrix2.relevance(0, 1) == 4.0);
  CHECK(matrix2.relevance(1, 0) == 4.0);
}

TEST_CASE("build_relevance on an empty corpus is an error") {
  CoocCounts counts;
  counts.radius = 30;
  CHECK_THROWS_WITH(build_relevance(counts, 2.0),
                    Catch::Matchers::ContainsSubstring("empty corpus"));
}

TEST_CASE("relevance lookups are symmetric, zero-diagonal, range-checked") {
  auto vocab = build_vocabulary({stream("a b"), stream("x y")}, 4);
  auto counts = count_cooccurrences({stream("a b"), stream("x y")}, vocab, 1);
  auto matrix = build_relevance(counts, 2.0);
  auto a = *vocab.id_of("a"), b = *vocab.id_of("b");
  CHECK(matrix.relevance(a, b) == matrix.relevance(b, a));
  CHECK(matrix.relevance(a, a) == 0.0);
  CHECK(matrix.relevance(a, *vocab.id_of("x")) == 0.0);
  CHECK_THROWS_AS(matrix.relevance(0, 1000), std::out_of_range);
}

TEST_CASE("duplicating the corpus leaves raw MI values unchanged") {
  Rng rng(4242);
  std::vector<std::vector<corpus::Token>> docs;
  for (int d = 0; d < 4; ++d)
    docs.push_back(helpers::random_stream(rng, 30 + rng.below(60), 8));
  auto vocab = build_vocabulary(docs, 8);
  auto once = count_cooccurrences(docs, vocab, 3);
  auto doubled_docs = docs;
  doubled_docs.insert(doubled_docs.end(), docs.begin(), docs.end());
  auto twice = count_cooccurrences(doubled_docs, vocab, 3);
  for (std::uint32_t a = 0; a < vocab.size(); ++a)
    for (std::uint32_t b = a + 1; b < vocab.size(); ++b)
      CHECK(raw_mi(once, a, b) == Catch::Approx(raw_mi(twice, a, b))
                                      .epsilon(1e-12));
}

TEST_CASE("no stored weight falls inside the threshold gap") {
  Rng rng(31337);
  for (int iter = 0; iter < 20; ++iter) {
    std::vector<std::vector<corpus::Token>> docs;
    for (std::size_t d = 0; d < 1 + rng.below(3); ++d)
      docs.push_back(helpers::random_stream(rng, 20 + rng.below(150), 10));
    auto vocab = build_vocabulary(docs, 10);
    if (vocab.size() < 2) continue;
    auto counts = count_cooccurrences(docs, vocab, 1 + rng.below(5));
    auto matrix = build_relevance(counts, 2.0);
    for (const auto& cell : matrix.cells()) CHECK(cell.weight >= 2.0);
    for (int q = 0; q < 200; ++q) {
      auto a = static_cast<std::uint32_t>(rng.below(vocab.size()));
      auto b = static_cast<std::uint32_t>(rng.below(vocab.size()));
      double w = matrix.relevance(a, b);
      CHECK((w == 0.0 || w >= 2.0));
      CHECK(w == matrix.relevance(b, a));
    }
  }
}

TEST_CASE("binary codec round-trips byte-exactly") {
  Rng rng(5150);
  std::vector<std::vector<corpus::Token>> docs;
  for (int d = 0; d < 3; ++d)
    docs.push_back(helpers::random_stream(rng, 120, 10));
  auto vocab = build_vocabulary(docs, 10);
  auto counts = count_cooccurrences(docs, vocab, 2);
  counts.stopword_hash = 0xabcdef;
  auto matrix = build_relevance(counts, 1.5);

  auto bytes = matrix.to_binary();
  auto back = RelevanceMatrix::from_binary(bytes);
  CHECK(back.to_binary() == bytes);
  CHECK(back.meta().vocab_hash == matrix.meta().vocab_hash);
  CHECK(back.meta().stopword_hash == 0xabcdef);
  CHECK(back.meta().total_positions == matrix.meta().total_positions);
  CHECK(back.cell_count() == matrix.cell_count());

  auto tsv = matrix.to_tsv();
  auto from_tsv = RelevanceMatrix::from_tsv(tsv, "test");
  CHECK(from_tsv.to_binary() == bytes);

  CHECK_THROWS_AS(RelevanceMatrix::from_binary("RSMXgarbage"), DataError);
  CHECK_THROWS_AS(RelevanceMatrix::from_tsv("0\t1\t2.5\n", "test"),
                  DataError);
}

TEST_CASE("matrix rejects cells below its threshold") {
  MatrixMeta meta;
  meta.vocab_size = 4;
  meta.threshold = 2.0;
  CHECK_THROWS_AS(RelevanceMatrix(meta, {{0, 1, 1.5}}), DataError);
  CHECK_THROWS_AS(RelevanceMatrix(meta, {{1, 0, 2.5}}), DataError);
  CHECK_THROWS_AS(RelevanceMatrix(meta, {{0, 9, 2.5}}), DataError);
  CHECK_NOTHROW(RelevanceMatrix(meta, {{0, 1, 2.0}}));
}
