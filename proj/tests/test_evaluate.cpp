#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "relsense/evaluate.hpp"
#include "support/helpers.hpp"

using namespace relsense;
using namespace relsense::eval;
using cascade::Answer;
using helpers::make_instance;
using lex::Pos;

namespace {

GoldStandard gold_of(std::initializer_list<
                     std::pair<std::string, std::set<std::string>>> items) {
  GoldStandard g;
  for (const auto& [id, keys] : items) g.add(id, keys);
  return g;
}

}  // namespace

TEST_CASE("report arithmetic reproduces the all-words totals") {
  // 2446 attempted, per-item score sum 1406.00, 2471 instances
  auto row = make_row("total", 2446, 1406.00, 2471);
  CHECK(format_percent(row.precision) == "57.5%");
  CHECK(format_percent(row.recall) == "56.9%");
}

TEST_CASE("full coverage makes precision equal recall") {
  // lexical-sample shape: attempted == total
  auto row = make_row("total", 4324, 1736.17, 4324);
  CHECK(format_percent(row.precision) == "40.2%");
  CHECK(format_percent(row.recall) == "40.2%");
  auto sup = make_row("total", 4324, 2154.50, 4324);
  CHECK(format_percent(sup.precision) == "49.8%");
  CHECK(format_percent(sup.recall) == "49.8%");
}

TEST_CASE("score_answers groups by heuristic and partitions the totals") {
  auto gold = gold_of({{"i1", {"k%1"}},
                       {"i2", {"k%2", "k%3"}},
                       {"i3", {"k%1"}},
                       {"i4", {"k%4"}},
                       {"i5", {"k%9"}}});
  std::vector<Answer> answers{{"i1", "k%1", "monosemous"},
                              {"i2", "k%3", "relevance_filter"},
                              {"i3", "k%2", "first_sense"},
                              {"i4", "k%4", "first_sense"}};
  auto report = score_answers(answers, gold, 5);
  REQUIRE(report.rows.size() == 3);
  CHECK(report.rows[0].label == "monosemous");
  CHECK(report.rows[0].attempted == 1);
  CHECK(report.rows[0].score == 1.0);
  CHECK(report.rows[1].label == "relevance_filter");
  CHECK(report.rows[1].score == 1.0);
  CHECK(report.rows[2].label == "first_sense");
  CHECK(report.rows[2].attempted == 2);
  CHECK(report.rows[2].score == 1.0);

  std::uint64_t att = 0;
  double score = 0;
  for (const auto& r : report.rows) {
    att += r.attempted;
    score += r.score;
  }
  CHECK(att == report.total.attempted);
  CHECK(score == report.total.score);
  CHECK(report.total.attempted == 4);
  CHECK(report.total.score == 3.0);
  CHECK(report.total.precision == Catch::Approx(0.75));
  CHECK(report.total.recall == Catch::Approx(0.6));
  // precision >= recall with equality only at full coverage
  CHECK(report.total.precision >= report.total.recall);
}

TEST_CASE("perfect full-coverage run scores 100/100") {
  auto gold = gold_of({{"i1", {"k%1"}}, {"i2", {"k%2"}}});
  std::vector<Answer> answers{{"i1", "k%1", "first_sense"},
                              {"i2", "k%2", "first_sense"}};
  auto report = score_answers(answers, gold, 2);
  CHECK(format_percent(report.total.precision) == "100.0%");
  CHECK(format_percent(report.total.recall) == "100.0%");
}

TEST_CASE("zero attempted leaves precision undefined") {
  auto gold = gold_of({{"i1", {"k%1"}}});
  auto report = score_answers({}, gold, 1);
  CHECK(report.total.attempted == 0);
  CHECK(std::isnan(report.total.precision));
  CHECK(report.total.recall == 0.0);
  CHECK(format_percent(report.total.precision) == "—");
  auto table = format_report(report);
  CHECK_THAT(table, Catch::Matchers::ContainsSubstring("—"));
}

TEST_CASE("score_answers rejects unknown ids and duplicates") {
  auto gold = gold_of({{"i1", {"k%1"}}});
  CHECK_THROWS_WITH(
      score_answers({{"nope", "k%1", "h"}}, gold, 1),
      Catch::Matchers::ContainsSubstring("nope"));
  CHECK_THROWS_AS(
      score_answers({{"i1", "k%1", "h"}, {"i1", "k%1", "h"}}, gold, 2),
      DataError);
  CHECK_THROWS_AS(score_answers({{"i1", "k%1", "h"}}, gold, 0), DataError);
}

TEST_CASE("report consistency: stored fractions recompute exactly") {
  auto gold = gold_of({{"a", {"x"}}, {"b", {"y"}}, {"c", {"z"}}});
  std::vector<Answer> answers{{"a", "x", "h1"}, {"b", "q", "h2"}};
  auto report = score_answers(answers, gold, 3);
  for (const auto& r : report.rows) {
    CHECK(r.precision == r.score / static_cast<double>(r.attempted));
    CHECK(r.recall == r.score / 3.0);
  }
}

TEST_CASE("gold standard files parse and reject duplicates") {
  auto g = GoldStandard::parse("i1 k%1 k%2\ni2 k%3\n# comment\n", "t");
  CHECK(g.size() == 2);
  REQUIRE(g.find("i1"));
  CHECK(g.find("i1")->count("k%2") == 1);
  CHECK(g.find("zz") == nullptr);
  CHECK_THROWS_AS(GoldStandard::parse("i1 k\ni1 k\n", "t"), DataError);
  CHECK_THROWS_AS(GoldStandard::parse("lonely\n", "t"), DataError);
}

TEST_CASE("random baseline is deterministic and respects the inventory") {
  auto lx = lex::Lexicon::parse(R"({"entries": [
    {"lemma": "one", "pos": "NOUN", "senses": [
      {"key": "one%1", "rank": 1, "gloss": ["g"]}]},
    {"lemma": "two", "pos": "NOUN", "senses": [
      {"key": "two%1", "rank": 1, "gloss": ["g"]},
      {"key": "two%2", "rank": 2, "gloss": ["h"]}]}
  ]})");
  std::vector<cascade::DisambiguationInstance> instances;
  for (int i = 0; i < 40; ++i)
    instances.push_back(make_instance(i % 2 ? "one" : "two", Pos::Noun, "x",
                                      0, "i" + std::to_string(i)));
  instances.push_back(make_instance("zzz", Pos::Noun, "x", 0, "unk"));

  auto a1 = baseline_random(instances, lx, 42);
  auto a2 = baseline_random(instances, lx, 42);
  REQUIRE(a1.size() == a2.size());
  CHECK(a1.size() == 40);  // unknown lemma omitted
  for (std::size_t i = 0; i < a1.size(); ++i) {
    CHECK(a1[i].sense_key == a2[i].sense_key);
    if (instances[i].lemma == "one")
      CHECK(a1[i].sense_key == "one%1");  // monosemous: only choice
  }
}

TEST_CASE("random baseline precision approaches one half on 2-sense lemmas") {
  auto lx = lex::Lexicon::parse(R"({"entries": [
    {"lemma": "two", "pos": "NOUN", "senses": [
      {"key": "two%1", "rank": 1, "gloss": ["g"]},
      {"key": "two%2", "rank": 2, "gloss": ["h"]}]}
  ]})");
  GoldStandard gold;
  std::vector<cascade::DisambiguationInstance> instances;
  const int n = 4000;
  for (int i = 0; i < n; ++i) {
    auto id = "i" + std::to_string(i);
    instances.push_back(make_instance("two", Pos::Noun, "x", 0, id));
    gold.add(id, {i % 2 ? "two%1" : "two%2"});
  }
  auto answers = baseline_random(instances, lx, 7);
  auto report = score_answers(answers, gold, n);
  // binomial: sd ~ 0.5/sqrt(n) ~ 0.008; 4 sigma band
  CHECK(report.total.precision > 0.47);
  CHECK(report.total.precision < 0.53);
}

TEST_CASE("first-sense baseline answers rank one for known lemmas") {
  auto lx = lex::Lexicon::parse(R"({"entries": [
    {"lemma": "two", "pos": "NOUN", "senses": [
      {"key": "two%1", "rank": 1, "gloss": ["g"]},
      {"key": "two%2", "rank": 2, "gloss": ["h"]}]}
  ]})");
  std::vector<cascade::DisambiguationInstance> instances{
      make_instance("two", Pos::Noun, "x", 0, "a"),
      make_instance("nope", Pos::Noun, "x", 0, "b")};
  auto answers = baseline_first_sense(instances, lx);
  REQUIRE(answers.size() == 1);
  CHECK(answers[0].sense_key == "two%1");

  // identical to a [first_sense] cascade
  cascade::CascadeEngine engine(lx, nullptr, nullptr);
  auto spec = cascade::parse_cascade("first_sense\n");
  std::vector<cascade::Answer> via_cascade;
  for (const auto& inst : instances) {
    auto res = engine.run(spec, inst);
    if (res.final.answered)
      via_cascade.push_back({inst.id, res.final.sense_key, "first_sense"});
  }
  REQUIRE(via_cascade.size() == answers.size());
  CHECK(via_cascade[0].sense_key == answers[0].sense_key);
}

TEST_CASE("json report carries rows and nulls undefined precision") {
  auto gold = gold_of({{"i1", {"k"}}});
  auto report = score_answers({}, gold, 1);
  auto j = report_to_json(report);
  CHECK(j["total"]["precision"].is_null());
  CHECK(j["total"]["attempted"] == 0);
  CHECK(j["rows"].is_array());
}
