// relsense: relevance-matrix word sense disambiguation toolkit.
//
// Subcommands cover the full workflow: normalize a raw text corpus, build
// the mutual-information relevance matrix, validate a lexicon, run a
// heuristic cascade over disambiguation instances, score answers against a
// gold standard, and synthesize pseudoword benchmarks.

#include <atomic>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "relsense/cascade.hpp"
#include "relsense/config.hpp"
#include "relsense/corpus.hpp"
#include "relsense/evaluate.hpp"
#include "relsense/lexicon.hpp"
#include "relsense/pseudoword.hpp"
#include "relsense/relmatrix.hpp"
#include "relsense/util.hpp"

namespace fs = std::filesystem;
using namespace relsense;
using config::RunConfig;

namespace {

// ---------------------------------------------------------------------------
// plumbing
// ---------------------------------------------------------------------------

template <typename F>
void parallel_for(std::size_t n, std::int64_t jobs, F&& body) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), n);
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> threads;
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(err_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::unique_ptr<corpus::Lemmatizer> make_lemmatizer(const RunConfig& cfg) {
  if (cfg.lemmatizer == "identity")
    return std::make_unique<corpus::IdentityLemmatizer>();
  if (cfg.lemmatizer == "suffix")
    return std::make_unique<corpus::SuffixRuleLemmatizer>(
        corpus::SuffixRuleLemmatizer::from_files(cfg.lemma_exceptions,
                                                 cfg.lemma_rules));
  throw DataError("unknown lemmatizer `" + cfg.lemmatizer +
                  "` (expected suffix|identity)");
}

/// Regular files under `root`, sorted by relative path.
std::vector<std::pair<std::string, fs::path>> list_corpus_files(
    const fs::path& root) {
  if (!fs::is_directory(root))
    throw DataError("corpus directory not found: " + root.string());
  std::vector<std::pair<std::string, fs::path>> files;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (!entry.is_regular_file()) continue;
    files.emplace_back(entry.path().lexically_relative(root).generic_string(),
                       entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

struct NormalizedCorpus {
  std::vector<pseudo::TokenStream> streams;  // (doc id, tokens), sorted by id
  nlohmann::json diagnostics;
  std::uint64_t stopword_hash = 0;
};

NormalizedCorpus read_normalized(const fs::path& dir) {
  NormalizedCorpus nc;
  fs::path diag_path = dir / "diagnostics.json";
  if (!fs::exists(diag_path))
    throw DataError("not a normalized corpus (missing " + diag_path.string() +
                    "); run `relsense normalize` first");
  nc.diagnostics = nlohmann::json::parse(read_file(diag_path));
  if (nc.diagnostics.contains("stopword_hash"))
    nc.stopword_hash =
        parse_hash_hex(nc.diagnostics["stopword_hash"].get<std::string>());
  fs::path streams_dir = dir / "streams";
  if (!fs::is_directory(streams_dir))
    throw DataError("missing token stream directory: " + streams_dir.string());
  for (auto& [rel, path] : list_corpus_files(streams_dir)) {
    if (!ends_with(rel, ".tok")) continue;
    std::string doc_id = rel.substr(0, rel.size() - 4);
    nc.streams.emplace_back(doc_id,
                            corpus::parse_token_stream(read_file(path), rel));
  }
  return nc;
}

relmat::RelevanceMatrix load_matrix(const fs::path& path) {
  std::string bytes = read_file(path);
  if (starts_with(bytes, "RSMX"))
    return relmat::RelevanceMatrix::from_binary(bytes);
  return relmat::RelevanceMatrix::from_tsv(bytes, path.string());
}

lex::Lexicon load_lexicon(const RunConfig& cfg,
                          const corpus::StopwordList& stopwords,
                          const corpus::Lemmatizer& lemmatizer) {
  lex::LexiconLoadOptions opts;
  opts.stopwords = &stopwords;
  opts.lemmatizer = &lemmatizer;
  if (!cfg.inflections.empty()) opts.inflections_tsv = read_file(cfg.inflections);
  return lex::Lexicon::load(cfg.lexicon, opts);
}

// ---------------------------------------------------------------------------
// subcommands
// ---------------------------------------------------------------------------

int cmd_normalize(const RunConfig& cfg) {
  auto stopwords = corpus::StopwordList::from_file(cfg.stopwords);
  auto lemmatizer = make_lemmatizer(cfg);
  corpus::BoilerplateMarkers markers{cfg.start_marker, cfg.end_marker};
  auto files = list_corpus_files(cfg.corpus);

  corpus::NormalizeDiagnostics diag;
  std::mutex diag_mutex;
  fs::path out_dir(cfg.out);
  parallel_for(files.size(), cfg.jobs, [&](std::size_t i) {
    const auto& [rel, path] = files[i];
    corpus::RawDocument doc{rel, read_file(path)};
    doc = corpus::strip_boilerplate(doc, markers);
    corpus::NormalizeDiagnostics local;
    local.documents_total = 1;
    if (!corpus::is_english(doc, stopwords, cfg.english_threshold)) {
      local.documents_dropped_language = 1;
    } else {
      auto tokens =
          corpus::tokenize_and_normalize(doc, stopwords, *lemmatizer, &local);
      local.documents_kept = 1;
      write_file(out_dir / "streams" / (rel + ".tok"),
                 corpus::format_token_stream(tokens));
    }
    std::lock_guard lock(diag_mutex);
    diag.merge(local);
  });

  nlohmann::json j;
  j["tool"] = kToolVersion;
  j["config_hash"] = hash_hex(config_hash(cfg));
  j["stopword_hash"] = hash_hex(stopwords.hash());
  j["lemmatizer"] = lemmatizer->name();
  j["start_marker"] = cfg.start_marker;
  j["end_marker"] = cfg.end_marker;
  j["english_threshold"] = cfg.english_threshold;
  j["documents_total"] = diag.documents_total;
  j["documents_kept"] = diag.documents_kept;
  j["documents_dropped_language"] = diag.documents_dropped_language;
  j["raw_tokens"] = diag.raw_tokens;
  j["tokens_emitted"] = diag.tokens_emitted;
  j["invalid_bytes_skipped"] = diag.invalid_bytes_skipped;
  write_file(out_dir / "diagnostics.json", j.dump(2) + "\n");

  std::cout << "normalized " << diag.documents_kept << "/"
            << diag.documents_total << " documents, " << diag.tokens_emitted
            << " tokens\n";
  return 0;
}

int cmd_build_matrix(const RunConfig& cfg, const std::string& format) {
  auto nc = read_normalized(cfg.corpus);

  std::unordered_map<std::string, std::uint64_t> freq;
  for (const auto& [id, tokens] : nc.streams)
    for (const auto& t : tokens) ++freq[t.lemma];
  auto vocab = relmat::Vocabulary::from_counts(
      freq, static_cast<std::size_t>(cfg.vocab_size));

  std::size_t shards =
      cfg.jobs <= 1
          ? 1
          : std::min<std::size_t>(static_cast<std::size_t>(cfg.jobs),
                                  std::max<std::size_t>(nc.streams.size(), 1));
  std::vector<relmat::CoocCounts> parts(shards);
  for (auto& part : parts) {
    part.radius = static_cast<std::uint32_t>(cfg.radius);
    part.vocab_hash = vocab.hash();
    part.stopword_hash = nc.stopword_hash;
    part.occ.resize(vocab.size(), 0);
  }
  parallel_for(shards, cfg.jobs, [&](std::size_t s) {
    for (std::size_t d = s; d < nc.streams.size(); d += shards)
      relmat::count_document(parts[s], vocab, nc.streams[d].second);
  });
  auto counts = relmat::merge_counts(parts);
  auto matrix = relmat::build_relevance(counts, cfg.threshold);

  fs::path vocab_path =
      cfg.vocab.empty() ? fs::path(cfg.out + ".vocab") : fs::path(cfg.vocab);
  write_file(vocab_path, vocab.format());
  if (format == "tsv") write_file(cfg.out, matrix.to_tsv());
  else write_file(cfg.out, matrix.to_binary());

  std::cout << "vocabulary " << vocab.size() << " lemmas; matrix "
            << matrix.cell_count() << " cells over "
            << counts.total_positions << " positions\n";
  return 0;
}

int cmd_lexicon_check(const RunConfig& cfg, const std::string& path) {
  lex::LexiconLoadOptions opts;
  corpus::StopwordList stopwords;
  std::unique_ptr<corpus::Lemmatizer> lemmatizer;
  if (!cfg.stopwords.empty()) {
    stopwords = corpus::StopwordList::from_file(cfg.stopwords);
    opts.stopwords = &stopwords;
  }
  if (!cfg.lemmatizer.empty()) {
    lemmatizer = make_lemmatizer(cfg);
    opts.lemmatizer = lemmatizer.get();
  }
  if (!cfg.inflections.empty())
    opts.inflections_tsv = read_file(cfg.inflections);

  std::vector<std::string> violations;
  lex::Lexicon::parse(read_file(path), opts, &violations);
  for (const auto& v : violations) std::cout << v << '\n';
  if (violations.empty()) {
    std::cout << "ok\n";
    return 0;
  }
  std::cout << violations.size() << " violation(s)\n";
  return 2;
}

int cmd_disambiguate(const RunConfig& cfg, bool trace) {
  auto stopwords = corpus::StopwordList::from_file(cfg.stopwords);
  auto lemmatizer = make_lemmatizer(cfg);
  auto lexicon = load_lexicon(cfg, stopwords, *lemmatizer);
  auto spec = cascade::parse_cascade(read_file(cfg.cascade_file));
  auto instances = cascade::parse_instances(read_file(cfg.instances),
                                            cfg.instances);

  bool needs_matrix = false;
  for (const auto& step : spec.steps)
    if (step.name == "relevance_filter" || step.name == "enriched" ||
        step.name == "mixed")
      needs_matrix = true;

  std::optional<relmat::RelevanceMatrix> matrix;
  std::optional<relmat::Vocabulary> vocab;
  if (needs_matrix) {
    if (cfg.matrix.empty() || cfg.vocab.empty())
      throw DataError("this cascade needs --matrix and --vocab");
    matrix = load_matrix(cfg.matrix);
    vocab = relmat::Vocabulary::parse(read_file(cfg.vocab), cfg.vocab);
    if (vocab->hash() != matrix->meta().vocab_hash)
      throw DataError("vocabulary hash mismatch: matrix was built from " +
                      hash_hex(matrix->meta().vocab_hash) + ", " + cfg.vocab +
                      " has " + hash_hex(vocab->hash()));
    if (matrix->meta().stopword_hash != 0 &&
        matrix->meta().stopword_hash != stopwords.hash())
      throw DataError(
          "stopword hash mismatch: matrix was built with " +
          hash_hex(matrix->meta().stopword_hash) + ", current list is " +
          hash_hex(stopwords.hash()));
  }

  cascade::CascadeEngine engine(lexicon, matrix ? &*matrix : nullptr,
                                vocab ? &*vocab : nullptr,
                                cfg.cascade_defaults());
  std::vector<cascade::CascadeResult> results(instances.size());
  parallel_for(instances.size(), cfg.jobs, [&](std::size_t i) {
    results[i] = engine.run(spec, instances[i]);
  });

  std::vector<cascade::Answer> answers;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const auto& final = results[i].final;
    if (final.answered)
      answers.push_back(cascade::Answer{instances[i].id, final.sense_key,
                                        final.heuristic});
    if (trace) {
      for (const auto& step : results[i].trace) {
        std::cout << instances[i].id << '\t' << step.heuristic << '\t'
                  << (step.verdict.answered ? "answer" : "abstain") << '\t'
                  << (step.verdict.answered ? step.verdict.sense_key : "-")
                  << '\t' << format_double(step.verdict.score);
        if (!step.verdict.note.empty()) std::cout << '\t' << step.verdict.note;
        std::cout << '\n';
      }
    }
  }
  write_file(cfg.out, cascade::format_answers(answers));

  nlohmann::json meta;
  meta["tool"] = kToolVersion;
  meta["config_hash"] = hash_hex(config_hash(cfg));
  meta["cascade"] = cascade::print_cascade(spec);
  meta["instances"] = instances.size();
  meta["answered"] = answers.size();
  if (matrix) meta["matrix_hash"] = hash_hex(matrix->content_hash());
  write_file(cfg.out + ".meta.json", meta.dump(2) + "\n");

  std::cerr << "answered " << answers.size() << "/" << instances.size()
            << " instances\n";
  return 0;
}

int cmd_evaluate_impl(const std::string& answers_path,
                      const std::string& gold_path, std::int64_t total,
                      const std::string& out_json) {
  auto answers = cascade::parse_answers(read_file(answers_path), answers_path);
  auto gold = eval::GoldStandard::parse(read_file(gold_path), gold_path);
  std::uint64_t total_instances =
      total >= 0 ? static_cast<std::uint64_t>(total) : gold.size();
  auto report = eval::score_answers(answers, gold, total_instances);
  std::cout << eval::format_report(report);
  if (!out_json.empty()) {
    auto j = eval::report_to_json(report);
    j["tool"] = kToolVersion;
    write_file(out_json, j.dump(2) + "\n");
  }
  return 0;
}

int cmd_pseudoword(const RunConfig& cfg, const std::string& word_a,
                   const std::string& word_b) {
  auto nc = read_normalized(cfg.corpus);
  pseudo::PseudowordParams params;
  params.word_a = word_a;
  params.word_b = word_b;
  params.holdout = cfg.holdout;
  params.seed = cfg.seed;
  params.cooc_radius = static_cast<std::uint32_t>(cfg.radius);
  params.gloss_size = static_cast<std::size_t>(cfg.gloss_size);
  params.min_occurrences = static_cast<std::size_t>(cfg.min_occurrences);
  params.context_radius = static_cast<std::size_t>(cfg.context_radius);
  auto task = pseudo::make_pseudoword_task(std::move(nc.streams), params);

  fs::path out_dir(cfg.out);
  for (const auto& [id, tokens] : task.corpus)
    write_file(out_dir / "corpus" / "streams" / (id + ".tok"),
               corpus::format_token_stream(tokens));
  write_file(out_dir / "corpus" / "diagnostics.json",
             nc.diagnostics.dump(2) + "\n");

  std::string jsonl;
  for (const auto& inst : task.instances)
    jsonl += cascade::instance_to_json(inst).dump() + "\n";
  write_file(out_dir / "instances.jsonl", jsonl);
  write_file(out_dir / "gold.txt", task.gold.format());
  write_file(out_dir / "lexicon.json", task.lexicon_json);

  nlohmann::json manifest;
  manifest["tool"] = kToolVersion;
  manifest["config_hash"] = hash_hex(config_hash(cfg));
  manifest["pseudo_lemma"] = task.pseudo_lemma;
  manifest["word_a"] = word_a;
  manifest["word_b"] = word_b;
  manifest["holdout"] = cfg.holdout;
  manifest["seed"] = cfg.seed;
  manifest["cooc_radius"] = cfg.radius;
  manifest["gloss_size"] = cfg.gloss_size;
  manifest["min_occurrences"] = cfg.min_occurrences;
  manifest["context_radius"] = cfg.context_radius;
  manifest["train_documents"] = task.train_ids;
  manifest["holdout_documents"] = task.holdout_ids;
  manifest["instances"] = task.instances.size();
  write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");

  std::cout << "pseudoword " << task.pseudo_lemma << ": "
            << task.instances.size() << " instances, "
            << task.train_ids.size() << " train / "
            << task.holdout_ids.size() << " holdout documents\n";
  return 0;
}

// ---------------------------------------------------------------------------
// flag wiring: defaults < config file < explicit flags
// ---------------------------------------------------------------------------

struct FlagSet {
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> bound;
  std::string config_path;

  RunConfig resolve() const {
    RunConfig cfg;
    if (!config_path.empty())
      config::apply_config_file(cfg, read_file(config_path), config_path);
    for (const auto& [opt, apply] : bound)
      if (opt->count() > 0) apply(cfg);
    return cfg;
  }
};

class FlagBinder {
public:
  FlagBinder(CLI::App* sub, std::shared_ptr<FlagSet> flags)
      : sub_(sub), flags_(std::move(flags)) {
    sub_->add_option("--config", flags_->config_path,
                     "flat key=value config file; flags win");
  }

  void str(const std::string& name, std::string RunConfig::* field,
           const std::string& desc, bool required = false) {
    auto holder = std::make_shared<std::string>();
    auto* opt = sub_->add_option(name, *holder, desc);
    if (required) opt->required();
    flags_->bound.emplace_back(
        opt, [holder, field](RunConfig& c) { c.*field = *holder; });
  }

  void integer(const std::string& name, std::int64_t RunConfig::* field,
               const std::string& desc) {
    auto holder = std::make_shared<std::int64_t>();
    auto* opt = sub_->add_option(name, *holder, desc);
    flags_->bound.emplace_back(
        opt, [holder, field](RunConfig& c) { c.*field = *holder; });
  }

  void real(const std::string& name, double RunConfig::* field,
            const std::string& desc) {
    auto holder = std::make_shared<double>();
    auto* opt = sub_->add_option(name, *holder, desc);
    flags_->bound.emplace_back(
        opt, [holder, field](RunConfig& c) { c.*field = *holder; });
  }

  void seed() {
    auto holder = std::make_shared<std::uint64_t>();
    auto* opt = sub_->add_option("--seed", *holder, "deterministic seed");
    flags_->bound.emplace_back(
        opt, [holder](RunConfig& c) { c.seed = *holder; });
  }

  void boolean(const std::string& name, bool RunConfig::* field,
               const std::string& desc) {
    auto holder = std::make_shared<std::string>();
    auto* opt = sub_->add_option(name, *holder, desc + " (on|off)");
    flags_->bound.emplace_back(opt, [holder, field, name](RunConfig& c) {
      c.*field = config::detail::parse_bool(*holder, name);
    });
  }

  void pipeline_flags() {
    str("--stopwords", &RunConfig::stopwords, "stopword list file");
    str("--lemmatizer", &RunConfig::lemmatizer, "suffix|identity");
    str("--lemma-rules", &RunConfig::lemma_rules, "suffix rule table");
    str("--lemma-exceptions", &RunConfig::lemma_exceptions,
        "lemma exception table");
  }

private:
  CLI::App* sub_;
  std::shared_ptr<FlagSet> flags_;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"relevance-matrix word sense disambiguation toolkit"};
  app.require_subcommand(1);
  int exit_code = 0;

  // normalize
  {
    auto flags = std::make_shared<FlagSet>();
    auto* sub = app.add_subcommand(
        "normalize", "tokenize, lemmatize and filter a raw text corpus");
    FlagBinder bind(sub, flags);
    bind.str("--corpus", &RunConfig::corpus, "raw text directory", true);
    bind.str("--out", &RunConfig::out, "output directory", true);
    bind.pipeline_flags();
    bind.str("--start-marker", &RunConfig::start_marker,
             "line marking the end of header boilerplate");
    bind.str("--end-marker", &RunConfig::end_marker,
             "line marking the start of footer boilerplate");
    bind.real("--english-threshold", &RunConfig::english_threshold,
              "stopword ratio below which a document is dropped");
    bind.integer("--jobs", &RunConfig::jobs, "worker threads");
    sub->callback([flags, &exit_code] { exit_code = cmd_normalize(flags->resolve()); });
  }

  // build-matrix
  {
    auto flags = std::make_shared<FlagSet>();
    auto format = std::make_shared<std::string>("binary");
    auto* sub = app.add_subcommand(
        "build-matrix", "build vocabulary and relevance matrix from a "
                        "normalized corpus");
    FlagBinder bind(sub, flags);
    bind.str("--corpus", &RunConfig::corpus, "normalized corpus directory",
             true);
    bind.str("--out", &RunConfig::out, "matrix output path", true);
    bind.str("--vocab", &RunConfig::vocab,
             "vocabulary output path (default <out>.vocab)");
    bind.integer("--vocab-size", &RunConfig::vocab_size,
                 "K most frequent lemmas");
    bind.integer("--radius", &RunConfig::radius, "window radius in tokens");
    bind.real("--threshold", &RunConfig::threshold,
              "mutual information threshold");
    bind.integer("--jobs", &RunConfig::jobs, "worker threads");
    sub->add_option("--format", *format, "binary|tsv")
        ->check(CLI::IsMember({"binary", "tsv"}));
    sub->callback([flags, format, &exit_code] {
      exit_code = cmd_build_matrix(flags->resolve(), *format);
    });
  }

  // lexicon check
  {
    auto flags = std::make_shared<FlagSet>();
    auto path = std::make_shared<std::string>();
    auto* sub = app.add_subcommand("lexicon", "lexicon utilities");
    sub->require_subcommand(1);
    auto* check = sub->add_subcommand("check",
                                      "validate a lexicon file and print "
                                      "invariant violations");
    check->add_option("path", *path, "lexicon json file")->required();
    FlagBinder bind(check, flags);
    bind.pipeline_flags();
    bind.str("--inflections", &RunConfig::inflections,
             "inflection table tsv");
    check->callback([flags, path, &exit_code] {
      exit_code = cmd_lexicon_check(flags->resolve(), *path);
    });
  }

  // disambiguate
  {
    auto flags = std::make_shared<FlagSet>();
    auto trace = std::make_shared<bool>(false);
    auto* sub = app.add_subcommand(
        "disambiguate", "run a heuristic cascade over instances");
    FlagBinder bind(sub, flags);
    bind.str("--instances", &RunConfig::instances, "instances jsonl", true);
    bind.str("--lexicon", &RunConfig::lexicon, "lexicon json", true);
    bind.str("--cascade", &RunConfig::cascade_file, "cascade program", true);
    bind.str("--out", &RunConfig::out, "answer output path", true);
    bind.str("--matrix", &RunConfig::matrix, "relevance matrix path");
    bind.str("--vocab", &RunConfig::vocab, "vocabulary path");
    bind.pipeline_flags();
    bind.str("--inflections", &RunConfig::inflections, "inflection table tsv");
    bind.real("--cutoff", &RunConfig::cutoff, "sense probability cutoff");
    bind.integer("--max-senses", &RunConfig::max_senses,
                 "senses considered per lemma");
    bind.integer("--expand-depth", &RunConfig::expand_depth,
                 "hyponym expansion depth");
    bind.integer("--radius-noun", &RunConfig::radius_noun, "noun context radius");
    bind.integer("--radius-verb", &RunConfig::radius_verb, "verb context radius");
    bind.integer("--radius-adj", &RunConfig::radius_adj,
                 "adjective context radius");
    bind.integer("--radius-adv", &RunConfig::radius_adv, "adverb context radius");
    bind.boolean("--pos-compat", &RunConfig::pos_compat,
                 "require POS-compatible context words");
    bind.integer("--jobs", &RunConfig::jobs, "worker threads");
    sub->add_flag("--trace", *trace, "print per-instance cascade traces");
    sub->callback([flags, trace, &exit_code] {
      exit_code = cmd_disambiguate(flags->resolve(), *trace);
    });
  }

  // evaluate
  {
    auto answers = std::make_shared<std::string>();
    auto gold = std::make_shared<std::string>();
    auto out_json = std::make_shared<std::string>();
    auto total = std::make_shared<std::int64_t>(-1);
    auto* sub = app.add_subcommand(
        "evaluate", "score answers against a gold standard");
    sub->add_option("--answers", *answers, "answer file")->required();
    sub->add_option("--gold", *gold, "gold standard file")->required();
    sub->add_option("--total", *total,
                    "total instance count (default: gold size)");
    sub->add_option("--out", *out_json, "json report output path");
    sub->callback([answers, gold, total, out_json, &exit_code] {
      exit_code = cmd_evaluate_impl(*answers, *gold, *total, *out_json);
    });
  }

  // pseudoword
  {
    auto flags = std::make_shared<FlagSet>();
    auto word_a = std::make_shared<std::string>();
    auto word_b = std::make_shared<std::string>();
    auto* sub = app.add_subcommand(
        "pseudoword",
        "synthesize a two-sense benchmark by conflating two words");
    sub->add_option("word_a", *word_a, "first source word")->required();
    sub->add_option("word_b", *word_b, "second source word")->required();
    FlagBinder bind(sub, flags);
    bind.str("--corpus", &RunConfig::corpus, "normalized corpus directory",
             true);
    bind.str("--out", &RunConfig::out, "output directory", true);
    bind.real("--holdout", &RunConfig::holdout,
              "fraction of documents held out");
    bind.seed();
    bind.integer("--radius", &RunConfig::radius,
                 "gloss extraction window radius");
    bind.integer("--gloss-size", &RunConfig::gloss_size,
                 "top cooccurring lemmas per sense");
    bind.integer("--min-occ", &RunConfig::min_occurrences,
                 "minimum source word occurrences");
    bind.integer("--context-radius", &RunConfig::context_radius,
                 "instance context tokens per side");
    sub->callback([flags, word_a, word_b, &exit_code] {
      exit_code = cmd_pseudoword(flags->resolve(), *word_a, *word_b);
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return exit_code;
}
