// Shared test fixtures: token stream builders, random generators, temp dirs,
// and a CLI runner.
#pragma once

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "relsense/cascade.hpp"
#include "relsense/corpus.hpp"
#include "relsense/relmatrix.hpp"
#include "relsense/util.hpp"

namespace helpers {

namespace fs = std::filesystem;
using relsense::corpus::Token;
using relsense::corpus::TokenLabel;

/// Tokens from space-separated lemmas; positions assigned in order.
inline std::vector<Token> stream(const std::string& lemmas) {
  std::vector<Token> out;
  for (const auto& lemma : relsense::split_ws(lemmas)) {
    Token t;
    t.lemma = lemma;
    t.surface = lemma;
    t.label = TokenLabel::Word;
    t.position = static_cast<std::uint32_t>(out.size());
    out.push_back(std::move(t));
  }
  return out;
}

/// Random lemma stream over a vocabulary w0..w{vocab-1}.
inline std::vector<Token> random_stream(relsense::Rng& rng, std::size_t len,
                                        std::size_t vocab) {
  std::vector<Token> out;
  for (std::size_t i = 0; i < len; ++i) {
    Token t;
    t.lemma = "w" + std::to_string(rng.below(vocab));
    t.surface = t.lemma;
    t.position = static_cast<std::uint32_t>(i);
    out.push_back(std::move(t));
  }
  return out;
}

inline relsense::cascade::DisambiguationInstance make_instance(
    const std::string& lemma, relsense::lex::Pos pos,
    const std::string& context, std::size_t target_index,
    const std::string& id = "i1") {
  relsense::cascade::DisambiguationInstance inst;
  inst.id = id;
  inst.lemma = lemma;
  inst.pos = pos;
  inst.context = stream(context);
  inst.target_index = target_index;
  return inst;
}

class TempDir {
public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    auto base = fs::temp_directory_path();
    path_ = base / ("relsense-" + tag + "-" + std::to_string(::getpid()) +
                    "-" + std::to_string(counter.fetch_add(1)));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

private:
  fs::path path_;
};

#ifdef RELSENSE_BINARY_PATH
/// Runs the CLI binary; returns the exit code. stdout/stderr are appended
/// to the given files when provided.
inline int run_cli(const std::vector<std::string>& args,
                   const fs::path& stdout_file = {},
                   const fs::path& stderr_file = {}) {
  std::string cmd = std::string("'") + RELSENSE_BINARY_PATH + "'";
  for (const auto& a : args) cmd += " '" + a + "'";
  if (!stdout_file.empty()) cmd += " >> '" + stdout_file.string() + "'";
  else cmd += " > /dev/null";
  if (!stderr_file.empty()) cmd += " 2>> '" + stderr_file.string() + "'";
  else cmd += " 2> /dev/null";
  int status = std::system(cmd.c_str());
  if (status < 0) return -1;
  return WEXITSTATUS(status);
}
#endif

}  // namespace helpers
