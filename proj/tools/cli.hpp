#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "anchorfree/cooccur.hpp"
#include "anchorfree/topic_model.hpp"

namespace anchorfree::cli {

enum class Command { Factorize, Synth, Eval, Bench };

// Exit codes per failure class.
inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitConfig = 4;

struct RunConfig {
  Command command = Command::Factorize;
  Method method = Method::AnchorFree;
  Index f = 0;
  std::vector<Index> f_list;  // bench
  Estimator estimator = Estimator::ScaledGram;

  std::string input;
  std::string vocab;
  std::string labels;
  std::string stoplist;
  std::string model;  // eval: directory written by factorize
  std::string truth;  // eval: synthetic bundle for recovery error
  std::string out = ".";

  bool tfidf = false;
  bool ncw = false;

  std::uint64_t seed = 0;
  double tol = 1e-6;
  int max_sweeps = 50;
  int retries = 3;
  bool strict_rank = false;
  Index top_n = 20;

  int trials = 10;
  double sparsity = 0.5;
  Index n_words = 1000;  // synth / bench
  bool separable = false;
};

/// Parses argv. Returns false when only help was requested (printed to out).
/// Throws ConfigError on invalid arguments.
bool parse_args(int argc, const char* const* argv, RunConfig& config, std::ostream& out);

/// Everything that influences artifact contents, one key=value per line.
/// The output directory is excluded.
std::string canonical_config(const RunConfig& config);

/// Executes a parsed configuration. Throws on failure.
void execute(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args + execute, mapping failures to exit codes:
/// 2 I/O, 3 numerical, 4 configuration.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace anchorfree::cli
