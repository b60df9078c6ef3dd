#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "anchorfree/anchorfree.hpp"
#include "anchorfree/baselines.hpp"
#include "anchorfree/corpus.hpp"
#include "anchorfree/eval.hpp"
#include "anchorfree/matrix_io.hpp"
#include "anchorfree/parallel.hpp"
#include "anchorfree/report_io.hpp"
#include "anchorfree/rng.hpp"
#include "anchorfree/synth.hpp"

namespace anchorfree::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

const std::vector<Index> kBenchTopics = {5, 10, 15, 20, 25, 30};

std::string command_name(Command c) {
  switch (c) {
    case Command::Factorize: return "factorize";
    case Command::Synth: return "synth";
    case Command::Eval: return "eval";
    case Command::Bench: return "bench";
  }
  return "unknown";
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

json provenance(const RunConfig& config) {
  return json{{"config_hash", config_hash(canonical_config(config))}, {"timestamp", utc_timestamp()}};
}

void ensure_directory(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

void require_file(const std::string& path, const std::string& what) {
  if (path.empty()) throw ConfigError(what + " is required");
  if (!fs::exists(path)) throw IoError(what + " " + path + " does not exist");
}

std::vector<std::string> default_vocab(Index n) {
  std::vector<std::string> v;
  v.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) v.push_back("w" + std::to_string(i + 1));
  return v;
}

void flush_warnings(const Warnings& w, std::ostream& err) {
  for (const auto& m : w.messages) err << "warning: " << m << '\n';
}

// ---- input loading ---------------------------------------------------------

struct Corpus {
  TermDocMatrix counts;    // after stop-word removal
  TermDocMatrix weighted;  // counts with tf-idf / NCW applied as requested
};

Corpus load_corpus(const RunConfig& config, Warnings& warnings) {
  require_file(config.vocab, "--vocab (vocabulary for the term-document file)");
  Corpus c;
  c.counts = load_term_doc(config.input, config.vocab);
  if (!config.stoplist.empty()) {
    require_file(config.stoplist, "--stoplist");
    c.counts = remove_stopwords(c.counts, load_stoplist(config.stoplist), &warnings);
  }
  c.weighted = c.counts;
  if (config.tfidf) c.weighted = tfidf(c.weighted);
  if (config.ncw) c.weighted = ncw_weight(c.weighted, &warnings);
  return c;
}

struct Input {
  CooccurrenceMatrix p;
  std::vector<std::string> vocab;
  std::optional<Corpus> corpus;
  std::optional<SyntheticGroundTruth> truth;
  std::string kind;
};

bool is_bundle(const std::string& path) {
  return fs::is_directory(path) && fs::exists(fs::path(path) / "manifest.json");
}

Input load_input(const RunConfig& config, Warnings& warnings) {
  require_file(config.input, "--input");
  Input in;
  if (is_bundle(config.input)) {
    in.truth = read_synthetic_bundle(config.input);
    in.p = in.truth->p;
    in.kind = "synthetic bundle";
  } else if (fs::is_regular_file(config.input) && is_cooccurrence_file(config.input)) {
    in.p = read_cooccurrence(config.input);
    in.kind = "co-occurrence cache";
  } else if (fs::is_regular_file(config.input)) {
    in.corpus = load_corpus(config, warnings);
    if (config.estimator == Estimator::CountCooccur) {
      if (config.tfidf || config.ncw)
        throw ConfigError("the count estimator needs raw counts; drop --tfidf/--ncw");
      in.p = estimate_cooccurrence(in.corpus->counts, config.estimator);
    } else if (config.estimator == Estimator::ScaledGram) {
      in.p = estimate_cooccurrence(in.corpus->weighted, config.estimator);
    } else {
      throw ConfigError("estimator " + to_string(config.estimator) +
                        " only applies to synthetic inputs");
    }
    in.vocab = in.corpus->counts.vocab();
    in.kind = "term-document file";
  } else {
    throw IoError(config.input + " is neither a file nor a synthetic bundle directory");
  }
  if (in.vocab.empty()) {
    if (!config.vocab.empty() && !in.corpus) {
      require_file(config.vocab, "--vocab");
      in.vocab = load_tokens(config.vocab);
      if (static_cast<Index>(in.vocab.size()) != in.p.n_words())
        throw IoError("dimension mismatch: vocabulary has " + std::to_string(in.vocab.size()) +
                      " tokens, P has " + std::to_string(in.p.n_words()) + " rows");
    } else {
      in.vocab = default_vocab(in.p.n_words());
    }
  }
  return in;
}

// ---- factorize -------------------------------------------------------------

AnchorFreeOptions anchor_free_options(const RunConfig& config, std::uint64_t seed) {
  AnchorFreeOptions o;
  o.tol = config.tol;
  o.max_sweeps = config.max_sweeps;
  o.seed = seed;
  o.retries = config.retries;
  o.strict_rank = config.strict_rank;
  return o;
}

void run_factorize(const RunConfig& config, std::ostream& out, std::ostream& err) {
  ensure_directory(config.out);
  Warnings warnings;
  const Input in = load_input(config, warnings);
  if (config.f > in.p.n_words())
    throw ConfigError("-F " + std::to_string(config.f) + " exceeds the vocabulary size " +
                      std::to_string(in.p.n_words()));

  TopicModel model;
  std::optional<SolverReport> report;
  std::vector<Index> anchors;
  if (config.method == Method::AnchorFree) {
    AnchorFreeResult r = anchor_free_factorize(in.p, config.f,
                                               anchor_free_options(config, config.seed), &warnings);
    model = std::move(r.model);
    report = std::move(r.report);
  } else {
    SpaResult r = spa_factorize(in.p, config.f, {}, &warnings);
    model = std::move(r.model);
    anchors = r.anchors.indices;
  }

  const fs::path dir(config.out);
  json topics = topics_json(model, in.vocab, config.top_n, report ? &*report : nullptr);
  topics["provenance"] = provenance(config);
  write_text(dir / "topics.json", topics.dump(2) + "\n");

  io::write_dense((dir / "c.bin").string(), model.c);
  io::write_dense((dir / "e.bin").string(), model.e);
  std::string vocab_text;
  for (const auto& t : in.vocab) vocab_text += t + "\n";
  write_text(dir / "vocab.txt", vocab_text);

  json manifest;
  manifest["v"] = model.n_words();
  manifest["f"] = model.n_topics();
  manifest["method"] = to_string(model.method);
  manifest["input"] = in.kind;
  manifest["files"] = {{"c", "c.bin"}, {"e", "e.bin"}, {"vocab", "vocab.txt"}};
  if (!anchors.empty()) {
    std::vector<std::string> words;
    for (Index a : anchors) words.push_back(in.vocab[a]);
    manifest["anchors"] = words;
  }
  if (report) {
    manifest["solver"] = {{"sweeps", report->sweeps},
                          {"converged", report->converged},
                          {"lp_calls", report->lp_calls},
                          {"reinitializations", report->reinitializations},
                          {"sqrt_residual", report->sqrt_residual},
                          {"worst_negative", report->worst_negative},
                          {"gram_condition", report->gram_condition}};
  }
  manifest["provenance"] = {{"config_hash", config_hash(canonical_config(config))}};
  write_text(dir / "model.json", manifest.dump(2) + "\n");

  flush_warnings(warnings, err);
  out << "factorized " << in.kind << " (V=" << model.n_words() << ") into F=" << model.n_topics()
      << " topics with " << to_string(model.method);
  if (report)
    out << " in " << report->sweeps << " sweeps" << (report->converged ? "" : " (not converged)");
  out << "\nwrote " << (dir / "topics.json").string() << '\n';
}

// ---- synth -----------------------------------------------------------------

void run_synth(const RunConfig& config, std::ostream& out, std::ostream&) {
  const SyntheticGroundTruth truth =
      config.separable ? generate_separable(config.n_words, config.f, config.sparsity, config.seed)
                       : generate_synthetic(config.n_words, config.f, config.sparsity, config.seed);
  write_synthetic_bundle(truth, config.out, config_hash(canonical_config(config)));
  out << "wrote " << (config.separable ? "separable " : "") << "synthetic bundle V="
      << config.n_words << " F=" << config.f << " to " << config.out << '\n';
}

// ---- eval ------------------------------------------------------------------

struct StoredModel {
  TopicModel model;
  std::vector<std::string> vocab;
};

StoredModel read_model(const std::string& dir) {
  if (dir.empty()) throw ConfigError("--model is required");
  const fs::path root(dir);
  if (!fs::is_directory(root) || !fs::exists(root / "model.json"))
    throw IoError(dir + " is not a model directory (no model.json)");
  std::ifstream in(root / "model.json");
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(dir + "/model.json: " + e.what());
  }
  StoredModel s;
  s.model.c = io::read_dense((root / "c.bin").string());
  s.model.e = io::read_dense((root / "e.bin").string());
  s.model.method = method_from_string(manifest.value("method", std::string("anchorfree")));
  if (s.model.e.rows() != s.model.c.cols() || s.model.e.cols() != s.model.c.cols())
    throw IoError(dir + ": c.bin and e.bin disagree on the number of topics");
  if (fs::exists(root / "vocab.txt")) s.vocab = load_tokens((root / "vocab.txt").string());
  if (static_cast<Index>(s.vocab.size()) != s.model.n_words())
    s.vocab = default_vocab(s.model.n_words());
  return s;
}

void run_eval(const RunConfig& config, std::ostream& out, std::ostream& err) {
  ensure_directory(config.out);
  Warnings warnings;
  const StoredModel stored = read_model(config.model);
  const TopicModel& model = stored.model;
  std::vector<std::string> vocab = stored.vocab;

  EvalReport report;
  const auto top = top_word_indices(model.c, config.top_n);

  if (!config.input.empty()) {
    require_file(config.input, "--input");
    const Corpus corpus = load_corpus(config, warnings);
    if (corpus.counts.n_words() != model.n_words())
      throw ConfigError("corpus has " + std::to_string(corpus.counts.n_words()) +
                        " words after preprocessing but the model has " +
                        std::to_string(model.n_words()));
    vocab = corpus.counts.vocab();
    const DocumentIndex index(corpus.counts);
    for (const auto& words : top) report.coherence_per_topic.push_back(coherence(words, index));
    if (!config.labels.empty()) {
      require_file(config.labels, "--labels");
      const LabelSet labels = load_labels(config.labels);
      const DocumentWeights w = estimate_weights(corpus.weighted, model.c, &warnings);
      report.clust_acc = clustering_accuracy(w, labels, config.seed);
    }
  } else if (!config.labels.empty()) {
    throw ConfigError("--labels needs the corpus given with --input");
  }

  if (!config.truth.empty()) {
    if (!is_bundle(config.truth)) throw IoError(config.truth + " is not a synthetic bundle");
    const SyntheticGroundTruth truth = read_synthetic_bundle(config.truth);
    const RecoveryError r = recovery_error(model.c, model.e, truth.c_nat, truth.e_nat);
    report.recovery_err_c = r.err_c;
    report.recovery_err_e = r.err_e;
  }

  report.sim_count = static_cast<double>(sim_count(top, config.top_n));
  for (const auto& words : top) {
    std::vector<std::string> tokens;
    for (Index v : words) tokens.push_back(vocab[v]);
    report.top_words.push_back(std::move(tokens));
  }

  const fs::path dir(config.out);
  json j = eval_report_json(report);
  j["provenance"] = provenance(config);
  write_text(dir / "report.json", j.dump(2) + "\n");

  const std::string hash = config_hash(canonical_config(config));
  const std::string f = std::to_string(model.n_topics());
  const std::string method = to_string(model.method);
  std::ostringstream csv;
  CsvWriter w(csv);
  w.row({"config_hash", "f", "method", "metric", "topic", "value"});
  for (std::size_t t = 0; t < report.coherence_per_topic.size(); ++t)
    w.row({hash, f, method, "coherence", std::to_string(t + 1),
           format_double(report.coherence_per_topic[t])});
  w.row({hash, f, method, "sim_count", "", format_double(report.sim_count)});
  if (report.clust_acc) w.row({hash, f, method, "clust_acc", "", format_double(*report.clust_acc)});
  if (report.recovery_err_c)
    w.row({hash, f, method, "recovery_err_c", "", format_double(*report.recovery_err_c)});
  if (report.recovery_err_e)
    w.row({hash, f, method, "recovery_err_e", "", format_double(*report.recovery_err_e)});
  write_text(dir / "metrics.csv", csv.str());

  flush_warnings(warnings, err);
  if (!report.coherence_per_topic.empty()) {
    double mean = 0.0;
    for (double c : report.coherence_per_topic) mean += c;
    mean /= static_cast<double>(report.coherence_per_topic.size());
    out << "coherence (mean over topics): " << mean << '\n';
  }
  out << "sim_count: " << report.sim_count << '\n';
  if (report.clust_acc) out << "clust_acc: " << *report.clust_acc << '\n';
  if (report.recovery_err_c)
    out << "recovery_err_c: " << *report.recovery_err_c << "\nrecovery_err_e: "
        << *report.recovery_err_e << '\n';
}

// ---- bench -----------------------------------------------------------------

struct TrialResult {
  double err_c = std::numeric_limits<double>::quiet_NaN();
  double err_e = std::numeric_limits<double>::quiet_NaN();
  Index sweeps = 0;
  bool converged = false;
  double wall_time = 0.0;
  std::string status = "ok";
};

struct Summary {
  double mean_c = std::numeric_limits<double>::quiet_NaN();
  double mean_e = std::numeric_limits<double>::quiet_NaN();
  int failures = 0;
};

Summary summarize(const std::vector<TrialResult>& trials) {
  Summary s;
  double c = 0.0, e = 0.0;
  int ok = 0;
  for (const auto& t : trials) {
    if (t.status != "ok") {
      ++s.failures;
      continue;
    }
    c += t.err_c;
    e += t.err_e;
    ++ok;
  }
  if (ok > 0) {
    s.mean_c = c / ok;
    s.mean_e = e / ok;
  }
  return s;
}

std::string sci(double v) {
  if (std::isnan(v)) return "n/a";
  std::ostringstream s;
  s << std::scientific << std::setprecision(2) << v;
  return s.str();
}

void run_bench(const RunConfig& config, std::ostream& out, std::ostream& err) {
  ensure_directory(config.out);
  const std::vector<Index> topics = config.f_list.empty() ? kBenchTopics : config.f_list;
  const std::size_t n_trials = static_cast<std::size_t>(config.trials);
  const std::string hash = config_hash(canonical_config(config));

  std::vector<std::vector<TrialResult>> af(topics.size()), spa(topics.size());
  std::vector<std::vector<std::uint64_t>> seeds(topics.size());
  for (std::size_t k = 0; k < topics.size(); ++k) {
    af[k].resize(n_trials);
    spa[k].resize(n_trials);
    for (std::size_t t = 0; t < n_trials; ++t)
      seeds[k].push_back(derive_seed(config.seed, static_cast<std::uint64_t>(topics[k]), t));
  }

  parallel_for(topics.size() * n_trials, [&](std::size_t job) {
    const std::size_t k = job / n_trials;
    const std::size_t t = job % n_trials;
    const Index f = topics[k];
    const SyntheticGroundTruth truth =
        generate_synthetic(config.n_words, f, config.sparsity, seeds[k][t]);
    {
      TrialResult& r = af[k][t];
      try {
        const AnchorFreeResult res =
            anchor_free_factorize(truth.p, f, anchor_free_options(config, seeds[k][t]));
        const RecoveryError e = recovery_error(res.model.c, res.model.e, truth.c_nat, truth.e_nat);
        r.err_c = e.err_c;
        r.err_e = e.err_e;
        r.sweeps = res.report.sweeps;
        r.converged = res.report.converged;
        r.wall_time = res.report.wall_time;
      } catch (const Error& e) {
        r.status = e.what();
      }
    }
    {
      TrialResult& r = spa[k][t];
      const auto start = std::chrono::steady_clock::now();
      try {
        const SpaResult res = spa_factorize(truth.p, f);
        const RecoveryError e = recovery_error(res.model.c, res.model.e, truth.c_nat, truth.e_nat);
        r.err_c = e.err_c;
        r.err_e = e.err_e;
        r.converged = true;
      } catch (const Error& e) {
        r.status = e.what();
      }
      r.wall_time =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
  });

  const fs::path dir(config.out);
  std::ostringstream trials_csv;
  CsvWriter trials(trials_csv);
  trials.row({"config_hash", "f", "method", "trial", "seed", "err_c", "err_e", "sweeps",
              "converged", "wall_time", "status"});
  for (std::size_t k = 0; k < topics.size(); ++k) {
    for (const auto* runs : {&af[k], &spa[k]}) {
      const std::string method = runs == &af[k] ? "anchorfree" : "spa";
      for (std::size_t t = 0; t < n_trials; ++t) {
        const TrialResult& r = (*runs)[t];
        trials.row({hash, std::to_string(topics[k]), method, std::to_string(t + 1),
                    std::to_string(seeds[k][t]), format_double(r.err_c), format_double(r.err_e),
                    std::to_string(r.sweeps), r.converged ? "true" : "false",
                    format_double(r.wall_time), r.status});
      }
    }
  }
  write_text(dir / "bench_trials.csv", trials_csv.str());

  std::ostringstream table_csv;
  CsvWriter table(table_csv);
  table.row({"config_hash", "f", "anchorfree_err_c", "spa_err_c", "anchorfree_err_e", "spa_err_e",
             "anchorfree_failures", "spa_failures"});
  out << "Mean recovery error over " << n_trials << " trials (V=" << config.n_words
      << ", sparsity " << config.sparsity << ")\n\n";
  out << std::left << std::setw(5) << "F" << std::setw(14) << "C AnchorFree" << std::setw(14)
      << "C SPA" << std::setw(14) << "E AnchorFree" << std::setw(14) << "E SPA" << '\n';
  for (std::size_t k = 0; k < topics.size(); ++k) {
    const Summary a = summarize(af[k]);
    const Summary s = summarize(spa[k]);
    table.row({hash, std::to_string(topics[k]), format_double(a.mean_c), format_double(s.mean_c),
               format_double(a.mean_e), format_double(s.mean_e), std::to_string(a.failures),
               std::to_string(s.failures)});
    out << std::left << std::setw(5) << topics[k] << std::setw(14) << sci(a.mean_c)
        << std::setw(14) << sci(s.mean_c) << std::setw(14) << sci(a.mean_e) << std::setw(14)
        << sci(s.mean_e) << '\n';
    if (a.failures + s.failures > 0)
      err << "warning: F=" << topics[k] << ": " << a.failures << " AnchorFree and " << s.failures
          << " SPA trials failed; see bench_trials.csv\n";
  }
  write_text(dir / "bench_table.csv", table_csv.str());
  out << "\nwrote " << (dir / "bench_table.csv").string() << " and "
      << (dir / "bench_trials.csv").string() << '\n';
}

// ---- argument parsing ------------------------------------------------------

struct Flags {
  std::string method = "anchorfree";
  std::string estimator = "scaled-gram";
};

}  // namespace

std::string canonical_config(const RunConfig& c) {
  std::ostringstream s;
  s << std::setprecision(17);
  s << "command=" << command_name(c.command) << '\n';
  switch (c.command) {
    case Command::Factorize:
    case Command::Eval:
      s << "method=" << to_string(c.method) << "\nf=" << c.f
        << "\nestimator=" << to_string(c.estimator) << "\ninput=" << c.input
        << "\nvocab=" << c.vocab << "\nlabels=" << c.labels << "\nstoplist=" << c.stoplist
        << "\nmodel=" << c.model << "\ntruth=" << c.truth << "\ntfidf=" << c.tfidf
        << "\nncw=" << c.ncw << "\ntol=" << c.tol << "\nmax_sweeps=" << c.max_sweeps
        << "\nretries=" << c.retries << "\nstrict_rank=" << c.strict_rank
        << "\ntop_n=" << c.top_n << "\nseed=" << c.seed << '\n';
      break;
    case Command::Synth:
      s << "f=" << c.f << "\nv=" << c.n_words << "\nsparsity=" << c.sparsity
        << "\nseed=" << c.seed << "\nseparable=" << c.separable << '\n';
      break;
    case Command::Bench:
      s << "f=";
      for (Index f : c.f_list.empty() ? kBenchTopics : c.f_list) s << f << ',';
      s << "\nv=" << c.n_words << "\nsparsity=" << c.sparsity << "\ntrials=" << c.trials
        << "\nseed=" << c.seed << "\ntol=" << c.tol << "\nmax_sweeps=" << c.max_sweeps
        << "\nretries=" << c.retries << '\n';
      break;
  }
  return s.str();
}

bool parse_args(int argc, const char* const* argv, RunConfig& config, std::ostream& out) {
  CLI::App app{"Anchor-free topic mining from word co-occurrence statistics", "anchorfree"};
  app.require_subcommand(1);
  Flags flags;

  auto add_solver = [&](CLI::App* cmd) {
    cmd->add_option("--tol", config.tol, "Relative |det M| change that stops the sweeps")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-sweeps", config.max_sweeps, "Sweep limit")->check(CLI::PositiveNumber);
    cmd->add_option("--retries", config.retries, "Random re-initializations of a column")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--seed", config.seed, "Random seed");
  };
  auto add_corpus = [&](CLI::App* cmd) {
    cmd->add_option("--vocab", config.vocab, "Vocabulary, one token per line");
    cmd->add_option("--stoplist", config.stoplist, "Stop words, one per line");
    cmd->add_flag("--tfidf", config.tfidf, "Apply tf-idf weighting to the corpus");
    cmd->add_flag("--ncw", config.ncw, "Apply normalized-cut document weighting");
  };

  CLI::App* factorize = app.add_subcommand("factorize", "Mine topics from a corpus or P");
  factorize
      ->add_option("--input", config.input,
                   "Term-document file, co-occurrence cache, or synthetic bundle directory")
      ->required();
  factorize->add_option("-F,--topics", config.f, "Number of topics")
      ->required()
      ->check(CLI::PositiveNumber);
  factorize->add_option("--method", flags.method, "anchorfree or spa");
  factorize->add_option("--estimator", flags.estimator, "scaled-gram or count");
  factorize->add_option("--top-n", config.top_n, "Leading words per topic")
      ->check(CLI::PositiveNumber);
  factorize->add_flag("--strict-rank", config.strict_rank, "Fail instead of warning on rank");
  factorize->add_option("--out", config.out, "Output directory");
  add_corpus(factorize);
  add_solver(factorize);

  CLI::App* synth = app.add_subcommand("synth", "Write a synthetic ground-truth bundle");
  synth->add_option("-F,--topics", config.f, "Number of topics")
      ->required()
      ->check(CLI::PositiveNumber);
  synth->add_option("--words", config.n_words, "Vocabulary size V")->check(CLI::PositiveNumber);
  synth->add_option("--sparsity", config.sparsity, "Fraction of zeroed entries of C")
      ->check(CLI::Range(0.0, 1.0));
  synth->add_option("--seed", config.seed, "Random seed");
  synth->add_flag("--separable", config.separable, "Plant one anchor word per topic");
  synth->add_option("--out", config.out, "Bundle directory")->required();

  CLI::App* eval = app.add_subcommand("eval", "Score a factorized model");
  eval->add_option("--model", config.model, "Directory written by factorize")->required();
  eval->add_option("--input", config.input, "Term-document file for coherence and clustering");
  eval->add_option("--labels", config.labels, "Document categories, one integer per line");
  eval->add_option("--truth", config.truth, "Synthetic bundle for recovery error");
  eval->add_option("--top-n", config.top_n, "Leading words per topic")->check(CLI::PositiveNumber);
  eval->add_option("--seed", config.seed, "k-means seed");
  eval->add_option("--out", config.out, "Output directory");
  add_corpus(eval);

  CLI::App* bench = app.add_subcommand("bench", "Synthetic recovery benchmark, both methods");
  bench->add_option("-F,--topics", config.f_list, "Topic counts (default 5,10,...,30)")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  bench->add_option("--trials", config.trials, "Trials per topic count")
      ->check(CLI::PositiveNumber);
  bench->add_option("--sparsity", config.sparsity, "Fraction of zeroed entries of C")
      ->check(CLI::Range(0.0, 1.0));
  bench->add_option("--words", config.n_words, "Vocabulary size V")->check(CLI::PositiveNumber);
  bench->add_option("--out", config.out, "Output directory");
  add_solver(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return false;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return false;
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    if (!app.get_subcommands().empty() && e.get_name() == "RequiredError")
      msg += " (see anchorfree " + app.get_subcommands().front()->get_name() + " --help)";
    throw ConfigError(msg);
  }

  CLI::App* chosen = app.get_subcommands().front();
  if (chosen == factorize) config.command = Command::Factorize;
  if (chosen == synth) config.command = Command::Synth;
  if (chosen == eval) config.command = Command::Eval;
  if (chosen == bench) config.command = Command::Bench;
  config.method = method_from_string(flags.method);
  config.estimator = estimator_from_string(flags.estimator);
  if (config.command == Command::Synth && config.sparsity >= 1.0)
    throw ConfigError("--sparsity must be below 1");
  if (config.command == Command::Synth && config.f > config.n_words)
    throw ConfigError("-F exceeds --words");
  return true;
}

void execute(const RunConfig& config, std::ostream& out, std::ostream& err) {
  switch (config.command) {
    case Command::Factorize: return run_factorize(config, out, err);
    case Command::Synth: return run_synth(config, out, err);
    case Command::Eval: return run_eval(config, out, err);
    case Command::Bench: return run_bench(config, out, err);
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    RunConfig config;
    if (!parse_args(argc, argv, config, out)) return kExitOk;
    execute(config, out, err);
    return kExitOk;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const Error& e) {
    // ConfigError and violated preconditions on user-supplied data.
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::bad_alloc&) {
    err << "error: out of memory\n";
    return kExitNumerical;
  }
}

}  // namespace anchorfree::cli
