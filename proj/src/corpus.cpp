#include "anchorfree/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace anchorfree {

namespace {

std::vector<std::string> default_doc_ids(Index n_docs) {
  std::vector<std::string> ids;
  ids.reserve(static_cast<std::size_t>(n_docs));
  for (Index d = 0; d < n_docs; ++d) ids.push_back(std::to_string(d + 1));
  return ids;
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return in;
}

}  // namespace

TermDocMatrix::TermDocMatrix(Index n_words, Index n_docs,
                             const std::vector<TermDocEntry>& entries,
                             std::vector<std::string> vocab,
                             std::vector<std::string> doc_ids)
    : vocab_(std::move(vocab)), doc_ids_(std::move(doc_ids)) {
  if (n_words < 0 || n_docs < 0) throw Error("negative matrix dimension");
  std::vector<TermDocEntry> sorted = entries;
  for (const auto& e : sorted) {
    if (e.word < 0 || e.word >= n_words || e.doc < 0 || e.doc >= n_docs)
      throw Error("entry index out of range (" + std::to_string(e.word) + ", " +
                  std::to_string(e.doc) + ")");
    if (!std::isfinite(e.weight) || e.weight < 0.0)
      throw Error("negative or non-finite weight at (" + std::to_string(e.word) + ", " +
                  std::to_string(e.doc) + ")");
  }
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return a.doc != b.doc ? a.doc < b.doc : a.word < b.word;
  });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].doc == sorted[i - 1].doc && sorted[i].word == sorted[i - 1].word)
      throw Error("duplicate entry (" + std::to_string(sorted[i].word + 1) + ", " +
                  std::to_string(sorted[i].doc + 1) + ")");
  }
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(sorted.size());
  for (const auto& e : sorted) {
    if (e.weight != 0.0) triplets.emplace_back(e.word, e.doc, e.weight);
  }
  matrix_.resize(n_words, n_docs);
  matrix_.setFromTriplets(triplets.begin(), triplets.end());
  matrix_.makeCompressed();
  if (doc_ids_.empty() && n_docs > 0) doc_ids_ = default_doc_ids(n_docs);
  validate();
}

TermDocMatrix::TermDocMatrix(SparseMatrix m, std::vector<std::string> vocab,
                             std::vector<std::string> doc_ids)
    : matrix_(std::move(m)), vocab_(std::move(vocab)), doc_ids_(std::move(doc_ids)) {
  matrix_.prune(0.0);
  matrix_.makeCompressed();
  if (doc_ids_.empty() && matrix_.cols() > 0) doc_ids_ = default_doc_ids(matrix_.cols());
  validate();
  for (Index k = 0; k < matrix_.nonZeros(); ++k) {
    const double w = matrix_.valuePtr()[k];
    if (!std::isfinite(w) || w < 0.0) throw Error("negative or non-finite weight");
  }
}

void TermDocMatrix::validate() const {
  if (static_cast<Index>(vocab_.size()) != matrix_.rows())
    throw Error("vocabulary has " + std::to_string(vocab_.size()) + " tokens but matrix has " +
                std::to_string(matrix_.rows()) + " words");
  if (static_cast<Index>(doc_ids_.size()) != matrix_.cols())
    throw Error("doc id list has " + std::to_string(doc_ids_.size()) +
                " entries but matrix has " + std::to_string(matrix_.cols()) + " documents");
}

std::vector<TermDocEntry> TermDocMatrix::entries() const {
  std::vector<TermDocEntry> out;
  out.reserve(static_cast<std::size_t>(matrix_.nonZeros()));
  for (Index d = 0; d < matrix_.outerSize(); ++d) {
    for (SparseMatrix::InnerIterator it(matrix_, d); it; ++it)
      out.push_back({it.row(), d, it.value()});
  }
  return out;
}

LabelSet LabelSet::from_labels(std::vector<int> labels) {
  LabelSet set;
  int max_label = -1;
  for (int l : labels) {
    if (l < 0) throw Error("negative category label " + std::to_string(l));
    max_label = std::max(max_label, l);
  }
  set.labels = std::move(labels);
  set.n_categories = max_label + 1;
  return set;
}

TermDocMatrix load_term_doc(const std::string& path, const std::string& vocab_path,
                            TermDocFormat format) {
  if (format != TermDocFormat::Coordinate) throw ConfigError("unsupported term-doc format");
  std::ifstream in = open_or_throw(path);

  std::string line;
  std::size_t line_no = 0;
  long long n_words = -1, n_docs = -1, nnz = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::istringstream ss(line);
    std::string extra;
    if (!(ss >> n_words >> n_docs >> nnz) || (ss >> extra))
      throw ParseError(path, line_no, "expected header \"V D NNZ\"");
    if (n_words < 0 || n_docs < 0 || nnz < 0)
      throw ParseError(path, line_no, "negative value in header");
    break;
  }
  if (n_words < 0) throw ParseError(path, line_no, "missing header");

  std::vector<TermDocEntry> entries;
  entries.reserve(static_cast<std::size_t>(nnz));
  std::vector<std::size_t> entry_line;
  entry_line.reserve(static_cast<std::size_t>(nnz));
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (static_cast<long long>(entries.size()) == nnz)
      throw ParseError(path, line_no, "more entries than the header's NNZ");
    std::istringstream ss(line);
    long long w = 0, d = 0;
    std::string weight_text, extra;
    if (!(ss >> w >> d >> weight_text) || (ss >> extra))
      throw ParseError(path, line_no, "expected \"word_index doc_index weight\"");
    double weight = 0.0;
    try {
      std::size_t used = 0;
      weight = std::stod(weight_text, &used);
      if (used != weight_text.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ParseError(path, line_no, "malformed weight \"" + weight_text + "\"");
    }
    if (!std::isfinite(weight)) throw ParseError(path, line_no, "non-finite weight");
    if (weight < 0.0) throw ParseError(path, line_no, "negative weight at line " + std::to_string(line_no));
    if (w < 1 || w > n_words || d < 1 || d > n_docs)
      throw ParseError(path, line_no, "index out of range");
    entries.push_back({static_cast<Index>(w - 1), static_cast<Index>(d - 1), weight});
    entry_line.push_back(line_no);
  }
  if (static_cast<long long>(entries.size()) != nnz)
    throw ParseError(path, line_no,
                     "header declares " + std::to_string(nnz) + " entries, found " +
                         std::to_string(entries.size()));

  // Duplicate detection here so the message can carry a line number.
  std::vector<std::size_t> order(entries.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = entries[a];
    const auto& y = entries[b];
    if (x.doc != y.doc) return x.doc < y.doc;
    if (x.word != y.word) return x.word < y.word;
    return a < b;
  });
  for (std::size_t i = 1; i < order.size(); ++i) {
    const auto& x = entries[order[i - 1]];
    const auto& y = entries[order[i]];
    if (x.doc == y.doc && x.word == y.word)
      throw ParseError(path, entry_line[order[i]], "duplicate (word, doc) entry");
  }

  std::vector<std::string> vocab = load_tokens(vocab_path);
  if (static_cast<long long>(vocab.size()) != n_words)
    throw IoError("dimension mismatch: header of " + path + " declares V=" +
                  std::to_string(n_words) + " but " + vocab_path + " has " +
                  std::to_string(vocab.size()) + " tokens");

  return TermDocMatrix(static_cast<Index>(n_words), static_cast<Index>(n_docs), entries,
                       std::move(vocab), default_doc_ids(static_cast<Index>(n_docs)));
}

void write_term_doc(const TermDocMatrix& m, const std::string& path,
                    const std::string& vocab_path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << m.n_words() << ' ' << m.n_docs() << ' ' << m.nnz() << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& e : m.entries())
    out << (e.word + 1) << ' ' << (e.doc + 1) << ' ' << e.weight << '\n';
  if (!out) throw IoError("write failed: " + path);
  if (!vocab_path.empty()) {
    std::ofstream v(vocab_path);
    if (!v) throw IoError("cannot write " + vocab_path);
    for (const auto& tok : m.vocab()) v << tok << '\n';
  }
}

std::vector<std::string> load_tokens(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    tokens.push_back(line);
  }
  // A trailing newline does not introduce an extra empty token, but an
  // explicitly empty last line before EOF would; strip trailing empties.
  while (!tokens.empty() && tokens.back().empty()) tokens.pop_back();
  return tokens;
}

std::set<std::string> load_stoplist(const std::string& path) {
  std::set<std::string> out;
  for (auto& tok : load_tokens(path)) {
    auto t = trim(tok);
    if (!t.empty()) out.insert(std::move(t));
  }
  return out;
}

LabelSet load_labels(const std::string& path) {
  std::ifstream in = open_or_throw(path);
  std::vector<int> labels;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty()) continue;
    std::size_t used = 0;
    long value = 0;
    try {
      value = std::stol(t, &used);
    } catch (const std::exception&) {
      throw ParseError(path, line_no, "expected an integer label");
    }
    if (used != t.size()) throw ParseError(path, line_no, "expected an integer label");
    if (value < 0) throw ParseError(path, line_no, "negative label");
    labels.push_back(static_cast<int>(value));
  }
  return LabelSet::from_labels(std::move(labels));
}

TermDocMatrix remove_stopwords(const TermDocMatrix& m, const std::set<std::string>& stoplist,
                               Warnings* warnings) {
  if (stoplist.empty()) return m;
  std::vector<Index> new_index(static_cast<std::size_t>(m.n_words()), -1);
  std::vector<std::string> vocab;
  for (Index v = 0; v < m.n_words(); ++v) {
    if (!stoplist.count(m.vocab()[v])) {
      new_index[v] = static_cast<Index>(vocab.size());
      vocab.push_back(m.vocab()[v]);
    }
  }
  if (static_cast<Index>(vocab.size()) == m.n_words()) return m;
  if (vocab.empty()) warn(warnings, "stop-word removal left an empty vocabulary");

  std::vector<TermDocEntry> kept;
  for (const auto& e : m.entries()) {
    if (new_index[e.word] >= 0) kept.push_back({new_index[e.word], e.doc, e.weight});
  }
  const Index n_words = static_cast<Index>(vocab.size());
  return TermDocMatrix(n_words, m.n_docs(), kept, std::move(vocab), m.doc_ids());
}

TermDocMatrix tfidf(const TermDocMatrix& m) {
  const double n_docs = static_cast<double>(m.n_docs());
  Eigen::VectorXd df = Eigen::VectorXd::Zero(m.n_words());
  const SparseMatrix& x = m.matrix();
  for (Index d = 0; d < x.outerSize(); ++d) {
    for (SparseMatrix::InnerIterator it(x, d); it; ++it) df[it.row()] += 1.0;
  }
  SparseMatrix out = x;
  for (Index d = 0; d < out.outerSize(); ++d) {
    for (SparseMatrix::InnerIterator it(out, d); it; ++it)
      it.valueRef() *= std::log(n_docs / df[it.row()]);
  }
  return TermDocMatrix(std::move(out), m.vocab(), m.doc_ids());
}

TermDocMatrix ncw_weight(const TermDocMatrix& m, Warnings* warnings) {
  const SparseMatrix& x = m.matrix();
  // M 1: total weight of each word across the corpus.
  Eigen::VectorXd word_mass = Eigen::VectorXd::Zero(m.n_words());
  for (Index d = 0; d < x.outerSize(); ++d) {
    for (SparseMatrix::InnerIterator it(x, d); it; ++it) word_mass[it.row()] += it.value();
  }
  SparseMatrix out = x;
  for (Index d = 0; d < out.outerSize(); ++d) {
    double delta = 0.0;
    for (SparseMatrix::InnerIterator it(x, d); it; ++it) delta += it.value() * word_mass[it.row()];
    if (delta <= 0.0) {
      warn(warnings, "document " + m.doc_ids()[d] + " has zero connectivity; left unscaled");
      continue;
    }
    const double scale = 1.0 / std::sqrt(delta);
    for (SparseMatrix::InnerIterator it(out, d); it; ++it) it.valueRef() *= scale;
  }
  return TermDocMatrix(std::move(out), m.vocab(), m.doc_ids());
}

}  // namespace anchorfree
