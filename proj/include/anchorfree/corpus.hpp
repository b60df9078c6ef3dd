#pragma once

#include <set>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "anchorfree/errors.hpp"

namespace anchorfree {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;

struct TermDocEntry {
  Index word;
  Index doc;
  double weight;

  bool operator==(const TermDocEntry&) const = default;
};

/// Sparse nonnegative V x D term-document matrix with its vocabulary and
/// document ids. Immutable once constructed; the constructor validates.
class TermDocMatrix {
 public:
  TermDocMatrix() = default;

  /// Throws Error on out-of-range indices, negative or non-finite weights,
  /// duplicate (word, doc) pairs, or vocab/doc_ids length mismatch.
  /// Zero weights are accepted but not stored.
  TermDocMatrix(Index n_words, Index n_docs, const std::vector<TermDocEntry>& entries,
                std::vector<std::string> vocab, std::vector<std::string> doc_ids);

  /// Wraps an existing sparse matrix. Same validation as above.
  TermDocMatrix(SparseMatrix m, std::vector<std::string> vocab,
                std::vector<std::string> doc_ids);

  Index n_words() const { return matrix_.rows(); }
  Index n_docs() const { return matrix_.cols(); }
  Index nnz() const { return matrix_.nonZeros(); }

  const SparseMatrix& matrix() const { return matrix_; }
  const std::vector<std::string>& vocab() const { return vocab_; }
  const std::vector<std::string>& doc_ids() const { return doc_ids_; }

  /// Stored entries ordered by (doc, word).
  std::vector<TermDocEntry> entries() const;

 private:
  void validate() const;

  SparseMatrix matrix_;
  std::vector<std::string> vocab_;
  std::vector<std::string> doc_ids_;
};

/// Ground-truth document categories for clustering accuracy.
struct LabelSet {
  std::vector<int> labels;
  int n_categories = 0;

  static LabelSet from_labels(std::vector<int> labels);
};

enum class TermDocFormat { Coordinate };

/// Reads the "V D NNZ" coordinate format (1-based indices) plus a vocabulary
/// file with one token per line. Document ids are "1".."D".
TermDocMatrix load_term_doc(const std::string& path, const std::string& vocab_path,
                            TermDocFormat format = TermDocFormat::Coordinate);

/// Writes the matrix in the coordinate format; weights use round-trip
/// precision. When vocab_path is non-empty the vocabulary is written as well.
void write_term_doc(const TermDocMatrix& m, const std::string& path,
                    const std::string& vocab_path = {});

std::vector<std::string> load_tokens(const std::string& path);
std::set<std::string> load_stoplist(const std::string& path);
LabelSet load_labels(const std::string& path);

/// Drops every word whose token is in the stoplist, reindexing the
/// vocabulary in its original order.
TermDocMatrix remove_stopwords(const TermDocMatrix& m, const std::set<std::string>& stoplist,
                               Warnings* warnings = nullptr);

/// Raw-count tf times natural-log idf, log(D / df(v)).
TermDocMatrix tfidf(const TermDocMatrix& m);

/// Normalized-cut weighting: column d is scaled by delta_d^{-1/2} with
/// delta_d = x_d^T (M 1), the document's total similarity to the corpus.
/// Documents with delta_d = 0 are left as is and reported.
TermDocMatrix ncw_weight(const TermDocMatrix& m, Warnings* warnings = nullptr);

}  // namespace anchorfree
