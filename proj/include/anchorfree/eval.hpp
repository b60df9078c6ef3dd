#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "anchorfree/assignment.hpp"
#include "anchorfree/corpus.hpp"

namespace anchorfree {

/// Leading words of each topic: indices sorted by descending probability
/// (ties to the smaller index), min(n, V) per topic.
std::vector<std::vector<Index>> top_word_indices(const Eigen::MatrixXd& c, Index n);

/// Per-word document lists built from the binary presence pattern of a count
/// matrix; answers freq(v) and freq(u, v) queries.
class DocumentIndex {
 public:
  explicit DocumentIndex(const TermDocMatrix& counts);

  Index freq(Index v) const { return static_cast<Index>(docs_[v].size()); }
  Index joint_freq(Index u, Index v) const;
  const std::string& token(Index v) const { return vocab_[v]; }
  Index n_words() const { return static_cast<Index>(docs_.size()); }

 private:
  std::vector<std::vector<Index>> docs_;
  std::vector<std::string> vocab_;
};

/// Topic coherence of words ordered by descending weight:
///   sum_{i=2..N} sum_{j<i} log((freq(v_i, v_j) + eps) / freq(v_j)).
double coherence(const std::vector<Index>& top_words, const DocumentIndex& index,
                 double eps = 0.01);
double coherence(const std::vector<Index>& top_words, const TermDocMatrix& counts,
                 double eps = 0.01);

/// Sum over unordered topic pairs of the overlap of their leading n words.
template <typename Word>
long long sim_count(const std::vector<std::vector<Word>>& top_words, Index n) {
  std::vector<std::set<Word>> heads;
  heads.reserve(top_words.size());
  for (const auto& list : top_words) {
    const auto stop = list.begin() + std::min<std::ptrdiff_t>(n, static_cast<std::ptrdiff_t>(list.size()));
    heads.emplace_back(list.begin(), stop);
  }
  long long total = 0;
  for (std::size_t f = 0; f < heads.size(); ++f)
    for (std::size_t g = f + 1; g < heads.size(); ++g)
      for (const auto& w : heads[f]) total += static_cast<long long>(heads[g].count(w));
  return total;
}

/// F x D topic weights; every column lies on the unit simplex.
struct DocumentWeights {
  Eigen::MatrixXd w;
};

/// Per document: min ||d - C w||^2 over the unit simplex. Empty documents get
/// the uniform vector and a warning.
DocumentWeights estimate_weights(const TermDocMatrix& d, const Eigen::MatrixXd& c,
                                 Warnings* warnings = nullptr);

struct KMeansResult {
  std::vector<Index> assignment;
  Eigen::MatrixXd centroids;  // dims x k
  double inertia = 0.0;
};

/// Lloyd's algorithm on the columns of `points` with k-means++ seeding; the
/// lowest-inertia run of `restarts` is kept (earliest on ties).
KMeansResult kmeans(const Eigen::MatrixXd& points, Index k, std::uint64_t seed, int restarts = 10,
                    int max_iterations = 300);

/// Clusters document weights into labels.n_categories groups and returns the
/// fraction of documents whose cluster maps to their label under the best
/// one-to-one cluster/label matching.
double clustering_accuracy(const DocumentWeights& w, const LabelSet& labels, std::uint64_t seed);

struct RecoveryError {
  double err_c = 0.0;
  double err_e = 0.0;
  /// Column f of C* is matched with column perm[f] of the ground truth.
  Permutation perm;
};

/// Aligns C* to C_nat by minimum-cost assignment on squared column distances
/// and reports ||C* - C_nat Pi||_F^2 and ||E* - Pi^T E_nat Pi||_F^2.
RecoveryError recovery_error(const Eigen::MatrixXd& c_star, const Eigen::MatrixXd& e_star,
                             const Eigen::MatrixXd& c_nat, const Eigen::MatrixXd& e_nat);

struct EvalReport {
  std::vector<double> coherence_per_topic;
  double sim_count = 0.0;
  std::optional<double> clust_acc;
  std::optional<double> recovery_err_c;
  std::optional<double> recovery_err_e;
  std::vector<std::vector<std::string>> top_words;
};

}  // namespace anchorfree
