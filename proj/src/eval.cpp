#include "anchorfree/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "anchorfree/parallel.hpp"
#include "anchorfree/rng.hpp"
#include "anchorfree/simplex_lsq.hpp"

namespace anchorfree {

std::vector<std::vector<Index>> top_word_indices(const Eigen::MatrixXd& c, Index n) {
  const Index keep = std::min(n, c.rows());
  std::vector<std::vector<Index>> out;
  for (Index f = 0; f < c.cols(); ++f) {
    std::vector<Index> order(static_cast<std::size_t>(c.rows()));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return c(a, f) > c(b, f); });
    order.resize(static_cast<std::size_t>(std::max<Index>(keep, 0)));
    out.push_back(std::move(order));
  }
  return out;
}

DocumentIndex::DocumentIndex(const TermDocMatrix& counts)
    : docs_(static_cast<std::size_t>(counts.n_words())), vocab_(counts.vocab()) {
  const SparseMatrix& x = counts.matrix();
  for (Index d = 0; d < x.outerSize(); ++d) {
    for (SparseMatrix::InnerIterator it(x, d); it; ++it)
      if (it.value() > 0.0) docs_[it.row()].push_back(d);
  }
}

Index DocumentIndex::joint_freq(Index u, Index v) const {
  const auto& a = docs_[u];
  const auto& b = docs_[v];
  Index n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

double coherence(const std::vector<Index>& top_words, const DocumentIndex& index, double eps) {
  for (Index v : top_words)
    if (v < 0 || v >= index.n_words()) throw Error("top word index out of range");
  double total = 0.0;
  for (std::size_t i = 1; i < top_words.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const Index denom = index.freq(top_words[j]);
      if (denom == 0)
        throw NumericalError("word \"" + index.token(top_words[j]) +
                             "\" occurs in no document; coherence is undefined");
      const double joint = static_cast<double>(index.joint_freq(top_words[i], top_words[j]));
      total += std::log((joint + eps) / static_cast<double>(denom));
    }
  }
  return total;
}

double coherence(const std::vector<Index>& top_words, const TermDocMatrix& counts, double eps) {
  return coherence(top_words, DocumentIndex(counts), eps);
}

DocumentWeights estimate_weights(const TermDocMatrix& d, const Eigen::MatrixXd& c,
                                 Warnings* warnings) {
  if (c.rows() != d.n_words()) throw Error("C and the corpus have different vocabulary sizes");
  const Index f = c.cols();
  const SimplexLsq lsq(c);
  DocumentWeights out{Eigen::MatrixXd::Zero(f, d.n_docs())};
  std::vector<char> empty(static_cast<std::size_t>(d.n_docs()), 0);
  const SparseMatrix& x = d.matrix();
  parallel_for(static_cast<std::size_t>(d.n_docs()), [&](std::size_t i) {
    const Index doc = static_cast<Index>(i);
    Eigen::VectorXd atb = Eigen::VectorXd::Zero(f);
    bool any = false;
    for (SparseMatrix::InnerIterator it(x, doc); it; ++it) {
      atb += it.value() * c.row(it.row()).transpose();
      any = any || it.value() != 0.0;
    }
    if (!any) {
      out.w.col(doc).setConstant(1.0 / static_cast<double>(f));
      empty[i] = 1;
      return;
    }
    out.w.col(doc) = lsq.solve_from_correlation(atb);
  });
  for (Index doc = 0; doc < d.n_docs(); ++doc)
    if (empty[doc]) warn(warnings, "document " + d.doc_ids()[doc] + " is empty; uniform weights");
  return out;
}

namespace {

KMeansResult lloyd(const Eigen::MatrixXd& points, Index k, CounterRng& rng, int max_iterations) {
  const Index n = points.cols();
  KMeansResult r;
  r.centroids.resize(points.rows(), k);

  // k-means++ seeding.
  Eigen::VectorXd dist2 = Eigen::VectorXd::Constant(n, std::numeric_limits<double>::infinity());
  Index first = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
  r.centroids.col(0) = points.col(first);
  for (Index c = 1; c < k; ++c) {
    for (Index i = 0; i < n; ++i)
      dist2[i] = std::min(dist2[i], (points.col(i) - r.centroids.col(c - 1)).squaredNorm());
    const double total = dist2.sum();
    Index pick = 0;
    if (total > 0.0) {
      double target = rng.uniform() * total;
      for (pick = 0; pick + 1 < n; ++pick) {
        target -= dist2[pick];
        if (target <= 0.0) break;
      }
    } else {
      pick = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
    }
    r.centroids.col(c) = points.col(pick);
  }

  r.assignment.assign(static_cast<std::size_t>(n), -1);
  for (int it = 0; it < max_iterations; ++it) {
    bool changed = false;
    for (Index i = 0; i < n; ++i) {
      Index best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (Index c = 0; c < k; ++c) {
        const double d = (points.col(i) - r.centroids.col(c)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (r.assignment[i] != best) {
        r.assignment[i] = best;
        changed = true;
      }
    }
    if (!changed && it > 0) break;
    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(points.rows(), k);
    std::vector<Index> counts(static_cast<std::size_t>(k), 0);
    for (Index i = 0; i < n; ++i) {
      sums.col(r.assignment[i]) += points.col(i);
      ++counts[r.assignment[i]];
    }
    for (Index c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        r.centroids.col(c) = sums.col(c) / static_cast<double>(counts[c]);
      } else {
        // Re-seed an empty cluster at the point farthest from its centroid.
        Index far = 0;
        double far_d = -1.0;
        for (Index i = 0; i < n; ++i) {
          const double d = (points.col(i) - r.centroids.col(r.assignment[i])).squaredNorm();
          if (d > far_d) {
            far_d = d;
            far = i;
          }
        }
        r.centroids.col(c) = points.col(far);
      }
    }
  }
  r.inertia = 0.0;
  for (Index i = 0; i < n; ++i)
    r.inertia += (points.col(i) - r.centroids.col(r.assignment[i])).squaredNorm();
  return r;
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& points, Index k, std::uint64_t seed, int restarts,
                    int max_iterations) {
  if (k < 1) throw Error("k-means needs at least one cluster");
  if (points.cols() < k)
    throw NumericalError("cannot form " + std::to_string(k) + " clusters from " +
                         std::to_string(points.cols()) + " documents");
  std::vector<KMeansResult> runs(static_cast<std::size_t>(std::max(restarts, 1)));
  parallel_for(runs.size(), [&](std::size_t r) {
    CounterRng rng(derive_seed(seed, 0x6b6d, r));
    runs[r] = lloyd(points, k, rng, max_iterations);
  });
  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r)
    if (runs[r].inertia < runs[best].inertia) best = r;
  return std::move(runs[best]);
}

double clustering_accuracy(const DocumentWeights& w, const LabelSet& labels, std::uint64_t seed) {
  const Index n = w.w.cols();
  if (static_cast<Index>(labels.labels.size()) != n)
    throw Error("have " + std::to_string(labels.labels.size()) + " labels for " +
                std::to_string(n) + " documents");
  const Index k = labels.n_categories;
  if (k < 1) throw Error("no categories");
  const KMeansResult km = kmeans(w.w, k, seed);
  Eigen::MatrixXd cost = Eigen::MatrixXd::Zero(k, k);
  for (Index i = 0; i < n; ++i) cost(km.assignment[i], labels.labels[i]) -= 1.0;
  const Assignment match = hungarian(cost);
  return -match.total / static_cast<double>(n);
}

RecoveryError recovery_error(const Eigen::MatrixXd& c_star, const Eigen::MatrixXd& e_star,
                             const Eigen::MatrixXd& c_nat, const Eigen::MatrixXd& e_nat) {
  if (c_star.rows() != c_nat.rows() || c_star.cols() != c_nat.cols())
    throw Error("C* and C_nat shapes differ");
  const Index f = c_star.cols();
  if (e_star.rows() != f || e_star.cols() != f || e_nat.rows() != f || e_nat.cols() != f)
    throw Error("E shapes do not match the number of topics");
  Eigen::MatrixXd cost(f, f);
  for (Index a = 0; a < f; ++a)
    for (Index b = 0; b < f; ++b) cost(a, b) = (c_star.col(a) - c_nat.col(b)).squaredNorm();
  RecoveryError out;
  Assignment match = hungarian(cost);
  out.err_c = match.total;
  out.perm = std::move(match.perm);
  for (Index a = 0; a < f; ++a)
    for (Index b = 0; b < f; ++b) {
      const double diff = e_star(a, b) - e_nat(out.perm[a], out.perm[b]);
      out.err_e += diff * diff;
    }
  return out;
}

}  // namespace anchorfree
