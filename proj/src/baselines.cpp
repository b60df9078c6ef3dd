#include "anchorfree/baselines.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "anchorfree/anchorfree.hpp"
#include "anchorfree/parallel.hpp"
#include "anchorfree/report_io.hpp"

namespace anchorfree {

AnchorSet spa_anchors(const Eigen::MatrixXd& data, Index f) {
  const Index n_words = data.rows();
  if (f < 1 || f > n_words)
    throw Error("cannot pick " + std::to_string(f) + " anchors from " + std::to_string(n_words) +
                " words");
  // Column v of x is the normalized row v of the data.
  Eigen::MatrixXd x = data.transpose();
  for (Index v = 0; v < n_words; ++v) {
    const double sum = x.col(v).sum();
    if (sum == 0.0) throw NumericalError("word " + std::to_string(v + 1) + " has a zero row sum");
    x.col(v) /= sum;
  }

  AnchorSet out;
  Eigen::VectorXd norms = x.colwise().squaredNorm().transpose();
  const double initial = norms.maxCoeff();
  for (Index step = 0; step < f; ++step) {
    Index best = 0;
    for (Index v = 1; v < n_words; ++v)
      if (norms[v] > norms[best]) best = v;
    if (!(norms[best] > 1e-24 * initial))
      throw NumericalError("data has rank " + std::to_string(step) + " < " + std::to_string(f) +
                           "; deflation annihilated every word");
    out.indices.push_back(best);
    const Eigen::VectorXd u = x.col(best) / std::sqrt(norms[best]);
    x -= u * (u.transpose() * x);
    norms = x.colwise().squaredNorm().transpose();
  }
  return out;
}

TopicModel recover_topics_from_anchors(const CooccurrenceMatrix& p, const AnchorSet& anchors,
                                       const SimplexLsqOptions& opts, Warnings* warnings) {
  const Index n_words = p.n_words();
  const Index f = static_cast<Index>(anchors.indices.size());
  if (f < 1) throw Error("no anchors given");
  std::vector<char> seen(static_cast<std::size_t>(n_words), 0);
  for (Index a : anchors.indices) {
    if (a < 0 || a >= n_words) throw Error("anchor index out of range");
    if (seen[a]) throw Error("duplicate anchor " + std::to_string(a + 1));
    seen[a] = 1;
  }

  const Eigen::VectorXd row_sums = p.row_sums();
  const std::vector<char> significant = p.significant_rows();
  Eigen::MatrixXd selector = Eigen::MatrixXd::Zero(n_words, f);
  for (Index k = 0; k < f; ++k) {
    const Index a = anchors.indices[k];
    if (!significant[a] || row_sums[a] == 0.0) throw NumericalError("anchor word " + std::to_string(a + 1) + " has a zero row");
    selector(a, k) = 1.0 / row_sums[a];
  }
  // Columns are the normalized anchor rows of P (P is symmetric).
  const Eigen::MatrixXd basis = p.multiply(selector);
  const Eigen::VectorXd scale = basis.colwise().norm().cwiseInverse().transpose();
  const Eigen::MatrixXd unit = basis * scale.asDiagonal();
  const Eigen::MatrixXd gram = unit.transpose() * unit;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  // Rank deficient once the normalized anchor rows have condition >= 1e12,
  // where roundoff in P dominates.
  const double spread = eig.eigenvalues().minCoeff() / eig.eigenvalues().maxCoeff();
  if (!(spread > 1e-24))
    throw NumericalError("anchor rows are rank deficient (Gram eigenvalue ratio " +
                         format_double(spread) + ")");

  const SimplexLsq lsq(basis, opts);
  const Eigen::MatrixXd correlation = p.multiply(basis);  // row v: basis^T P(v, :)^T
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n_words, f);
  parallel_for(static_cast<std::size_t>(n_words), [&](std::size_t i) {
    const Index v = static_cast<Index>(i);
    if (!significant[v] || row_sums[v] == 0.0) return;
    const Eigen::VectorXd weights =
        lsq.solve_from_correlation(correlation.row(v).transpose() / row_sums[v]);
    c.row(v) = weights.transpose() * row_sums[v];
  });
  // Column k sums to (E 1)_k, which is negative when topic k correlates
  // negatively with the rest; divide by the signed sum before clipping.
  for (Index k = 0; k < f; ++k) {
    const double total = c.col(k).sum();
    if (total != 0.0) c.col(k) /= total;
  }
  clean_topic_columns(c);
  Eigen::MatrixXd e;
  try {
    e = recover_e(c, p).e;
  } catch (const NumericalError& err) {
    // A collapsed topic (typically an all-zero column) leaves E undefined;
    // report the minimum-norm solution instead of failing the baseline.
    warn(warnings, std::string(err.what()) + "; E from the pseudo-inverse of C");
    const Eigen::MatrixXd pinv = c.completeOrthogonalDecomposition().pseudoInverse();
    e = pinv * p.multiply(pinv.transpose());
    e = 0.5 * (e + e.transpose()).eval();
  }
  return TopicModel{std::move(c), std::move(e), Method::SpaRecover};
}

SpaResult spa_factorize(const CooccurrenceMatrix& p, Index f, const SimplexLsqOptions& opts,
                        Warnings* warnings) {
  const Eigen::VectorXd row_sums = p.row_sums();
  const std::vector<char> significant = p.significant_rows();
  std::vector<Index> active;
  for (Index v = 0; v < p.n_words(); ++v)
    if (significant[v] && row_sums[v] != 0.0) active.push_back(v);
  const Eigen::MatrixXd full = p.dense();
  Eigen::MatrixXd rows(static_cast<Index>(active.size()), full.cols());
  for (std::size_t i = 0; i < active.size(); ++i) rows.row(static_cast<Index>(i)) = full.row(active[i]);

  SpaResult out;
  out.anchors = spa_anchors(rows, f);
  for (Index& a : out.anchors.indices) a = active[a];
  out.model = recover_topics_from_anchors(p, out.anchors, opts, warnings);
  return out;
}

}  // namespace anchorfree
