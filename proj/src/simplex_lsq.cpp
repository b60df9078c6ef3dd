#include "anchorfree/simplex_lsq.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Eigenvalues>

namespace anchorfree {

Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& y) {
  const Index n = y.size();
  if (n == 0) throw Error("projection onto an empty simplex");
  std::vector<double> sorted(y.data(), y.data() + n);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (Index k = 0; k < n; ++k) {
    cumulative += sorted[k];
    const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (sorted[k] - candidate > 0.0) theta = candidate;
  }
  return (y.array() - theta).cwiseMax(0.0).matrix();
}

SimplexLsq::SimplexLsq(const Eigen::MatrixXd& a, SimplexLsqOptions opts)
    : a_(a), gram_(a.transpose() * a), opts_(opts) {
  if (a.cols() == 0) throw Error("simplex least squares needs at least one column");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram_, Eigen::EigenvaluesOnly);
  lipschitz_ = eig.eigenvalues().maxCoeff();
}

Eigen::VectorXd SimplexLsq::solve(const Eigen::VectorXd& b) const {
  if (b.size() != a_.rows()) throw Error("right-hand side length does not match A");
  return solve_from_correlation(a_.transpose() * b);
}

Eigen::VectorXd SimplexLsq::solve_from_correlation(const Eigen::VectorXd& atb) const {
  const Index f = gram_.rows();
  Eigen::VectorXd w = Eigen::VectorXd::Constant(f, 1.0 / static_cast<double>(f));
  if (f == 1 || lipschitz_ <= 0.0) return w;
  const double step = 1.0 / lipschitz_;
  Eigen::VectorXd y = w;
  double momentum = 1.0;
  for (int it = 0; it < opts_.max_iterations; ++it) {
    const Eigen::VectorXd grad = gram_ * y - atb;
    Eigen::VectorXd next = project_to_simplex(y - step * grad);
    const Eigen::VectorXd delta = next - w;
    if ((y - next).dot(delta) > 0.0) {
      // Momentum is pointing uphill; restart from the plain projected step.
      momentum = 1.0;
      y = w;
      next = project_to_simplex(w - step * (gram_ * w - atb));
    }
    const double change = (next - w).lpNorm<Eigen::Infinity>();
    const double next_momentum = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    y = next + ((momentum - 1.0) / next_momentum) * (next - w);
    w = std::move(next);
    momentum = next_momentum;
    if (change <= opts_.tol) break;
  }
  return w;
}

}  // namespace anchorfree
