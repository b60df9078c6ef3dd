#pragma once

#include <Eigen/Core>

#include "anchorfree/errors.hpp"

namespace anchorfree {

/// Euclidean projection onto {w >= 0, 1^T w = 1} (sort-and-threshold).
Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& y);

struct SimplexLsqOptions {
  double tol = 1e-8;
  int max_iterations = 1000;
};

/// min ||A w - b||^2 over the unit simplex for a fixed A, by accelerated
/// projected gradient (FISTA with gradient-based adaptive restart). The Gram
/// matrix A^T A and its Lipschitz constant are computed once, so each solve
/// costs O(F^2) per iteration.
class SimplexLsq {
 public:
  explicit SimplexLsq(const Eigen::MatrixXd& a, SimplexLsqOptions opts = {});

  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  /// Same problem given A^T b directly.
  Eigen::VectorXd solve_from_correlation(const Eigen::VectorXd& atb) const;

  Index dimension() const { return gram_.rows(); }

 private:
  Eigen::MatrixXd a_;
  Eigen::MatrixXd gram_;
  double lipschitz_ = 0.0;
  SimplexLsqOptions opts_;
};

}  // namespace anchorfree
