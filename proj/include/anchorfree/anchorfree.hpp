#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "anchorfree/cooccur.hpp"
#include "anchorfree/eigensolver.hpp"
#include "anchorfree/topic_model.hpp"

namespace anchorfree {

struct AnchorFreeOptions {
  /// Stop once |det M| changes by less than tol (relative) over a sweep.
  double tol = 1e-6;
  int max_sweeps = 50;
  /// Seeds the eigensolver start vector and any column re-initialization.
  std::uint64_t seed = 0;
  /// Treat a large eigenvalue F+1 as an error instead of a warning.
  bool strict_rank = false;
  /// Consecutive zero-cofactor re-initializations tolerated before failing.
  int retries = 3;
  /// Eigenvalue F+1 above this fraction of eigenvalue F raises the rank warning.
  double rank_ratio = 0.1;
  /// Entries of C = B M below -negative_tol are reported before clipping.
  double negative_tol = 1e-6;
  SqrtFactorOptions eigen{};
};

struct SolverReport {
  Index sweeps = 0;
  /// |det M| after every column update, F entries per sweep.
  std::vector<double> det_trajectory;
  bool converged = false;
  Index lp_calls = 0;
  double wall_time = 0.0;
  Index reinitializations = 0;
  double sqrt_residual = 0.0;
  Eigen::VectorXd eigenvalues;
  double next_eigenvalue = 0.0;
  /// Most negative entry of B M before cleanup.
  double worst_negative = 0.0;
  /// Condition number of C^T C used when recovering E.
  double gram_condition = 0.0;
};

/// The F x F variable of the column-wise determinant maximization; C = B M.
struct MixingMatrix {
  Eigen::MatrixXd m;
};

struct AnchorFreeResult {
  TopicModel model;
  SolverReport report;
  MixingMatrix mixing;
  Eigen::MatrixXd b;
};

/// Maximizes |det M| subject to B M >= 0 and 1^T B M = 1^T by cyclic column
/// updates. Column f is replaced by the better of the max and min LP
/// solutions of the cofactor objective a^T x; ties go to the max branch and
/// an already feasible column is kept unless strictly improved, so |det M|
/// never decreases once every column is feasible (from the second sweep on).
/// Starts from M = I.
MixingMatrix maximize_mixing_determinant(const Eigen::MatrixXd& b, const AnchorFreeOptions& opts,
                                         SolverReport& report);

/// Full pipeline: square-root factor of P, determinant maximization,
/// C = B M with cleanup, E recovered from C and P.
AnchorFreeResult anchor_free_factorize(const CooccurrenceMatrix& p, Index f,
                                       const AnchorFreeOptions& opts = {},
                                       Warnings* warnings = nullptr);

struct RecoveredCorrelation {
  Eigen::MatrixXd e;
  double gram_condition = 0.0;
};

/// E = (C^T C)^{-1} C^T P C (C^T C)^{-1}, symmetrized. Throws NumericalError
/// ("degenerate topics") when C^T C is singular to within 1e-12 relative.
RecoveredCorrelation recover_e(const Eigen::MatrixXd& c, const CooccurrenceMatrix& p);

}  // namespace anchorfree
