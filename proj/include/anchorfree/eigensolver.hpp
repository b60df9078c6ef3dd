#pragma once

#include <cstdint>

#include <Eigen/Core>

#include "anchorfree/cooccur.hpp"

namespace anchorfree {

struct SqrtFactorOptions {
  /// Ritz pairs count as converged once ||P u - theta u|| <= tol * |theta_max|.
  double tol = 1e-11;
  /// Eigenvalues in (-clamp_tol * lambda_max, 0) are set to zero; anything
  /// more negative among the requested pairs aborts.
  double clamp_tol = 1e-8;
  std::uint64_t seed = 0;
  /// Lanczos step cap; 0 selects min(V, max(300, 20 f)).
  Index max_iterations = 0;
};

/// B with B B^T ~= P from the top-f eigenpairs of P.
struct SqrtFactor {
  Eigen::MatrixXd b;
  /// Descending, clamped to >= 0.
  Eigen::VectorXd eigenvalues;
  /// Eigenvalue f+1 before clamping, NaN when f == V.
  double next_eigenvalue = 0.0;
  /// ||B B^T - P||_F / ||P||_F (0 when P == 0).
  double residual = 0.0;
  Index lanczos_steps = 0;
};

/// Largest-algebraic eigenpairs of a symmetric operator by Lanczos with full
/// reorthogonalization. Eigenvectors are sign-normalized so that their
/// largest-magnitude entry is positive.
struct EigenPairs {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXd vectors;  // n x k, orthonormal
  Index steps = 0;
};
EigenPairs lanczos_top_eigenpairs(const CooccurrenceMatrix& p, Index k,
                                  const SqrtFactorOptions& opts = {});

SqrtFactor sqrt_factor(const CooccurrenceMatrix& p, Index f, const SqrtFactorOptions& opts = {});

}  // namespace anchorfree
