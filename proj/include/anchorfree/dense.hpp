#pragma once

#include <Eigen/Core>

#include "anchorfree/errors.hpp"

namespace anchorfree {

/// LU with partial pivoting. An exactly zero pivot column yields 0.
double determinant(const Eigen::MatrixXd& m);

/// Cofactors of column `col` (0-based): a_k = (-1)^{col+k} det(M without row k
/// and column col), so that a^T M(:, col) == det(M).
Eigen::VectorXd cofactor_vector(const Eigen::MatrixXd& m, Index col);

}  // namespace anchorfree
