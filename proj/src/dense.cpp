#include "anchorfree/dense.hpp"

#include <cmath>
#include <utility>

namespace anchorfree {

double determinant(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw Error("determinant of a non-square matrix");
  Eigen::MatrixXd lu = m;
  const Index n = lu.rows();
  double det = 1.0;
  for (Index k = 0; k < n; ++k) {
    Index pivot = k;
    for (Index i = k + 1; i < n; ++i)
      if (std::abs(lu(i, k)) > std::abs(lu(pivot, k))) pivot = i;
    if (lu(pivot, k) == 0.0) return 0.0;
    if (pivot != k) {
      lu.row(k).swap(lu.row(pivot));
      det = -det;
    }
    det *= lu(k, k);
    for (Index i = k + 1; i < n; ++i) {
      const double factor = lu(i, k) / lu(k, k);
      lu.block(i, k + 1, 1, n - k - 1) -= factor * lu.block(k, k + 1, 1, n - k - 1);
    }
  }
  return det;
}

Eigen::VectorXd cofactor_vector(const Eigen::MatrixXd& m, Index col) {
  const Index n = m.rows();
  if (m.cols() != n) throw Error("cofactor expansion of a non-square matrix");
  if (col < 0 || col >= n) throw Error("cofactor column out of range");
  Eigen::VectorXd a(n);
  Eigen::MatrixXd minor(n - 1, n - 1);
  for (Index k = 0; k < n; ++k) {
    for (Index i = 0, mi = 0; i < n; ++i) {
      if (i == k) continue;
      for (Index j = 0, mj = 0; j < n; ++j) {
        if (j == col) continue;
        minor(mi, mj++) = m(i, j);
      }
      ++mi;
    }
    const double sign = ((k + col) % 2 == 0) ? 1.0 : -1.0;
    a[k] = sign * determinant(minor);
  }
  return a;
}

}  // namespace anchorfree
