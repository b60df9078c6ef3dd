#include "anchorfree/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Eigenvalues>

#include "anchorfree/rng.hpp"

namespace anchorfree {

namespace {

// Random unit vector orthogonal to the first `m` columns of q.
Eigen::VectorXd random_orthogonal_start(CounterRng& rng, const Eigen::MatrixXd& q, Index m) {
  const Index n = q.rows();
  for (int attempt = 0; attempt < 8; ++attempt) {
    Eigen::VectorXd v(n);
    for (Index i = 0; i < n; ++i) v[i] = rng.normal();
    for (int pass = 0; pass < 2; ++pass) {
      if (m > 0) v -= q.leftCols(m) * (q.leftCols(m).transpose() * v);
    }
    const double norm = v.norm();
    if (norm > 1e-8) return v / norm;
  }
  return Eigen::VectorXd::Zero(n);
}

}  // namespace

EigenPairs lanczos_top_eigenpairs(const CooccurrenceMatrix& p, Index k,
                                  const SqrtFactorOptions& opts) {
  const Index n = p.n_words();
  if (k < 1 || k > n) throw Error("requested " + std::to_string(k) + " eigenpairs of a " +
                                  std::to_string(n) + "x" + std::to_string(n) + " matrix");
  const Index max_steps =
      opts.max_iterations > 0 ? std::min(opts.max_iterations, n)
                              : std::min(n, std::max<Index>(300, 20 * k));

  CounterRng rng(opts.seed, 0x5eed);
  Eigen::MatrixXd q(n, std::max(max_steps, k));
  std::vector<double> alpha, beta;

  q.col(0) = random_orthogonal_start(rng, q, 0);
  double scale = 0.0;  // running estimate of |lambda|_max
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
  Index m = 0;
  bool converged = false;

  auto ritz_converged = [&](double last_beta) {
    Eigen::VectorXd d = Eigen::Map<Eigen::VectorXd>(alpha.data(), m);
    Eigen::VectorXd e(std::max<Index>(m - 1, 0));
    for (Index i = 0; i + 1 < m; ++i) e[i] = beta[i];
    tri.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
    if (m < k) return false;
    const auto& theta = tri.eigenvalues();
    scale = std::max(scale, theta.cwiseAbs().maxCoeff());
    for (Index i = 0; i < k; ++i) {
      const Index idx = m - 1 - i;  // ascending order
      const double res = std::abs(last_beta * tri.eigenvectors()(m - 1, idx));
      if (res > opts.tol * std::max(scale, std::numeric_limits<double>::min())) return false;
    }
    return true;
  };

  while (m < max_steps) {
    Eigen::VectorXd w = p.multiply(q.col(m));
    const double a = q.col(m).dot(w);
    w -= a * q.col(m);
    if (m > 0) w -= beta[m - 1] * q.col(m - 1);
    for (int pass = 0; pass < 2; ++pass)
      w -= q.leftCols(m + 1) * (q.leftCols(m + 1).transpose() * w);
    alpha.push_back(a);
    ++m;
    double b = w.norm();
    scale = std::max(scale, std::abs(a));

    const bool breakdown = b <= 1e-13 * std::max(scale, std::numeric_limits<double>::min());
    const bool check = breakdown || m == max_steps || (m >= k && (m <= 60 || m % 10 == 0));
    if (check && ritz_converged(breakdown ? 0.0 : b)) {
      converged = true;
      break;
    }
    if (m == max_steps) break;
    if (breakdown) {
      // Invariant subspace found; continue in its orthogonal complement.
      q.col(m) = random_orthogonal_start(rng, q, m);
      if (q.col(m).squaredNorm() == 0.0) break;
      beta.push_back(0.0);
    } else {
      q.col(m) = w / b;
      beta.push_back(b);
    }
  }
  if (!converged) {
    if (m == n) {
      // The basis spans the whole space, so T is exactly similar to P.
      ritz_converged(0.0);
      converged = true;
    } else {
      ritz_converged(0.0);
      const Index got = std::min(k, m);
      Eigen::VectorXd partial = tri.eigenvalues().tail(got).reverse();
      throw EigenNonConvergence("Lanczos did not converge in " + std::to_string(m) + " steps",
                                std::move(partial));
    }
  }

  EigenPairs out;
  out.steps = m;
  out.values.resize(k);
  out.vectors.resize(n, k);
  for (Index i = 0; i < k; ++i) {
    const Index idx = m - 1 - i;
    out.values[i] = tri.eigenvalues()[idx];
    Eigen::VectorXd v = q.leftCols(m) * tri.eigenvectors().col(idx);
    v.normalize();
    Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v[arg] < 0) v = -v;
    out.vectors.col(i) = v;
  }
  return out;
}

SqrtFactor sqrt_factor(const CooccurrenceMatrix& p, Index f, const SqrtFactorOptions& opts) {
  const Index n = p.n_words();
  if (f < 1 || f > n)
    throw Error("rank " + std::to_string(f) + " is out of range for V=" + std::to_string(n));
  const Index k = std::min(f + 1, n);
  EigenPairs pairs = lanczos_top_eigenpairs(p, k, opts);

  SqrtFactor out;
  out.lanczos_steps = pairs.steps;
  out.next_eigenvalue = k > f ? pairs.values[f] : std::numeric_limits<double>::quiet_NaN();
  const double lambda_max = std::max(pairs.values[0], 0.0);
  const double floor = -opts.clamp_tol * lambda_max;
  Index negatives = 0;
  out.eigenvalues.resize(f);
  for (Index i = 0; i < f; ++i) {
    const double lambda = pairs.values[i];
    if (lambda < floor || (lambda < 0 && lambda_max == 0.0)) ++negatives;
    out.eigenvalues[i] = std::max(lambda, 0.0);
  }
  if (negatives > 0)
    throw NumericalError("input far from PSD: " + std::to_string(negatives) + " of the top " +
                         std::to_string(f) + " eigenvalues are negative beyond tolerance");

  out.b = pairs.vectors.leftCols(f) * out.eigenvalues.cwiseSqrt().asDiagonal();

  const double p_norm2 = p.squared_norm();
  if (p_norm2 == 0.0) {
    out.residual = 0.0;
  } else if (n <= 4096) {
    Eigen::MatrixXd diff = p.dense();
    diff.noalias() -= out.b * out.b.transpose();
    out.residual = diff.norm() / std::sqrt(p_norm2);
  } else {
    // ||P - BB^T||^2 = ||P||^2 - 2 tr(B^T P B) + ||B^T B||^2
    const Eigen::MatrixXd pb = p.multiply(out.b);
    const double cross = (out.b.transpose() * pb).trace();
    const double gram = (out.b.transpose() * out.b).squaredNorm();
    out.residual = std::sqrt(std::max(0.0, p_norm2 - 2.0 * cross + gram) / p_norm2);
  }
  return out;
}

}  // namespace anchorfree
