#include "anchorfree/anchorfree.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include <Eigen/Dense>

#include "anchorfree/dense.hpp"
#include "anchorfree/linprog.hpp"
#include "anchorfree/rng.hpp"

namespace anchorfree {

std::string to_string(Method m) {
  switch (m) {
    case Method::AnchorFree: return "anchorfree";
    case Method::SpaRecover: return "spa";
  }
  return "unknown";
}

Method method_from_string(const std::string& name) {
  if (name == "anchorfree") return Method::AnchorFree;
  if (name == "spa") return Method::SpaRecover;
  throw ConfigError("unknown method \"" + name + "\" (expected anchorfree or spa)");
}

double clean_topic_columns(Eigen::MatrixXd& c) {
  const double worst = c.size() == 0 ? 0.0 : std::min(0.0, c.minCoeff());
  c = c.cwiseMax(0.0);
  for (Index j = 0; j < c.cols(); ++j) {
    const double sum = c.col(j).sum();
    if (sum > 0.0) c.col(j) /= sum;
  }
  return worst;
}

namespace {

// The cofactor vector of column `col` vanishes exactly when the remaining
// columns are dependent. Judged on unit-normalized columns, since the columns
// of M differ in scale by the spread of sqrt(eigenvalues).
bool others_rank_deficient(const Eigen::MatrixXd& m, Index col) {
  const Index f = m.cols();
  if (f == 1) return false;
  Eigen::MatrixXd others(f, f - 1);
  for (Index j = 0, k = 0; j < f; ++j) {
    if (j == col) continue;
    const double norm = m.col(j).norm();
    if (norm == 0.0) return true;
    others.col(k++) = m.col(j) / norm;
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(others);
  const auto& sv = svd.singularValues();
  return sv[sv.size() - 1] <= 1e-12 * sv[0];
}

}  // namespace

MixingMatrix maximize_mixing_determinant(const Eigen::MatrixXd& b, const AnchorFreeOptions& opts,
                                         SolverReport& report) {
  const Index f = b.cols();
  if (f < 1) throw Error("need at least one topic");
  const LpSolver solver(b, b.transpose() * Eigen::VectorXd::Ones(b.rows()));
  CounterRng rng(opts.seed, 0xc01);

  MixingMatrix mix{Eigen::MatrixXd::Identity(f, f)};
  Eigen::MatrixXd& m = mix.m;
  const double feasible_tol = 1e-9;
  int consecutive_zero = 0;
  double previous_det = std::numeric_limits<double>::quiet_NaN();

  for (int sweep = 1; sweep <= opts.max_sweeps; ++sweep) {
    report.sweeps = sweep;
    for (Index col = 0; col < f; ++col) {
      const Eigen::VectorXd a = cofactor_vector(m, col);
      try {
        if (a.norm() == 0.0 || others_rank_deficient(m, col)) {
          // The other columns are rank deficient; the objective is flat.
          if (++consecutive_zero > opts.retries)
            throw NumericalError("cofactor vector vanished " + std::to_string(consecutive_zero) +
                                 " times in a row at column " + std::to_string(col + 1));
          Eigen::VectorXd direction(f);
          for (Index k = 0; k < f; ++k) direction[k] = rng.normal();
          m.col(col) = solver.solve(direction, LpSense::Max).x;
          ++report.lp_calls;
          ++report.reinitializations;
          report.det_trajectory.push_back(std::abs(determinant(m)));
          continue;
        }
        consecutive_zero = 0;

        const Eigen::VectorXd current = m.col(col);
        const bool current_feasible = solver.infeasibility(current) <= feasible_tol;
        const std::optional<Eigen::VectorXd> warm =
            current_feasible ? std::optional<Eigen::VectorXd>(current) : std::nullopt;
        const LpSolution hi = solver.solve(a, LpSense::Max, warm);
        const LpSolution lo = solver.solve(a, LpSense::Min, warm);
        report.lp_calls += 2;
        const LpSolution& best = std::abs(hi.value) >= std::abs(lo.value) ? hi : lo;
        if (!current_feasible || std::abs(a.dot(best.x)) > std::abs(a.dot(current)))
          m.col(col) = best.x;
        report.det_trajectory.push_back(std::abs(a.dot(m.col(col))));
      } catch (const LpInfeasibleError& e) {
        throw LpInfeasibleError("column " + std::to_string(col + 1) + ": " + e.what());
      } catch (const LpUnboundedError& e) {
        throw LpUnboundedError("column " + std::to_string(col + 1) + ": " + e.what());
      }
    }
    const double det = report.det_trajectory.back();
    if (sweep >= 2 && std::abs(det - previous_det) <= opts.tol * std::max(det, 1e-300)) {
      report.converged = true;
      break;
    }
    previous_det = det;
  }
  return mix;
}

RecoveredCorrelation recover_e(const Eigen::MatrixXd& c, const CooccurrenceMatrix& p) {
  if (c.rows() != p.n_words()) throw Error("C and P have different vocabulary sizes");
  const Eigen::MatrixXd gram = c.transpose() * c;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  const double hi = eig.eigenvalues().maxCoeff();
  const double lo = eig.eigenvalues().minCoeff();
  if (!(hi > 0.0) || lo <= 1e-12 * hi)
    throw NumericalError("degenerate topics: C^T C is singular (eigenvalues " +
                         std::to_string(lo) + " .. " + std::to_string(hi) + ")");
  RecoveredCorrelation out;
  out.gram_condition = hi / lo;
  const Eigen::LDLT<Eigen::MatrixXd> solve(gram);
  const Eigen::MatrixXd middle = c.transpose() * p.multiply(c);
  const Eigen::MatrixXd left = solve.solve(middle);                          // G^-1 C^T P C
  const Eigen::MatrixXd e = solve.solve(Eigen::MatrixXd(left.transpose()));  // G^-1 (..)^T
  out.e = 0.5 * (e + e.transpose());
  return out;
}

AnchorFreeResult anchor_free_factorize(const CooccurrenceMatrix& p, Index f,
                                       const AnchorFreeOptions& opts, Warnings* warnings) {
  const auto start = std::chrono::steady_clock::now();
  if (f < 1) throw ConfigError("number of topics must be at least 1");
  if (f > p.n_words())
    throw ConfigError("number of topics " + std::to_string(f) + " exceeds vocabulary size " +
                      std::to_string(p.n_words()));

  AnchorFreeResult out;
  SqrtFactorOptions eig = opts.eigen;
  eig.seed = opts.seed;
  SqrtFactor factor = sqrt_factor(p, f, eig);
  out.report.sqrt_residual = factor.residual;
  out.report.eigenvalues = factor.eigenvalues;
  out.report.next_eigenvalue = factor.next_eigenvalue;

  const double lambda_f = factor.eigenvalues[f - 1];
  if (std::isfinite(factor.next_eigenvalue) &&
      factor.next_eigenvalue > opts.rank_ratio * lambda_f) {
    std::ostringstream msg;
    msg << "P does not look rank " << f << ": eigenvalue " << f + 1 << " = "
        << factor.next_eigenvalue << " vs eigenvalue " << f << " = " << lambda_f;
    if (opts.strict_rank) throw NumericalError(msg.str());
    warn(warnings, msg.str());
  }

  out.mixing = maximize_mixing_determinant(factor.b, opts, out.report);

  Eigen::MatrixXd c = factor.b * out.mixing.m;
  out.report.worst_negative = clean_topic_columns(c);
  if (out.report.worst_negative < -opts.negative_tol) {
    std::ostringstream msg;
    msg << "C = B M has entries down to " << out.report.worst_negative
        << "; the topics may not be sufficiently scattered or P is not rank " << f;
    warn(warnings, msg.str());
  }
  RecoveredCorrelation e = recover_e(c, p);
  out.report.gram_condition = e.gram_condition;
  out.model = TopicModel{std::move(c), std::move(e.e), Method::AnchorFree};
  out.b = std::move(factor.b);
  out.report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace anchorfree
