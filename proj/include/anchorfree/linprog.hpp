#pragma once

#include <optional>

#include <Eigen/Core>

#include "anchorfree/errors.hpp"

namespace anchorfree {

enum class LpSense { Max, Min };

/// optimize a^T x  subject to  B x >= 0,  s^T x = 1,  x free.
/// With s = B^T 1 the feasible set is the preimage under B of the unit
/// simplex, which is how the column subproblems of the mixing matrix look.
struct LpProblem {
  Eigen::VectorXd objective;    // a, length F
  Eigen::MatrixXd constraints;  // B, V x F
  Eigen::VectorXd normalizer;   // s, length F
  LpSense sense = LpSense::Max;

  /// Sets s = B^T 1.
  static LpProblem simplex_preimage(Eigen::MatrixXd b, Eigen::VectorXd a, LpSense sense);
};

struct LpSolution {
  Eigen::VectorXd x;
  double value = 0.0;
  Index pivots = 0;
};

struct LpOptions {
  double feasibility_tol = 1e-9;
  /// 0 selects 50 (V + F).
  Index max_pivots = 0;
};

/// Active-set (inequality-form revised) simplex for the problem above. The
/// basis is the equality row plus F-1 active rows of B, refactored at every
/// pivot; Bland's rule chooses both the leaving and the entering row. A
/// feasible vertex is found by a phase-1 problem unless `warm_start` is
/// feasible, in which case the search starts there.
///
/// Rows of B whose norm is below 1e-10 of the largest row norm are dropped:
/// they carry roundoff only (zero rows of P) and would otherwise enter a
/// basis and make it singular.
class LpSolver {
 public:
  LpSolver(const Eigen::MatrixXd& b, Eigen::VectorXd normalizer, LpOptions opts = {});

  LpSolution solve(const Eigen::VectorXd& objective, LpSense sense,
                   const std::optional<Eigen::VectorXd>& warm_start = std::nullopt) const;

  /// max_i violation of B x >= 0 and |s^T x - 1|.
  double infeasibility(const Eigen::VectorXd& x) const;

 private:
  Eigen::MatrixXd b_;
  Eigen::VectorXd s_;
  LpOptions opts_;
};

/// Throws LpInfeasibleError when the feasible set is empty and
/// LpUnboundedError when the objective is unbounded or no vertex exists.
LpSolution solve_lp(const LpProblem& prob, const LpOptions& opts = {});

}  // namespace anchorfree
