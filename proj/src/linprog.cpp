#include "anchorfree/linprog.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "anchorfree/rng.hpp"

namespace anchorfree {

namespace {

constexpr double kDirectionTol = 1e-12;
constexpr double kMultiplierTol = 1e-11;

struct Step {
  Index row = -1;
  double length = std::numeric_limits<double>::infinity();
};

// maximize c^T z  s.t.  G z >= -h,  e^T z = 1,  starting from a feasible z.
// h is a tiny positive perturbation: without it a vertex where hundreds of
// rows bind (zero entries of a topic column) stalls Bland's rule across an
// astronomical number of equivalent bases. The working set always contains
// the equality row; inequality rows enter when a step hits them and leave on
// a positive multiplier. Multipliers do not depend on h, so the optimal basis
// of the perturbed problem is re-solved with h = 0 at the end.
class ActiveSet {
 public:
  ActiveSet(const Eigen::MatrixXd& g, const Eigen::VectorXd& e, Eigen::VectorXd h,
            Index max_pivots)
      : g_(g), e_(e), h_(std::move(h)), row_norm_(g.rowwise().norm()), max_pivots_(max_pivots),
        in_working_(static_cast<std::size_t>(g.rows()), 0) {}

  // Returns the unperturbed vertex of the final basis.
  Eigen::VectorXd maximize(const Eigen::VectorXd& c, Eigen::VectorXd z) {
    const Index n = g_.cols();
    const double c_norm = c.norm();
    for (;;) {
      if (++pivots_ > max_pivots_)
        throw NumericalError("LP pivot limit (" + std::to_string(max_pivots_) + ") exceeded");

      if (static_cast<Index>(working_.size()) + 1 < n) {
        // Not yet at a vertex: move inside the face until a new row binds.
        const Eigen::MatrixXd a = basis();
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(a.transpose());
        const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
        const Eigen::MatrixXd null = q.rightCols(n - a.rows());
        Eigen::VectorXd d = null * (null.transpose() * c);
        const bool improving = c_norm > 0 && d.norm() > kDirectionTol * c_norm;
        if (!improving) d = null.col(0);
        Step step = ratio_test(d, z);
        if (step.row < 0) {
          if (improving) throw LpUnboundedError("LP objective is unbounded");
          d = -d;
          step = ratio_test(d, z);
          if (step.row < 0) throw LpUnboundedError("LP feasible set contains a line; no vertex");
        }
        z += step.length * d;
        working_.push_back(step.row);
        in_working_[step.row] = 1;
        continue;
      }

      const Eigen::MatrixXd a = basis();
      const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
      // Recompute the vertex from its defining rows so steps never drift.
      z = lu.solve(rhs(true));
      const Eigen::VectorXd y = lu.transpose().solve(c);

      // Bland: the lowest-indexed row with a positive multiplier leaves.
      Index leave = -1;
      for (std::size_t k = 0; k < working_.size(); ++k) {
        const Index row = working_[k];
        if (y[static_cast<Index>(k) + 1] * row_norm_[row] > kMultiplierTol * c_norm &&
            (leave < 0 || row < working_[leave]))
          leave = static_cast<Index>(k);
      }
      if (leave < 0) return lu.solve(rhs(false));

      const Eigen::VectorXd d = lu.solve(Eigen::VectorXd::Unit(n, leave + 1));
      const Step step = ratio_test(d, z);
      if (step.row < 0) throw LpUnboundedError("LP objective is unbounded");
      z += step.length * d;
      in_working_[working_[leave]] = 0;
      working_[leave] = step.row;
      in_working_[step.row] = 1;
    }
  }

  Index pivots() const { return pivots_; }

 private:
  Eigen::MatrixXd basis() const {
    Eigen::MatrixXd a(static_cast<Index>(working_.size()) + 1, g_.cols());
    a.row(0) = e_.transpose();
    for (std::size_t k = 0; k < working_.size(); ++k)
      a.row(static_cast<Index>(k) + 1) = g_.row(working_[k]);
    return a;
  }

  Eigen::VectorXd rhs(bool perturbed) const {
    Eigen::VectorXd r = Eigen::VectorXd::Zero(static_cast<Index>(working_.size()) + 1);
    r[0] = 1.0;
    if (perturbed)
      for (std::size_t k = 0; k < working_.size(); ++k)
        r[static_cast<Index>(k) + 1] = -h_[working_[k]];
    return r;
  }

  // Longest step along d keeping every row outside the working set feasible;
  // ties go to the lowest row index.
  Step ratio_test(const Eigen::VectorXd& d, const Eigen::VectorXd& z) const {
    const Eigen::VectorXd gd = g_ * d;
    const Eigen::VectorXd slack = g_ * z + h_;
    const double d_norm = d.norm();
    Step best;
    for (Index i = 0; i < g_.rows(); ++i) {
      if (in_working_[i]) continue;
      if (gd[i] < -kDirectionTol * row_norm_[i] * d_norm) {
        const double t = std::max(0.0, slack[i]) / -gd[i];
        if (t < best.length) best = {i, t};
      }
    }
    return best;
  }

  const Eigen::MatrixXd& g_;
  const Eigen::VectorXd& e_;
  Eigen::VectorXd h_;
  Eigen::VectorXd row_norm_;
  Index max_pivots_;
  Index pivots_ = 0;
  std::vector<Index> working_;
  std::vector<char> in_working_;
};

// Deterministic h_i in scale * |g_i| * [0.5, 1.5).
Eigen::VectorXd perturbation(const Eigen::MatrixXd& g, double scale, std::uint64_t stream) {
  CounterRng rng(0x1b9e, stream);
  Eigen::VectorXd h(g.rows());
  for (Index i = 0; i < g.rows(); ++i) h[i] = scale * g.row(i).norm() * (0.5 + rng.uniform());
  return h;
}

constexpr double kPerturbation = 1e-9;
constexpr int kPerturbationAttempts = 3;

}  // namespace

LpProblem LpProblem::simplex_preimage(Eigen::MatrixXd b, Eigen::VectorXd a, LpSense sense) {
  LpProblem p;
  p.normalizer = b.transpose() * Eigen::VectorXd::Ones(b.rows());
  p.constraints = std::move(b);
  p.objective = std::move(a);
  p.sense = sense;
  return p;
}

LpSolver::LpSolver(const Eigen::MatrixXd& b, Eigen::VectorXd normalizer, LpOptions opts)
    : s_(std::move(normalizer)), opts_(opts) {
  if (b.cols() < 1 || b.rows() < 1) throw Error("LP needs at least one variable and one row");
  const Eigen::VectorXd norms = b.rowwise().norm();
  const double keep_above = 1e-10 * norms.maxCoeff();
  Index kept = 0;
  for (Index i = 0; i < b.rows(); ++i) kept += norms[i] > keep_above;
  if (kept == 0) throw Error("LP constraint matrix is zero");
  b_.resize(kept, b.cols());
  for (Index i = 0, r = 0; i < b.rows(); ++i)
    if (norms[i] > keep_above) b_.row(r++) = b.row(i);
  if (s_.size() != b_.cols()) throw Error("LP normalizer length does not match B");
  if (opts_.max_pivots <= 0) opts_.max_pivots = 50 * (b_.rows() + b_.cols());
}

double LpSolver::infeasibility(const Eigen::VectorXd& x) const {
  const double eq = std::abs(s_.dot(x) - 1.0);
  const double ineq = std::max(0.0, -(b_ * x).minCoeff());
  return std::max(eq, ineq);
}

LpSolution LpSolver::solve(const Eigen::VectorXd& objective, LpSense sense,
                           const std::optional<Eigen::VectorXd>& warm_start) const {
  const Index n = b_.cols();
  if (objective.size() != n) throw Error("LP objective length does not match B");
  if (s_.squaredNorm() == 0.0) throw LpInfeasibleError("LP normalizer is zero; s^T x = 1 is infeasible");

  LpSolution out;
  Eigen::VectorXd start;
  bool have_start = false;
  if (warm_start && warm_start->size() == n) {
    const double mass = s_.dot(*warm_start);
    if (mass > 0) {
      start = *warm_start / mass;
      have_start = infeasibility(start) <= opts_.feasibility_tol;
    }
  }
  const Eigen::VectorXd c = sense == LpSense::Max ? objective : Eigen::VectorXd(-objective);

  double scale = kPerturbation;
  for (int attempt = 0; attempt < kPerturbationAttempts; ++attempt, scale *= 1e-3) {
    Eigen::VectorXd x = have_start ? start : Eigen::VectorXd(s_ / s_.squaredNorm());
    const double z_scale = x.norm();
    const double lift = std::max(0.0, -(b_ * x).minCoeff());
    if (lift > 0.0) {
      // Phase 1: (x, t) with B x + t 1 >= 0, t >= 0, s^T x = 1; maximize -t.
      Eigen::MatrixXd g(b_.rows() + 1, n + 1);
      g.topLeftCorner(b_.rows(), n) = b_;
      g.topRightCorner(b_.rows(), 1).setOnes();
      g.bottomRows(1).setZero();
      g(b_.rows(), n) = 1.0;
      Eigen::VectorXd e = Eigen::VectorXd::Zero(n + 1);
      e.head(n) = s_;
      Eigen::VectorXd c1 = Eigen::VectorXd::Zero(n + 1);
      c1[n] = -1.0;
      Eigen::VectorXd z(n + 1);
      z << x, lift;
      ActiveSet phase1(g, e, perturbation(g, scale * std::max(z_scale, lift), 2 * attempt),
                       opts_.max_pivots);
      z = phase1.maximize(c1, z);
      out.pivots += phase1.pivots();
      if (z[n] > opts_.feasibility_tol)
        throw LpInfeasibleError("LP feasible set {Bx >= 0, s^T x = 1} is empty");
      x = z.head(n);
    }

    ActiveSet phase2(b_, s_, perturbation(b_, scale * std::max(z_scale, x.norm()), 2 * attempt + 1),
                     opts_.max_pivots);
    out.x = phase2.maximize(c, x);
    out.pivots += phase2.pivots();
    if (infeasibility(out.x) <= opts_.feasibility_tol) {
      out.value = objective.dot(out.x);
      return out;
    }
  }
  throw NumericalError("LP vertex stays infeasible (" + std::to_string(infeasibility(out.x)) +
                       ") after removing the anti-degeneracy perturbation");
}

LpSolution solve_lp(const LpProblem& prob, const LpOptions& opts) {
  LpSolver solver(prob.constraints, prob.normalizer, opts);
  return solver.solve(prob.objective, prob.sense);
}

}  // namespace anchorfree
