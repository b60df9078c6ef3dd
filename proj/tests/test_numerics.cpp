#include <cmath>
#include <random>

#include <doctest.h>

#include "anchorfree/numerics.hpp"
#include "anchorfree/rng.hpp"
#include "oracles.hpp"

using namespace anchorfree;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

CooccurrenceMatrix as_cooccurrence(const MatrixXd& p) {
  return CooccurrenceMatrix::from_upper(p, Estimator::Exact);
}

MatrixXd random_matrix(std::mt19937& gen, Index r, Index c) {
  std::normal_distribution<double> n(0.0, 1.0);
  MatrixXd m(r, c);
  for (Index j = 0; j < c; ++j)
    for (Index i = 0; i < r; ++i) m(i, j) = n(gen);
  return m;
}

// Columns up to sign.
bool equal_up_to_sign(const VectorXd& a, const VectorXd& b, double tol) {
  return (a - b).norm() <= tol || (a + b).norm() <= tol;
}

}  // namespace

TEST_CASE("sqrt_factor diagonal and rank-1 cases") {
  MatrixXd d = MatrixXd::Zero(2, 2);
  d(0, 0) = 4.0;
  d(1, 1) = 1.0;
  const SqrtFactor s = sqrt_factor(as_cooccurrence(d), 2);
  CHECK(equal_up_to_sign(s.b.col(0), VectorXd::Unit(2, 0) * 2.0, 1e-12));
  CHECK(equal_up_to_sign(s.b.col(1), VectorXd::Unit(2, 1), 1e-12));
  CHECK(s.residual <= 1e-14);

  const SqrtFactor ones = sqrt_factor(as_cooccurrence(MatrixXd::Ones(2, 2)), 1);
  CHECK(ones.eigenvalues[0] == doctest::Approx(2.0));
  CHECK(equal_up_to_sign(ones.b.col(0), VectorXd::Ones(2), 1e-12));
}

TEST_CASE("sqrt_factor reconstructs an exact-rank PSD matrix") {
  std::mt19937 gen(17);
  for (Index f : {1, 3, 8}) {
    const MatrixXd g = random_matrix(gen, 60, f);
    const MatrixXd p = g * g.transpose();
    const SqrtFactor s = sqrt_factor(as_cooccurrence(p), f);
    const double actual = (s.b * s.b.transpose() - p).norm() / p.norm();
    CHECK(actual <= 1e-8);
    CHECK(actual <= s.residual * (1 + 1e-6) + 1e-15);
    const MatrixXd btb = s.b.transpose() * s.b;
    CHECK((btb - MatrixXd(btb.diagonal().asDiagonal())).norm() <= 1e-10 * btb.norm());
    const VectorXd expected = oracle::top_eigenvalues(p, f);
    CHECK((s.eigenvalues - expected).norm() <= 1e-9 * expected.norm());
  }
}

TEST_CASE("sqrt_factor eigenvalues match a dense eigensolver on an indefinite-free spectrum") {
  std::mt19937 gen(3);
  const MatrixXd g = random_matrix(gen, 40, 40);
  const MatrixXd p = g * g.transpose();
  const SqrtFactor s = sqrt_factor(as_cooccurrence(p), 6);
  const VectorXd expected = oracle::top_eigenvalues(p, 6);
  CHECK((s.eigenvalues - expected).norm() <= 1e-9 * expected.norm());
  CHECK(s.next_eigenvalue == doctest::Approx(oracle::top_eigenvalues(p, 7)[6]).epsilon(1e-8));
}

TEST_CASE("sqrt_factor is deterministic for a fixed seed") {
  std::mt19937 gen(9);
  const MatrixXd g = random_matrix(gen, 50, 4);
  const CooccurrenceMatrix p = as_cooccurrence(g * g.transpose());
  SqrtFactorOptions opts;
  opts.seed = 42;
  CHECK(sqrt_factor(p, 4, opts).b == sqrt_factor(p, 4, opts).b);
}

TEST_CASE("sqrt_factor rejects a matrix far from PSD") {
  MatrixXd p = MatrixXd::Zero(4, 4);
  p.diagonal() << 1.0, -1.0, -1.0, -1.0;
  CHECK_THROWS_AS(sqrt_factor(as_cooccurrence(p), 4), NumericalError);
}

TEST_CASE("solve_lp examples") {
  SUBCASE("unit simplex, max") {
    const LpSolution s = solve_lp(
        LpProblem::simplex_preimage(MatrixXd::Identity(2, 2), VectorXd{{1.0, -1.0}}, LpSense::Max));
    CHECK(s.x.isApprox(VectorXd{{1.0, 0.0}}));
    CHECK(s.value == doctest::Approx(1.0));
  }
  SUBCASE("unit simplex, min") {
    const LpSolution s = solve_lp(
        LpProblem::simplex_preimage(MatrixXd::Identity(2, 2), VectorXd{{1.0, -1.0}}, LpSense::Min));
    CHECK(s.x.isApprox(VectorXd{{0.0, 1.0}}));
    CHECK(s.value == doctest::Approx(-1.0));
  }
  SUBCASE("redundant third row") {
    const MatrixXd b{{1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}};
    const LpSolution s =
        solve_lp(LpProblem::simplex_preimage(b, VectorXd{{1.0, 0.0}}, LpSense::Max));
    CHECK(s.x.isApprox(VectorXd{{0.5, 0.0}}));
    CHECK(s.value == doctest::Approx(0.5));
  }
}

TEST_CASE("solve_lp reports infeasible and unbounded problems") {
  // x1 >= 0, -x1 >= 0 and x1 = 1 cannot all hold.
  LpProblem infeasible;
  infeasible.constraints = MatrixXd{{1.0}, {-1.0}};
  infeasible.normalizer = VectorXd{{1.0}};
  infeasible.objective = VectorXd{{1.0}};
  CHECK_THROWS_AS(solve_lp(infeasible), LpInfeasibleError);

  // x2 is unconstrained beyond x1 = 1.
  LpProblem unbounded;
  unbounded.constraints = MatrixXd{{1.0, 0.0}};
  unbounded.normalizer = VectorXd{{1.0, 0.0}};
  unbounded.objective = VectorXd{{0.0, 1.0}};
  CHECK_THROWS_AS(solve_lp(unbounded), LpUnboundedError);
}

TEST_CASE("solve_lp agrees with vertex enumeration on random problems") {
  std::mt19937 gen(2024);
  std::uniform_int_distribution<int> pick_f(1, 3);
  std::uniform_int_distribution<int> pick_v(3, 9);
  int compared = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Index f = pick_f(gen);
    const Index v = std::max<Index>(f, pick_v(gen));
    // Rows of B = C^T-like mixtures keep the region bounded: B = C G with C
    // nonnegative and G invertible.
    std::uniform_real_distribution<double> u(0.0, 1.0);
    MatrixXd c(v, f);
    for (Index j = 0; j < f; ++j)
      for (Index i = 0; i < v; ++i) c(i, j) = u(gen);
    c.topRows(f) += MatrixXd::Identity(f, f);
    const MatrixXd b = c * random_matrix(gen, f, f);
    const VectorXd a = random_matrix(gen, f, 1).col(0);
    const LpSense sense = trial % 2 ? LpSense::Max : LpSense::Min;
    const LpProblem prob = LpProblem::simplex_preimage(b, a, sense);
    const auto expected = oracle::lp_vertex_enumeration(b, prob.normalizer, a, sense == LpSense::Max);
    REQUIRE(expected.feasible);
    const LpSolution s = solve_lp(prob);
    CHECK(std::abs(s.value - expected.value) <= 1e-8 * std::max(1.0, std::abs(expected.value)));
    CHECK((b * s.x).minCoeff() >= -1e-9);
    CHECK(std::abs(prob.normalizer.dot(s.x) - 1.0) <= 1e-9);
    ++compared;
  }
  CHECK(compared == 300);
}

TEST_CASE("determinant examples") {
  CHECK(determinant(MatrixXd::Identity(3, 3)) == doctest::Approx(1.0));
  CHECK(determinant(MatrixXd{{1.0, 2.0}, {3.0, 4.0}}) == doctest::Approx(-2.0));
  const MatrixXd dup{{1.0, 1.0, 2.0}, {3.0, 3.0, 5.0}, {7.0, 7.0, 1.0}};
  CHECK(std::abs(determinant(dup)) <= 1e-12);
  CHECK(determinant(MatrixXd::Zero(3, 3)) == 0.0);
  CHECK(determinant(MatrixXd(0, 0)) == 1.0);
}

TEST_CASE("determinant matches permutation expansion") {
  std::mt19937 gen(1);
  for (int trial = 0; trial < 200; ++trial) {
    const Index f = 1 + trial % 5;
    const MatrixXd m = random_matrix(gen, f, f);
    const double expected = oracle::determinant(m);
    CHECK(std::abs(determinant(m) - expected) <= 1e-10 * std::max(std::abs(expected), 1e-300) +
                                                     1e-14 * std::pow(m.norm(), f));
  }
}

TEST_CASE("cofactor_vector examples") {
  CHECK(cofactor_vector(MatrixXd::Identity(2, 2), 0) == VectorXd{{1.0, 0.0}});
  const MatrixXd m{{1.0, 2.0}, {3.0, 4.0}};
  const VectorXd a0 = cofactor_vector(m, 0);
  CHECK(a0.isApprox(VectorXd{{4.0, -2.0}}));
  CHECK(a0.dot(m.col(0)) == doctest::Approx(-2.0));
  const VectorXd a1 = cofactor_vector(m, 1);
  CHECK(a1.isApprox(VectorXd{{-3.0, 1.0}}));
  CHECK(a1.dot(m.col(1)) == doctest::Approx(-2.0));
  CHECK(cofactor_vector(MatrixXd{{5.0}}, 0) == VectorXd{{1.0}});
}

TEST_CASE("cofactor identity on random matrices") {
  std::mt19937 gen(77);
  for (int trial = 0; trial < 200; ++trial) {
    const Index f = 1 + trial % 8;
    const MatrixXd m = random_matrix(gen, f, f);
    const Index col = trial % f;
    const double det = determinant(m);
    CHECK(std::abs(cofactor_vector(m, col).dot(m.col(col)) - det) <=
          1e-10 * std::max(std::abs(det), 1e-12));
    if (f <= 5) {
      // Each cofactor against the expansion oracle of its minor.
      const VectorXd a = cofactor_vector(m, col);
      for (Index k = 0; k < f; ++k) {
        MatrixXd minor(f - 1, f - 1);
        for (Index i = 0, r = 0; i < f; ++i) {
          if (i == k) continue;
          for (Index j = 0, c = 0; j < f; ++j) {
            if (j == col) continue;
            minor(r, c++) = m(i, j);
          }
          ++r;
        }
        const double expected = ((k + col) % 2 ? -1.0 : 1.0) * (f == 1 ? 1.0 : oracle::determinant(minor));
        CHECK(a[k] == doctest::Approx(expected).epsilon(1e-9).scale(1.0));
      }
    }
  }
}

TEST_CASE("hungarian examples") {
  const Assignment a = hungarian(MatrixXd{{0.0, 1.0}, {1.0, 0.0}});
  CHECK(a.perm == Permutation::identity(2));
  CHECK(a.total == 0.0);
  const Assignment b = hungarian(MatrixXd{{1.0, 2.0}, {2.0, 1.0}});
  CHECK(b.perm == Permutation::identity(2));
  CHECK(b.total == 2.0);
  const Assignment c = hungarian(MatrixXd::Ones(3, 3));
  CHECK(c.perm == Permutation::identity(3));
  CHECK(c.total == 3.0);
  const Assignment swap = hungarian(MatrixXd{{1.0, 0.0}, {0.0, 1.0}});
  CHECK(swap.perm.mapping() == std::vector<Index>{1, 0});
}

TEST_CASE("hungarian matches brute force") {
  std::mt19937 gen(5);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::uniform_int_distribution<int> small_int(0, 3);
  for (int trial = 0; trial < 300; ++trial) {
    const Index f = 1 + trial % 6;
    MatrixXd cost(f, f);
    // Every third trial uses small integers to force ties.
    for (Index j = 0; j < f; ++j)
      for (Index i = 0; i < f; ++i) cost(i, j) = trial % 3 ? u(gen) : small_int(gen);
    const auto expected = oracle::assignment(cost);
    const Assignment got = hungarian(cost);
    CHECK(got.total == doctest::Approx(expected.total).epsilon(1e-12));
    double recomputed = 0.0;
    for (Index i = 0; i < f; ++i) recomputed += cost(i, got.perm[i]);
    CHECK(recomputed == doctest::Approx(got.total).epsilon(1e-12));
    if (trial % 3 == 0) CHECK(got.perm.mapping() == expected.mapping);
  }
}

TEST_CASE("Permutation validates bijectivity") {
  CHECK_THROWS_AS(Permutation({0, 0}), Error);
  CHECK_THROWS_AS(Permutation({0, 2}), Error);
  const Permutation p({2, 0, 1});
  CHECK(p.inverse().mapping() == std::vector<Index>{1, 2, 0});
}

TEST_CASE("project_to_simplex") {
  CHECK(project_to_simplex(VectorXd{{0.2, 0.8}}).isApprox(VectorXd{{0.2, 0.8}}));
  CHECK(project_to_simplex(VectorXd{{2.0, 0.0}}).isApprox(VectorXd{{1.0, 0.0}}));
  CHECK(project_to_simplex(VectorXd{{1.0, 1.0, 1.0}}).isApprox(VectorXd::Constant(3, 1.0 / 3)));
  const VectorXd w = project_to_simplex(VectorXd{{-5.0, 0.5, 0.7}});
  CHECK(w.isApprox(VectorXd{{0.0, 0.4, 0.6}}));
}

TEST_CASE("SimplexLsq matches the support-enumeration oracle") {
  std::mt19937 gen(8);
  for (int trial = 0; trial < 60; ++trial) {
    const Index f = 2 + trial % 4;
    const MatrixXd a = random_matrix(gen, 12, f);
    const VectorXd b = random_matrix(gen, 12, 1).col(0);
    SimplexLsqOptions opts;
    opts.tol = 1e-12;
    opts.max_iterations = 20000;
    const VectorXd got = SimplexLsq(a, opts).solve(b);
    const VectorXd expected = oracle::simplex_lsq(a, b);
    CHECK(got.minCoeff() >= 0.0);
    CHECK(got.sum() == doctest::Approx(1.0).epsilon(1e-12));
    const double obj_got = (a * got - b).squaredNorm();
    const double obj_expected = (a * expected - b).squaredNorm();
    CHECK(obj_got <= obj_expected + 1e-8 * std::max(1.0, obj_expected));
  }
}

TEST_CASE("CounterRng is reproducible and stream-separated") {
  CounterRng a(7, 1), b(7, 1), c(7, 2);
  for (int i = 0; i < 10; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    CHECK(x != c.next_u64());
  }
  CounterRng u(3);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform();
    CHECK((x > 0.0 && x < 1.0));
    CHECK(u.below(5) < 5);
  }
  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 2));
}
