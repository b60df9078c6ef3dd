#include <algorithm>
#include <numeric>
#include <random>

#include <doctest.h>

#include "anchorfree/baselines.hpp"
#include "anchorfree/eval.hpp"
#include "anchorfree/synth.hpp"

using namespace anchorfree;
using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST_CASE("spa_anchors on pure words") {
  const AnchorSet a = spa_anchors(MatrixXd::Identity(3, 3), 3);
  std::vector<Index> sorted = a.indices;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<Index>{0, 1, 2});
}

TEST_CASE("spa_anchors with f = 1 picks the largest normalized row") {
  MatrixXd d(3, 2);
  d << 1.0, 1.0,   // normalized (0.5, 0.5), norm 0.707
      3.0, 0.0,    // normalized (1, 0), norm 1
      1.0, 3.0;    // normalized (0.25, 0.75), norm 0.79
  CHECK(spa_anchors(d, 1).indices == std::vector<Index>{1});
}

TEST_CASE("spa_anchors errors") {
  MatrixXd zero_row = MatrixXd::Identity(3, 3);
  zero_row.row(1).setZero();
  try {
    spa_anchors(zero_row, 2);
    FAIL("expected an error");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("word 2 ") != std::string::npos);
  }
  MatrixXd rank1(3, 2);
  rank1 << 1.0, 2.0, 2.0, 4.0, 3.0, 6.0;
  CHECK_THROWS_AS(spa_anchors(rank1, 2), NumericalError);
}

TEST_CASE("SPA finds the planted anchors on separable instances") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Index f = 3 + static_cast<Index>(seed);
    const SyntheticGroundTruth t = generate_separable(300, f, 0.5, seed);
    const SpaResult r = spa_factorize(t.p, f);
    std::vector<Index> got = r.anchors.indices;
    std::vector<Index> planted = t.anchors;
    std::sort(got.begin(), got.end());
    std::sort(planted.begin(), planted.end());
    CHECK(got == planted);
    const RecoveryError err = recovery_error(r.model.c, r.model.e, t.c_nat, t.e_nat);
    CHECK(err.err_c < 1e-4);
  }
}

TEST_CASE("recover_topics_from_anchors with planted anchors") {
  const SyntheticGroundTruth t = generate_separable(200, 4, 0.3, 12);
  const TopicModel m = recover_topics_from_anchors(t.p, AnchorSet{t.anchors});
  const RecoveryError err = recovery_error(m.c, m.e, t.c_nat, t.e_nat);
  CHECK(err.err_c < 1e-4);
  CHECK(err.perm == Permutation::identity(4));
  for (Index j = 0; j < 4; ++j) CHECK(m.c.col(j).sum() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("recover_topics_from_anchors with a single topic") {
  VectorXd c(5);
  c << 0.1, 0.3, 0.2, 0.25, 0.15;
  const MatrixXd p = 0.7 * c * c.transpose();
  const TopicModel m =
      recover_topics_from_anchors(CooccurrenceMatrix::from_upper(p, Estimator::Exact), AnchorSet{{1}});
  CHECK(m.c.cols() == 1);
  CHECK(m.c.col(0).sum() == doctest::Approx(1.0));
  CHECK((m.c.col(0) - c).norm() <= 1e-9);
}

TEST_CASE("SPA fails on non-separable instances") {
  const SyntheticGroundTruth t = generate_synthetic(1000, 5, 0.5, 0);
  Warnings w;
  const SpaResult r = spa_factorize(t.p, 5, {}, &w);
  CHECK(recovery_error(r.model.c, r.model.e, t.c_nat, t.e_nat).err_c > 1e-2);
}

TEST_CASE("SPA anchors follow a permutation of the words") {
  const SyntheticGroundTruth t = generate_separable(150, 4, 0.5, 9);
  std::vector<Index> order(150);
  std::iota(order.begin(), order.end(), Index{0});
  std::mt19937 gen(4);
  std::shuffle(order.begin(), order.end(), gen);
  const MatrixXd p = t.p.dense();
  MatrixXd pp(150, 150);
  for (Index i = 0; i < 150; ++i)
    for (Index j = 0; j < 150; ++j) pp(i, j) = p(order[i], order[j]);
  const AnchorSet base = spa_factorize(t.p, 4).anchors;
  const AnchorSet moved =
      spa_factorize(CooccurrenceMatrix::from_upper(pp, Estimator::Exact), 4).anchors;
  REQUIRE(moved.indices.size() == base.indices.size());
  for (std::size_t k = 0; k < base.indices.size(); ++k)
    CHECK(order[moved.indices[k]] == base.indices[k]);
}
