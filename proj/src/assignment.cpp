#include "anchorfree/assignment.hpp"

#include <cmath>
#include <limits>

namespace anchorfree {

namespace {

// Classic shortest-augmenting-path Hungarian method on the submatrix given
// by `rows` x `cols`. Returns column position (into `cols`) for each row.
std::vector<Index> solve_square(const Eigen::MatrixXd& cost, const std::vector<Index>& rows,
                                const std::vector<Index>& cols, double* total) {
  const std::size_t n = rows.size();
  const double inf = std::numeric_limits<double>::infinity();
  // 1-based potentials and matching as in the textbook formulation.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(rows[i0 - 1], cols[j - 1]) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<Index> assign(n, 0);
  double sum = 0.0;
  for (std::size_t j = 1; j <= n; ++j) {
    assign[match[j] - 1] = static_cast<Index>(j - 1);
    sum += cost(rows[match[j] - 1], cols[j - 1]);
  }
  if (total) *total = sum;
  return assign;
}

}  // namespace

Permutation::Permutation(std::vector<Index> mapping) : mapping_(std::move(mapping)) {
  std::vector<char> seen(mapping_.size(), 0);
  for (Index m : mapping_) {
    if (m < 0 || m >= static_cast<Index>(mapping_.size()) || seen[m])
      throw Error("mapping is not a permutation");
    seen[m] = 1;
  }
}

Permutation Permutation::identity(Index n) {
  std::vector<Index> m(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) m[i] = i;
  return Permutation(std::move(m));
}

Permutation Permutation::inverse() const {
  std::vector<Index> inv(mapping_.size());
  for (std::size_t i = 0; i < mapping_.size(); ++i) inv[mapping_[i]] = static_cast<Index>(i);
  return Permutation(std::move(inv));
}

Assignment hungarian(const Eigen::MatrixXd& cost) {
  if (cost.rows() != cost.cols()) throw Error("assignment needs a square cost matrix");
  if (!cost.allFinite()) throw Error("assignment costs must be finite");
  const Index n = cost.rows();
  if (n == 0) return {Permutation(), 0.0};

  std::vector<Index> all(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) all[i] = i;
  double optimum = 0.0;
  solve_square(cost, all, all, &optimum);
  const double tol = 1e-12 * (1.0 + cost.cwiseAbs().sum());

  // Fix rows in order to the smallest column that still admits an optimal
  // completion; this yields the lexicographically smallest optimal mapping.
  std::vector<Index> mapping(static_cast<std::size_t>(n), -1);
  std::vector<char> col_used(static_cast<std::size_t>(n), 0);
  double fixed = 0.0;
  for (Index r = 0; r < n; ++r) {
    std::vector<Index> rest_rows;
    for (Index i = r + 1; i < n; ++i) rest_rows.push_back(i);
    for (Index c = 0; c < n; ++c) {
      if (col_used[c]) continue;
      std::vector<Index> rest_cols;
      for (Index j = 0; j < n; ++j)
        if (!col_used[j] && j != c) rest_cols.push_back(j);
      double rest = 0.0;
      if (!rest_rows.empty()) solve_square(cost, rest_rows, rest_cols, &rest);
      if (fixed + cost(r, c) + rest <= optimum + tol) {
        mapping[r] = c;
        col_used[c] = 1;
        fixed += cost(r, c);
        break;
      }
    }
    if (mapping[r] < 0) throw NumericalError("assignment tie-breaking lost optimality");
  }
  Assignment out{Permutation(std::move(mapping)), 0.0};
  for (Index r = 0; r < n; ++r) out.total += cost(r, out.perm[r]);
  return out;
}

}  // namespace anchorfree
