#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "anchorfree/cooccur.hpp"

namespace anchorfree {

struct SyntheticGroundTruth {
  Eigen::MatrixXd c_nat;  // V x F, columns on the unit simplex
  Eigen::MatrixXd e_nat;  // F x F, symmetric positive semidefinite
  CooccurrenceMatrix p;   // C E C^T, tagged Estimator::Exact
  std::uint64_t seed = 0;
  double sparsity = 0.0;
  /// Planted anchor rows (generate_separable only), anchors[f] carries topic f.
  std::vector<Index> anchors;
};

/// C entries i.i.d. Exp(1), each zeroed with probability `sparsity`; an
/// all-zero column is redrawn (at most 100 times); columns are normalized to
/// sum to one. E = R^T R / F with R an F x F standard Gaussian matrix.
/// Column j draws from substream j + 1 of the counter-based generator and R
/// from substream 0, so the output is a pure function of the arguments.
SyntheticGroundTruth generate_synthetic(Index v, Index f, double sparsity, std::uint64_t seed);

/// Same C construction with F planted anchor rows at seeded random positions
/// (row anchors[f] is nonzero only in column f; every other row is topped up
/// to at least two nonzeros so no unplanted anchors exist) and an entrywise
/// nonnegative
/// E = G^T G / F + I with G uniform on [0, 1).
SyntheticGroundTruth generate_separable(Index v, Index f, double sparsity, std::uint64_t seed);

/// Writes c_nat.bin and e_nat.bin (dense matrix files), p.bin (co-occurrence
/// cache) and manifest.json into `dir`, creating it if needed.
void write_synthetic_bundle(const SyntheticGroundTruth& truth, const std::string& dir,
                            const std::string& config_hash = {});
SyntheticGroundTruth read_synthetic_bundle(const std::string& dir);

}  // namespace anchorfree
