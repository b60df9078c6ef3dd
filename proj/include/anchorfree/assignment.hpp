#pragma once

#include <vector>

#include <Eigen/Core>

#include "anchorfree/errors.hpp"

namespace anchorfree {

/// A bijection on {0, ..., n-1}; mapping[i] is the image of i.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<Index> mapping);  // throws unless bijective

  static Permutation identity(Index n);

  Index size() const { return static_cast<Index>(mapping_.size()); }
  Index operator[](Index i) const { return mapping_[static_cast<std::size_t>(i)]; }
  const std::vector<Index>& mapping() const { return mapping_; }
  Permutation inverse() const;

  bool operator==(const Permutation&) const = default;

 private:
  std::vector<Index> mapping_;
};

struct Assignment {
  Permutation perm;  // row i is assigned to column perm[i]
  double total = 0.0;
};

/// Minimum-cost perfect matching on a square cost matrix (Kuhn-Munkres with
/// potentials, O(n^3)). Among optimal matchings the lexicographically
/// smallest mapping is returned.
Assignment hungarian(const Eigen::MatrixXd& cost);

}  // namespace anchorfree
