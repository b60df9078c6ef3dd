#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "anchorfree/corpus.hpp"

namespace anchorfree {

enum class Estimator : std::uint32_t {
  ScaledGram = 0,    // (1/D) M M^T
  CountCooccur = 1,  // diagonal-corrected, per-document length normalized counts
  Exact = 2,         // supplied directly, e.g. synthetic ground truth C E C^T
};

std::string to_string(Estimator e);
Estimator estimator_from_string(const std::string& name);

/// Symmetric V x V word-word co-occurrence matrix. Storage is dense when more
/// than a quarter of the entries are nonzero and sparse otherwise. Only the
/// upper triangle of any input is read; the lower triangle is its mirror, so
/// coeff(i, j) == coeff(j, i) bit for bit.
class CooccurrenceMatrix {
 public:
  static constexpr double kDenseFillThreshold = 0.25;

  CooccurrenceMatrix() = default;

  /// Builds from the upper triangle (diagonal included) of `upper`.
  static CooccurrenceMatrix from_upper(const Eigen::MatrixXd& upper, Estimator tag);
  static CooccurrenceMatrix from_upper(const SparseMatrix& upper, Estimator tag);

  Index n_words() const;
  Estimator estimator() const { return tag_; }
  bool is_dense() const { return std::holds_alternative<Eigen::MatrixXd>(storage_); }

  double coeff(Index i, Index j) const;
  Eigen::MatrixXd dense() const;
  /// P * x.
  Eigen::MatrixXd multiply(const Eigen::MatrixXd& x) const;
  double squared_norm() const;
  /// Row sums P 1.
  Eigen::VectorXd row_sums() const;
  /// Euclidean norm of each row.
  Eigen::VectorXd row_norms() const;
  /// Rows whose norm exceeds 1e-10 of the largest row norm; the others are
  /// zero up to roundoff.
  std::vector<char> significant_rows() const;

 private:
  std::variant<Eigen::MatrixXd, SparseMatrix> storage_;
  Estimator tag_ = Estimator::ScaledGram;
};

/// ScaledGram: (1/D) M M^T.
/// CountCooccur: (1/D) sum_d (w_d w_d^T - diag(w_d)) / (n_d (n_d - 1)), with
/// w_d the integer count column and n_d its length; every document needs
/// n_d >= 2.
CooccurrenceMatrix estimate_cooccurrence(const TermDocMatrix& m, Estimator estimator);

/// Binary cache: 8-byte magic "AFCOOCC1", V as little-endian u64, the
/// estimator tag as little-endian u32, then the upper triangle row by row
/// (i <= j) as little-endian f64.
void write_cooccurrence(const std::string& path, const CooccurrenceMatrix& p);
CooccurrenceMatrix read_cooccurrence(const std::string& path);
bool is_cooccurrence_file(const std::string& path);

}  // namespace anchorfree
