#include "anchorfree/cooccur.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <vector>

#include "anchorfree/matrix_io.hpp"

namespace anchorfree {

namespace {

constexpr char kCacheMagic[8] = {'A', 'F', 'C', 'O', 'O', 'C', 'C', '1'};

using Triplets = std::vector<Eigen::Triplet<double>>;

// Mirrors upper-triangle triplets into a full symmetric list.
void push_symmetric(Triplets& out, Index i, Index j, double v) {
  out.emplace_back(i, j, v);
  if (i != j) out.emplace_back(j, i, v);
}

SparseMatrix mirrored_sparse(const SparseMatrix& upper) {
  Triplets t;
  t.reserve(static_cast<std::size_t>(2 * upper.nonZeros()));
  for (Index c = 0; c < upper.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(upper, c); it; ++it) {
      if (it.row() <= c && it.value() != 0.0) push_symmetric(t, it.row(), c, it.value());
    }
  }
  SparseMatrix full(upper.rows(), upper.cols());
  full.setFromTriplets(t.begin(), t.end());
  full.makeCompressed();
  return full;
}

Eigen::MatrixXd mirrored_dense(const Eigen::MatrixXd& upper) {
  Eigen::MatrixXd full = upper;
  for (Index j = 0; j < full.cols(); ++j)
    for (Index i = j + 1; i < full.rows(); ++i) full(i, j) = full(j, i);
  return full;
}

}  // namespace

std::string to_string(Estimator e) {
  switch (e) {
    case Estimator::ScaledGram: return "scaled-gram";
    case Estimator::CountCooccur: return "count";
    case Estimator::Exact: return "exact";
  }
  return "unknown";
}

Estimator estimator_from_string(const std::string& name) {
  if (name == "scaled-gram" || name == "gram") return Estimator::ScaledGram;
  if (name == "count") return Estimator::CountCooccur;
  if (name == "exact") return Estimator::Exact;
  throw ConfigError("unknown estimator \"" + name + "\" (expected scaled-gram or count)");
}

CooccurrenceMatrix CooccurrenceMatrix::from_upper(const Eigen::MatrixXd& upper, Estimator tag) {
  if (upper.rows() != upper.cols()) throw Error("co-occurrence matrix must be square");
  CooccurrenceMatrix p;
  p.tag_ = tag;
  const Index n = upper.rows();
  Index nnz = 0;
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i <= j; ++i)
      if (upper(i, j) != 0.0) nnz += (i == j) ? 1 : 2;
  const double fill = n == 0 ? 0.0 : static_cast<double>(nnz) / (static_cast<double>(n) * n);
  if (fill > kDenseFillThreshold) {
    p.storage_ = mirrored_dense(upper);
  } else {
    p.storage_ = mirrored_sparse(upper.sparseView(0.0, 0.0));
  }
  return p;
}

CooccurrenceMatrix CooccurrenceMatrix::from_upper(const SparseMatrix& upper, Estimator tag) {
  if (upper.rows() != upper.cols()) throw Error("co-occurrence matrix must be square");
  CooccurrenceMatrix p;
  p.tag_ = tag;
  SparseMatrix full = mirrored_sparse(upper);
  const double n = static_cast<double>(full.rows());
  const double fill = n == 0 ? 0.0 : static_cast<double>(full.nonZeros()) / (n * n);
  if (fill > kDenseFillThreshold) {
    p.storage_ = Eigen::MatrixXd(full);
  } else {
    p.storage_ = std::move(full);
  }
  return p;
}

Index CooccurrenceMatrix::n_words() const {
  return std::visit([](const auto& m) { return m.rows(); }, storage_);
}

double CooccurrenceMatrix::coeff(Index i, Index j) const {
  return std::visit([&](const auto& m) { return m.coeff(i, j); }, storage_);
}

Eigen::MatrixXd CooccurrenceMatrix::dense() const {
  return std::visit([](const auto& m) { return Eigen::MatrixXd(m); }, storage_);
}

Eigen::MatrixXd CooccurrenceMatrix::multiply(const Eigen::MatrixXd& x) const {
  return std::visit([&](const auto& m) { return Eigen::MatrixXd(m * x); }, storage_);
}

double CooccurrenceMatrix::squared_norm() const {
  return std::visit([](const auto& m) { return m.squaredNorm(); }, storage_);
}

Eigen::VectorXd CooccurrenceMatrix::row_sums() const {
  return multiply(Eigen::VectorXd::Ones(n_words()));
}

Eigen::VectorXd CooccurrenceMatrix::row_norms() const {
  if (const auto* d = std::get_if<Eigen::MatrixXd>(&storage_)) return d->rowwise().norm();
  // Symmetric storage: row norms equal column norms.
  const auto& s = std::get<SparseMatrix>(storage_);
  Eigen::VectorXd out(s.cols());
  for (Index j = 0; j < s.outerSize(); ++j) out[j] = s.col(j).norm();
  return out;
}

std::vector<char> CooccurrenceMatrix::significant_rows() const {
  const Eigen::VectorXd norms = row_norms();
  const double floor = norms.size() ? 1e-10 * norms.maxCoeff() : 0.0;
  std::vector<char> keep(static_cast<std::size_t>(norms.size()));
  for (Index i = 0; i < norms.size(); ++i) keep[i] = norms[i] > floor;
  return keep;
}

CooccurrenceMatrix estimate_cooccurrence(const TermDocMatrix& m, Estimator estimator) {
  const SparseMatrix& x = m.matrix();
  const Index n_docs = m.n_docs();
  const double inv_docs = n_docs > 0 ? 1.0 / static_cast<double>(n_docs) : 0.0;

  if (estimator == Estimator::ScaledGram) {
    SparseMatrix gram = (x * SparseMatrix(x.transpose())).pruned();
    SparseMatrix upper = gram.triangularView<Eigen::Upper>();
    upper *= inv_docs;
    return CooccurrenceMatrix::from_upper(upper, estimator);
  }
  if (estimator != Estimator::CountCooccur)
    throw ConfigError("estimator " + to_string(estimator) + " cannot be estimated from a corpus");

  Triplets upper;
  for (Index d = 0; d < n_docs; ++d) {
    double length = 0.0;
    std::vector<std::pair<Index, double>> col;
    for (SparseMatrix::InnerIterator it(x, d); it; ++it) {
      if (it.value() != std::floor(it.value()))
        throw NumericalError("count estimator needs integer counts; document " +
                             m.doc_ids()[d] + " has weight " + std::to_string(it.value()));
      length += it.value();
      col.emplace_back(it.row(), it.value());
    }
    if (length < 2.0)
      throw NumericalError("document " + m.doc_ids()[d] + " has length " +
                           std::to_string(static_cast<long long>(length)) +
                           "; the count estimator needs at least 2 tokens");
    const double norm = length * (length - 1.0);
    for (std::size_t a = 0; a < col.size(); ++a) {
      const auto [u, wu] = col[a];
      upper.emplace_back(u, u, (wu * wu - wu) / norm);
      for (std::size_t b = a + 1; b < col.size(); ++b)
        upper.emplace_back(u, col[b].first, wu * col[b].second / norm);
    }
  }
  SparseMatrix acc(m.n_words(), m.n_words());
  acc.setFromTriplets(upper.begin(), upper.end());
  acc *= inv_docs;
  return CooccurrenceMatrix::from_upper(acc, estimator);
}

void write_cooccurrence(const std::string& path, const CooccurrenceMatrix& p) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out.write(kCacheMagic, sizeof(kCacheMagic));
  const Index n = p.n_words();
  io::write_u64(out, static_cast<std::uint64_t>(n));
  io::write_u32(out, static_cast<std::uint32_t>(p.estimator()));
  const Eigen::MatrixXd full = p.dense();
  for (Index i = 0; i < n; ++i)
    for (Index j = i; j < n; ++j) io::write_f64(out, full(i, j));
  if (!out) throw IoError("write failed: " + path);
}

CooccurrenceMatrix read_cooccurrence(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  char magic[8];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kCacheMagic, sizeof(magic)) != 0)
    throw IoError(path + ": not a co-occurrence cache");
  const auto n = io::read_u64(in);
  const auto tag = io::read_u32(in);
  if (tag > static_cast<std::uint32_t>(Estimator::Exact))
    throw IoError(path + ": unknown estimator tag " + std::to_string(tag));
  if (n > (1ULL << 20)) throw IoError(path + ": implausible vocabulary size");
  Eigen::MatrixXd upper = Eigen::MatrixXd::Zero(static_cast<Index>(n), static_cast<Index>(n));
  for (Index i = 0; i < upper.rows(); ++i)
    for (Index j = i; j < upper.cols(); ++j) upper(i, j) = io::read_f64(in);
  return CooccurrenceMatrix::from_upper(upper, static_cast<Estimator>(tag));
}

bool is_cooccurrence_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  char magic[8];
  return in.read(magic, sizeof(magic)) && std::memcmp(magic, kCacheMagic, sizeof(magic)) == 0;
}

}  // namespace anchorfree
