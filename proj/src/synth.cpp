#include "anchorfree/synth.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "anchorfree/matrix_io.hpp"
#include "anchorfree/rng.hpp"

namespace anchorfree {

namespace {

Eigen::VectorXd draw_column(std::uint64_t seed, Index j, Index v, double sparsity) {
  CounterRng rng(seed, static_cast<std::uint64_t>(j) + 1);
  Eigen::VectorXd col(v);
  for (int attempt = 0; attempt < 100; ++attempt) {
    for (Index i = 0; i < v; ++i) {
      const double value = rng.exponential();
      const bool zero = rng.uniform() < sparsity;
      col[i] = zero ? 0.0 : value;
    }
    const double sum = col.sum();
    if (sum > 0.0) return col / sum;
  }
  throw NumericalError("column " + std::to_string(j + 1) +
                       " was all zero after 100 redraws; lower the sparsity");
}

void check_args(Index v, Index f, double sparsity) {
  if (f < 1 || v < f)
    throw ConfigError("need V >= F >= 1 (got V=" + std::to_string(v) + ", F=" + std::to_string(f) + ")");
  if (!(sparsity >= 0.0 && sparsity < 1.0)) throw ConfigError("sparsity must be in [0, 1)");
}

CooccurrenceMatrix product_cec(const Eigen::MatrixXd& c, const Eigen::MatrixXd& e) {
  const Eigen::MatrixXd ce = c * e;
  Eigen::MatrixXd p = ce * c.transpose();
  return CooccurrenceMatrix::from_upper(p, Estimator::Exact);
}

}  // namespace

SyntheticGroundTruth generate_synthetic(Index v, Index f, double sparsity, std::uint64_t seed) {
  check_args(v, f, sparsity);
  SyntheticGroundTruth out;
  out.seed = seed;
  out.sparsity = sparsity;
  out.c_nat.resize(v, f);
  for (Index j = 0; j < f; ++j) out.c_nat.col(j) = draw_column(seed, j, v, sparsity);

  CounterRng rng(seed, 0);
  Eigen::MatrixXd r(f, f);
  for (Index j = 0; j < f; ++j)
    for (Index i = 0; i < f; ++i) r(i, j) = rng.normal();
  const Eigen::MatrixXd e = r.transpose() * r / static_cast<double>(f);
  out.e_nat = 0.5 * (e + e.transpose());
  out.p = product_cec(out.c_nat, out.e_nat);
  return out;
}

SyntheticGroundTruth generate_separable(Index v, Index f, double sparsity, std::uint64_t seed) {
  check_args(v, f, sparsity);
  SyntheticGroundTruth out;
  out.seed = seed;
  out.sparsity = sparsity;

  CounterRng rng(seed, 0);
  std::vector<Index> rows(static_cast<std::size_t>(v));
  for (Index i = 0; i < v; ++i) rows[i] = i;
  for (Index k = 0; k < f; ++k) {
    const Index pick = k + static_cast<Index>(rng.below(static_cast<std::uint64_t>(v - k)));
    std::swap(rows[k], rows[pick]);
  }
  out.anchors.assign(rows.begin(), rows.begin() + f);

  out.c_nat.resize(v, f);
  for (Index j = 0; j < f; ++j) {
    CounterRng col_rng(seed, static_cast<std::uint64_t>(j) + 1);
    for (Index i = 0; i < v; ++i) {
      const double value = col_rng.exponential();
      const bool zero = col_rng.uniform() < sparsity;
      out.c_nat(i, j) = zero ? 0.0 : value;
    }
  }
  for (Index k = 0; k < f; ++k) {
    const Index a = out.anchors[k];
    const double keep = out.c_nat(a, k) > 0.0 ? out.c_nat(a, k) : 1.0;
    out.c_nat.row(a).setZero();
    out.c_nat(a, k) = keep;
  }
  // Every other row gets at least two nonzeros so the planted rows are the
  // only anchors; a duplicate anchor would tie with the planted one.
  if (f >= 2) {
    std::vector<char> planted(static_cast<std::size_t>(v), 0);
    for (Index a : out.anchors) planted[a] = 1;
    for (Index i = 0; i < v; ++i) {
      if (planted[i]) continue;
      while ((out.c_nat.row(i).array() > 0.0).count() < 2) {
        const Index j = static_cast<Index>(rng.below(static_cast<std::uint64_t>(f)));
        if (out.c_nat(i, j) == 0.0) out.c_nat(i, j) = rng.exponential();
      }
    }
  }
  for (Index j = 0; j < f; ++j) out.c_nat.col(j) /= out.c_nat.col(j).sum();

  Eigen::MatrixXd g(f, f);
  for (Index j = 0; j < f; ++j)
    for (Index i = 0; i < f; ++i) g(i, j) = rng.uniform();
  const Eigen::MatrixXd e =
      g.transpose() * g / static_cast<double>(f) + Eigen::MatrixXd::Identity(f, f);
  out.e_nat = 0.5 * (e + e.transpose());
  out.p = product_cec(out.c_nat, out.e_nat);
  return out;
}

void write_synthetic_bundle(const SyntheticGroundTruth& truth, const std::string& dir,
                            const std::string& config_hash) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir + ": " + ec.message());
  const fs::path root(dir);
  io::write_dense((root / "c_nat.bin").string(), truth.c_nat);
  io::write_dense((root / "e_nat.bin").string(), truth.e_nat);
  write_cooccurrence((root / "p.bin").string(), truth.p);

  nlohmann::ordered_json manifest;
  manifest["v"] = truth.c_nat.rows();
  manifest["f"] = truth.c_nat.cols();
  manifest["sparsity"] = truth.sparsity;
  manifest["seed"] = truth.seed;
  if (!truth.anchors.empty()) {
    std::vector<Index> one_based;
    for (Index a : truth.anchors) one_based.push_back(a + 1);
    manifest["anchors"] = one_based;
  }
  manifest["files"] = {{"c_nat", "c_nat.bin"}, {"e_nat", "e_nat.bin"}, {"p", "p.bin"}};
  if (!config_hash.empty()) manifest["provenance"] = {{"config_hash", config_hash}};
  std::ofstream out(root / "manifest.json");
  if (!out) throw IoError("cannot write manifest in " + dir);
  out << manifest.dump(2) << '\n';
}

SyntheticGroundTruth read_synthetic_bundle(const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path root(dir);
  std::ifstream in(root / "manifest.json");
  if (!in) throw IoError(dir + " has no manifest.json");
  nlohmann::json manifest;
  try {
    in >> manifest;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(dir + "/manifest.json: " + e.what());
  }
  SyntheticGroundTruth out;
  try {
    out.seed = manifest.at("seed").get<std::uint64_t>();
    out.sparsity = manifest.at("sparsity").get<double>();
    if (manifest.contains("anchors"))
      for (Index a : manifest["anchors"].get<std::vector<Index>>()) out.anchors.push_back(a - 1);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(dir + "/manifest.json: " + e.what());
  }
  out.c_nat = io::read_dense((root / "c_nat.bin").string());
  out.e_nat = io::read_dense((root / "e_nat.bin").string());
  out.p = read_cooccurrence((root / "p.bin").string());
  if (out.p.n_words() != out.c_nat.rows() || out.e_nat.rows() != out.c_nat.cols())
    throw IoError(dir + ": bundle files have inconsistent shapes");
  return out;
}

}  // namespace anchorfree
