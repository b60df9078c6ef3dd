#pragma once

#include <cstdint>

namespace anchorfree {

/// SplitMix64 finalizer; a bijection on 64-bit words.
std::uint64_t mix64(std::uint64_t x);

/// Deterministically derives a child seed, e.g. per trial or per restart.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

/// Counter-based generator: draw i of substream s under seed k is
/// mix64(key(k, s) + i * golden_gamma). Draws are independent of call order
/// across substreams and identical on every platform. Distribution
/// transforms are implemented here rather than via <random> so that values
/// are bit-reproducible across standard libraries.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1).
  double uniform();
  /// Exp(1).
  double exponential();
  /// Standard normal via Box-Muller.
  double normal();
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace anchorfree
