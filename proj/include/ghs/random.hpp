#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace ghs {

/// Mixes a master seed with stream identifiers (scenario, replication, ...)
/// into an independent child seed. SplitMix64 finalizer per component, so
/// nearby ids give unrelated streams.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> ids);

/// Seedable random source used by every stochastic routine in the library.
/// A given seed always reproduces the same stream on the same toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  /// Child generator for an independent stream.
  Rng split(std::uint64_t stream) const { return Rng(derive_seed(seed_, {stream})); }

  /// Uniform on the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }
  double normal() { return normal_(engine_); }
  /// Gamma with the given shape and rate.
  double gamma(double shape, double rate) {
    return std::gamma_distribution<double>(shape, 1.0 / rate)(engine_);
  }
  /// Inverse-Gamma(shape, rate): reciprocal of a Gamma(shape, rate) draw.
  double inverse_gamma(double shape, double rate) { return 1.0 / gamma(shape, rate); }
  /// |C| for a standard Cauchy C, by inverse CDF.
  double half_cauchy();

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uint64_t seed_;
};

}  // namespace ghs
