#pragma once

#include "sniht/core.hpp"

#include <cstdint>
#include <random>

namespace sniht {

/// Deterministic random stream: the variate sequence is a pure function of
/// (seed, stream id), independent of platform and thread count. All variate
/// transforms are implemented here rather than with std:: distributions,
/// whose output sequences are implementation-defined.
class RngStream {
public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64();

  /// Uniform on [0, 1).
  double uniform();

  /// Uniform integer on [0, n), n >= 1. Rejection sampling, no modulo bias.
  std::uint64_t bounded(std::uint64_t n);

  /// Standard normal, Box-Muller.
  double normal();

  /// Standard circular complex normal, E|z|^2 = 1.
  Complex circular_normal();

  /// Gamma(shape, scale 1), Marsaglia-Tsang. shape > 0.
  double gamma(double shape);

  /// Chi-square with dof > 0 (possibly non-integer).
  double chi_square(double dof);

  /// Inverse Gaussian with mean 1 and shape lambda > 0
  /// (Michael-Schucany-Haas transformation method).
  double inverse_gaussian(double lambda);

private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

/// Collision-resistant mixing of sub-stream coordinates into a stream id.
std::uint64_t derive_stream(std::uint64_t a, std::uint64_t b, std::uint64_t c);

}  // namespace sniht
