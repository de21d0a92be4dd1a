#include "sniht/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sniht {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_stream(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  std::uint64_t h = splitmix64(a);
  h = splitmix64(h ^ splitmix64(b + 0x100001b3ULL));
  h = splitmix64(h ^ splitmix64(c + 0x9e3779b9ULL));
  return h;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : engine_(splitmix64(splitmix64(seed) ^ splitmix64(stream_id ^ 0xa5a5a5a5a5a5a5a5ULL))) {}

std::uint64_t RngStream::next_u64() { return engine_(); }

double RngStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::bounded(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("bounded: n must be >= 1");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

double RngStream::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 2.0 * std::numbers::pi * u2;
  cached_normal_ = r * std::sin(t);
  has_cached_normal_ = true;
  return r * std::cos(t);
}

Complex RngStream::circular_normal() {
  constexpr double inv_sqrt2 = 0.7071067811865475244;
  const double re = normal();
  const double im = normal();
  return Complex(re * inv_sqrt2, im * inv_sqrt2);
}

double RngStream::gamma(double shape) {
  if (!(shape > 0.0)) throw std::invalid_argument("gamma: shape must be > 0");
  if (shape < 1.0) {
    // Boost: Gamma(a) = Gamma(a+1) * U^{1/a}.
    const double g = gamma(shape + 1.0);
    const double u = 1.0 - uniform();
    return g * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double RngStream::chi_square(double dof) {
  if (!(dof > 0.0)) throw std::invalid_argument("chi_square: dof must be > 0");
  return 2.0 * gamma(0.5 * dof);
}

double RngStream::inverse_gaussian(double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("inverse_gaussian: lambda must be > 0");
  const double z = normal();
  const double v = z * z;
  double x1 = 1.0;
  if (v > 0.0) {
    // Stable form of 1 + (v - sqrt(v^2 + 4*lambda*v)) / (2*lambda).
    const double d = std::sqrt(v * v + 4.0 * lambda * v);
    x1 = (d - v) / (d + v);
  }
  const double u = uniform();
  return (u <= 1.0 / (1.0 + x1)) ? x1 : 1.0 / x1;
}

}  // namespace sniht
