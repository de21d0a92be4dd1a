#include "sniht/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace sniht {

std::string to_string(NoiseFamily family) {
  switch (family) {
    case NoiseFamily::None: return "none";
    case NoiseFamily::Gaussian: return "gaussian";
    case NoiseFamily::StudentT: return "student_t";
    case NoiseFamily::IgCg: return "ig_cg";
  }
  return "?";
}

NoiseFamily noise_family_from_string(const std::string& name) {
  if (name == "none") return NoiseFamily::None;
  if (name == "gaussian") return NoiseFamily::Gaussian;
  if (name == "student_t") return NoiseFamily::StudentT;
  if (name == "ig_cg") return NoiseFamily::IgCg;
  throw std::invalid_argument("unknown noise family '" + name + "'");
}

double scale_for_snr(const NoiseSpec& spec) {
  if (spec.sigma_x != 1.0) {
    throw std::invalid_argument("scale_for_snr: SNR-to-sigma mapping assumes sigma_x = 1");
  }
  return std::pow(10.0, -spec.snr_db / 20.0);
}

ComplexMatrix sample_gaussian_noise(Index m, Index q, double sigma, RngStream& rng) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sample_gaussian_noise: sigma must be > 0");
  ComplexMatrix e(m, q);
  for (Index j = 0; j < q; ++j) {
    for (Index i = 0; i < m; ++i) {
      e(i, j) = sigma * rng.circular_normal();
    }
  }
  return e;
}

double t_noise_median_factor(double nu) {
  if (!(nu > 0.0)) throw std::invalid_argument("t_noise_median_factor: nu must be > 0");
  return 0.5 * nu * (std::pow(2.0, 2.0 / nu) - 1.0);
}

ComplexMatrix sample_t_noise(Index m, Index q, double nu, double sigma, RngStream& rng) {
  if (!(nu > 0.0)) throw std::invalid_argument("sample_t_noise: nu must be > 0");
  if (!(sigma > 0.0)) throw std::invalid_argument("sample_t_noise: sigma must be > 0");
  const double c = sigma / std::sqrt(t_noise_median_factor(nu));
  ComplexMatrix e(m, q);
  for (Index j = 0; j < q; ++j) {
    for (Index i = 0; i < m; ++i) {
      const Complex g = rng.circular_normal();
      const double s = rng.chi_square(nu);
      e(i, j) = c * g * std::sqrt(nu / s);
    }
  }
  return e;
}

ComplexMatrix sample_igcg_noise(Index m, Index q, double lambda, RngStream& rng) {
  if (!(lambda > 0.0)) throw std::invalid_argument("sample_igcg_noise: lambda must be > 0");
  ComplexMatrix e(m, q);
  for (Index i = 0; i < m; ++i) {
    const double texture = std::sqrt(rng.inverse_gaussian(lambda));
    for (Index j = 0; j < q; ++j) {
      e(i, j) = texture * rng.circular_normal();
    }
  }
  return e;
}

ComplexMatrix sample_noise(const NoiseSpec& spec, Index m, Index q, RngStream& rng) {
  switch (spec.family) {
    case NoiseFamily::None:
      return ComplexMatrix::Zero(m, q);
    case NoiseFamily::Gaussian:
      return sample_gaussian_noise(m, q, scale_for_snr(spec), rng);
    case NoiseFamily::StudentT:
      return sample_t_noise(m, q, spec.nu, scale_for_snr(spec), rng);
    case NoiseFamily::IgCg:
      return sample_igcg_noise(m, q, spec.lambda, rng);
  }
  throw std::logic_error("sample_noise: unhandled family");
}

}  // namespace sniht
