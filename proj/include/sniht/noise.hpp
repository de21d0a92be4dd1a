#pragma once

#include "sniht/core.hpp"
#include "sniht/rng.hpp"

#include <string>

namespace sniht {

enum class NoiseFamily { None, Gaussian, StudentT, IgCg };

std::string to_string(NoiseFamily family);
NoiseFamily noise_family_from_string(const std::string& name);

/// Noise distribution plus SNR bookkeeping. For Gaussian and Student-t the
/// noise scale is sigma = 10^(-snr_db/20) with unit signal amplitude; for
/// IG-CG the noise is generated at unit row covariance and the SNR is set on
/// the signal side (sigma_x^2 = 10^(snr_db/10)).
struct NoiseSpec {
  NoiseFamily family = NoiseFamily::Gaussian;
  double snr_db = 10.0;
  double nu = 3.0;      // Student-t degrees of freedom
  double lambda = 0.1;  // IG-CG shape
  double sigma_x = 1.0; // signal amplitude used by the SNR definition
};

/// sigma = 10^(-snr_db/20); requires sigma_x == 1.
double scale_for_snr(const NoiseSpec& spec);

/// i.i.d. circular complex Gaussian entries with E|e|^2 = sigma^2.
ComplexMatrix sample_gaussian_noise(Index m, Index q, double sigma, RngStream& rng);

/// i.i.d. circular complex t_nu entries, scale calibrated so that
/// Med(|e|^2) = sigma^2. |e|^2 / c^2 follows an F(2, nu) distribution with
/// median (nu/2)(2^{2/nu} - 1), which fixes the calibration constant c.
ComplexMatrix sample_t_noise(Index m, Index q, double nu, double sigma, RngStream& rng);

/// Median of F(2, nu): (nu/2)(2^{2/nu} - 1).
double t_noise_median_factor(double nu);

/// Rows are i.i.d. inverse-Gaussian compound Gaussian: row_i = sqrt(tau_i) g_i
/// with tau_i ~ IG(mean 1, shape lambda) and g_i standard circular complex
/// normal, so each row has covariance I_q.
ComplexMatrix sample_igcg_noise(Index m, Index q, double lambda, RngStream& rng);

/// Dispatch on spec.family with the scale conventions documented on
/// NoiseSpec. Family None yields the zero matrix.
ComplexMatrix sample_noise(const NoiseSpec& spec, Index m, Index q, RngStream& rng);

}  // namespace sniht
