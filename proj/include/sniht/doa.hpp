#pragma once

#include "sniht/core.hpp"
#include "sniht/noise.hpp"
#include "sniht/rng.hpp"
#include "sniht/solver.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace sniht {

/// ULA response for angle theta (degrees), half-wavelength spacing:
/// a_k = exp(-i pi k sin(theta)), k = 0..m-1.
ComplexVector steering_vector(double theta_deg, Index m);

/// Angular grid with its m x p steering matrix, column j = a(angles[j]).
struct DoaGrid {
  std::vector<double> angles_deg;
  ComplexMatrix steering;

  Index size() const { return static_cast<Index>(angles_deg.size()); }
  Index index_of(double angle_deg) const;  // exact grid point lookup, throws if off-grid
};

DoaGrid build_grid(double lo_deg, double hi_deg, double step_deg, Index m);

struct DoaScenario {
  std::vector<double> true_doas_deg;  // distinct, on-grid for PER experiments
  Index q = 50;                       // snapshots
  double source_power = 1.0;          // sigma_x^2; SNR = 10 log10(sigma_x^2) at unit noise
  NoiseSpec noise;                    // ig_cg in the paper's experiment; none = noiseless
};

/// Y = A(theta) S + E with i.i.d. circular Gaussian source waveforms of
/// power sigma_x^2 and row-i.i.d. noise at unit covariance.
ComplexMatrix simulate_snapshots(const DoaScenario& scenario, Index m, RngStream& signal_rng,
                                 RngStream& noise_rng);

/// MUSIC pseudospectrum over the grid: 1 / (a^H E_n E_n^H a) with E_n the
/// eigenvectors of the m-K smallest eigenvalues of (1/q) Y Y^H.
RealVector music_spectrum(const ComplexMatrix& y, const DoaGrid& grid, Index k);

struct DoaMethod {
  enum class Kind { Music, Sniht };
  Kind kind = Kind::Sniht;
  MixedNormIndex norm = MixedNormIndex::l22();

  std::string label() const;
  static DoaMethod music() { return {Kind::Music, MixedNormIndex::l22()}; }
  static DoaMethod sniht(MixedNormIndex norm) { return {Kind::Sniht, norm}; }
  static DoaMethod from_string(const std::string& name);
};

struct DoaEstimate {
  SupportSet grid_indices;
  std::vector<double> angles_deg;
  bool exact_recovery = false;
  int iterations = 0;  // 0 for MUSIC
};

/// MUSIC: the K largest pseudospectrum peaks (local-maxima rule).
/// SNIHT: solve with Phi = grid steering and peak initialization; the
/// recovered support gives the angles.
DoaEstimate estimate_doas(const ComplexMatrix& y, const DoaGrid& grid, Index k,
                          const DoaMethod& method, const SupportSet& true_indices,
                          int max_iters = 500, double rel_tol = 1e-6);

/// Relative frequency of estimated grid angles, normalized by trials * K.
std::vector<double> doa_histogram(const std::vector<SupportSet>& estimates, const DoaGrid& grid);

struct DoaExperimentConfig {
  Index m = 20;
  DoaScenario scenario;
  double grid_lo = -90.0;
  double grid_hi = 90.0;
  double grid_step = 2.0;
  int trials = 1000;
  std::vector<DoaMethod> methods;
  std::uint64_t seed = 0;
  int threads = 0;
  int max_iters = 500;
  double rel_tol = 1e-6;
};

struct DoaMethodSummary {
  DoaMethod method;
  double per = 0.0;
  std::vector<double> histogram;  // one entry per grid angle
};

struct DoaExperimentOutput {
  DoaGrid grid;
  std::vector<DoaMethodSummary> methods;
  int trials = 0;
  double wall_ms = 0.0;
};

DoaExperimentOutput run_doa_experiment(const DoaExperimentConfig& cfg);

void write_histogram_csv(const std::filesystem::path& path, const DoaExperimentOutput& out);
void write_per_summary_csv(const std::filesystem::path& path, const DoaExperimentOutput& out);

}  // namespace sniht
