#pragma once

#include "sniht/core.hpp"
#include "sniht/noise.hpp"
#include "sniht/solver.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace sniht {

enum class SweepKind { Snr, Nu, SnapshotCount };

std::string to_string(SweepKind kind);

struct ExperimentConfig {
  Index m = 256;
  Index p = 512;
  Index k = 8;
  Index q = 16;
  int trials = 200;                       // L
  SweepKind sweep = SweepKind::Snr;
  std::vector<double> sweep_values;
  NoiseSpec noise;
  std::vector<MixedNormIndex> methods;
  std::uint64_t seed = 0;
  int threads = 0;                        // 0 = hardware concurrency
  int max_iters = 500;
  double rel_tol = 1e-6;
};

struct Problem {
  ComplexMatrix y;    // m x q
  ComplexMatrix phi;  // m x p, unit-norm columns
  ComplexMatrix s;    // p x q, K-rowsparse
  SupportSet support;
};

struct TrialResult {
  MixedNormIndex method = MixedNormIndex::l22();
  SupportSet true_support;
  SupportSet est_support;
  double squared_error = 0.0;   // ||S_hat - S||^2
  bool exact_recovery = false;  // est_support == true_support
  int iterations = 0;
};

/// Fresh MMV instance: Phi with i.i.d. CN(0,1) entries and unit-norm columns,
/// a uniformly drawn K-row support, unit-modulus uniform-phase signal entries
/// (amplitude sigma_x per the noise spec's SNR convention) and additive noise.
/// All randomness is drawn from streams keyed by (seed, point, trial, role),
/// so any single component can be regenerated independently.
Problem generate_problem(Index m, Index p, Index k, Index q, const NoiseSpec& noise,
                         std::uint64_t seed, std::uint64_t point, std::uint64_t trial);

/// (1/(Lq)) sum_l ||S_hat - S||^2.
double mse(const std::vector<TrialResult>& results, Index q);

/// Fraction of trials with exact support recovery.
double per(const std::vector<TrialResult>& results);

/// Number of K-subsets of [p], or -1 when it exceeds `budget`.
long long subset_count(Index p, Index k, long long budget);

/// Exhaustive support search: least-squares residual over every K-subset of
/// columns, smallest residual wins, ties to the lexicographically smallest
/// subset. Throws when C(p,K) exceeds 10^6.
SupportSet oracle_search(const ComplexMatrix& y, const ComplexMatrix& phi, Index k);

struct SweepRow {
  std::string sweep_var;
  double sweep_value = 0.0;
  MixedNormIndex method = MixedNormIndex::l22();
  int trials = 0;
  double per = 0.0;
  double mse = 0.0;
  double mse_db = 0.0;
  double mean_iters = 0.0;
};

struct SweepPointTiming {
  std::string sweep_var;
  double sweep_value = 0.0;
  int trials = 0;
  double wall_ms = 0.0;
};

struct SweepOutput {
  std::vector<SweepRow> rows;
  std::vector<SweepPointTiming> timing;
};

/// Runs trials x methods for every sweep point. Trial l sees identical data
/// for every method (paired comparison); trials may run concurrently but
/// results are aggregated in trial order, so the output is independent of
/// the thread count.
SweepOutput run_sweep(const ExperimentConfig& cfg);

/// results.csv. Deterministic: contains no timing columns.
void write_results_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows);
void write_timing_csv(const std::filesystem::path& path, const std::vector<SweepPointTiming>& timing);

/// Runs fn(0..n-1) on up to `threads` workers; exceptions are rethrown.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

int resolve_threads(int requested);

}  // namespace sniht
