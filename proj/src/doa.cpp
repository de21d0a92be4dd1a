#include "sniht/doa.hpp"

#include "sniht/experiment.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace sniht {

ComplexVector steering_vector(double theta_deg, Index m) {
  if (m < 1) throw std::invalid_argument("steering_vector: m must be >= 1");
  if (theta_deg < -90.0 || theta_deg > 90.0) {
    throw std::invalid_argument("steering_vector: angle outside [-90, 90]");
  }
  const double u = std::sin(theta_deg * std::numbers::pi / 180.0);
  ComplexVector a(m);
  for (Index sensor = 0; sensor < m; ++sensor) {
    a[sensor] = std::polar(1.0, -std::numbers::pi * static_cast<double>(sensor) * u);
  }
  return a;
}

Index DoaGrid::index_of(double angle_deg) const {
  for (std::size_t j = 0; j < angles_deg.size(); ++j) {
    if (std::abs(angles_deg[j] - angle_deg) < 1e-9) return static_cast<Index>(j);
  }
  throw std::invalid_argument("angle " + std::to_string(angle_deg) + " is not a grid point");
}

DoaGrid build_grid(double lo_deg, double hi_deg, double step_deg, Index m) {
  if (!(lo_deg < hi_deg)) throw std::invalid_argument("build_grid: lo must be < hi");
  if (!(step_deg > 0.0)) throw std::invalid_argument("build_grid: step must be > 0");
  const double span = hi_deg - lo_deg;
  const double steps = span / step_deg;
  const Index n = static_cast<Index>(std::llround(steps));
  if (std::abs(steps - static_cast<double>(n)) > 1e-9) {
    throw std::invalid_argument("build_grid: step does not divide the span");
  }
  DoaGrid grid;
  grid.angles_deg.resize(static_cast<std::size_t>(n) + 1);
  grid.steering.resize(m, n + 1);
  for (Index j = 0; j <= n; ++j) {
    const double angle = lo_deg + static_cast<double>(j) * step_deg;
    grid.angles_deg[static_cast<std::size_t>(j)] = angle;
    grid.steering.col(j) = steering_vector(angle, m);
  }
  return grid;
}

ComplexMatrix simulate_snapshots(const DoaScenario& scenario, Index m, RngStream& signal_rng,
                                 RngStream& noise_rng) {
  const Index k = static_cast<Index>(scenario.true_doas_deg.size());
  if (k < 1) throw std::invalid_argument("simulate_snapshots: no sources");
  if (scenario.q < 1) throw std::invalid_argument("simulate_snapshots: q must be >= 1");
  if (!(scenario.source_power > 0.0)) {
    throw std::invalid_argument("simulate_snapshots: source power must be > 0");
  }
  ComplexMatrix a(m, k);
  for (Index j = 0; j < k; ++j) {
    a.col(j) = steering_vector(scenario.true_doas_deg[static_cast<std::size_t>(j)], m);
  }
  const double amp = std::sqrt(scenario.source_power);
  ComplexMatrix s(k, scenario.q);
  for (Index j = 0; j < scenario.q; ++j) {
    for (Index i = 0; i < k; ++i) s(i, j) = amp * signal_rng.circular_normal();
  }
  NoiseSpec unit_noise = scenario.noise;
  unit_noise.snr_db = 0.0;  // unit noise scale; the SNR lives on the signal side here
  ComplexMatrix y = sample_noise(unit_noise, m, scenario.q, noise_rng);
  y.noalias() += a * s;
  return y;
}

RealVector music_spectrum(const ComplexMatrix& y, const DoaGrid& grid, Index k) {
  const Index m = y.rows();
  const Index q = y.cols();
  if (k < 1 || k >= m) throw std::invalid_argument("music_spectrum: need 1 <= K < m");
  if (grid.steering.rows() != m) {
    throw std::invalid_argument("music_spectrum: grid built for a different sensor count");
  }
  const ComplexMatrix r = (y * y.adjoint()) / static_cast<double>(q);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(r);
  if (eig.info() != Eigen::Success) throw std::runtime_error("music_spectrum: eigensolver failed");
  const ComplexMatrix noise_basis = eig.eigenvectors().leftCols(m - k);  // ascending eigenvalues

  RealVector spectrum(grid.size());
  for (Index j = 0; j < grid.size(); ++j) {
    const double denom = (noise_basis.adjoint() * grid.steering.col(j)).squaredNorm();
    spectrum[j] = 1.0 / std::max(denom, std::numeric_limits<double>::min());
  }
  return spectrum;
}

std::string DoaMethod::label() const {
  return kind == Kind::Music ? "music" : "sniht(" + norm.label() + ")";
}

DoaMethod DoaMethod::from_string(const std::string& name) {
  if (name == "music") return music();
  if (name.size() == 3 && name[1] == ',') {
    return sniht(MixedNormIndex(name[0] - '0', name[2] - '0'));
  }
  throw std::invalid_argument("unknown DOA method '" + name + "' (expected 'music' or 'p,q')");
}

DoaEstimate estimate_doas(const ComplexMatrix& y, const DoaGrid& grid, Index k,
                          const DoaMethod& method, const SupportSet& true_indices,
                          int max_iters, double rel_tol) {
  DoaEstimate est;
  if (method.kind == DoaMethod::Kind::Music) {
    est.grid_indices = peak_select(music_spectrum(y, grid, k), k);
  } else {
    SolverConfig cfg;
    cfg.sparsity = k;
    cfg.norm = method.norm;
    cfg.init_mode = InitMode::Peak;
    cfg.max_iters = max_iters;
    cfg.rel_tol = rel_tol;
    const SolverState st = sniht_solve(y, grid.steering, cfg);
    est.grid_indices = st.signal.support;
    est.iterations = st.iterations;
  }
  est.angles_deg.reserve(est.grid_indices.size());
  for (Index j : est.grid_indices) {
    est.angles_deg.push_back(grid.angles_deg[static_cast<std::size_t>(j)]);
  }
  est.exact_recovery = est.grid_indices == true_indices;
  return est;
}

std::vector<double> doa_histogram(const std::vector<SupportSet>& estimates, const DoaGrid& grid) {
  if (estimates.empty()) throw std::invalid_argument("doa_histogram: no estimates");
  std::vector<double> counts(static_cast<std::size_t>(grid.size()), 0.0);
  std::size_t total = 0;
  for (const auto& est : estimates) {
    for (Index j : est) {
      counts.at(static_cast<std::size_t>(j)) += 1.0;
      ++total;
    }
  }
  if (total > 0) {
    for (auto& c : counts) c /= static_cast<double>(total);
  }
  return counts;
}

DoaExperimentOutput run_doa_experiment(const DoaExperimentConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("run_doa_experiment: trials must be >= 1");
  if (cfg.methods.empty()) throw std::invalid_argument("run_doa_experiment: no methods");

  DoaExperimentOutput out;
  out.grid = build_grid(cfg.grid_lo, cfg.grid_hi, cfg.grid_step, cfg.m);
  out.trials = cfg.trials;

  SupportSet truth;
  for (double angle : cfg.scenario.true_doas_deg) truth.push_back(out.grid.index_of(angle));
  std::sort(truth.begin(), truth.end());
  const Index k = static_cast<Index>(truth.size());

  const std::size_t n_methods = cfg.methods.size();
  std::vector<std::vector<SupportSet>> estimates(
      n_methods, std::vector<SupportSet>(static_cast<std::size_t>(cfg.trials)));
  std::vector<std::vector<char>> exact(n_methods,
                                       std::vector<char>(static_cast<std::size_t>(cfg.trials), 0));

  const auto t0 = std::chrono::steady_clock::now();
  parallel_for(cfg.trials, cfg.threads, [&](int trial) {
    RngStream signal_rng(cfg.seed, derive_stream(0, static_cast<std::uint64_t>(trial), 2));
    RngStream noise_rng(cfg.seed, derive_stream(0, static_cast<std::uint64_t>(trial), 4));
    const ComplexMatrix y = simulate_snapshots(cfg.scenario, cfg.m, signal_rng, noise_rng);
    for (std::size_t mi = 0; mi < n_methods; ++mi) {
      const DoaEstimate est = estimate_doas(y, out.grid, k, cfg.methods[mi], truth,
                                            cfg.max_iters, cfg.rel_tol);
      estimates[mi][static_cast<std::size_t>(trial)] = est.grid_indices;
      exact[mi][static_cast<std::size_t>(trial)] = est.exact_recovery ? 1 : 0;
    }
  });
  const auto t1 = std::chrono::steady_clock::now();
  out.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

  for (std::size_t mi = 0; mi < n_methods; ++mi) {
    DoaMethodSummary summary;
    summary.method = cfg.methods[mi];
    double hits = 0.0;
    for (char f : exact[mi]) hits += f;
    summary.per = hits / static_cast<double>(cfg.trials);
    summary.histogram = doa_histogram(estimates[mi], out.grid);
    out.methods.push_back(std::move(summary));
  }
  return out;
}

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

void write_histogram_csv(const std::filesystem::path& path, const DoaExperimentOutput& out) {
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot write '" + path.string() + "'");
  file << "angle_deg";
  for (const auto& m : out.methods) file << ",\"" << m.method.label() << "\"";
  file << '\n';
  for (Index j = 0; j < out.grid.size(); ++j) {
    file << format_double(out.grid.angles_deg[static_cast<std::size_t>(j)]);
    for (const auto& m : out.methods) {
      file << ',' << format_double(m.histogram[static_cast<std::size_t>(j)]);
    }
    file << '\n';
  }
}

void write_per_summary_csv(const std::filesystem::path& path, const DoaExperimentOutput& out) {
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot write '" + path.string() + "'");
  file << "method,trials,per\n";
  for (const auto& m : out.methods) {
    file << '"' << m.method.label() << "\"," << out.trials << ',' << format_double(m.per) << '\n';
  }
}

}  // namespace sniht
