#include "sniht/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace sniht {

namespace {

enum class StreamRole : std::uint64_t { Matrix = 1, Signal = 2, Support = 3, Noise = 4 };

RngStream role_stream(std::uint64_t seed, std::uint64_t point, std::uint64_t trial, StreamRole role) {
  return RngStream(seed, derive_stream(point, trial, static_cast<std::uint64_t>(role)));
}

}  // namespace

std::string to_string(SweepKind kind) {
  switch (kind) {
    case SweepKind::Snr: return "snr";
    case SweepKind::Nu: return "nu";
    case SweepKind::SnapshotCount: return "q";
  }
  return "?";
}

Problem generate_problem(Index m, Index p, Index k, Index q, const NoiseSpec& noise,
                         std::uint64_t seed, std::uint64_t point, std::uint64_t trial) {
  if (m < 1 || p < 1 || q < 1 || k < 0 || k > p) {
    throw std::invalid_argument("generate_problem: invalid dimensions");
  }
  Problem prob;

  RngStream mrng = role_stream(seed, point, trial, StreamRole::Matrix);
  prob.phi.resize(m, p);
  for (Index j = 0; j < p; ++j) {
    for (Index i = 0; i < m; ++i) prob.phi(i, j) = mrng.circular_normal();
    prob.phi.col(j) /= prob.phi.col(j).norm();
  }

  RngStream srng = role_stream(seed, point, trial, StreamRole::Support);
  std::vector<Index> pool(static_cast<std::size_t>(p));
  for (Index i = 0; i < p; ++i) pool[static_cast<std::size_t>(i)] = i;
  for (Index i = 0; i < k; ++i) {
    const auto j = static_cast<Index>(srng.bounded(static_cast<std::uint64_t>(p - i))) + i;
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  prob.support.assign(pool.begin(), pool.begin() + k);
  std::sort(prob.support.begin(), prob.support.end());

  // IG-CG noise is generated at unit row covariance, so the SNR is set on the
  // signal side; the other families scale the noise instead.
  const double sigma_x =
      (noise.family == NoiseFamily::IgCg) ? std::pow(10.0, noise.snr_db / 20.0) : noise.sigma_x;

  RngStream sigrng = role_stream(seed, point, trial, StreamRole::Signal);
  prob.s = ComplexMatrix::Zero(p, q);
  for (Index i : prob.support) {
    for (Index j = 0; j < q; ++j) {
      const double phase = 2.0 * std::numbers::pi * sigrng.uniform();
      prob.s(i, j) = std::polar(sigma_x, phase);
    }
  }

  RngStream nrng = role_stream(seed, point, trial, StreamRole::Noise);
  prob.y = sample_noise(noise, m, q, nrng);
  for (Index i : prob.support) {
    prob.y.noalias() += prob.phi.col(i) * prob.s.row(i);
  }
  return prob;
}

double mse(const std::vector<TrialResult>& results, Index q) {
  if (results.empty()) throw std::invalid_argument("mse: empty result list");
  if (q < 1) throw std::invalid_argument("mse: q must be >= 1");
  double acc = 0.0;
  for (const auto& r : results) acc += r.squared_error;
  return acc / (static_cast<double>(results.size()) * static_cast<double>(q));
}

double per(const std::vector<TrialResult>& results) {
  if (results.empty()) throw std::invalid_argument("per: empty result list");
  double hits = 0.0;
  for (const auto& r : results) hits += r.exact_recovery ? 1.0 : 0.0;
  return hits / static_cast<double>(results.size());
}

long long subset_count(Index p, Index k, long long budget) {
  if (k < 0 || k > p) return 0;
  long long count = 1;
  for (Index i = 1; i <= k; ++i) {
    count = count * static_cast<long long>(p - k + i) / static_cast<long long>(i);
    if (count > budget) return -1;
  }
  return count;
}

SupportSet oracle_search(const ComplexMatrix& y, const ComplexMatrix& phi, Index k) {
  constexpr long long kBudget = 1000000;
  const Index p = phi.cols();
  if (y.rows() != phi.rows()) throw std::invalid_argument("oracle_search: dimension mismatch");
  if (k < 0 || k > p) throw std::invalid_argument("oracle_search: k out of range");
  if (subset_count(p, k, kBudget) < 0) {
    throw std::runtime_error("oracle_search: C(p,K) exceeds the combinatorial budget");
  }
  if (k == 0) return {};

  SupportSet subset(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) subset[static_cast<std::size_t>(i)] = i;

  SupportSet best;
  double best_resid = std::numeric_limits<double>::infinity();
  for (;;) {
    const ComplexMatrix phi_sub = select_columns(phi, subset);
    const ComplexMatrix x = phi_sub.colPivHouseholderQr().solve(y);
    const double resid = (y - phi_sub * x).squaredNorm();
    if (resid < best_resid) {  // strict: ties keep the lexicographically first subset
      best_resid = resid;
      best = subset;
    }
    // next K-subset in lexicographic order
    Index i = k - 1;
    while (i >= 0 && subset[static_cast<std::size_t>(i)] == p - k + i) --i;
    if (i < 0) break;
    ++subset[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < k; ++j) {
      subset[static_cast<std::size_t>(j)] = subset[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return best;
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  threads = std::min(resolve_threads(threads), n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

SweepOutput run_sweep(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw std::invalid_argument("run_sweep: trials must be >= 1");
  if (cfg.methods.empty()) throw std::invalid_argument("run_sweep: no methods selected");
  if (cfg.sweep_values.empty()) throw std::invalid_argument("run_sweep: empty sweep grid");
  if (cfg.k > cfg.p) throw std::invalid_argument("run_sweep: K exceeds p");

  const std::string sweep_var = to_string(cfg.sweep);
  const std::size_t n_methods = cfg.methods.size();
  SweepOutput out;

  for (std::size_t point = 0; point < cfg.sweep_values.size(); ++point) {
    const double value = cfg.sweep_values[point];

    NoiseSpec noise = cfg.noise;
    Index q = cfg.q;
    switch (cfg.sweep) {
      case SweepKind::Snr:
        noise.snr_db = value;
        break;
      case SweepKind::Nu:
        noise.nu = value;
        break;
      case SweepKind::SnapshotCount:
        q = static_cast<Index>(value);
        if (q < 1 || static_cast<double>(q) != value) {
          throw std::invalid_argument("run_sweep: q grid values must be positive integers");
        }
        break;
    }

    std::vector<std::vector<TrialResult>> per_method(n_methods);
    for (auto& v : per_method) v.resize(static_cast<std::size_t>(cfg.trials));

    const auto t0 = std::chrono::steady_clock::now();
    parallel_for(cfg.trials, cfg.threads, [&](int trial) {
      const Problem prob =
          generate_problem(cfg.m, cfg.p, cfg.k, q, noise, cfg.seed,
                           static_cast<std::uint64_t>(point), static_cast<std::uint64_t>(trial));
      for (std::size_t mi = 0; mi < n_methods; ++mi) {
        SolverConfig scfg;
        scfg.sparsity = cfg.k;
        scfg.norm = cfg.methods[mi];
        scfg.max_iters = cfg.max_iters;
        scfg.rel_tol = cfg.rel_tol;
        const SolverState st = sniht_solve(prob.y, prob.phi, scfg);
        TrialResult& res = per_method[mi][static_cast<std::size_t>(trial)];
        res.method = cfg.methods[mi];
        res.true_support = prob.support;
        res.est_support = st.signal.support;
        res.squared_error = (st.signal.matrix - prob.s).squaredNorm();
        res.exact_recovery = res.est_support == res.true_support;
        res.iterations = st.iterations;
      }
    });
    const auto t1 = std::chrono::steady_clock::now();

    for (std::size_t mi = 0; mi < n_methods; ++mi) {
      const auto& results = per_method[mi];
      SweepRow row;
      row.sweep_var = sweep_var;
      row.sweep_value = value;
      row.method = cfg.methods[mi];
      row.trials = cfg.trials;
      row.per = per(results);
      row.mse = mse(results, q);
      row.mse_db = 10.0 * std::log10(std::max(row.mse, 1e-300));
      double iters = 0.0;
      for (const auto& r : results) iters += r.iterations;
      row.mean_iters = iters / static_cast<double>(cfg.trials);
      out.rows.push_back(std::move(row));
    }
    out.timing.push_back(
        {sweep_var, value, cfg.trials,
         std::chrono::duration<double, std::milli>(t1 - t0).count()});
  }
  return out;
}

namespace {

std::string format_double(double v, const char* fmt = "%.9g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

}  // namespace

void write_results_csv(const std::filesystem::path& path, const std::vector<SweepRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << "sweep_var,sweep_value,p_q,trials,per,mse,mse_db,mean_iters\n";
  for (const auto& r : rows) {
    out << r.sweep_var << ',' << format_double(r.sweep_value) << ",\"" << r.method.label()
        << "\"," << r.trials << ',' << format_double(r.per) << ',' << format_double(r.mse)
        << ',' << format_double(r.mse_db) << ',' << format_double(r.mean_iters) << '\n';
  }
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

void write_timing_csv(const std::filesystem::path& path,
                      const std::vector<SweepPointTiming>& timing) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << "sweep_var,sweep_value,trials,wall_ms\n";
  for (const auto& t : timing) {
    out << t.sweep_var << ',' << format_double(t.sweep_value) << ',' << t.trials << ','
        << format_double(t.wall_ms, "%.3f") << '\n';
  }
}

}  // namespace sniht
