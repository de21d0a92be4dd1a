// Command-line front end: single-instance recovery, Monte Carlo sweeps,
// source localization runs and the exhaustive-oracle checker.

#include <CLI11.hpp>

#include "sniht/config_file.hpp"
#include "sniht/csv.hpp"
#include "sniht/doa.hpp"
#include "sniht/experiment.hpp"
#include "sniht/noise.hpp"
#include "sniht/solver.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace sniht;

#ifndef SNIHT_VERSION
#define SNIHT_VERSION "0.1.0"
#endif
#ifndef SNIHT_BUILD_REF
#define SNIHT_BUILD_REF "unknown"
#endif

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNotConverged = 2;

MixedNormIndex parse_norm(const std::string& text) {
  if (text.size() == 3 && text[1] == ',' && std::isdigit(text[0]) && std::isdigit(text[2])) {
    return MixedNormIndex(text[0] - '0', text[2] - '0');
  }
  throw std::invalid_argument("norm must be given as p,q (one of 2,2 1,1 2,1), got '" + text +
                              "'");
}

std::vector<MixedNormIndex> parse_methods(const std::vector<std::string>& tokens) {
  std::vector<MixedNormIndex> methods;
  for (const auto& t : tokens) methods.push_back(parse_norm(t));
  return methods;
}

NoiseSpec parse_noise(ConfigMap& cfg, bool nu_from_grid) {
  NoiseSpec noise;
  noise.family = noise_family_from_string(cfg.get_string("noise"));
  noise.snr_db = cfg.get_double("snr_db", 10.0);
  if (noise.family == NoiseFamily::StudentT && !nu_from_grid) {
    noise.nu = cfg.get_double("nu");
  }
  if (noise.family == NoiseFamily::IgCg) {
    noise.lambda = cfg.get_double("lambda");
  }
  return noise;
}

std::string timestamp_utc() {
  char buf[32];
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(const fs::path& path, const std::string& subcommand,
                    const fs::path& config_path, const ConfigMap& cfg, std::uint64_t seed,
                    int threads, double wall_ms) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << "# run manifest\n";
  out << "tool = sniht " << SNIHT_VERSION << "\n";
  out << "build = " << SNIHT_BUILD_REF << "\n";
  out << "subcommand = " << subcommand << "\n";
  out << "config_file = " << config_path.string() << "\n";
  out << "seed = " << seed << "\n";
  out << "threads = " << threads << "\n";
  out << "timestamp = " << timestamp_utc() << "\n";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", wall_ms);
  out << "wall_ms_total = " << buf << "\n";
  out << "\n# config echo\n";
  for (const auto& line : cfg.lines()) out << "# " << line << "\n";
}

struct CommonOptions {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed_override;
  bool verbose = false;
};

fs::path prepare_out_dir(const std::string& dir) {
  fs::path out(dir);
  fs::create_directories(out);
  return out;
}

int cmd_recover(const std::string& y_path, const std::string& phi_path, Index k,
                const std::string& norm_text, const std::string& out_dir, int max_iters,
                double rel_tol, const std::string& init_text, bool trace) {
  const ComplexMatrix y = read_complex_csv(y_path);
  const ComplexMatrix phi = read_complex_csv(phi_path);

  SolverConfig cfg;
  cfg.sparsity = k;
  cfg.norm = parse_norm(norm_text);
  cfg.max_iters = max_iters;
  cfg.rel_tol = rel_tol;
  cfg.record_trace = trace;
  if (init_text == "rownorm") {
    cfg.init_mode = InitMode::RowNorm;
  } else if (init_text == "peak") {
    cfg.init_mode = InitMode::Peak;
  } else {
    throw std::invalid_argument("init must be 'rownorm' or 'peak'");
  }

  const SolverState st = sniht_solve(y, phi, cfg);

  const fs::path out = prepare_out_dir(out_dir);
  write_complex_csv(out / "S.csv", st.signal.matrix);
  write_support_line(out / "support.txt", st.signal.support);
  if (trace) {
    std::ofstream tf(out / "trace.csv");
    tf << "iter,objective,stepsize,support_change\n";
    char buf[96];
    for (std::size_t i = 0; i < st.trace.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%zu,%.9g,%.9g,%d\n", i + 1, st.trace[i].objective,
                    st.trace[i].stepsize, st.trace[i].support_change);
      tf << buf;
    }
  }
  std::cerr << (st.converged ? "converged" : "iteration cap reached") << " after "
            << st.iterations << " iterations; |support| = " << st.signal.support.size() << "\n";
  return st.converged ? kExitOk : kExitNotConverged;
}

int cmd_simulate(const CommonOptions& opts) {
  ConfigMap cfg = ConfigMap::parse_file(opts.config_path);

  ExperimentConfig exp;
  exp.m = cfg.get_int("m");
  exp.p = cfg.get_int("p");
  exp.k = cfg.get_int("k");
  exp.q = cfg.get_int("q", 16);
  exp.trials = static_cast<int>(cfg.get_int("trials"));
  exp.seed = static_cast<std::uint64_t>(cfg.get_int("seed"));
  exp.threads = static_cast<int>(cfg.get_int("threads", 0));
  exp.max_iters = static_cast<int>(cfg.get_int("max_iters", 500));
  exp.rel_tol = cfg.get_double("rel_tol", 1e-6);
  exp.methods = parse_methods(cfg.get_string_list("methods"));

  const std::string sweep = cfg.get_string("sweep");
  if (sweep == "snr") {
    exp.sweep = SweepKind::Snr;
    exp.sweep_values = cfg.get_double_list("snr_grid");
    exp.noise = parse_noise(cfg, false);
  } else if (sweep == "nu") {
    exp.sweep = SweepKind::Nu;
    exp.sweep_values = cfg.get_double_list("nu_grid");
    exp.noise = parse_noise(cfg, true);
    if (exp.noise.family != NoiseFamily::StudentT) {
      throw std::invalid_argument("sweep = nu requires noise = student_t");
    }
  } else if (sweep == "q") {
    exp.sweep = SweepKind::SnapshotCount;
    exp.sweep_values = cfg.get_double_list("q_grid");
    exp.noise = parse_noise(cfg, false);
  } else {
    throw std::invalid_argument("sweep must be one of snr, nu, q; got '" + sweep + "'");
  }
  if (opts.seed_override) exp.seed = *opts.seed_override;
  cfg.check_consumed();

  const auto t0 = std::chrono::steady_clock::now();
  const SweepOutput out = run_sweep(exp);
  const auto t1 = std::chrono::steady_clock::now();
  const double wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

  const fs::path dir = prepare_out_dir(opts.out_dir);
  write_results_csv(dir / "results.csv", out.rows);
  write_timing_csv(dir / "timing.csv", out.timing);
  write_manifest(dir / "manifest.txt", "simulate", opts.config_path, cfg, exp.seed,
                 resolve_threads(exp.threads), wall_ms);
  if (opts.verbose) {
    for (const auto& r : out.rows) {
      std::cerr << r.sweep_var << "=" << r.sweep_value << " (" << r.method.label()
                << "): per=" << r.per << " mse_db=" << r.mse_db << "\n";
    }
  }
  std::cerr << "wrote " << (dir / "results.csv").string() << " (" << out.rows.size()
            << " rows)\n";
  return kExitOk;
}

int cmd_doa(const CommonOptions& opts) {
  ConfigMap cfg = ConfigMap::parse_file(opts.config_path);

  DoaExperimentConfig doa;
  doa.m = cfg.get_int("m", 20);
  doa.scenario.true_doas_deg = cfg.get_double_list("doas");
  const auto k = cfg.get_int("k", static_cast<long long>(doa.scenario.true_doas_deg.size()));
  if (k != static_cast<long long>(doa.scenario.true_doas_deg.size())) {
    throw std::invalid_argument("k does not match the number of entries in 'doas'");
  }
  doa.scenario.q = cfg.get_int("q");
  const double snr_db = cfg.get_double("snr_db");
  doa.scenario.source_power = std::pow(10.0, snr_db / 10.0);
  doa.scenario.noise.family = noise_family_from_string(cfg.get_string("noise", "ig_cg"));
  if (doa.scenario.noise.family == NoiseFamily::IgCg) {
    doa.scenario.noise.lambda = cfg.get_double("lambda");
  }
  doa.grid_lo = cfg.get_double("grid_lo", -90.0);
  doa.grid_hi = cfg.get_double("grid_hi", 90.0);
  doa.grid_step = cfg.get_double("grid_step", 2.0);
  doa.trials = static_cast<int>(cfg.get_int("trials"));
  doa.seed = static_cast<std::uint64_t>(cfg.get_int("seed"));
  doa.threads = static_cast<int>(cfg.get_int("threads", 0));
  doa.max_iters = static_cast<int>(cfg.get_int("max_iters", 500));
  doa.rel_tol = cfg.get_double("rel_tol", 1e-6);
  for (const auto& name : cfg.get_string_list("methods")) {
    doa.methods.push_back(DoaMethod::from_string(name));
  }
  if (opts.seed_override) doa.seed = *opts.seed_override;
  cfg.check_consumed();

  const DoaExperimentOutput out = run_doa_experiment(doa);

  const fs::path dir = prepare_out_dir(opts.out_dir);
  write_histogram_csv(dir / "histogram.csv", out);
  write_per_summary_csv(dir / "per_summary.csv", out);
  write_manifest(dir / "manifest.txt", "doa", opts.config_path, cfg, doa.seed,
                 resolve_threads(doa.threads), out.wall_ms);
  for (const auto& m : out.methods) {
    std::cerr << m.method.label() << ": per=" << m.per << "\n";
  }
  return kExitOk;
}

int cmd_oracle(const CommonOptions& opts) {
  ConfigMap cfg = ConfigMap::parse_file(opts.config_path);

  const Index m = cfg.get_int("m");
  const Index p = cfg.get_int("p");
  const Index k = cfg.get_int("k");
  const Index q = cfg.get_int("q", 4);
  const int trials = static_cast<int>(cfg.get_int("trials"));
  std::uint64_t seed = static_cast<std::uint64_t>(cfg.get_int("seed"));
  const int threads = static_cast<int>(cfg.get_int("threads", 0));
  NoiseSpec noise;
  noise.family = noise_family_from_string(cfg.get_string("noise", "none"));
  if (noise.family != NoiseFamily::None) {
    noise.snr_db = cfg.get_double("snr_db");
    if (noise.family == NoiseFamily::StudentT) noise.nu = cfg.get_double("nu");
    if (noise.family == NoiseFamily::IgCg) noise.lambda = cfg.get_double("lambda");
  }
  const auto methods = parse_methods(cfg.get_string_list("methods"));
  if (opts.seed_override) seed = *opts.seed_override;
  cfg.check_consumed();

  if (subset_count(p, k, 1000000) < 0) {
    throw std::runtime_error("oracle: C(p,K) exceeds the combinatorial budget of 1e6");
  }

  struct Row {
    SupportSet oracle;
    std::vector<SupportSet> method_support;
    std::vector<char> agree;
  };
  std::vector<Row> rows(static_cast<std::size_t>(trials));

  parallel_for(trials, threads, [&](int t) {
    Row& row = rows[static_cast<std::size_t>(t)];
    if (k == 0) {  // trivial: every support is empty
      row.oracle = {};
      row.method_support.assign(methods.size(), {});
      row.agree.assign(methods.size(), 1);
      return;
    }
    const Problem prob =
        generate_problem(m, p, k, q, noise, seed, 0, static_cast<std::uint64_t>(t));
    row.oracle = oracle_search(prob.y, prob.phi, k);
    for (const auto& method : methods) {
      SolverConfig scfg;
      scfg.sparsity = k;
      scfg.norm = method;
      const SolverState st = sniht_solve(prob.y, prob.phi, scfg);
      row.method_support.push_back(st.signal.support);
      row.agree.push_back(st.signal.support == row.oracle ? 1 : 0);
    }
  });

  const fs::path dir = prepare_out_dir(opts.out_dir);
  {
    std::ofstream out(dir / "comparison.csv");
    out << "trial,oracle_support";
    for (const auto& method : methods) {
      out << ",\"support_" << method.label() << "\",\"agree_" << method.label() << "\"";
    }
    out << '\n';
    const auto join = [](const SupportSet& s) {
      std::string text;
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (i > 0) text += ';';
        text += std::to_string(s[i] + 1);
      }
      return text;
    };
    for (int t = 0; t < trials; ++t) {
      const Row& row = rows[static_cast<std::size_t>(t)];
      out << (t + 1) << ',' << join(row.oracle);
      for (std::size_t mi = 0; mi < methods.size(); ++mi) {
        out << ',' << join(row.method_support.empty() ? SupportSet{} : row.method_support[mi])
            << ',' << static_cast<int>(row.agree[mi]);
      }
      out << '\n';
    }
  }
  {
    std::ofstream out(dir / "agreement.csv");
    out << "method,trials,agreement_rate\n";
    char buf[32];
    for (std::size_t mi = 0; mi < methods.size(); ++mi) {
      double hits = 0.0;
      for (const auto& row : rows) hits += row.agree[mi];
      std::snprintf(buf, sizeof(buf), "%.9g", hits / trials);
      out << '"' << methods[mi].label() << "\"," << trials << ',' << buf << '\n';
    }
  }
  write_manifest(dir / "manifest.txt", "oracle", opts.config_path, cfg, seed,
                 resolve_threads(threads), 0.0);
  return kExitOk;
}

int cmd_selftest() {
  int failures = 0;
  const auto report = [&](const char* name, bool ok) {
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << "\n";
    if (!ok) ++failures;
  };

  {
    ComplexMatrix s(2, 2);
    s << 3.0, 4.0, 0.0, 0.0;
    report("mixed norms", std::abs(mixed_norm(s, 2, 1) - 5.0) < 1e-12 &&
                              std::abs(mixed_norm(s, 1, 1) - 7.0) < 1e-12);
  }
  {
    const Problem prob = generate_problem(16, 24, 2, 4, NoiseSpec{NoiseFamily::None}, 1, 0, 0);
    SolverConfig scfg;
    scfg.sparsity = 2;
    const SolverState st = sniht_solve(prob.y, prob.phi, scfg);
    report("noiseless recovery matches the exhaustive oracle",
           st.signal.support == prob.support &&
               oracle_search(prob.y, prob.phi, 2) == prob.support);
  }
  {
    RngStream rng(2, 0);
    const ComplexMatrix e = sample_t_noise(200, 500, 3.0, 1.0, rng);
    std::vector<double> mods;
    for (Index j = 0; j < e.cols(); ++j) {
      for (Index i = 0; i < e.rows(); ++i) mods.push_back(std::norm(e(i, j)));
    }
    std::nth_element(mods.begin(), mods.begin() + mods.size() / 2, mods.end());
    const double med = mods[mods.size() / 2];
    report("t-noise median scale", std::abs(med - 1.0) < 0.05);
  }
  {
    const DoaGrid grid = build_grid(-90.0, 90.0, 2.0, 20);
    report("steering grid", grid.size() == 91 && grid.index_of(8.0) == 49);
  }
  return failures == 0 ? kExitOk : kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SNIHT(p,q): robust joint-sparse recovery from multiple measurement vectors"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("sniht ") + SNIHT_VERSION);

  // recover
  auto* recover = app.add_subcommand("recover", "recover a row-sparse signal from Y and Phi");
  std::string y_path, phi_path, norm_text = "2,2", init_text = "rownorm", rec_out = ".";
  Index k = 1;
  int max_iters = 500;
  double rel_tol = 1e-6;
  bool trace = false;
  recover->add_option("Y", y_path, "measurement matrix CSV (m x q complex)")->required();
  recover->add_option("Phi", phi_path, "measurement matrix CSV (m x p complex)")->required();
  recover->add_option("-k,--sparsity", k, "row-sparsity level K")->required();
  recover->add_option("-n,--norm", norm_text, "residual norm pair p,q (2,2 | 1,1 | 2,1)");
  recover->add_option("-o,--out", rec_out, "output directory");
  recover->add_option("--max-iters", max_iters, "iteration cap");
  recover->add_option("--tol", rel_tol, "relative-change tolerance");
  recover->add_option("--init", init_text, "initial support rule: rownorm | peak");
  recover->add_flag("--trace", trace, "write per-iteration trace.csv");

  // config-driven subcommands
  CommonOptions sim_opts, doa_opts, oracle_opts;
  const auto add_common = [](CLI::App* sub, CommonOptions& opts) {
    sub->add_option("config", opts.config_path, "run configuration file")->required();
    sub->add_option("-o,--out", opts.out_dir, "output directory");
    sub->add_option("--seed", opts.seed_override, "override the config seed");
    sub->add_flag("-v,--verbose", opts.verbose, "per-row progress on stderr");
  };
  add_common(app.add_subcommand("simulate", "Monte Carlo recovery sweeps"), sim_opts);
  add_common(app.add_subcommand("doa", "source-localization experiment"), doa_opts);
  add_common(app.add_subcommand("oracle", "compare methods against the exhaustive oracle"),
             oracle_opts);
  app.add_subcommand("selftest", "quick internal consistency checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (app.got_subcommand("recover")) {
      return cmd_recover(y_path, phi_path, k, norm_text, rec_out, max_iters, rel_tol, init_text,
                         trace);
    }
    if (app.got_subcommand("simulate")) return cmd_simulate(sim_opts);
    if (app.got_subcommand("doa")) return cmd_doa(doa_opts);
    if (app.got_subcommand("oracle")) return cmd_oracle(oracle_opts);
    if (app.got_subcommand("selftest")) return cmd_selftest();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
