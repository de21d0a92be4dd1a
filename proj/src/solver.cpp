#include "sniht/solver.hpp"

#include "sniht/spatial_sign.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sniht {

namespace {

void validate_inputs(const ComplexMatrix& y, const ComplexMatrix& phi, const SolverConfig& cfg) {
  if (y.rows() != phi.rows()) {
    throw std::invalid_argument("sniht_solve: Y and Phi row counts differ");
  }
  if (y.size() == 0 || phi.size() == 0) {
    throw std::invalid_argument("sniht_solve: empty input");
  }
  if (cfg.sparsity < 1) throw std::invalid_argument("sniht_solve: sparsity must be >= 1");
  if (cfg.sparsity > phi.cols()) {
    throw std::invalid_argument("sniht_solve: sparsity exceeds signal length");
  }
  if (cfg.max_iters < 1) throw std::invalid_argument("sniht_solve: max_iters must be >= 1");
  if (!(cfg.rel_tol > 0.0)) throw std::invalid_argument("sniht_solve: rel_tol must be > 0");
  if (!(cfg.stepsize_floor > 0.0)) {
    throw std::invalid_argument("sniht_solve: stepsize_floor must be > 0");
  }
  require_finite(y, "Y");
  require_finite(phi, "Phi");
}

// Y - Phi_Gamma S_(Gamma) as rank-1 updates; S has at most K nonzero rows.
void residual_into(const ComplexMatrix& y, const ComplexMatrix& phi, const ComplexMatrix& s,
                   const SupportSet& support, ComplexMatrix& e) {
  e = y;
  for (Index i : support) {
    e.noalias() -= phi.col(i) * s.row(i);
  }
}

int symmetric_difference_size(const SupportSet& a, const SupportSet& b) {
  std::size_t ia = 0, ib = 0;
  int count = 0;
  while (ia < a.size() && ib < b.size()) {
    if (a[ia] == b[ib]) {
      ++ia;
      ++ib;
    } else if (a[ia] < b[ib]) {
      ++ia;
      ++count;
    } else {
      ++ib;
      ++count;
    }
  }
  count += static_cast<int>((a.size() - ia) + (b.size() - ib));
  return count;
}

}  // namespace

SupportSet peak_select(const RealVector& values, Index k) {
  const Index n = values.size();
  if (k < 0 || k > n) throw std::invalid_argument("peak_select: k must satisfy 0 <= k <= n");
  std::vector<Index> peaks;
  std::vector<Index> rest;
  for (Index i = 0; i < n; ++i) {
    const bool left_ok = (i == 0) || values[i] > values[i - 1];
    const bool right_ok = (i == n - 1) || values[i] > values[i + 1];
    if (left_ok && right_ok) {
      peaks.push_back(i);
    } else {
      rest.push_back(i);
    }
  }
  const auto larger = [&values](Index a, Index b) {
    if (values[a] != values[b]) return values[a] > values[b];
    return a < b;
  };
  std::sort(peaks.begin(), peaks.end(), larger);
  std::sort(rest.begin(), rest.end(), larger);

  SupportSet selected;
  for (Index i : peaks) {
    if (static_cast<Index>(selected.size()) == k) break;
    selected.push_back(i);
  }
  for (Index i : rest) {
    if (static_cast<Index>(selected.size()) == k) break;
    selected.push_back(i);
  }
  std::sort(selected.begin(), selected.end());
  return selected;
}

SupportSet init_support(const ComplexMatrix& y, const ComplexMatrix& phi, const SolverConfig& cfg) {
  validate_inputs(y, phi, cfg);
  ComplexMatrix g0 = phi.adjoint() * apply_psi(y, cfg.norm);
  if (cfg.init_mode == InitMode::RowNorm) {
    return hard_threshold_in_place(g0, cfg.sparsity);
  }
  return peak_select(g0.rowwise().norm(), cfg.sparsity);
}

double stepsize_l2(const ComplexMatrix& g, const ComplexMatrix& phi, const SupportSet& support,
                   double mu_prev, double floor) {
  const ComplexMatrix gg = select_rows(g, support);
  const ComplexMatrix b = select_columns(phi, support) * gg;
  const double den = b.squaredNorm();
  if (den < floor * floor) {
    return mu_prev > 0.0 ? mu_prev : 1.0;
  }
  return gg.squaredNorm() / den;
}

double fp_step(const ComplexMatrix& e, const ComplexMatrix& b, double mu_prev,
               MixedNormIndex idx, double floor) {
  if (e.rows() != b.rows() || e.cols() != b.cols()) {
    throw std::invalid_argument("fp_step: E and B dimensions differ");
  }
  double num = 0.0;
  double den = 0.0;
  if (idx == MixedNormIndex::l11()) {
    for (Index j = 0; j < e.cols(); ++j) {
      for (Index i = 0; i < e.rows(); ++i) {
        const Complex r = e(i, j);
        const Complex bij = b(i, j);
        const double rt = std::abs(r - mu_prev * bij);
        const double w = 1.0 / std::max(rt, floor);
        num += w * (bij.real() * r.real() + bij.imag() * r.imag());  // Re(b* r)
        den += w * std::norm(bij);
      }
    }
  } else if (idx == MixedNormIndex::l21()) {
    for (Index i = 0; i < e.rows(); ++i) {
      const double rt = (e.row(i) - mu_prev * b.row(i)).norm();
      const double w = 1.0 / std::max(rt, floor);
      num += w * b.row(i).conjugate().cwiseProduct(e.row(i)).sum().real();  // Re(b_(i)^H r_(i))
      den += w * b.row(i).squaredNorm();
    }
  } else {
    throw std::invalid_argument("fp_step: only (1,1) and (2,1) have fixed-point stepsizes");
  }
  if (den == 0.0) return mu_prev;
  return num / den;
}

double stepsize_fp(const ComplexMatrix& e, const ComplexMatrix& b, double mu_prev,
                   MixedNormIndex idx, double floor) {
  if (b.isZero(0.0)) return mu_prev;
  if (e.isZero(0.0) && mu_prev == 0.0) return mu_prev;  // R~ = E = 0: nothing to fit
  const double mu = fp_step(e, b, mu_prev, idx, floor);
  return mu > 0.0 ? mu : floor;
}

SolverState sniht_solve(const ComplexMatrix& y, const ComplexMatrix& phi, const SolverConfig& cfg) {
  validate_inputs(y, phi, cfg);
  const Index p = phi.cols();
  const Index q = y.cols();
  const Index k = cfg.sparsity;
  const double delta = cfg.stepsize_floor;
  const bool l2_norm = cfg.norm == MixedNormIndex::l22();

  SolverState state;
  state.signal.matrix = ComplexMatrix::Zero(p, q);
  SupportSet support = init_support(y, phi, cfg);

  ComplexMatrix e = y;             // residual of S = 0
  ComplexMatrix e_psi(y.rows(), q);
  ComplexMatrix g(p, q);
  ComplexMatrix next(p, q);
  double mu = 0.0;
  int n = 0;

  for (;;) {
    e_psi = apply_psi(e, cfg.norm);
    g.noalias() = phi.adjoint() * e_psi;

    if (l2_norm) {
      mu = stepsize_l2(g, phi, support, mu, delta);
    } else {
      const ComplexMatrix b = select_columns(phi, support) * select_rows(g, support);
      mu = stepsize_fp(e, b, mu, cfg.norm, delta);
    }

    next = state.signal.matrix + mu * g;
    SupportSet support_next = hard_threshold_in_place(next, k);

    const double diff = (next - state.signal.matrix).norm();
    const double base = std::max(state.signal.matrix.norm(), delta);
    const bool support_stable = support_next == support;

    state.signal.matrix.swap(next);
    residual_into(y, phi, state.signal.matrix, support_next, e);
    ++n;

    if (cfg.record_trace) {
      state.trace.push_back({std::pow(mixed_norm(e, cfg.norm.p(), cfg.norm.q()), cfg.norm.q()),
                             mu, symmetric_difference_size(support_next, support)});
    }
    support = std::move(support_next);

    if (support_stable && diff / base < cfg.rel_tol) {
      state.converged = true;
      break;
    }
    if (n >= cfg.max_iters) {
      state.converged = false;
      break;
    }
  }

  state.signal.support = std::move(support);
  state.stepsize = mu;
  state.iterations = n;
  state.residual = std::move(e);
  return state;
}

}  // namespace sniht
