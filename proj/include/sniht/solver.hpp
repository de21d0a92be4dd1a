#pragma once

#include "sniht/core.hpp"

#include <vector>

namespace sniht {

enum class InitMode { RowNorm, Peak };

struct SolverConfig {
  Index sparsity = 1;                            // K
  MixedNormIndex norm = MixedNormIndex::l22();   // (p,q)
  int max_iters = 500;
  double rel_tol = 1e-6;
  double stepsize_floor = 1e-10;                 // delta
  InitMode init_mode = InitMode::RowNorm;
  bool record_trace = false;
};

struct IterationRecord {
  double objective;     // ||Y - Phi S||_{p,q}^q after the update
  double stepsize;
  int support_change;   // size of the symmetric difference vs previous support
};

struct SolverState {
  RowSparseSignal signal;      // S and rsupp(S)
  double stepsize = 0.0;       // last mu
  int iterations = 0;
  ComplexMatrix residual;      // Y - Phi S at return
  bool converged = false;      // support stable and relative change < rel_tol
  std::vector<IterationRecord> trace;
};

/// Projected gradient descent with hard thresholding and adaptive stepsize.
/// Iterates S <- H_K(S + mu Phi^H psi(Y - Phi S)) from S = 0 until the
/// support is unchanged and the relative signal change drops below rel_tol,
/// or max_iters is reached.
SolverState sniht_solve(const ComplexMatrix& y, const ComplexMatrix& phi, const SolverConfig& cfg);

/// Initial support: rownorm mode takes rsupp(H_K(Phi^H psi(Y))); peak mode
/// selects the K largest local maxima of the row norms of Phi^H psi(Y),
/// filling with the largest non-peak values when fewer than K peaks exist.
SupportSet init_support(const ComplexMatrix& y, const ComplexMatrix& phi, const SolverConfig& cfg);

/// Local-maxima selection shared by peak initialization and MUSIC peak
/// picking: entries strictly greater than both neighbours (one neighbour at
/// the boundary), the K largest by value, shortfall filled with the largest
/// non-peak entries. Returned ascending.
SupportSet peak_select(const RealVector& values, Index k);

/// Exact line minimizer for (2,2): ||G_(support)||^2 / ||Phi_support G_(support)||^2.
/// When the denominator falls below floor^2 returns mu_prev if positive,
/// otherwise 1.
double stepsize_l2(const ComplexMatrix& g, const ComplexMatrix& phi, const SupportSet& support,
                   double mu_prev, double floor);

/// One evaluation of the fixed-point stepsize map H (1,1) or H* (2,1) at
/// mu_prev, weights floored at `floor`. No positivity clamp.
double fp_step(const ComplexMatrix& e, const ComplexMatrix& b, double mu_prev,
               MixedNormIndex idx, double floor);

/// The solver's one-step fixed-point rule: fp_step clamped to stay positive
/// (non-positive results map to `floor`); degenerate inputs (B = 0, or E and
/// the weighted residual both zero) return mu_prev.
double stepsize_fp(const ComplexMatrix& e, const ComplexMatrix& b, double mu_prev,
                   MixedNormIndex idx, double floor);

}  // namespace sniht
