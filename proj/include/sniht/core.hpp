#pragma once

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

namespace sniht {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Ordered (ascending) set of 0-based row indices.
using SupportSet = std::vector<Index>;

/// Norm pair (p,q) selecting the data-fidelity term of the recovery
/// objective. Valid pairs are (2,2), (1,1) and (2,1); (1,2) is rejected.
class MixedNormIndex {
public:
  MixedNormIndex(int p, int q);

  int p() const { return p_; }
  int q() const { return q_; }

  /// Rendered as "p,q", e.g. "2,1".
  std::string label() const;

  bool operator==(const MixedNormIndex&) const = default;

  static MixedNormIndex l22() { return {2, 2}; }
  static MixedNormIndex l11() { return {1, 1}; }
  static MixedNormIndex l21() { return {2, 1}; }

private:
  int p_;
  int q_;
};

/// A p-by-q signal matrix paired with its exact row-support. Rows outside
/// `support` are identically zero and `support` never contains zero rows.
struct RowSparseSignal {
  ComplexMatrix matrix;
  SupportSet support;
};

/// Mixed l_{p,q} norm: ( sum_i ||row_i||_p^q )^{1/q}, p,q in {1,2}.
double mixed_norm(const ComplexMatrix& s, int p, int q);

/// Indices of rows with at least one entry != 0 (exact comparison).
SupportSet row_support(const ComplexMatrix& s);

/// Keeps the k rows with largest l2 norm, zeroes the rest. Ties are broken
/// towards the smaller row index. Returns the support of the result.
SupportSet hard_threshold_in_place(ComplexMatrix& s, Index k);
RowSparseSignal hard_threshold(const ComplexMatrix& s, Index k);

/// S|_Gamma: rows listed in `rows` are copied, all other rows are zero.
ComplexMatrix sparsify_rows(const ComplexMatrix& s, const SupportSet& rows);

/// A_Gamma: the m-by-|cols| matrix of the selected columns.
ComplexMatrix select_columns(const ComplexMatrix& a, const SupportSet& cols);

/// A_(Gamma): the |rows|-by-n matrix of the selected rows.
ComplexMatrix select_rows(const ComplexMatrix& a, const SupportSet& rows);

bool all_finite(const ComplexMatrix& a);

/// Throws std::invalid_argument if `a` contains NaN or Inf.
void require_finite(const ComplexMatrix& a, const std::string& name);

}  // namespace sniht
