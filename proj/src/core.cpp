#include "sniht/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sniht {

MixedNormIndex::MixedNormIndex(int p, int q) : p_(p), q_(q) {
  const bool valid = (p == 2 && q == 2) || (p == 1 && q == 1) || (p == 2 && q == 1);
  if (!valid) {
    throw std::invalid_argument("unsupported norm index (" + std::to_string(p) + "," +
                                std::to_string(q) + "); valid pairs are (2,2), (1,1), (2,1)");
  }
}

std::string MixedNormIndex::label() const {
  return std::to_string(p_) + "," + std::to_string(q_);
}

double mixed_norm(const ComplexMatrix& s, int p, int q) {
  if (s.size() == 0) throw std::invalid_argument("mixed_norm: empty matrix");
  if ((p != 1 && p != 2) || (q != 1 && q != 2)) {
    throw std::invalid_argument("mixed_norm: p and q must be 1 or 2");
  }
  double acc = 0.0;
  for (Index i = 0; i < s.rows(); ++i) {
    const double rn = (p == 2) ? s.row(i).norm() : s.row(i).cwiseAbs().sum();
    acc += (q == 2) ? rn * rn : rn;
  }
  return (q == 2) ? std::sqrt(acc) : acc;
}

SupportSet row_support(const ComplexMatrix& s) {
  SupportSet support;
  for (Index i = 0; i < s.rows(); ++i) {
    for (Index j = 0; j < s.cols(); ++j) {
      const Complex v = s(i, j);
      if (v.real() != 0.0 || v.imag() != 0.0) {
        support.push_back(i);
        break;
      }
    }
  }
  return support;
}

SupportSet hard_threshold_in_place(ComplexMatrix& s, Index k) {
  const Index p = s.rows();
  if (k < 0 || k > p) {
    throw std::invalid_argument("hard_threshold: k must satisfy 0 <= k <= rows");
  }
  std::vector<Index> order(static_cast<std::size_t>(p));
  std::iota(order.begin(), order.end(), Index{0});
  RealVector sq = s.rowwise().squaredNorm();
  const auto larger = [&sq](Index a, Index b) {
    if (sq[a] != sq[b]) return sq[a] > sq[b];
    return a < b;
  };
  std::partial_sort(order.begin(), order.begin() + k, order.end(), larger);

  std::vector<char> keep(static_cast<std::size_t>(p), 0);
  for (Index r = 0; r < k; ++r) keep[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])] = 1;

  SupportSet support;
  for (Index i = 0; i < p; ++i) {
    if (!keep[static_cast<std::size_t>(i)]) {
      s.row(i).setZero();
    } else if (sq[i] > 0.0) {
      support.push_back(i);
    }
  }
  return support;
}

RowSparseSignal hard_threshold(const ComplexMatrix& s, Index k) {
  RowSparseSignal out{s, {}};
  out.support = hard_threshold_in_place(out.matrix, k);
  return out;
}

namespace {

void check_indices(const SupportSet& idx, Index bound, const char* what) {
  for (Index i : idx) {
    if (i < 0 || i >= bound) {
      throw std::out_of_range(std::string(what) + ": index " + std::to_string(i) +
                              " outside [0," + std::to_string(bound) + ")");
    }
  }
}

}  // namespace

ComplexMatrix sparsify_rows(const ComplexMatrix& s, const SupportSet& rows) {
  check_indices(rows, s.rows(), "sparsify_rows");
  ComplexMatrix out = ComplexMatrix::Zero(s.rows(), s.cols());
  for (Index i : rows) out.row(i) = s.row(i);
  return out;
}

ComplexMatrix select_columns(const ComplexMatrix& a, const SupportSet& cols) {
  check_indices(cols, a.cols(), "select_columns");
  ComplexMatrix out(a.rows(), static_cast<Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Index>(j)) = a.col(cols[j]);
  return out;
}

ComplexMatrix select_rows(const ComplexMatrix& a, const SupportSet& rows) {
  check_indices(rows, a.rows(), "select_rows");
  ComplexMatrix out(static_cast<Index>(rows.size()), a.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = a.row(rows[i]);
  return out;
}

bool all_finite(const ComplexMatrix& a) {
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      const Complex v = a(i, j);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    }
  }
  return true;
}

void require_finite(const ComplexMatrix& a, const std::string& name) {
  if (!all_finite(a)) {
    throw std::invalid_argument(name + " contains non-finite entries");
  }
}

}  // namespace sniht
