#include "sniht/spatial_sign.hpp"

#include <cmath>
#include <stdexcept>

namespace sniht {

Complex spatial_sign(Complex s) {
  const double mod = std::abs(s);
  if (mod == 0.0) return Complex(0.0, 0.0);
  return s / mod;
}

ComplexVector spatial_sign(const ComplexVector& s) {
  const double n = s.norm();
  if (n == 0.0) return ComplexVector::Zero(s.size());
  return s / n;
}

ComplexMatrix apply_psi(const ComplexMatrix& e, MixedNormIndex idx) {
  if (e.size() == 0) throw std::invalid_argument("apply_psi: empty matrix");
  if (idx == MixedNormIndex::l22()) {
    return e;
  }
  if (idx == MixedNormIndex::l11()) {
    return e.unaryExpr([](Complex v) { return spatial_sign(v); });
  }
  // (2,1): vector spatial sign applied row-wise.
  ComplexMatrix out(e.rows(), e.cols());
  for (Index i = 0; i < e.rows(); ++i) {
    const double n = e.row(i).norm();
    if (n == 0.0) {
      out.row(i).setZero();
    } else {
      out.row(i) = e.row(i) / n;
    }
  }
  return out;
}

}  // namespace sniht
