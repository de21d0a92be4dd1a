#pragma once

#include "sniht/core.hpp"

namespace sniht {

/// s/|s| for s != 0, exactly 0 at 0.
Complex spatial_sign(Complex s);

/// s/||s|| for s != 0, the zero vector at 0.
ComplexVector spatial_sign(const ComplexVector& s);

/// The residual transform psi_{p,q}:
///   (2,2) -> E, (1,1) -> entrywise spatial sign, (2,1) -> row-wise vector
/// spatial sign. Output has the dimensions of `e`.
ComplexMatrix apply_psi(const ComplexMatrix& e, MixedNormIndex idx);

}  // namespace sniht
