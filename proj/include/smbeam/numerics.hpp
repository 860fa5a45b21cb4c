// SPDX-License-Identifier: Apache-2.0

#ifndef SMBEAM_NUMERICS_HPP
#define SMBEAM_NUMERICS_HPP

#include "smbeam/types.hpp"

namespace smbeam {

/// Square complex matrix checked for Hermitian symmetry on construction
/// (max |A(i,j) - conj(A(j,i))| <= tol * max(1, max |entry|)).
class HermitianMatrix {
public:
  explicit HermitianMatrix(CMatrix matrix, double tol = 1e-12);

  const CMatrix& mat() const { return mat_; }
  Eigen::Index dim() const { return mat_.rows(); }

private:
  CMatrix mat_;
};

// Solves R x = b through an in-place complex Cholesky factorization
// R = L L^H. No inverse is formed. A pivot at or below
// 1e-12 * max(1, max diagonal) means R is not positive definite and
// raises std::runtime_error.
CVector solve_hermitian_pd(const HermitianMatrix& R, const CVector& b);

// Closed-form minimum-variance weight under the unit-gain style constraint
// w^H a0 = gamma:  w = gamma * R^{-1} a0 / (a0^H R^{-1} a0).
CVector lcmv_optimal_weight(const HermitianMatrix& R, const CVector& a0, double gamma);

} // namespace smbeam

#endif
