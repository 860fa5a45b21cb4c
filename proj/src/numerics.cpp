// SPDX-License-Identifier: Apache-2.0

#include "smbeam/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace smbeam {

HermitianMatrix::HermitianMatrix(CMatrix matrix, double tol) : mat_(std::move(matrix)) {
  if (mat_.rows() != mat_.cols())
    throw std::invalid_argument("HermitianMatrix: not square");
  if (mat_.size() == 0) throw std::invalid_argument("HermitianMatrix: empty");
  double max_entry = 0.0;
  for (Eigen::Index j = 0; j < mat_.cols(); ++j)
    for (Eigen::Index i = 0; i < mat_.rows(); ++i)
      max_entry = std::max(max_entry, std::abs(mat_(i, j)));
  const double limit = tol * std::max(1.0, max_entry);
  for (Eigen::Index j = 0; j < mat_.cols(); ++j)
    for (Eigen::Index i = 0; i <= j; ++i)
      if (std::abs(mat_(i, j) - std::conj(mat_(j, i))) > limit)
        throw std::invalid_argument("HermitianMatrix: matrix is not Hermitian");
}

CVector solve_hermitian_pd(const HermitianMatrix& R, const CVector& b) {
  const Eigen::Index n = R.dim();
  if (b.size() != n) throw std::invalid_argument("solve_hermitian_pd: size mismatch");

  double max_diag = 0.0;
  for (Eigen::Index k = 0; k < n; ++k)
    max_diag = std::max(max_diag, R.mat()(k, k).real());
  const double pivot_floor = 1e-12 * std::max(1.0, max_diag);

  // Lower-triangular in-place factorization R = L L^H.
  CMatrix L = R.mat();
  for (Eigen::Index k = 0; k < n; ++k) {
    double d = L(k, k).real();
    for (Eigen::Index j = 0; j < k; ++j) d -= std::norm(L(k, j));
    if (d <= pivot_floor)
      throw std::runtime_error("solve_hermitian_pd: matrix is not positive definite");
    const double lkk = std::sqrt(d);
    L(k, k) = lkk;
    for (Eigen::Index i = k + 1; i < n; ++i) {
      Complex s = L(i, k);
      for (Eigen::Index j = 0; j < k; ++j) s -= L(i, j) * std::conj(L(k, j));
      L(i, k) = s / lkk;
    }
  }

  // Forward then back substitution.
  CVector y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    Complex s = b(i);
    for (Eigen::Index j = 0; j < i; ++j) s -= L(i, j) * y(j);
    y(i) = s / L(i, i).real();
  }
  CVector x(n);
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    Complex s = y(i);
    for (Eigen::Index j = i + 1; j < n; ++j) s -= std::conj(L(j, i)) * x(j);
    x(i) = s / L(i, i).real();
  }
  return x;
}

CVector lcmv_optimal_weight(const HermitianMatrix& R, const CVector& a0, double gamma) {
  if (a0.size() != R.dim())
    throw std::invalid_argument("lcmv_optimal_weight: size mismatch");
  const CVector r_inv_a = solve_hermitian_pd(R, a0);
  const Complex denom = a0.dot(r_inv_a); // a0^H R^{-1} a0, real for Hermitian pd R
  if (!(denom.real() > 0.0))
    throw std::runtime_error("lcmv_optimal_weight: degenerate steering vector");
  return (gamma / denom.real()) * r_inv_a;
}

} // namespace smbeam
