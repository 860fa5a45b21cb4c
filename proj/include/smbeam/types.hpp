// SPDX-License-Identifier: Apache-2.0

#ifndef SMBEAM_TYPES_HPP
#define SMBEAM_TYPES_HPP

#include <complex>
#include <Eigen/Dense>

namespace smbeam {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

} // namespace smbeam

#endif
