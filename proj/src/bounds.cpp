// SPDX-License-Identifier: Apache-2.0

#include "smbeam/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace smbeam {

BoundPolicy::BoundPolicy(const BoundConfig& config, double noise_power)
    : config_(config), sigma2_hat_(noise_power) {
  if (config_.mode == BoundMode::Pdb && !(config_.alpha > 1.0))
    throw std::invalid_argument("BoundPolicy: alpha must exceed 1");
  if (!(config_.beta >= 0.0 && config_.beta <= 1.0))
    throw std::invalid_argument("BoundPolicy: beta outside [0, 1]");
  if (!(config_.rho >= 0.0 && config_.rho <= 1.0))
    throw std::invalid_argument("BoundPolicy: rho outside [0, 1]");
  if (config_.delta_fixed < 0.0)
    throw std::invalid_argument("BoundPolicy: negative fixed bound");
  if (!(noise_power > 0.0))
    throw std::invalid_argument("BoundPolicy: noise power must be positive");
  delta_ = config_.delta_fixed;
}

double BoundPolicy::target(double weight_norm_sq) const {
  return std::sqrt(config_.alpha * weight_norm_sq * sigma2_hat_);
}

void BoundPolicy::seed(double weight_norm_sq) {
  if (config_.mode == BoundMode::Pdb) delta_ = target(weight_norm_sq);
}

double BoundPolicy::advance(double weight_norm_sq) {
  if (config_.mode == BoundMode::Pdb)
    delta_ = config_.beta * delta_ + (1.0 - config_.beta) * target(weight_norm_sq);
  return delta_;
}

double BoundPolicy::supply_noise_sample(double v) {
  if (!(v > 0.0))
    throw std::invalid_argument("BoundPolicy: noise sample must be positive");
  if (config_.noise_mode == NoiseMode::Smoothed)
    sigma2_hat_ = config_.rho * sigma2_hat_ + (1.0 - config_.rho) * v;
  return sigma2_hat_;
}

double initial_bound(BoundPolicy& policy, const CMatrix& T_r, const CVector& w_bar) {
  policy.seed((T_r * w_bar).squaredNorm());
  return policy.current();
}

double pdb_update(BoundPolicy& policy, const CMatrix& T_r, const CVector& w_bar) {
  return policy.advance((T_r * w_bar).squaredNorm());
}

} // namespace smbeam
