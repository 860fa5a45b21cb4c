// SPDX-License-Identifier: Apache-2.0

#ifndef SMBEAM_BOUNDS_HPP
#define SMBEAM_BOUNDS_HPP

#include "smbeam/types.hpp"

namespace smbeam {

enum class BoundMode { Fixed, Pdb };
enum class NoiseMode { Known, Smoothed };

struct BoundConfig {
  BoundMode mode = BoundMode::Pdb;
  double delta_fixed = 1.0; // bound value in Fixed mode
  double alpha = 22.0;      // PDB tuning coefficient, must be > 1
  double beta = 0.99;       // PDB forgetting factor, in [0, 1]
  NoiseMode noise_mode = NoiseMode::Known;
  double rho = 0.95;        // smoothing factor for the noise estimate, in [0, 1]
};

/// Bound state for the output-magnitude gate: either a fixed delta or the
/// parameter-dependent recursion
///   delta(i) = beta*delta(i-1) + (1-beta)*sqrt(alpha*||w_eff||^2*sigma2_hat).
/// delta(0) is seeded at the recursion's fixed point for the initial weights,
/// so there is no warm-up transient.
class BoundPolicy {
public:
  // noise_power is the configured true sigma_n^2; it seeds the estimate in
  // both noise modes. Throws std::invalid_argument on alpha <= 1 (Pdb mode),
  // beta or rho outside [0,1], delta_fixed < 0, or noise_power <= 0.
  BoundPolicy(const BoundConfig& config, double noise_power);

  // Sets delta(0) from the initial effective weight: the fixed point
  // sqrt(alpha * weight_norm_sq * sigma2_hat) in Pdb mode, delta_fixed otherwise.
  void seed(double weight_norm_sq);

  // Advances and returns delta(i). Fixed mode leaves delta unchanged.
  double advance(double weight_norm_sq);

  // Feeds an instantaneous noise-power value v(i) to the Smoothed estimator:
  // sigma2_hat <- rho*sigma2_hat + (1-rho)*v. Known mode ignores it.
  // Throws std::invalid_argument on v <= 0.
  double supply_noise_sample(double v);

  double current() const { return delta_; }
  double noise_estimate() const { return sigma2_hat_; }
  const BoundConfig& config() const { return config_; }

private:
  double target(double weight_norm_sq) const;

  BoundConfig config_;
  double delta_ = 0.0;
  double sigma2_hat_;
};

// Spec-shaped conveniences for reduced-rank states (w_eff = T_r * w_bar).
double initial_bound(BoundPolicy& policy, const CMatrix& T_r, const CVector& w_bar);
double pdb_update(BoundPolicy& policy, const CMatrix& T_r, const CVector& w_bar);

} // namespace smbeam

#endif
