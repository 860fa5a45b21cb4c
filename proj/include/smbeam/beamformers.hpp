// SPDX-License-Identifier: Apache-2.0
//
// Adaptive LCMV beamformer state machines. All variants share one contract:
// consume a snapshot x(i), emit the scalar output y(i), optionally update
// internal state. Gated variants update only when |y| exceeds the bound.

#ifndef SMBEAM_BEAMFORMERS_HPP
#define SMBEAM_BEAMFORMERS_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "smbeam/bounds.hpp"
#include "smbeam/types.hpp"

namespace smbeam {

struct StepOutcome {
  Complex y{};
  bool updated = false;
};

// ---------------------------------------------------------------------------
// Full-rank states

struct FullRankState {
  CVector w;
  std::int64_t snapshots_seen = 0;
  std::int64_t updates_performed = 0;
};

// w(1) = gamma * a0 / ||a0||^2; lies on the constraint w^H a0 = gamma.
FullRankState make_full_rank_state(const CVector& a0, double gamma);

// y = w^H x. Throws std::invalid_argument on dimension mismatch.
Complex beamformer_output(const FullRankState& state, const CVector& x);

// Constrained SG step with fixed mu:
//   w <- w - mu * conj(y) * [I - a0 a0^H / (a0^H a0)] x.
// The projector annihilates a0, so w^H a0 is preserved.
Complex full_rank_sg_step(FullRankState& state, const CVector& x, double mu,
                          const CVector& a0);

// Gated variant: no change while |y| <= delta, otherwise the step size
// mu = (1 - delta/|y|) / (x^H P x) drives the recomputed output back to
// |y| = delta. Returns the output and whether an update ran (a degenerate
// direction x^H P x <= 1e-12 skips the update).
StepOutcome full_rank_sm_sg_step(FullRankState& state, const CVector& x,
                                 double delta, const CVector& a0);

// ---------------------------------------------------------------------------
// Reduced-rank joint-iteration state

struct JioOptions {
  // Projection-side matrix is I - a0 a0^H as printed; the normalized variant
  // I - a0 a0^H/||a0||^2 (a true projector) is available for study.
  bool normalized_projection = false;
  // Re-impose w_bar^H a_bar = gamma after each projection update (off by
  // default; the plain recursion lets the constraint drift as a_bar moves).
  bool reproject_constraint = false;
  double denom_tolerance = 1e-12;
};

struct JioSmState {
  CMatrix projection;   // T_r, m x r bank of full-rank filters
  CVector w_bar;        // reduced weight, length r
  CVector a_bar;        // cached T_r^H a0 for the current projection
  double gamma = 1.0;
  BoundPolicy bound;
  std::int64_t snapshots_seen = 0;
  std::int64_t updates_performed = 0;

  int rank() const { return static_cast<int>(w_bar.size()); }
};

// T_r(1) = [I 0]^T, w_bar(1) = gamma * a_bar / ||a_bar||^2, and the bound
// seeded at its fixed point for the initial weights.
JioSmState make_jio_sm_state(int rank, const CVector& a0, double gamma,
                             BoundPolicy bound);

// y = w_bar^H (T_r^H x). Throws std::invalid_argument on dimension mismatch.
Complex beamformer_output(const JioSmState& state, const CVector& x);

// Step size for the projection update. Returns 0 below the gate, nullopt
// when |w_bar^H w_bar * x^H [I - a0 a0^H] x| <= denom_tolerance (the matrix
// is not a projector for ||a0|| != 1, so the quadratic form may vanish or
// change sign; near zero the update is skipped).
std::optional<double> jio_mu_T(Complex y, double delta, const CVector& w_bar,
                               const CVector& x, const CVector& a0,
                               const JioOptions& options = {});

// Step size for the reduced-weight update. Returns 0 below the gate, nullopt
// when x_bar^H [I - a_bar a_bar^H/(a_bar^H a_bar)] x_bar (or ||a_bar||^2
// itself) is at or below denom_tolerance.
std::optional<double> jio_mu_w(Complex y, double delta, const CVector& x_bar,
                               const CVector& a_bar, double denom_tolerance = 1e-12);

// T_r <- T_r - mu_T * conj(y) * [I - a0 a0^H] x w_bar^H  (rank-one increment).
void jio_projection_update(CMatrix& T_r, double mu_T, Complex y, const CVector& x,
                           const CVector& w_bar, const CVector& a0,
                           const JioOptions& options = {});

// w_bar <- w_bar - mu_w * conj(y) * [I - a_bar a_bar^H/(a_bar^H a_bar)] x_bar.
// The update direction is orthogonal to a_bar, so w_bar^H a_bar is preserved.
void jio_weight_update(CVector& w_bar, double mu_w, Complex y, const CVector& x_bar,
                       const CVector& a_bar);

// One gated joint iteration:
//   x_bar, y, advance delta; if |y|^2 > delta^2: mu_T, projection update,
//   refresh a_bar, mu_w, weight update; otherwise leave state untouched.
// The update flag reports whether any sub-update actually ran.
StepOutcome jio_sm_sg_iterate(JioSmState& state, const CVector& x, const CVector& a0,
                              const JioOptions& options = {});

// Ungated baseline: both updates every snapshot with constant step sizes.
Complex jio_sg_iterate(JioSmState& state, const CVector& x, const CVector& a0,
                       double mu_T, double mu_w, const JioOptions& options = {});

// ---------------------------------------------------------------------------
// Polymorphic wrappers for the Monte Carlo driver

class Beamformer {
public:
  virtual ~Beamformer() = default;
  virtual const std::string& label() const = 0;
  virtual StepOutcome step(const CVector& x) = 0;
  virtual CVector effective_weight() const = 0; // full-rank equivalent, length m
  // Instantaneous noise-power sample for bound policies that estimate
  // sigma_n^2 on line; ignored by everything else.
  virtual void supply_noise(double) {}
};

std::unique_ptr<Beamformer> make_full_rank_sg(std::string label, const CVector& a0,
                                              double gamma, double mu);
std::unique_ptr<Beamformer> make_full_rank_sm_sg(std::string label, const CVector& a0,
                                                 double gamma, BoundPolicy bound);
std::unique_ptr<Beamformer> make_jio_sg(std::string label, const CVector& a0,
                                        double gamma, int rank, double mu_T,
                                        double mu_w, const JioOptions& options = {});
std::unique_ptr<Beamformer> make_jio_sm_sg(std::string label, const CVector& a0,
                                           double gamma, int rank, BoundPolicy bound,
                                           const JioOptions& options = {});
// Non-adaptive reference holding a precomputed weight (closed-form LCMV).
std::unique_ptr<Beamformer> make_fixed_weight(std::string label, CVector w);

} // namespace smbeam

#endif
