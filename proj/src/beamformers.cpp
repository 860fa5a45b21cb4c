// SPDX-License-Identifier: Apache-2.0

#include "smbeam/beamformers.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace smbeam {

namespace {

// [I - a0 a0^H] x, or the normalized variant with a0 a0^H / ||a0||^2.
CVector blocking_apply(const CVector& x, const CVector& a0, bool normalized) {
  Complex coef = a0.dot(x); // a0^H x
  if (normalized) coef /= a0.squaredNorm();
  return x - coef * a0;
}

// x^H [I - a0 a0^H] x; real by symmetry, negative when ||a0|| > 1 wins.
double blocking_quadratic(const CVector& x, const CVector& a0, bool normalized) {
  const double cross = std::norm(a0.dot(x));
  if (normalized) return x.squaredNorm() - cross / a0.squaredNorm();
  return x.squaredNorm() - cross;
}

void check_lengths(Eigen::Index got, Eigen::Index want, const char* where) {
  if (got != want) throw std::invalid_argument(std::string(where) + ": size mismatch");
}

} // namespace

// ---------------------------------------------------------------------------
// Full-rank

FullRankState make_full_rank_state(const CVector& a0, double gamma) {
  const double n2 = a0.squaredNorm();
  if (a0.size() == 0 || n2 == 0.0)
    throw std::invalid_argument("make_full_rank_state: degenerate steering vector");
  FullRankState state;
  state.w = (gamma / n2) * a0;
  return state;
}

Complex beamformer_output(const FullRankState& state, const CVector& x) {
  check_lengths(x.size(), state.w.size(), "beamformer_output");
  return state.w.dot(x);
}

Complex full_rank_sg_step(FullRankState& state, const CVector& x, double mu,
                          const CVector& a0) {
  check_lengths(x.size(), state.w.size(), "full_rank_sg_step");
  check_lengths(a0.size(), state.w.size(), "full_rank_sg_step");
  const Complex y = state.w.dot(x);
  state.w -= mu * std::conj(y) * blocking_apply(x, a0, true);
  ++state.snapshots_seen;
  ++state.updates_performed;
  return y;
}

StepOutcome full_rank_sm_sg_step(FullRankState& state, const CVector& x, double delta,
                                 const CVector& a0) {
  check_lengths(x.size(), state.w.size(), "full_rank_sm_sg_step");
  check_lengths(a0.size(), state.w.size(), "full_rank_sm_sg_step");
  const Complex y = state.w.dot(x);
  ++state.snapshots_seen;
  const double mag = std::abs(y);
  if (!(mag > delta)) return {y, false};
  const double den = blocking_quadratic(x, a0, true);
  if (den <= 1e-12) return {y, false};
  const double mu = (1.0 - delta / mag) / den;
  state.w -= mu * std::conj(y) * blocking_apply(x, a0, true);
  ++state.updates_performed;
  return {y, true};
}

// ---------------------------------------------------------------------------
// Reduced-rank joint iteration

JioSmState make_jio_sm_state(int rank, const CVector& a0, double gamma,
                             BoundPolicy bound) {
  const Eigen::Index m = a0.size();
  if (rank < 1 || rank > m)
    throw std::invalid_argument("make_jio_sm_state: rank outside [1, m]");
  CMatrix T = CMatrix::Zero(m, rank);
  T.topLeftCorner(rank, rank).setIdentity();
  CVector a_bar = T.adjoint() * a0;
  const double n2 = a_bar.squaredNorm();
  if (n2 == 0.0)
    throw std::invalid_argument("make_jio_sm_state: initial reduced steering vector is zero");
  CVector w_bar = (gamma / n2) * a_bar;
  bound.seed((T * w_bar).squaredNorm());
  return {std::move(T), std::move(w_bar), std::move(a_bar), gamma, std::move(bound), 0, 0};
}

Complex beamformer_output(const JioSmState& state, const CVector& x) {
  check_lengths(x.size(), state.projection.rows(), "beamformer_output");
  return state.w_bar.dot(state.projection.adjoint() * x);
}

std::optional<double> jio_mu_T(Complex y, double delta, const CVector& w_bar,
                               const CVector& x, const CVector& a0,
                               const JioOptions& options) {
  const double mag = std::abs(y);
  if (!(mag > delta)) return 0.0;
  const double den =
      w_bar.squaredNorm() * blocking_quadratic(x, a0, options.normalized_projection);
  if (std::abs(den) <= options.denom_tolerance) return std::nullopt;
  return (1.0 - delta / mag) / den;
}

std::optional<double> jio_mu_w(Complex y, double delta, const CVector& x_bar,
                               const CVector& a_bar, double denom_tolerance) {
  const double mag = std::abs(y);
  if (!(mag > delta)) return 0.0;
  if (a_bar.squaredNorm() <= denom_tolerance) return std::nullopt;
  const double den = blocking_quadratic(x_bar, a_bar, true);
  if (den <= denom_tolerance) return std::nullopt;
  return (1.0 - delta / mag) / den;
}

void jio_projection_update(CMatrix& T_r, double mu_T, Complex y, const CVector& x,
                           const CVector& w_bar, const CVector& a0,
                           const JioOptions& options) {
  check_lengths(x.size(), T_r.rows(), "jio_projection_update");
  check_lengths(w_bar.size(), T_r.cols(), "jio_projection_update");
  const CVector u = blocking_apply(x, a0, options.normalized_projection);
  T_r.noalias() -= (mu_T * std::conj(y)) * (u * w_bar.adjoint());
}

void jio_weight_update(CVector& w_bar, double mu_w, Complex y, const CVector& x_bar,
                       const CVector& a_bar) {
  check_lengths(x_bar.size(), w_bar.size(), "jio_weight_update");
  check_lengths(a_bar.size(), w_bar.size(), "jio_weight_update");
  w_bar -= mu_w * std::conj(y) * blocking_apply(x_bar, a_bar, true);
}

namespace {

void reimpose_constraint(CVector& w_bar, const CVector& a_bar, double gamma,
                         double denom_tolerance) {
  const double n2 = a_bar.squaredNorm();
  if (n2 <= denom_tolerance) return;
  w_bar += ((gamma - a_bar.dot(w_bar)) / n2) * a_bar;
}

} // namespace

StepOutcome jio_sm_sg_iterate(JioSmState& state, const CVector& x, const CVector& a0,
                              const JioOptions& options) {
  check_lengths(x.size(), state.projection.rows(), "jio_sm_sg_iterate");
  check_lengths(a0.size(), state.projection.rows(), "jio_sm_sg_iterate");
  const CVector x_bar = state.projection.adjoint() * x;
  const Complex y = state.w_bar.dot(x_bar);
  const double delta = pdb_update(state.bound, state.projection, state.w_bar);
  ++state.snapshots_seen;
  if (!(std::abs(y) > delta)) return {y, false};

  bool updated = false;
  const auto mu_T = jio_mu_T(y, delta, state.w_bar, x, a0, options);
  if (mu_T) {
    jio_projection_update(state.projection, *mu_T, y, x, state.w_bar, a0, options);
    updated = true;
  }
  // The reduced steering vector tracks the projection just written; the
  // weight update then works against the fresh a_bar but the original x_bar
  // and output, so the two sub-updates share one error signal.
  state.a_bar = state.projection.adjoint() * a0;
  const auto mu_w = jio_mu_w(y, delta, x_bar, state.a_bar, options.denom_tolerance);
  if (mu_w) {
    jio_weight_update(state.w_bar, *mu_w, y, x_bar, state.a_bar);
    updated = true;
  }
  if (options.reproject_constraint)
    reimpose_constraint(state.w_bar, state.a_bar, state.gamma, options.denom_tolerance);
  if (updated) ++state.updates_performed;
  return {y, updated};
}

Complex jio_sg_iterate(JioSmState& state, const CVector& x, const CVector& a0,
                       double mu_T, double mu_w, const JioOptions& options) {
  check_lengths(x.size(), state.projection.rows(), "jio_sg_iterate");
  check_lengths(a0.size(), state.projection.rows(), "jio_sg_iterate");
  const CVector x_bar = state.projection.adjoint() * x;
  const Complex y = state.w_bar.dot(x_bar);
  ++state.snapshots_seen;
  jio_projection_update(state.projection, mu_T, y, x, state.w_bar, a0, options);
  state.a_bar = state.projection.adjoint() * a0;
  if (state.a_bar.squaredNorm() > options.denom_tolerance)
    jio_weight_update(state.w_bar, mu_w, y, x_bar, state.a_bar);
  if (options.reproject_constraint)
    reimpose_constraint(state.w_bar, state.a_bar, state.gamma, options.denom_tolerance);
  ++state.updates_performed;
  return y;
}

// ---------------------------------------------------------------------------
// Driver-facing wrappers

namespace {

class FullRankSgBf final : public Beamformer {
public:
  FullRankSgBf(std::string label, CVector a0, double gamma, double mu)
      : label_(std::move(label)), a0_(std::move(a0)), mu_(mu),
        state_(make_full_rank_state(a0_, gamma)) {}

  const std::string& label() const override { return label_; }
  StepOutcome step(const CVector& x) override {
    return {full_rank_sg_step(state_, x, mu_, a0_), true};
  }
  CVector effective_weight() const override { return state_.w; }

private:
  std::string label_;
  CVector a0_;
  double mu_;
  FullRankState state_;
};

class FullRankSmSgBf final : public Beamformer {
public:
  FullRankSmSgBf(std::string label, CVector a0, double gamma, BoundPolicy bound)
      : label_(std::move(label)), a0_(std::move(a0)),
        state_(make_full_rank_state(a0_, gamma)), bound_(std::move(bound)) {
    bound_.seed(state_.w.squaredNorm());
  }

  const std::string& label() const override { return label_; }
  StepOutcome step(const CVector& x) override {
    const double delta = bound_.advance(state_.w.squaredNorm());
    return full_rank_sm_sg_step(state_, x, delta, a0_);
  }
  CVector effective_weight() const override { return state_.w; }
  void supply_noise(double v) override { bound_.supply_noise_sample(v); }

private:
  std::string label_;
  CVector a0_;
  FullRankState state_;
  BoundPolicy bound_;
};

BoundPolicy unused_bound() {
  BoundConfig config;
  config.mode = BoundMode::Fixed;
  config.delta_fixed = 0.0;
  return BoundPolicy(config, 1.0);
}

class JioSgBf final : public Beamformer {
public:
  JioSgBf(std::string label, CVector a0, double gamma, int rank, double mu_T,
          double mu_w, JioOptions options)
      : label_(std::move(label)), a0_(std::move(a0)), mu_T_(mu_T), mu_w_(mu_w),
        options_(options), state_(make_jio_sm_state(rank, a0_, gamma, unused_bound())) {}

  const std::string& label() const override { return label_; }
  StepOutcome step(const CVector& x) override {
    return {jio_sg_iterate(state_, x, a0_, mu_T_, mu_w_, options_), true};
  }
  CVector effective_weight() const override { return state_.projection * state_.w_bar; }

private:
  std::string label_;
  CVector a0_;
  double mu_T_;
  double mu_w_;
  JioOptions options_;
  JioSmState state_;
};

class JioSmSgBf final : public Beamformer {
public:
  JioSmSgBf(std::string label, CVector a0, double gamma, int rank, BoundPolicy bound,
            JioOptions options)
      : label_(std::move(label)), a0_(std::move(a0)), options_(options),
        state_(make_jio_sm_state(rank, a0_, gamma, std::move(bound))) {}

  const std::string& label() const override { return label_; }
  StepOutcome step(const CVector& x) override {
    return jio_sm_sg_iterate(state_, x, a0_, options_);
  }
  CVector effective_weight() const override { return state_.projection * state_.w_bar; }
  void supply_noise(double v) override { state_.bound.supply_noise_sample(v); }

private:
  std::string label_;
  CVector a0_;
  JioOptions options_;
  JioSmState state_;
};

class FixedWeightBf final : public Beamformer {
public:
  FixedWeightBf(std::string label, CVector w)
      : label_(std::move(label)), w_(std::move(w)) {
    if (w_.size() == 0)
      throw std::invalid_argument("FixedWeightBf: empty weight");
  }

  const std::string& label() const override { return label_; }
  StepOutcome step(const CVector& x) override {
    check_lengths(x.size(), w_.size(), "FixedWeightBf::step");
    return {w_.dot(x), false};
  }
  CVector effective_weight() const override { return w_; }

private:
  std::string label_;
  CVector w_;
};

} // namespace

std::unique_ptr<Beamformer> make_full_rank_sg(std::string label, const CVector& a0,
                                              double gamma, double mu) {
  return std::make_unique<FullRankSgBf>(std::move(label), a0, gamma, mu);
}

std::unique_ptr<Beamformer> make_full_rank_sm_sg(std::string label, const CVector& a0,
                                                 double gamma, BoundPolicy bound) {
  return std::make_unique<FullRankSmSgBf>(std::move(label), a0, gamma, std::move(bound));
}

std::unique_ptr<Beamformer> make_jio_sg(std::string label, const CVector& a0,
                                        double gamma, int rank, double mu_T,
                                        double mu_w, const JioOptions& options) {
  return std::make_unique<JioSgBf>(std::move(label), a0, gamma, rank, mu_T, mu_w, options);
}

std::unique_ptr<Beamformer> make_jio_sm_sg(std::string label, const CVector& a0,
                                           double gamma, int rank, BoundPolicy bound,
                                           const JioOptions& options) {
  return std::make_unique<JioSmSgBf>(std::move(label), a0, gamma, rank, std::move(bound),
                                     options);
}

std::unique_ptr<Beamformer> make_fixed_weight(std::string label, CVector w) {
  return std::make_unique<FixedWeightBf>(std::move(label), std::move(w));
}

} // namespace smbeam
