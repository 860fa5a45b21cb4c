// SPDX-License-Identifier: Apache-2.0
//
// The replay oracles below re-implement the update arithmetic with plain
// std::complex loops, no Eigen and no shared kernels, so the library and the
// oracle can only agree by computing the same mathematics.

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "smbeam/array_model.hpp"
#include "smbeam/beamformers.hpp"
#include "smbeam/harness.hpp"
#include "smbeam/numerics.hpp"
#include "smbeam/rng.hpp"

using namespace smbeam;

namespace {

using cd = std::complex<double>;
using cvec = std::vector<cd>;
using cmat = std::vector<std::vector<cd>>; // [row][col]

cd o_inner(const cvec& a, const cvec& b) {
  cd acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

double o_norm2(const cvec& v) {
  double acc = 0.0;
  for (const cd& z : v) acc += std::norm(z);
  return acc;
}

cvec o_reduce(const cmat& T, const cvec& x) {
  const std::size_t m = T.size(), r = T[0].size();
  cvec out(r, 0.0);
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t i = 0; i < m; ++i) out[j] += std::conj(T[i][j]) * x[i];
  return out;
}

double o_weight_norm2(const cmat& T, const cvec& w) {
  const std::size_t m = T.size(), r = T[0].size();
  double acc = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    cd row = 0.0;
    for (std::size_t j = 0; j < r; ++j) row += T[i][j] * w[j];
    acc += std::norm(row);
  }
  return acc;
}

struct OracleJioState {
  cmat T;
  cvec w;
  double delta = 0.0;
};

struct OracleStep {
  cd y;
  bool updated = false;
};

// One gated joint iteration exactly as the update recursions are printed:
// advance the bound, test the gate, projection update with the unnormalized
// blocking matrix, refresh the reduced steering vector, weight update with
// the original reduced snapshot and output.
OracleStep oracle_iterate(OracleJioState& s, const cvec& x, const cvec& a0,
                          double alpha, double beta, double sigma2) {
  const std::size_t m = s.T.size(), r = s.T[0].size();
  const cvec x_bar = o_reduce(s.T, x);
  const cd y = o_inner(s.w, x_bar);
  s.delta = beta * s.delta + (1.0 - beta) * std::sqrt(alpha * o_weight_norm2(s.T, s.w) * sigma2);
  OracleStep out{y, false};
  if (!(std::abs(y) > s.delta)) return out;

  const cd a0x = o_inner(a0, x);
  double x_block_x = 0.0;
  for (std::size_t i = 0; i < m; ++i) x_block_x += std::norm(x[i]);
  x_block_x -= std::norm(a0x);
  const double den_T = o_norm2(s.w) * x_block_x;
  if (std::abs(den_T) > 1e-12) {
    const double mu_T = (1.0 - s.delta / std::abs(y)) / den_T;
    cvec u(m);
    for (std::size_t i = 0; i < m; ++i) u[i] = x[i] - a0[i] * a0x;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < r; ++j)
        s.T[i][j] -= mu_T * std::conj(y) * u[i] * std::conj(s.w[j]);
    out.updated = true;
  }
  const cvec a_bar = o_reduce(s.T, a0);
  const double a_bar_n2 = o_norm2(a_bar);
  if (a_bar_n2 > 1e-12) {
    const cd ax = o_inner(a_bar, x_bar);
    const double den_w = o_norm2(x_bar) - std::norm(ax) / a_bar_n2;
    if (den_w > 1e-12) {
      const double mu_w = (1.0 - s.delta / std::abs(y)) / den_w;
      for (std::size_t j = 0; j < r; ++j)
        s.w[j] -= mu_w * std::conj(y) * (x_bar[j] - a_bar[j] * ax / a_bar_n2);
      out.updated = true;
    }
  }
  return out;
}

cvec to_cvec(const CVector& v) {
  cvec out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = v(i);
  return out;
}

cmat to_cmat(const CMatrix& M) {
  cmat out(M.rows(), cvec(M.cols()));
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j) out[i][j] = M(i, j);
  return out;
}

CVector random_cvector(RandomStream& rng, int n) {
  CVector v(n);
  for (int k = 0; k < n; ++k) v(k) = rng.complex_gaussian(1.0);
  return v;
}

CMatrix random_cmatrix(RandomStream& rng, int rows, int cols) {
  CMatrix M(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) M(i, j) = rng.complex_gaussian(1.0);
  return M;
}

BoundPolicy fixed_bound(double delta, double noise = 1.0) {
  BoundConfig config;
  config.mode = BoundMode::Fixed;
  config.delta_fixed = delta;
  return BoundPolicy(config, noise);
}

BoundPolicy pdb_bound(double alpha, double beta, double noise = 1.0) {
  BoundConfig config;
  config.mode = BoundMode::Pdb;
  config.alpha = alpha;
  config.beta = beta;
  return BoundPolicy(config, noise);
}

} // namespace

TEST_CASE("initial full-rank weight sits on the constraint") {
  const CVector a0 = steering_vector(72.0, 6);
  const FullRankState state = make_full_rank_state(a0, 1.5);
  CHECK(std::abs(state.w.dot(a0) - cd(1.5, 0.0)) < 1e-12);
  CHECK((state.w - 1.5 * a0 / 6.0).norm() < 1e-12);
}

TEST_CASE("full-rank output is the Hermitian inner product") {
  RandomStream rng(3);
  FullRankState state;
  state.w = CVector::Zero(4);
  state.w(0) = 1.0;
  const CVector x = random_cvector(rng, 4);
  CHECK(std::abs(beamformer_output(state, x) - x(0)) < 1e-15);
  CHECK_THROWS_AS(beamformer_output(state, random_cvector(rng, 5)),
                  std::invalid_argument);
}

TEST_CASE("reduced output with the initial projection reads the first entries") {
  const CVector a0 = steering_vector(90.0, 5);
  const JioSmState state = make_jio_sm_state(2, a0, 1.0, fixed_bound(1.0));
  RandomStream rng(4);
  const CVector x = random_cvector(rng, 5);
  const CVector head = x.head(2);
  CHECK(std::abs(beamformer_output(state, x) - state.w_bar.dot(head)) < 1e-14);
}

TEST_CASE("reduced output matches the naive two-step evaluation") {
  RandomStream rng(6);
  JioSmState state = make_jio_sm_state(3, steering_vector(64.0, 5), 1.0, fixed_bound(1.0));
  state.projection = random_cmatrix(rng, 5, 3);
  state.w_bar = random_cvector(rng, 3);
  const CVector x = random_cvector(rng, 5);
  const cvec x_bar = o_reduce(to_cmat(state.projection), to_cvec(x));
  const cd expect = o_inner(to_cvec(state.w_bar), x_bar);
  CHECK(std::abs(beamformer_output(state, x) - expect) < 1e-12);
}

TEST_CASE("zero step leaves every parameter untouched") {
  RandomStream rng(9);
  const CVector a0 = steering_vector(80.0, 4);
  FullRankState fr = make_full_rank_state(a0, 1.0);
  const CVector w_before = fr.w;
  full_rank_sg_step(fr, random_cvector(rng, 4), 0.0, a0);
  CHECK((fr.w - w_before).norm() == 0.0);

  CMatrix T = random_cmatrix(rng, 4, 2);
  const CMatrix T_before = T;
  jio_projection_update(T, 0.0, cd(1, 2), random_cvector(rng, 4),
                        random_cvector(rng, 2), a0);
  CHECK((T - T_before).norm() == 0.0);

  CVector w_bar = random_cvector(rng, 2);
  const CVector wb_before = w_bar;
  jio_weight_update(w_bar, 0.0, cd(1, -1), random_cvector(rng, 2),
                    random_cvector(rng, 2));
  CHECK((w_bar - wb_before).norm() == 0.0);
}

TEST_CASE("full-rank SG preserves the constraint step after step") {
  RandomStream rng(10);
  const CVector a0 = steering_vector(95.0, 4);
  FullRankState state = make_full_rank_state(a0, 1.0);
  for (int i = 0; i < 200; ++i) {
    full_rank_sg_step(state, random_cvector(rng, 4), 0.01, a0);
    CHECK(std::abs(state.w.dot(a0) - cd(1.0, 0.0)) < 1e-12);
  }
  CHECK(state.snapshots_seen == 200);
  CHECK(state.updates_performed == 200);
}

TEST_CASE("constraint drift stays below 1e-8 over ten thousand steps") {
  ScenarioConfig scenario;
  scenario.m = 4;
  scenario.doas_deg = {70.0, 110.0};
  scenario.powers = {1.0, 1.0};
  scenario.noise_power = 0.1;
  const SnapshotGenerator gen(scenario);
  const CVector a0 = steering_vector(70.0, 4);
  RandomStream rng(12);

  FullRankState sg = make_full_rank_state(a0, 1.0);
  FullRankState sm = make_full_rank_state(a0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const Snapshot snap = gen.generate(rng);
    full_rank_sg_step(sg, snap.x, 1e-3, a0);
    full_rank_sm_sg_step(sm, snap.x, 0.5, a0);
  }
  CHECK(std::abs(sg.w.dot(a0) - cd(1.0, 0.0)) <= 1e-8);
  CHECK(std::abs(sm.w.dot(a0) - cd(1.0, 0.0)) <= 1e-8);
  CHECK(sm.updates_performed > 0);
  CHECK(sm.updates_performed <= sm.snapshots_seen);
}

TEST_CASE("decaying-step SG closes to within 1 dB of the closed-form weight") {
  ScenarioConfig scenario;
  scenario.m = 4;
  scenario.doas_deg = {70.0, 110.0};
  scenario.powers = {1.0, 1.0};
  scenario.noise_power = 0.1;
  const SnapshotGenerator gen(scenario);
  const CVector a0 = steering_vector(70.0, 4);
  RandomStream rng(14);

  FullRankState state = make_full_rank_state(a0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const double mu = 0.05 / (1.0 + i / 500.0);
    full_rank_sg_step(state, gen.generate(rng).x, mu, a0);
  }
  const SinrContext context = make_sinr_context(scenario);
  const CVector w_opt =
      lcmv_optimal_weight(HermitianMatrix(true_covariance(scenario)), a0, 1.0);
  const double got = sinr_db_floor(output_sinr_linear(state.w, context));
  const double best = sinr_db_floor(output_sinr_linear(w_opt, context));
  CHECK(got >= best - 1.0);
}

TEST_CASE("gated full-rank step lands the output magnitude on the bound") {
  RandomStream rng(16);
  const CVector a0 = steering_vector(85.0, 5);
  int tested = 0;
  while (tested < 200) {
    FullRankState state = make_full_rank_state(a0, 1.0);
    state.w += 0.3 * random_cvector(rng, 5);
    const CVector x = random_cvector(rng, 5);
    const cd y = beamformer_output(state, x);
    if (std::abs(y) < 1e-6) continue;
    const double delta = 0.5 * std::abs(y);
    const StepOutcome out = full_rank_sm_sg_step(state, x, delta, a0);
    REQUIRE(out.updated);
    CHECK(std::abs(out.y - y) == 0.0);
    const double after = std::abs(beamformer_output(state, x));
    CHECK(std::abs(after - delta) <= 1e-9 * delta);
    ++tested;
  }
}

TEST_CASE("gated full-rank step skips blocked directions and quiet outputs") {
  const CVector a0 = steering_vector(85.0, 5);
  FullRankState state = make_full_rank_state(a0, 1.0);
  const CVector w_before = state.w;

  // quiet: |y| <= delta
  StepOutcome out = full_rank_sm_sg_step(state, 0.01 * a0, 1e6, a0);
  CHECK_FALSE(out.updated);
  CHECK((state.w - w_before).norm() == 0.0);

  // blocked: x parallel to a0 makes the projected energy vanish
  out = full_rank_sm_sg_step(state, 5.0 * a0, 1e-3, a0);
  CHECK_FALSE(out.updated);
  CHECK((state.w - w_before).norm() == 0.0);
  CHECK(state.snapshots_seen == 2);
  CHECK(state.updates_performed == 0);
}

TEST_CASE("step sizes obey the gate and the printed arithmetic") {
  RandomStream rng(18);
  const CVector x = random_cvector(rng, 4);
  const CVector a0 = steering_vector(100.0, 4);
  const CVector w_bar = random_cvector(rng, 2);
  const CVector x_bar = random_cvector(rng, 2);
  const CVector a_bar = random_cvector(rng, 2);

  CHECK(jio_mu_T(cd(0.1, 0.0), 0.5, w_bar, x, a0) == 0.0);
  CHECK(jio_mu_w(cd(0.0, 0.1), 0.5, x_bar, a_bar) == 0.0);

  // |y| = 2 delta: the numerator is exactly 1/2
  const cd y(0.6, 0.8); // |y| = 1
  const double delta = 0.5;
  double xBx = 0.0;
  for (int i = 0; i < 4; ++i) xBx += std::norm(x(i));
  cd a0x = 0.0;
  for (int i = 0; i < 4; ++i) a0x += std::conj(a0(i)) * x(i);
  xBx -= std::norm(a0x);
  const double den_T = o_norm2(to_cvec(w_bar)) * xBx;
  const auto mu_T = jio_mu_T(y, delta, w_bar, x, a0);
  REQUIRE(mu_T.has_value());
  CHECK(*mu_T == doctest::Approx(0.5 / den_T).epsilon(1e-12));

  const cd ax = o_inner(to_cvec(a_bar), to_cvec(x_bar));
  const double den_w = o_norm2(to_cvec(x_bar)) - std::norm(ax) / o_norm2(to_cvec(a_bar));
  const auto mu_w = jio_mu_w(y, delta, x_bar, a_bar);
  REQUIRE(mu_w.has_value());
  CHECK(*mu_w == doctest::Approx(0.5 / den_w).epsilon(1e-12));

  // degenerate directions are flagged as skips, not divisions
  CHECK_FALSE(jio_mu_w(y, delta, a_bar, a_bar).has_value());
  const CVector w_zero = CVector::Zero(2);
  CHECK_FALSE(jio_mu_T(y, delta, w_zero, x, a0).has_value());
}

TEST_CASE("projection increment is rank one and matches the scalar replay") {
  // m = 2, r = 1, every product written out by hand
  CMatrix T(2, 1);
  T << cd(0.2, -0.1), cd(0.7, 0.4);
  const CMatrix T_orig = T;
  CVector x(2), a0(2), w(1);
  x << cd(1.0, 2.0), cd(-0.5, 0.3);
  a0 << cd(1.0, 0.0), cd(0.0, -1.0);
  w << cd(0.9, -0.2);
  const cd y(0.4, 1.1);
  const double mu = 0.03;
  jio_projection_update(T, mu, y, x, w, a0);

  const cd a0x = std::conj(a0(0)) * x(0) + std::conj(a0(1)) * x(1);
  const cd u0 = x(0) - a0(0) * a0x;
  const cd u1 = x(1) - a0(1) * a0x;
  CHECK(std::abs(T(0, 0) - (T_orig(0, 0) - mu * std::conj(y) * u0 * std::conj(w(0)))) < 1e-14);
  CHECK(std::abs(T(1, 0) - (T_orig(1, 0) - mu * std::conj(y) * u1 * std::conj(w(0)))) < 1e-14);

  // rank-one structure at r = 2: increment columns are parallel
  RandomStream rng(20);
  CMatrix T2 = random_cmatrix(rng, 3, 2);
  const CMatrix before = T2;
  jio_projection_update(T2, 0.05, cd(1.0, -0.7), random_cvector(rng, 3),
                        random_cvector(rng, 2), steering_vector(60.0, 3));
  const CMatrix D = T2 - before;
  const cd cross = D(0, 0) * D(1, 1) - D(0, 1) * D(1, 0);
  CHECK(std::abs(cross) < 1e-12);
}

TEST_CASE("weight update replay and constraint preservation") {
  CVector w(2), x_bar(2), a_bar(2);
  w << cd(0.3, 0.5), cd(-0.8, 0.1);
  x_bar << cd(1.2, -0.4), cd(0.6, 0.9);
  a_bar << cd(0.5, 0.5), cd(-0.2, 1.0);
  const cd y(1.3, -0.2);
  const double mu = 0.07;
  const CVector w_orig = w;
  jio_weight_update(w, mu, y, x_bar, a_bar);

  const double an2 = std::norm(a_bar(0)) + std::norm(a_bar(1));
  const cd ax = std::conj(a_bar(0)) * x_bar(0) + std::conj(a_bar(1)) * x_bar(1);
  const cd p0 = x_bar(0) - a_bar(0) * ax / an2;
  const cd p1 = x_bar(1) - a_bar(1) * ax / an2;
  CHECK(std::abs(w(0) - (w_orig(0) - mu * std::conj(y) * p0)) < 1e-14);
  CHECK(std::abs(w(1) - (w_orig(1) - mu * std::conj(y) * p1)) < 1e-14);

  RandomStream rng(22);
  for (int trial = 0; trial < 1000; ++trial) {
    CVector wb = random_cvector(rng, 3);
    const CVector xb = random_cvector(rng, 3);
    const CVector ab = random_cvector(rng, 3);
    const cd before = wb.dot(ab);
    jio_weight_update(wb, rng.uniform(0.0, 0.4), cd(rng.uniform(-1, 1), rng.uniform(-1, 1)),
                      xb, ab);
    CHECK(std::abs(wb.dot(ab) - before) <= 1e-12 * (1.0 + std::abs(before)));
  }
}

TEST_CASE("each sub-update alone drives the output magnitude onto the bound") {
  RandomStream rng(24);
  int tested_T = 0, tested_w = 0, guard = 0;
  while ((tested_T < 1000 || tested_w < 1000) && ++guard < 50000) {
    const int m = 2 + static_cast<int>(rng.uniform(0.0, 5.0));
    const int r = 1 + static_cast<int>(rng.uniform(0.0, static_cast<double>(m)));
    const CMatrix T = random_cmatrix(rng, m, r);
    const CVector w = random_cvector(rng, r);
    const CVector x = random_cvector(rng, m);
    const CVector a0 = random_cvector(rng, m);
    const CVector x_bar = T.adjoint() * x;
    const cd y = w.dot(x_bar);
    if (std::abs(y) < 1e-9) continue;
    const double delta = std::abs(y) * rng.uniform(0.05, 0.95);

    if (const auto mu_T = jio_mu_T(y, delta, w, x, a0); mu_T.has_value()) {
      CMatrix T2 = T;
      jio_projection_update(T2, *mu_T, y, x, w, a0);
      const cd y2 = w.dot(T2.adjoint() * x);
      CHECK(std::abs(std::abs(y2) - delta) <= 1e-9 * delta);
      ++tested_T;
    }
    const CVector a_bar = T.adjoint() * a0;
    if (const auto mu_w = jio_mu_w(y, delta, x_bar, a_bar); mu_w.has_value()) {
      CVector w2 = w;
      jio_weight_update(w2, *mu_w, y, x_bar, a_bar);
      const cd y2 = w2.dot(x_bar);
      CHECK(std::abs(std::abs(y2) - delta) <= 1e-9 * delta);
      ++tested_w;
    }
  }
  CHECK(tested_T >= 1000);
  CHECK(tested_w >= 1000);
}

TEST_CASE("initial reduced-rank state matches the published initialization") {
  const CVector a0 = steering_vector(90.0, 8);
  const JioSmState state = make_jio_sm_state(3, a0, 1.0, pdb_bound(22.0, 0.99));
  CHECK((state.projection.topRows(3) - CMatrix::Identity(3, 3)).norm() == 0.0);
  CHECK(state.projection.bottomRows(5).norm() == 0.0);
  CHECK((state.a_bar - a0.head(3)).norm() == 0.0);
  CHECK(std::abs(state.w_bar.dot(state.a_bar) - cd(1.0, 0.0)) < 1e-14);
  // bound seeded at the fixed point sqrt(alpha / r) for broadside init
  CHECK(state.bound.current() == doctest::Approx(std::sqrt(22.0 / 3.0)).epsilon(1e-12));
  CHECK_THROWS_AS(make_jio_sm_state(0, a0, 1.0, fixed_bound(1.0)), std::invalid_argument);
  CHECK_THROWS_AS(make_jio_sm_state(9, a0, 1.0, fixed_bound(1.0)), std::invalid_argument);
}

TEST_CASE("snapshots below the bound are a bitwise no-op on the state") {
  RandomStream rng(26);
  const CVector a0 = steering_vector(77.0, 4);
  // warm a state away from the initial values first
  JioSmState warm = make_jio_sm_state(2, a0, 1.0, fixed_bound(1e-6));
  for (int i = 0; i < 5; ++i) jio_sm_sg_iterate(warm, random_cvector(rng, 4), a0);

  for (int trial = 0; trial < 100; ++trial) {
    const CVector x = random_cvector(rng, 4);
    const cd y = beamformer_output(warm, x);
    for (const double delta : {std::abs(y), 1.5 * std::abs(y)}) {
      JioSmState state{warm.projection, warm.w_bar, warm.a_bar, 1.0,
                       fixed_bound(delta), 0, 0};
      const CMatrix T_before = state.projection;
      const CVector w_before = state.w_bar;
      const StepOutcome out = jio_sm_sg_iterate(state, x, a0);
      CHECK_FALSE(out.updated);
      CHECK(std::abs(out.y - y) == 0.0);
      bool identical = true;
      for (Eigen::Index i = 0; i < T_before.rows() && identical; ++i)
        for (Eigen::Index j = 0; j < T_before.cols() && identical; ++j)
          identical = state.projection(i, j) == T_before(i, j);
      for (Eigen::Index j = 0; j < w_before.size() && identical; ++j)
        identical = state.w_bar(j) == w_before(j);
      CHECK(identical);
      CHECK(state.updates_performed == 0);
      CHECK(state.snapshots_seen == 1);
    }
  }
}

TEST_CASE("gated joint iteration replays the hand-rolled trajectory") {
  const double alpha = 2.0, beta = 0.5, sigma2 = 1.0;
  const CVector a0 = steering_vector(75.0, 3);
  JioSmState state = make_jio_sm_state(2, a0, 1.0, pdb_bound(alpha, beta, sigma2));

  OracleJioState oracle;
  oracle.T = to_cmat(state.projection);
  oracle.w = to_cvec(state.w_bar);
  oracle.delta = std::sqrt(alpha * o_weight_norm2(oracle.T, oracle.w) * sigma2);
  CHECK(state.bound.current() == doctest::Approx(oracle.delta).epsilon(1e-14));

  // one loud snapshot that must trigger, one faint one that must not
  CVector loud(3), faint(3);
  loud << cd(2.0, 1.0), cd(-1.0, 3.0), cd(0.5, -2.0);
  faint << cd(0.01, 0.0), cd(0.0, -0.02), cd(0.015, 0.01);

  for (const CVector* x : {&loud, &faint}) {
    const StepOutcome got = jio_sm_sg_iterate(state, *x, a0);
    const OracleStep want = oracle_iterate(oracle, to_cvec(*x), to_cvec(a0),
                                           alpha, beta, sigma2);
    CHECK(std::abs(got.y - want.y) < 1e-12);
    CHECK(got.updated == want.updated);
    CHECK(state.bound.current() == doctest::Approx(oracle.delta).epsilon(1e-12));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 2; ++j)
        CHECK(std::abs(state.projection(i, j) - oracle.T[i][j]) < 1e-12);
    for (int j = 0; j < 2; ++j)
      CHECK(std::abs(state.w_bar(j) - oracle.w[j]) < 1e-12);
  }
  CHECK(state.snapshots_seen == 2);
  CHECK(state.updates_performed == 1);
}

TEST_CASE("every step along a long random trajectory matches the replay oracle") {
  // The oracle is resynced to the library state after each comparison, so
  // each of the 300 steps checks the one-step mapping at tight tolerance
  // instead of letting rounding noise compound across the trajectory.
  const double alpha = 8.0, beta = 0.95, sigma2 = 0.5;
  RandomStream rng(28);
  const CVector a0 = steering_vector(112.0, 3);
  JioSmState state = make_jio_sm_state(2, a0, 1.0, pdb_bound(alpha, beta, sigma2));

  int fired = 0;
  for (int i = 0; i < 300; ++i) {
    CVector x = random_cvector(rng, 3);
    if (i % 3 == 0) x *= 4.0; // make sure both branches keep exercising
    OracleJioState oracle{to_cmat(state.projection), to_cvec(state.w_bar),
                          state.bound.current()};
    const StepOutcome got = jio_sm_sg_iterate(state, x, a0);
    const OracleStep want =
        oracle_iterate(oracle, to_cvec(x), to_cvec(a0), alpha, beta, sigma2);
    REQUIRE(got.updated == want.updated);
    fired += got.updated ? 1 : 0;
    REQUIRE(std::abs(got.y - want.y) < 1e-12 * (1.0 + std::abs(want.y)));
    REQUIRE(state.bound.current() == doctest::Approx(oracle.delta).epsilon(1e-12));
    double drift = 0.0;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 2; ++c) drift = std::max(drift, std::abs(state.projection(r, c) - oracle.T[r][c]));
    for (int c = 0; c < 2; ++c) drift = std::max(drift, std::abs(state.w_bar(c) - oracle.w[c]));
    REQUIRE(drift < 1e-12);
  }
  CHECK(fired > 20);
  CHECK(fired < 300);
  CHECK(state.updates_performed == fired);
}

TEST_CASE("ungated baseline applies both shared kernels every snapshot") {
  RandomStream rng(30);
  const CVector a0 = steering_vector(68.0, 4);
  JioSmState state = make_jio_sm_state(2, a0, 1.0, fixed_bound(1.0));

  // freeze: zero steps change nothing
  const CMatrix T_before = state.projection;
  const CVector w_before = state.w_bar;
  jio_sg_iterate(state, random_cvector(rng, 4), a0, 0.0, 0.0);
  CHECK((state.projection - T_before).norm() == 0.0);
  CHECK((state.w_bar - w_before).norm() == 0.0);
  CHECK(state.updates_performed == 1);

  // one step must equal the kernels applied by hand in the same order
  const CVector x = random_cvector(rng, 4);
  CMatrix T_manual = state.projection;
  CVector w_manual = state.w_bar;
  const cd y = state.w_bar.dot(state.projection.adjoint() * x);
  const CVector x_bar = state.projection.adjoint() * x;
  jio_projection_update(T_manual, 0.01, y, x, w_manual, a0);
  const CVector a_bar_new = T_manual.adjoint() * a0;
  jio_weight_update(w_manual, 0.02, y, x_bar, a_bar_new);

  const cd y_lib = jio_sg_iterate(state, x, a0, 0.01, 0.02);
  CHECK(std::abs(y_lib - y) < 1e-14);
  CHECK((state.projection - T_manual).norm() == 0.0);
  CHECK((state.w_bar - w_manual).norm() == 0.0);
  CHECK((state.a_bar - a_bar_new).norm() == 0.0);
}

TEST_CASE("ungated baseline converges near the closed-form weight on a small scenario") {
  ScenarioConfig scenario;
  scenario.m = 4;
  scenario.doas_deg = {70.0, 110.0};
  scenario.powers = {1.0, 1.0};
  scenario.noise_power = 0.1;
  const SnapshotGenerator gen(scenario);
  const CVector a0 = steering_vector(70.0, 4);
  RandomStream rng(32);

  JioSmState state = make_jio_sm_state(2, a0, 1.0, fixed_bound(1.0));
  for (int i = 0; i < 10000; ++i)
    jio_sg_iterate(state, gen.generate(rng).x, a0, 5e-5, 5e-5);

  const SinrContext context = make_sinr_context(scenario);
  const CVector w_opt =
      lcmv_optimal_weight(HermitianMatrix(true_covariance(scenario)), a0, 1.0);
  const double got =
      sinr_db_floor(output_sinr_linear(state.projection * state.w_bar, context));
  const double best = sinr_db_floor(output_sinr_linear(w_opt, context));
  // fixed-step SG keeps a few dB of gradient-noise misadjustment; the learned
  // subspace itself supports the optimum (checked by the kernel oracles), so
  // this is a qualitative convergence check only
  CHECK(got >= best - 4.0);
}

TEST_CASE("gate firing cannot increase when the bound grows, at the first test") {
  RandomStream rng(34);
  const CVector a0 = steering_vector(90.0, 4);
  for (int trial = 0; trial < 500; ++trial) {
    const JioSmState state = make_jio_sm_state(2, a0, 1.0, fixed_bound(1.0));
    const cd y = beamformer_output(state, random_cvector(rng, 4));
    const double delta1 = rng.uniform(0.0, 2.0);
    const double delta2 = delta1 * rng.uniform(1.0, 3.0);
    const bool fires_low = std::abs(y) > delta1;
    const bool fires_high = std::abs(y) > delta2;
    CHECK((!fires_high || fires_low));
  }
}

TEST_CASE("constraint re-projection pins the reduced constraint when enabled") {
  RandomStream rng(36);
  const CVector a0 = steering_vector(84.0, 4);
  JioOptions options;
  options.reproject_constraint = true;
  JioSmState state = make_jio_sm_state(2, a0, 2.0, fixed_bound(1e-9));
  for (int i = 0; i < 200; ++i) {
    jio_sm_sg_iterate(state, random_cvector(rng, 4), a0, options);
    CHECK(std::abs(state.w_bar.dot(state.a_bar) - cd(2.0, 0.0)) < 1e-8);
  }
}

TEST_CASE("wrapper state machines expose labels, weights and noise feeds") {
  RandomStream rng(38);
  const CVector a0 = steering_vector(91.0, 4);

  const auto fr = make_full_rank_sg("fr", a0, 1.0, 1e-3);
  CHECK(fr->label() == "fr");
  CHECK((fr->effective_weight() - a0 / 4.0).norm() < 1e-14);
  const CVector x = random_cvector(rng, 4);
  const StepOutcome fr_out = fr->step(x);
  CHECK(fr_out.updated);

  const auto jio = make_jio_sm_sg("jio", a0, 1.0, 2, pdb_bound(22.0, 0.99));
  CHECK(jio->effective_weight().size() == 4);
  const auto frozen = make_fixed_weight("ref", a0);
  const StepOutcome ref_out = frozen->step(x);
  CHECK_FALSE(ref_out.updated);
  CHECK(std::abs(ref_out.y - a0.dot(x)) < 1e-14);
  CHECK((frozen->effective_weight() - a0).norm() == 0.0);

  // smoothed-noise policies move with supplied samples, known-noise ones do not
  BoundConfig smoothed;
  smoothed.mode = BoundMode::Fixed;
  smoothed.delta_fixed = 1.0;
  smoothed.noise_mode = NoiseMode::Smoothed;
  smoothed.rho = 0.5;
  const auto gated = make_full_rank_sm_sg("sm", a0, 1.0, BoundPolicy(smoothed, 1.0));
  CHECK_NOTHROW(gated->supply_noise(4.0));
  CHECK_NOTHROW(fr->supply_noise(4.0)); // default no-op
}
