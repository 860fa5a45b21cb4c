// SPDX-License-Identifier: Apache-2.0

#include "smbeam/array_model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace smbeam {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSectorLo = 20.0;
constexpr double kSectorHi = 160.0;
constexpr double kMinSeparationDeg = 0.5;

} // namespace

void ScenarioConfig::validate() const {
  if (m <= 0) throw std::invalid_argument("scenario: m must be positive");
  if (q() > m) throw std::invalid_argument("scenario: more sources than sensors");
  if (powers.size() != doas_deg.size())
    throw std::invalid_argument("scenario: powers/doas size mismatch");
  if (!phases_rad.empty() && phases_rad.size() != doas_deg.size())
    throw std::invalid_argument("scenario: phases/doas size mismatch");
  for (double p : powers)
    if (!(p >= 0.0)) throw std::invalid_argument("scenario: negative source power");
  if (!(noise_power >= 0.0))
    throw std::invalid_argument("scenario: negative noise power");
  if (!(element_spacing_ratio > 0.0))
    throw std::invalid_argument("scenario: spacing ratio must be positive");
  if (gamma == 0.0) throw std::invalid_argument("scenario: gamma must be nonzero");
  for (std::size_t i = 0; i < doas_deg.size(); ++i) {
    if (!(doas_deg[i] > 0.0 && doas_deg[i] < 180.0))
      throw std::invalid_argument("scenario: DOA outside (0, 180) degrees");
    for (std::size_t j = i + 1; j < doas_deg.size(); ++j)
      if (doas_deg[i] == doas_deg[j])
        throw std::invalid_argument("scenario: duplicate DOA");
  }
}

CVector steering_vector(double theta_deg, int m, double spacing_ratio) {
  if (m <= 0) throw std::invalid_argument("steering_vector: m must be positive");
  if (!(theta_deg > 0.0 && theta_deg < 180.0))
    throw std::domain_error("steering_vector: DOA " + std::to_string(theta_deg) +
                            " outside (0, 180) degrees");
  const double psi = -2.0 * kPi * spacing_ratio * std::cos(theta_deg * kPi / 180.0);
  CVector a(m);
  for (int k = 0; k < m; ++k) a(k) = std::polar(1.0, psi * k);
  return a;
}

CMatrix array_manifold(const ScenarioConfig& config) {
  config.validate();
  CMatrix A(config.m, config.q());
  for (int k = 0; k < config.q(); ++k)
    A.col(k) = steering_vector(config.doas_deg[k], config.m, config.element_spacing_ratio);
  return A;
}

namespace {

// n angles evenly spread over [lo, hi], endpoints included; the midpoint
// when only one fits.
void fill_even(std::vector<double>& out, double lo, double hi, int n) {
  if (n <= 0) return;
  if (n == 1) {
    out.push_back(0.5 * (lo + hi));
    return;
  }
  const double step = (hi - lo) / (n - 1);
  for (int k = 0; k < n; ++k) out.push_back(lo + step * k);
}

} // namespace

std::vector<double> even_doa_layout(double theta0_deg, int q, double guard_deg) {
  if (q <= 0) throw std::invalid_argument("even_doa_layout: q must be positive");
  if (!(theta0_deg > kSectorLo && theta0_deg < kSectorHi))
    throw std::invalid_argument("even_doa_layout: theta0 outside the sector");
  std::vector<double> doas{theta0_deg};
  const int n = q - 1;
  if (n == 0) return doas;
  const double left_hi = theta0_deg - guard_deg;
  const double right_lo = theta0_deg + guard_deg;
  const double len_left = std::max(0.0, left_hi - kSectorLo);
  const double len_right = std::max(0.0, kSectorHi - right_lo);
  if (len_left + len_right <= 0.0)
    throw std::invalid_argument("even_doa_layout: guard band covers the sector");
  int n_left = static_cast<int>(std::lround(n * len_left / (len_left + len_right)));
  if (len_left == 0.0) n_left = 0;
  if (len_right == 0.0) n_left = n;
  const int n_right = n - n_left;
  fill_even(doas, kSectorLo, left_hi, n_left);
  fill_even(doas, right_lo, kSectorHi, n_right);
  return doas;
}

std::vector<double> random_doa_layout(double theta0_deg, int q, RandomStream& rng,
                                      double guard_deg) {
  if (q <= 0) throw std::invalid_argument("random_doa_layout: q must be positive");
  if (!(theta0_deg > kSectorLo && theta0_deg < kSectorHi))
    throw std::invalid_argument("random_doa_layout: theta0 outside the sector");
  std::vector<double> doas{theta0_deg};
  const long max_attempts = 10000L * q;
  long attempts = 0;
  while (static_cast<int>(doas.size()) < q) {
    if (++attempts > max_attempts)
      throw std::runtime_error("random_doa_layout: cannot place interferers");
    const double cand = rng.uniform(kSectorLo, kSectorHi);
    if (std::abs(cand - theta0_deg) < guard_deg) continue;
    bool clear = true;
    for (std::size_t k = 1; k < doas.size(); ++k)
      if (std::abs(cand - doas[k]) < kMinSeparationDeg) {
        clear = false;
        break;
      }
    if (clear) doas.push_back(cand);
  }
  return doas;
}

SnapshotGenerator::SnapshotGenerator(ScenarioConfig config) : config_(std::move(config)) {
  config_.validate();
  manifold_ = array_manifold(config_);
  amplitudes_.resize(config_.doas_deg.size());
  for (std::size_t k = 0; k < amplitudes_.size(); ++k) {
    const double phase = config_.phases_rad.empty() ? 0.0 : config_.phases_rad[k];
    amplitudes_[k] = std::polar(std::sqrt(config_.powers[k]), phase);
  }
}

Snapshot SnapshotGenerator::generate(RandomStream& rng) const {
  const int q = config_.q();
  CVector symbols(q);
  for (int k = 0; k < q; ++k) symbols(k) = amplitudes_[k] * rng.sign();
  CVector noise(config_.m);
  for (int k = 0; k < config_.m; ++k) noise(k) = rng.complex_gaussian(config_.noise_power);
  return assemble(symbols, noise);
}

Snapshot SnapshotGenerator::assemble(const CVector& symbols, const CVector& noise) const {
  if (symbols.size() != manifold_.cols() || noise.size() != manifold_.rows())
    throw std::invalid_argument("assemble: size mismatch");
  Snapshot s;
  s.symbols = symbols;
  s.noise = noise;
  s.x = manifold_ * symbols + noise;
  return s;
}

CMatrix true_covariance(const ScenarioConfig& config, bool exclude_desired) {
  config.validate();
  CMatrix R = CMatrix::Zero(config.m, config.m);
  for (int k = exclude_desired ? 1 : 0; k < config.q(); ++k) {
    const CVector a =
        steering_vector(config.doas_deg[k], config.m, config.element_spacing_ratio);
    R.noalias() += config.powers[k] * (a * a.adjoint());
  }
  R += config.noise_power * CMatrix::Identity(config.m, config.m);
  return R;
}

CMatrix sample_covariance(const std::vector<Snapshot>& snapshots) {
  if (snapshots.empty())
    throw std::invalid_argument("sample_covariance: empty snapshot set");
  const Eigen::Index m = snapshots.front().x.size();
  CMatrix R = CMatrix::Zero(m, m);
  for (const Snapshot& s : snapshots) {
    if (s.x.size() != m)
      throw std::invalid_argument("sample_covariance: inconsistent snapshot length");
    R.noalias() += s.x * s.x.adjoint();
  }
  return R / static_cast<double>(snapshots.size());
}

} // namespace smbeam
