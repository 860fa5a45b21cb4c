// SPDX-License-Identifier: Apache-2.0
//
// Narrowband ULA signal model: steering vectors, random snapshots and
// exact/sample covariance matrices for a configured source scenario.

#ifndef SMBEAM_ARRAY_MODEL_HPP
#define SMBEAM_ARRAY_MODEL_HPP

#include <cstdint>
#include <vector>

#include "smbeam/rng.hpp"
#include "smbeam/types.hpp"

namespace smbeam {

/// Statistical world of one experiment: array geometry plus source and
/// noise powers. Source 0 is the desired user.
struct ScenarioConfig {
  int m = 64;                         // sensor count
  std::vector<double> doas_deg;       // q entries, desired user first, each in (0, 180)
  std::vector<double> powers;         // q per-source powers, linear scale
  std::vector<double> phases_rad;     // optional per-source carrier phase, defaults to 0
  double noise_power = 1.0;           // sigma_n^2, linear scale (0 allowed for noiseless tests)
  double element_spacing_ratio = 0.5; // d / lambda_c
  double gamma = 1.0;                 // constraint value toward the desired DOA

  int q() const { return static_cast<int>(doas_deg.size()); }

  // Throws std::invalid_argument when the scenario is malformed:
  // q > m, power < 0, noise_power < 0, DOA outside (0,180) or duplicated.
  void validate() const;
};

/// One received vector together with the data that generated it.
/// x = A(theta) * symbols + noise holds exactly by construction.
struct Snapshot {
  CVector x;       // length m
  CVector symbols; // length q, amplitude-scaled source data
  CVector noise;   // length m
};

// a(theta): entry k is exp(-2*pi*j * k * spacing_ratio * cos theta).
// Throws std::domain_error for theta outside (0, 180) degrees.
CVector steering_vector(double theta_deg, int m, double spacing_ratio = 0.5);

// Columns are the steering vectors of all configured sources.
CMatrix array_manifold(const ScenarioConfig& config);

// Deterministic interferer layout: q - 1 angles spread evenly over
// (20, 160) degrees, keeping a +-guard_deg band around theta0 clear.
// The desired DOA theta0 is entry 0 of the result.
std::vector<double> even_doa_layout(double theta0_deg, int q, double guard_deg = 5.0);

// Per-run random layout over the same clear region; interferers are kept
// pairwise at least 0.5 degrees apart.
std::vector<double> random_doa_layout(double theta0_deg, int q, RandomStream& rng,
                                      double guard_deg = 5.0);

/// Draws BPSK snapshots for a fixed scenario. The manifold and per-source
/// amplitudes are precomputed; each generate() consumes q sign draws and
/// m complex Gaussian draws from the supplied stream, in that order.
class SnapshotGenerator {
public:
  explicit SnapshotGenerator(ScenarioConfig config);

  Snapshot generate(RandomStream& rng) const;

  // x = A * symbols + noise for caller-chosen data; used by tests.
  Snapshot assemble(const CVector& symbols, const CVector& noise) const;

  const ScenarioConfig& config() const { return config_; }
  const CMatrix& manifold() const { return manifold_; }

private:
  ScenarioConfig config_;
  CMatrix manifold_;            // m x q
  std::vector<Complex> amplitudes_; // sqrt(power_k) * exp(j*phase_k)
};

// E[x x^H] = sum_k p_k a_k a_k^H + sigma_n^2 I. With exclude_desired the
// k = 0 term is dropped, giving the interference-plus-noise covariance.
CMatrix true_covariance(const ScenarioConfig& config, bool exclude_desired = false);

// (1/N) sum_i x(i) x(i)^H. Throws std::invalid_argument on an empty set.
CMatrix sample_covariance(const std::vector<Snapshot>& snapshots);

} // namespace smbeam

#endif
