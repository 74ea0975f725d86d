#pragma once

#include <Eigen/Core>
#include <optional>
#include <span>
#include <vector>

#include "massmc/models.hpp"
#include "massmc/rng.hpp"
#include "massmc/spd_matrix.hpp"

namespace massmc {

// Sampler state: position theta, momentum p, and the per-variant thermostat
// extensions (xi for SGNHT, the (s, q) pair for Nose-Poincare kinds).
struct PhaseState {
  Eigen::VectorXd theta;
  Eigen::VectorXd momentum;
  std::optional<double> xi;
  std::optional<double> s;
  std::optional<double> q;
};

struct HmcConfig {
  double step_size = 1e-2;
  long leapfrog_steps = 10;
};

struct SghmcConfig {
  double step_size = 1e-2;
  long leapfrog_steps = 10;
  double friction = 10.0;        // C
  double noise_estimate = 0.0;   // B_hat; injected noise variance is 2(C - B_hat) per unit step
};

struct SgnhtConfig {
  double step_size = 1e-2;
  long leapfrog_steps = 10;
  double diffusion = 1.0;  // A; also the xi initializer
  double mu_th = 1.0;      // diagnostic energy constants only
  double xi_bar = 1.0;
};

struct NpConfig {
  double step_size = 1e-3;
  long leapfrog_steps = 10;
  double thermostat_mass = 1.0;  // Q
  double dof = 1.0;              // g, defaults to the parameter dimension upstream
  double kt = 1.0;
  double h0 = 0.0;
  double a_noise = 0.0;
  double b_noise = 0.0;
};

// Draws uniform minibatches of indices without replacement; a fresh batch per
// call. batch_size <= 0 or >= n yields the full index set and consumes no
// randomness.
class MinibatchSampler {
 public:
  MinibatchSampler(long n, long batch_size);

  std::span<const long> next(RngStream& rng);

  long batch_size() const { return batch_; }
  bool full_batch() const { return batch_ == n_; }

 private:
  long n_;
  long batch_;
  std::vector<long> indices_;
};

/// H(theta, p) = -L(theta) + p^T M^{-1} p / 2.
double gibbs_energy(const PhaseState& state, const TargetModel& model,
                    const SpdMatrix& m_inv);

struct LeapfrogResult {
  PhaseState state;
  double delta_h;  // H(end) - H(start)
};

// Stormer-Verlet with full-data gradients: half-step p, full-step theta with
// eps * M^{-1} p, half-step p, repeated leapfrog_steps times. Deterministic.
LeapfrogResult leapfrog_trajectory(const PhaseState& state, const TargetModel& model,
                                   const SpdMatrix& m_inv, const HmcConfig& cfg);

/// Accepts with probability min(1, exp(-delta_h)).
bool mh_accept(double delta_h, RngStream& rng);

// One HMC epoch: resample p ~ N(0, M), run the leapfrog trajectory, apply the
// MH test. A rejected proposal keeps the old theta and the fresh momentum.
PhaseState hmc_em_epoch(const PhaseState& state, const TargetModel& model,
                        const SpdMatrix& m_inv, const HmcConfig& cfg, RngStream& rng,
                        bool* accepted = nullptr);

// One SGHMC epoch: resample p ~ N(0, M), then leapfrog_steps friction-and-noise
// updates with stochastic gradients. No MH correction.
PhaseState sghmc_epoch(const PhaseState& state, const TargetModel& model,
                       const SpdMatrix& m_inv, const SghmcConfig& cfg,
                       MinibatchSampler& batcher, RngStream& rng);

// One SGNHT epoch; the momentum and thermostat xi persist across epochs.
// Requires state.xi.
PhaseState sgnht_epoch(const PhaseState& state, const TargetModel& model,
                       const SpdMatrix& m_inv, const SgnhtConfig& cfg,
                       MinibatchSampler& batcher, RngStream& rng);

/// Diagnostic energy -L + p^T M^{-1} p / 2 - log|M^{-1}|/2 + mu(xi - xi_bar)^2/2.
double sgnht_energy(const PhaseState& state, const TargetModel& model,
                    const SpdMatrix& m_inv, const SgnhtConfig& cfg);

/// Nose-Poincare energy s[-L + (p/s)^T M^{-1} (p/s)/2 + q^2/2Q + g kT log s - H0].
double np_energy(const PhaseState& state, const TargetModel& model,
                 const SpdMatrix& m_inv, const NpConfig& cfg);

// One SG-NPHMC epoch: leapfrog_steps generalized-leapfrog steps of the
// stochastic Nose-Poincare dynamics. Stochasticity enters only through the
// minibatch likelihood estimates; momentum refreshment, when wanted, is the
// caller's move. Requires state.s > 0 and state.q. Throws ThermostatBlowup
// when the thermostat quadratic loses its real root or s leaves (0, inf).
PhaseState sgnphmc_epoch(const PhaseState& state, const TargetModel& model,
                         const SpdMatrix& m_inv, const NpConfig& cfg,
                         MinibatchSampler& batcher, RngStream& rng);

}  // namespace massmc
