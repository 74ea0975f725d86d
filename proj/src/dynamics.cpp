#include "massmc/dynamics.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "massmc/errors.hpp"

namespace massmc {

namespace {

void require_finite_state(const Eigen::VectorXd& theta, const Eigen::VectorXd& p,
                          const char* where) {
  if (!theta.allFinite() || !p.allFinite()) {
    throw NonFiniteValue(std::string(where) + ": state diverged");
  }
}

Eigen::VectorXd normal_vector(RngStream& rng, Eigen::Index dim) {
  Eigen::VectorXd z(dim);
  for (Eigen::Index i = 0; i < dim; ++i) z[i] = rng.normal();
  return z;
}

}  // namespace

// ---------------------------------------------------------------------------
// MinibatchSampler

MinibatchSampler::MinibatchSampler(long n, long batch_size) : n_(n) {
  if (n < 1) throw std::invalid_argument("MinibatchSampler: dataset is empty");
  batch_ = (batch_size <= 0 || batch_size >= n) ? n : batch_size;
  indices_.resize(n);
  std::iota(indices_.begin(), indices_.end(), 0L);
}

std::span<const long> MinibatchSampler::next(RngStream& rng) {
  if (batch_ == n_) return {indices_.data(), static_cast<std::size_t>(n_)};
  // Partial Fisher-Yates: the first batch_ slots become a uniform draw
  // without replacement.
  for (long j = 0; j < batch_; ++j) {
    const long k = j + static_cast<long>(rng.below(static_cast<std::uint64_t>(n_ - j)));
    std::swap(indices_[j], indices_[k]);
  }
  return {indices_.data(), static_cast<std::size_t>(batch_)};
}

// ---------------------------------------------------------------------------
// Energies

double gibbs_energy(const PhaseState& state, const TargetModel& model,
                    const SpdMatrix& m_inv) {
  const double kinetic = 0.5 * m_inv.quadratic_form(state.momentum);
  const double h = -model.log_lik(state.theta) + kinetic;
  if (!std::isfinite(h)) throw NonFiniteValue("gibbs_energy: non-finite energy");
  return h;
}

double sgnht_energy(const PhaseState& state, const TargetModel& model,
                    const SpdMatrix& m_inv, const SgnhtConfig& cfg) {
  if (!state.xi) throw std::invalid_argument("sgnht_energy: state has no thermostat xi");
  const double dxi = *state.xi - cfg.xi_bar;
  const double h = -model.log_lik(state.theta) + 0.5 * m_inv.quadratic_form(state.momentum) -
                   0.5 * m_inv.log_det() + 0.5 * cfg.mu_th * dxi * dxi;
  if (!std::isfinite(h)) throw NonFiniteValue("sgnht_energy: non-finite energy");
  return h;
}

double np_energy(const PhaseState& state, const TargetModel& model,
                 const SpdMatrix& m_inv, const NpConfig& cfg) {
  if (!state.s || !state.q) throw std::invalid_argument("np_energy: state has no (s, q) pair");
  const double s = *state.s;
  if (s <= 0.0) throw std::invalid_argument("np_energy: s must be positive");
  const Eigen::VectorXd scaled = state.momentum / s;
  const double bracket = -model.log_lik(state.theta) + 0.5 * m_inv.quadratic_form(scaled) +
                         (*state.q) * (*state.q) / (2.0 * cfg.thermostat_mass) +
                         cfg.dof * cfg.kt * std::log(s) - cfg.h0;
  const double h = s * bracket;
  if (!std::isfinite(h)) throw NonFiniteValue("np_energy: non-finite energy");
  return h;
}

// ---------------------------------------------------------------------------
// HMC

LeapfrogResult leapfrog_trajectory(const PhaseState& state, const TargetModel& model,
                                   const SpdMatrix& m_inv, const HmcConfig& cfg) {
  const double h_start = gibbs_energy(state, model, m_inv);
  const double eps = cfg.step_size;
  Eigen::VectorXd theta = state.theta;
  Eigen::VectorXd p = state.momentum;
  Eigen::VectorXd grad = model.grad_log_lik(theta);
  for (long i = 0; i < cfg.leapfrog_steps; ++i) {
    p += 0.5 * eps * grad;
    theta += eps * m_inv.apply(p);
    grad = model.grad_log_lik(theta);
    p += 0.5 * eps * grad;
  }
  require_finite_state(theta, p, "leapfrog_trajectory");
  PhaseState end = state;
  end.theta = std::move(theta);
  end.momentum = std::move(p);
  const double h_end = gibbs_energy(end, model, m_inv);
  return {std::move(end), h_end - h_start};
}

bool mh_accept(double delta_h, RngStream& rng) {
  if (!std::isfinite(delta_h)) throw NonFiniteValue("mh_accept: non-finite energy change");
  if (delta_h <= 0.0) return true;
  return rng.uniform01() < std::exp(-delta_h);
}

PhaseState hmc_em_epoch(const PhaseState& state, const TargetModel& model,
                        const SpdMatrix& m_inv, const HmcConfig& cfg, RngStream& rng,
                        bool* accepted) {
  const SpdMatrix mass = m_inv.inverse();
  PhaseState start = state;
  start.momentum = sample_zero_mean_gaussian(mass, rng);
  auto [proposal, delta_h] = leapfrog_trajectory(start, model, m_inv, cfg);
  const bool ok = mh_accept(delta_h, rng);
  if (accepted) *accepted = ok;
  return ok ? std::move(proposal) : std::move(start);
}

// ---------------------------------------------------------------------------
// SGHMC

PhaseState sghmc_epoch(const PhaseState& state, const TargetModel& model,
                       const SpdMatrix& m_inv, const SghmcConfig& cfg,
                       MinibatchSampler& batcher, RngStream& rng) {
  if (cfg.friction < cfg.noise_estimate || cfg.noise_estimate < 0.0) {
    throw std::invalid_argument("sghmc_epoch: requires C >= B_hat >= 0");
  }
  const double eps = cfg.step_size;
  const double noise_sd = std::sqrt(2.0 * (cfg.friction - cfg.noise_estimate) * eps);
  const SpdMatrix mass = m_inv.inverse();
  Eigen::VectorXd p = sample_zero_mean_gaussian(mass, rng);
  Eigen::VectorXd theta = state.theta;
  for (long i = 0; i < cfg.leapfrog_steps; ++i) {
    const auto batch = batcher.next(rng);
    p += -eps * cfg.friction * m_inv.apply(p) + eps * model.stoch_grad_log_lik(theta, batch);
    if (noise_sd > 0.0) p += noise_sd * normal_vector(rng, p.size());
    theta += eps * m_inv.apply(p);
  }
  require_finite_state(theta, p, "sghmc_epoch");
  PhaseState next = state;
  next.theta = std::move(theta);
  next.momentum = std::move(p);
  return next;
}

// ---------------------------------------------------------------------------
// SGNHT

PhaseState sgnht_epoch(const PhaseState& state, const TargetModel& model,
                       const SpdMatrix& m_inv, const SgnhtConfig& cfg,
                       MinibatchSampler& batcher, RngStream& rng) {
  if (!state.xi) throw std::invalid_argument("sgnht_epoch: state has no thermostat xi");
  if (cfg.diffusion < 0.0) throw std::invalid_argument("sgnht_epoch: A must be nonnegative");
  const double eps = cfg.step_size;
  const double noise_sd = std::sqrt(2.0 * cfg.diffusion * eps);
  const double d = static_cast<double>(model.dim());
  Eigen::VectorXd theta = state.theta;
  Eigen::VectorXd p = state.momentum;
  double xi = *state.xi;
  for (long i = 0; i < cfg.leapfrog_steps; ++i) {
    const auto batch = batcher.next(rng);
    p += -eps * xi * m_inv.apply(p) + eps * model.stoch_grad_log_lik(theta, batch);
    if (noise_sd > 0.0) p += noise_sd * normal_vector(rng, p.size());
    theta += eps * m_inv.apply(p);
    xi += eps * (m_inv.quadratic_form(p) / d - 1.0);
  }
  require_finite_state(theta, p, "sgnht_epoch");
  if (!std::isfinite(xi)) throw NonFiniteValue("sgnht_epoch: thermostat diverged");
  PhaseState next = state;
  next.theta = std::move(theta);
  next.momentum = std::move(p);
  next.xi = xi;
  return next;
}

// ---------------------------------------------------------------------------
// SG-NPHMC

PhaseState sgnphmc_epoch(const PhaseState& state, const TargetModel& model,
                         const SpdMatrix& m_inv, const NpConfig& cfg,
                         MinibatchSampler& batcher, RngStream& rng) {
  if (!state.s || !state.q) throw std::invalid_argument("sgnphmc_epoch: state has no (s, q)");
  if (*state.s <= 0.0) throw std::invalid_argument("sgnphmc_epoch: s must be positive");
  if (cfg.thermostat_mass <= 0.0 || cfg.kt <= 0.0) {
    throw std::invalid_argument("sgnphmc_epoch: requires Q > 0 and kT > 0");
  }

  const double eps = cfg.step_size;
  const double big_q = cfg.thermostat_mass;
  const double gkt = cfg.dof * cfg.kt;
  Eigen::VectorXd theta = state.theta;
  Eigen::VectorXd p = state.momentum;
  double s = *state.s;
  double q = *state.q;

  for (long i = 0; i < cfg.leapfrog_steps; ++i) {
    const auto batch = batcher.next(rng);
    const double lik = model.stoch_log_lik(theta, batch);
    const Eigen::VectorXd grad = model.stoch_grad_log_lik(theta, batch);

    // Momentum half-step. The implicit friction relation
    //   p' = p + (eps/2)[s grad - (B/sqrt(s)) M^{-1} p']
    // is linear; with B = 0 it is the plain explicit half-step.
    Eigen::VectorXd rhs = p + 0.5 * eps * s * grad;
    Eigen::VectorXd p_half;
    if (cfg.b_noise != 0.0) {
      const double c = 0.5 * eps * cfg.b_noise / std::sqrt(s);
      Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(p.size(), p.size()) + c * m_inv.entries();
      p_half = lhs.llt().solve(rhs);
    } else {
      p_half = std::move(rhs);
    }

    // Thermostat-momentum half-step: the quadratic
    //   (eps/4Q) q'^2 + beta q' - c = 0
    // solved on the branch continuous with the eps -> 0 limit (q' -> c).
    const Eigen::VectorXd scaled = p_half / s;
    const double kin = 0.5 * m_inv.quadratic_form(scaled);
    const double c = q + 0.5 * eps * (-gkt * (1.0 + std::log(s)) + kin + lik + cfg.h0);
    const double beta = 1.0 + cfg.a_noise * s * eps / (2.0 * big_q);
    const double disc = beta * beta + (eps / big_q) * c;
    if (disc < 0.0) {
      throw ThermostatBlowup("sgnphmc_epoch: thermostat quadratic has no real root");
    }
    const double q_half = 2.0 * c / (beta + std::sqrt(disc));

    // Thermostat full step, trapezoidal closed form of s' = s + (eps q'/2Q)(s + s').
    const double half_rate = eps * q_half / (2.0 * big_q);
    const double denom = 1.0 - half_rate;
    if (denom <= 0.0) throw ThermostatBlowup("sgnphmc_epoch: thermostat scale diverged");
    const double s_new = s * (1.0 + half_rate) / denom;
    if (s_new <= 0.0 || !std::isfinite(s_new)) {
      throw ThermostatBlowup("sgnphmc_epoch: thermostat scale left (0, inf)");
    }

    // Position full step with the half-step momentum and both scales.
    theta += 0.5 * eps * (1.0 / s + 1.0 / s_new) * m_inv.apply(p_half);

    const double lik_new = model.stoch_log_lik(theta, batch);
    const Eigen::VectorXd grad_new = model.stoch_grad_log_lik(theta, batch);

    // Explicit second half-steps for p and q.
    Eigen::VectorXd p_new =
        p_half + 0.5 * eps *
                     (s_new * grad_new -
                      (cfg.b_noise / std::sqrt(s_new)) * m_inv.apply(p_half));
    const Eigen::VectorXd scaled_new = p_half / s_new;
    const double kin_new = 0.5 * m_inv.quadratic_form(scaled_new);
    const double q_new =
        q_half + 0.5 * eps *
                     (cfg.h0 + lik_new - gkt * (1.0 + std::log(s_new)) + kin_new -
                      cfg.a_noise * s_new * q_half / (2.0 * big_q) -
                      q_half * q_half / (2.0 * big_q));

    p = std::move(p_new);
    q = q_new;
    s = s_new;
  }

  require_finite_state(theta, p, "sgnphmc_epoch");
  if (!std::isfinite(s) || !std::isfinite(q)) {
    throw NonFiniteValue("sgnphmc_epoch: thermostat diverged");
  }
  PhaseState next = state;
  next.theta = std::move(theta);
  next.momentum = std::move(p);
  next.s = s;
  next.q = q;
  return next;
}

}  // namespace massmc
