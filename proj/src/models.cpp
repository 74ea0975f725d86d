#include "massmc/models.hpp"

#include <cmath>
#include <stdexcept>

#include "massmc/errors.hpp"

namespace massmc {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;

double softplus(double z) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::fabs(z)));
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

void require_finite(double v, const char* where) {
  if (!std::isfinite(v)) throw NonFiniteValue(std::string(where) + ": non-finite value");
}

void require_finite(const Eigen::VectorXd& v, const char* where) {
  if (!v.allFinite()) throw NonFiniteValue(std::string(where) + ": non-finite gradient");
}

void check_batch(std::span<const long> batch, long n, const char* where) {
  if (batch.empty()) throw EmptyBatch(std::string(where) + ": empty minibatch");
  for (long idx : batch) {
    if (idx < 0 || idx >= n) {
      throw std::invalid_argument(std::string(where) + ": batch index out of range");
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// GaussianNormalGammaModel

GaussianNormalGammaModel::GaussianNormalGammaModel(Dataset data, double prior_shape,
                                                   double prior_rate)
    : data_(std::move(data)),
      n_(data_.n()),
      prior_shape_(prior_shape),
      prior_rate_(prior_rate) {
  if (data_.feature_dim() != 1) {
    throw std::invalid_argument("GaussianNormalGammaModel: data must be scalar");
  }
  if (prior_shape_ <= 0.0 || prior_rate_ <= 0.0) {
    throw std::invalid_argument("GaussianNormalGammaModel: prior shape/rate must be positive");
  }
  sum_x_ = data_.features.col(0).sum();
  sum_xx_ = data_.features.col(0).squaredNorm();
}

// Prior on tau = exp(eta) plus the reparametrization Jacobian:
// (a0-1)*eta - b0*tau + a0*log(b0) - lgamma(a0) + eta.
double GaussianNormalGammaModel::log_lik(const Eigen::VectorXd& theta) const {
  const double mu = theta[0];
  const double eta = theta[1];
  const double tau = std::exp(eta);
  const double ssq = sum_xx_ - 2.0 * mu * sum_x_ + n_ * mu * mu;
  const double data_term = 0.5 * n_ * eta - 0.5 * n_ * kLog2Pi - 0.5 * tau * ssq;
  const double prior_term = prior_shape_ * std::log(prior_rate_) - std::lgamma(prior_shape_) +
                            prior_shape_ * eta - prior_rate_ * tau;
  const double value = data_term + prior_term;
  require_finite(value, "GaussianNormalGammaModel::log_lik");
  return value;
}

Eigen::VectorXd GaussianNormalGammaModel::grad_log_lik(const Eigen::VectorXd& theta) const {
  const double mu = theta[0];
  const double tau = std::exp(theta[1]);
  const double ssq = sum_xx_ - 2.0 * mu * sum_x_ + n_ * mu * mu;
  Eigen::VectorXd grad(2);
  grad[0] = tau * (sum_x_ - n_ * mu);
  grad[1] = 0.5 * n_ - 0.5 * tau * ssq + prior_shape_ - prior_rate_ * tau;
  require_finite(grad, "GaussianNormalGammaModel::grad_log_lik");
  return grad;
}

double GaussianNormalGammaModel::stoch_log_lik(const Eigen::VectorXd& theta,
                                               std::span<const long> batch) const {
  check_batch(batch, n_, "GaussianNormalGammaModel::stoch_log_lik");
  const double mu = theta[0];
  const double eta = theta[1];
  const double tau = std::exp(eta);
  double bx = 0.0, bxx = 0.0;
  for (long idx : batch) {
    const double x = data_.features(idx, 0);
    bx += x;
    bxx += x * x;
  }
  const double b = static_cast<double>(batch.size());
  const double ssq = bxx - 2.0 * mu * bx + b * mu * mu;
  const double scale = static_cast<double>(n_) / b;
  const double data_term = scale * (0.5 * b * eta - 0.5 * b * kLog2Pi - 0.5 * tau * ssq);
  const double prior_term = prior_shape_ * std::log(prior_rate_) - std::lgamma(prior_shape_) +
                            prior_shape_ * eta - prior_rate_ * tau;
  const double value = data_term + prior_term;
  require_finite(value, "GaussianNormalGammaModel::stoch_log_lik");
  return value;
}

Eigen::VectorXd GaussianNormalGammaModel::stoch_grad_log_lik(const Eigen::VectorXd& theta,
                                                             std::span<const long> batch) const {
  check_batch(batch, n_, "GaussianNormalGammaModel::stoch_grad_log_lik");
  const double mu = theta[0];
  const double tau = std::exp(theta[1]);
  double bx = 0.0, bxx = 0.0;
  for (long idx : batch) {
    const double x = data_.features(idx, 0);
    bx += x;
    bxx += x * x;
  }
  const double b = static_cast<double>(batch.size());
  const double ssq = bxx - 2.0 * mu * bx + b * mu * mu;
  const double scale = static_cast<double>(n_) / b;
  Eigen::VectorXd grad(2);
  grad[0] = scale * tau * (bx - b * mu);
  grad[1] = scale * (0.5 * b - 0.5 * tau * ssq) + prior_shape_ - prior_rate_ * tau;
  require_finite(grad, "GaussianNormalGammaModel::stoch_grad_log_lik");
  return grad;
}

// ---------------------------------------------------------------------------
// BayesLogisticModel

BayesLogisticModel::BayesLogisticModel(Dataset data, double prior_variance)
    : data_(std::move(data)), prior_variance_(prior_variance) {
  if (!data_.labels) {
    throw std::invalid_argument("BayesLogisticModel: dataset has no labels");
  }
  if (prior_variance_ <= 0.0) {
    throw std::invalid_argument("BayesLogisticModel: prior variance must be positive");
  }
}

double BayesLogisticModel::log_lik(const Eigen::VectorXd& theta) const {
  const auto& y = *data_.labels;
  double value = 0.0;
  for (long i = 0; i < data_.n(); ++i) {
    const double z = data_.features.row(i).dot(theta);
    value += y[i] * z - softplus(z);
  }
  const long d = dim();
  value += -0.5 * theta.squaredNorm() / prior_variance_ -
           0.5 * d * (kLog2Pi + std::log(prior_variance_));
  require_finite(value, "BayesLogisticModel::log_lik");
  return value;
}

Eigen::VectorXd BayesLogisticModel::grad_log_lik(const Eigen::VectorXd& theta) const {
  const auto& y = *data_.labels;
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(dim());
  for (long i = 0; i < data_.n(); ++i) {
    const double z = data_.features.row(i).dot(theta);
    grad.noalias() += (y[i] - sigmoid(z)) * data_.features.row(i).transpose();
  }
  grad -= theta / prior_variance_;
  require_finite(grad, "BayesLogisticModel::grad_log_lik");
  return grad;
}

double BayesLogisticModel::stoch_log_lik(const Eigen::VectorXd& theta,
                                         std::span<const long> batch) const {
  check_batch(batch, data_.n(), "BayesLogisticModel::stoch_log_lik");
  const auto& y = *data_.labels;
  double data_term = 0.0;
  for (long idx : batch) {
    const double z = data_.features.row(idx).dot(theta);
    data_term += y[idx] * z - softplus(z);
  }
  const double scale = static_cast<double>(data_.n()) / static_cast<double>(batch.size());
  const long d = dim();
  const double value = scale * data_term - 0.5 * theta.squaredNorm() / prior_variance_ -
                       0.5 * d * (kLog2Pi + std::log(prior_variance_));
  require_finite(value, "BayesLogisticModel::stoch_log_lik");
  return value;
}

Eigen::VectorXd BayesLogisticModel::stoch_grad_log_lik(const Eigen::VectorXd& theta,
                                                       std::span<const long> batch) const {
  check_batch(batch, data_.n(), "BayesLogisticModel::stoch_grad_log_lik");
  const auto& y = *data_.labels;
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(dim());
  for (long idx : batch) {
    const double z = data_.features.row(idx).dot(theta);
    grad.noalias() += (y[idx] - sigmoid(z)) * data_.features.row(idx).transpose();
  }
  grad *= static_cast<double>(data_.n()) / static_cast<double>(batch.size());
  grad -= theta / prior_variance_;
  require_finite(grad, "BayesLogisticModel::stoch_grad_log_lik");
  return grad;
}

// ---------------------------------------------------------------------------
// GaussianMeanModel

GaussianMeanModel::GaussianMeanModel(Dataset data, double prior_variance)
    : data_(std::move(data)), n_(data_.n()), prior_variance_(prior_variance) {
  if (data_.feature_dim() != 1) {
    throw std::invalid_argument("GaussianMeanModel: data must be scalar");
  }
  if (prior_variance_ <= 0.0) {
    throw std::invalid_argument("GaussianMeanModel: prior variance must be positive");
  }
  sum_x_ = data_.features.col(0).sum();
  sum_xx_ = data_.features.col(0).squaredNorm();
}

double GaussianMeanModel::log_lik(const Eigen::VectorXd& theta) const {
  const double m = theta[0];
  const double ssq = sum_xx_ - 2.0 * m * sum_x_ + n_ * m * m;
  const double value = -0.5 * ssq - 0.5 * n_ * kLog2Pi - 0.5 * m * m / prior_variance_ -
                       0.5 * (kLog2Pi + std::log(prior_variance_));
  require_finite(value, "GaussianMeanModel::log_lik");
  return value;
}

Eigen::VectorXd GaussianMeanModel::grad_log_lik(const Eigen::VectorXd& theta) const {
  Eigen::VectorXd grad(1);
  grad[0] = sum_x_ - n_ * theta[0] - theta[0] / prior_variance_;
  require_finite(grad, "GaussianMeanModel::grad_log_lik");
  return grad;
}

double GaussianMeanModel::stoch_log_lik(const Eigen::VectorXd& theta,
                                        std::span<const long> batch) const {
  check_batch(batch, n_, "GaussianMeanModel::stoch_log_lik");
  const double m = theta[0];
  double bx = 0.0, bxx = 0.0;
  for (long idx : batch) {
    const double x = data_.features(idx, 0);
    bx += x;
    bxx += x * x;
  }
  const double b = static_cast<double>(batch.size());
  const double scale = static_cast<double>(n_) / b;
  const double ssq = bxx - 2.0 * m * bx + b * m * m;
  const double value = scale * (-0.5 * ssq - 0.5 * b * kLog2Pi) -
                       0.5 * m * m / prior_variance_ -
                       0.5 * (kLog2Pi + std::log(prior_variance_));
  require_finite(value, "GaussianMeanModel::stoch_log_lik");
  return value;
}

Eigen::VectorXd GaussianMeanModel::stoch_grad_log_lik(const Eigen::VectorXd& theta,
                                                      std::span<const long> batch) const {
  check_batch(batch, n_, "GaussianMeanModel::stoch_grad_log_lik");
  double bx = 0.0;
  for (long idx : batch) bx += data_.features(idx, 0);
  const double b = static_cast<double>(batch.size());
  const double scale = static_cast<double>(n_) / b;
  Eigen::VectorXd grad(1);
  grad[0] = scale * (bx - b * theta[0]) - theta[0] / prior_variance_;
  require_finite(grad, "GaussianMeanModel::stoch_grad_log_lik");
  return grad;
}

double GaussianMeanModel::posterior_mean() const {
  return sum_x_ / (n_ + 1.0 / prior_variance_);
}

double GaussianMeanModel::posterior_variance() const {
  return 1.0 / (n_ + 1.0 / prior_variance_);
}

// ---------------------------------------------------------------------------
// StdGaussianTarget

StdGaussianTarget::StdGaussianTarget(long dim) : dim_(dim) {
  if (dim < 1) throw std::invalid_argument("StdGaussianTarget: dim must be >= 1");
}

double StdGaussianTarget::log_lik(const Eigen::VectorXd& theta) const {
  const double value = -0.5 * theta.squaredNorm();
  require_finite(value, "StdGaussianTarget::log_lik");
  return value;
}

Eigen::VectorXd StdGaussianTarget::grad_log_lik(const Eigen::VectorXd& theta) const {
  return -theta;
}

double StdGaussianTarget::stoch_log_lik(const Eigen::VectorXd& theta,
                                        std::span<const long> batch) const {
  check_batch(batch, 1, "StdGaussianTarget::stoch_log_lik");
  return log_lik(theta);
}

Eigen::VectorXd StdGaussianTarget::stoch_grad_log_lik(const Eigen::VectorXd& theta,
                                                      std::span<const long> batch) const {
  check_batch(batch, 1, "StdGaussianTarget::stoch_grad_log_lik");
  return grad_log_lik(theta);
}

}  // namespace massmc
