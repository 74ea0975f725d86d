#pragma once

#include <Eigen/Core>
#include <memory>
#include <span>

#include "massmc/dataset.hpp"

namespace massmc {

// Target distribution: joint log-likelihood L(theta) = log p(X|theta) +
// log p(theta), with exact and minibatch gradients. Minibatch estimates scale
// the data term by n/|batch| so they are unbiased for the full gradient.
// Models are immutable after construction.
class TargetModel {
 public:
  virtual ~TargetModel() = default;

  virtual long dim() const = 0;
  virtual long data_size() const = 0;

  virtual double log_lik(const Eigen::VectorXd& theta) const = 0;
  virtual Eigen::VectorXd grad_log_lik(const Eigen::VectorXd& theta) const = 0;

  virtual double stoch_log_lik(const Eigen::VectorXd& theta,
                               std::span<const long> batch) const = 0;
  virtual Eigen::VectorXd stoch_grad_log_lik(const Eigen::VectorXd& theta,
                                             std::span<const long> batch) const = 0;
};

// 1-D normal with unknown mean mu and unknown precision tau, Gamma(a0, b0)
// prior on tau (flat prior on mu). Sampled parametrization is theta =
// (mu, eta) with tau = exp(eta); the log-Jacobian +eta is part of the target.
class GaussianNormalGammaModel final : public TargetModel {
 public:
  explicit GaussianNormalGammaModel(Dataset data, double prior_shape = 1.0,
                                    double prior_rate = 1.0);

  long dim() const override { return 2; }
  long data_size() const override { return n_; }
  double log_lik(const Eigen::VectorXd& theta) const override;
  Eigen::VectorXd grad_log_lik(const Eigen::VectorXd& theta) const override;
  double stoch_log_lik(const Eigen::VectorXd& theta,
                       std::span<const long> batch) const override;
  Eigen::VectorXd stoch_grad_log_lik(const Eigen::VectorXd& theta,
                                     std::span<const long> batch) const override;

 private:
  Dataset data_;
  long n_;
  double sum_x_ = 0.0;
  double sum_xx_ = 0.0;
  double prior_shape_;
  double prior_rate_;
};

/// Logistic regression with an N(0, prior_variance * I) prior on the weights.
class BayesLogisticModel final : public TargetModel {
 public:
  explicit BayesLogisticModel(Dataset data, double prior_variance = 10.0);

  long dim() const override { return data_.feature_dim(); }
  long data_size() const override { return data_.n(); }
  double log_lik(const Eigen::VectorXd& theta) const override;
  Eigen::VectorXd grad_log_lik(const Eigen::VectorXd& theta) const override;
  double stoch_log_lik(const Eigen::VectorXd& theta,
                       std::span<const long> batch) const override;
  Eigen::VectorXd stoch_grad_log_lik(const Eigen::VectorXd& theta,
                                     std::span<const long> batch) const override;

 private:
  Dataset data_;
  double prior_variance_;
};

// 1-D normal with known unit variance, unknown mean, N(0, prior_variance)
// prior: the conjugate case with a closed-form posterior, used by the
// verification suites.
class GaussianMeanModel final : public TargetModel {
 public:
  explicit GaussianMeanModel(Dataset data, double prior_variance = 100.0);

  long dim() const override { return 1; }
  long data_size() const override { return n_; }
  double log_lik(const Eigen::VectorXd& theta) const override;
  Eigen::VectorXd grad_log_lik(const Eigen::VectorXd& theta) const override;
  double stoch_log_lik(const Eigen::VectorXd& theta,
                       std::span<const long> batch) const override;
  Eigen::VectorXd stoch_grad_log_lik(const Eigen::VectorXd& theta,
                                     std::span<const long> batch) const override;

  double posterior_mean() const;
  double posterior_variance() const;

 private:
  Dataset data_;
  long n_;
  double sum_x_ = 0.0;
  double sum_xx_ = 0.0;
  double prior_variance_;
};

// Isotropic Gaussian potential L(theta) = -||theta||^2 / 2 over a single
// dummy observation; a data-free target for integrator diagnostics.
class StdGaussianTarget final : public TargetModel {
 public:
  explicit StdGaussianTarget(long dim);

  long dim() const override { return dim_; }
  long data_size() const override { return 1; }
  double log_lik(const Eigen::VectorXd& theta) const override;
  Eigen::VectorXd grad_log_lik(const Eigen::VectorXd& theta) const override;
  double stoch_log_lik(const Eigen::VectorXd& theta,
                       std::span<const long> batch) const override;
  Eigen::VectorXd stoch_grad_log_lik(const Eigen::VectorXd& theta,
                                     std::span<const long> batch) const override;

 private:
  long dim_;
};

}  // namespace massmc
