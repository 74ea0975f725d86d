#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <memory>
#include <mutex>
#include <span>

#include "massmc/rng.hpp"

namespace massmc {

// Dense symmetric positive-definite matrix with a lazily cached Cholesky
// factor. Entries are immutable after construction; the cache is shared by
// copies and populated at most once, so values can be handed to concurrent
// readers. Positive definiteness is enforced when the factor is first needed,
// which lets rank-deficient covariance estimates exist long enough for the
// caller to decide on a ridge.
class SpdMatrix {
 public:
  explicit SpdMatrix(Eigen::MatrixXd entries);

  static SpdMatrix identity(Eigen::Index dim);
  static SpdMatrix diagonal(const Eigen::VectorXd& diag);

  Eigen::Index dim() const { return entries_.rows(); }
  const Eigen::MatrixXd& entries() const { return entries_; }

  /// Lower-triangular factor L with L*L^T = entries. Throws NotPositiveDefinite.
  const Eigen::MatrixXd& cholesky() const;

  /// Solves entries * x = rhs through the cached factor.
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

  SpdMatrix inverse() const;

  double log_det() const;

  /// v^T * entries * v
  double quadratic_form(const Eigen::VectorXd& v) const;

  Eigen::VectorXd apply(const Eigen::VectorXd& v) const { return entries_ * v; }

 private:
  struct FactorCache {
    std::once_flag once;
    Eigen::LLT<Eigen::MatrixXd> llt;
    Eigen::MatrixXd lower;
    bool ok = false;
  };

  const Eigen::LLT<Eigen::MatrixXd>& llt() const;

  Eigen::MatrixXd entries_;
  std::shared_ptr<FactorCache> cache_;
};

/// L * z with z standard normal, so the result is N(0, cov).
Eigen::VectorXd sample_zero_mean_gaussian(const SpdMatrix& cov, RngStream& rng);

/// Zero-mean second-moment estimate (1/n) sum p p^T + ridge * I.
SpdMatrix empirical_covariance(std::span<const Eigen::VectorXd> samples, double ridge);

/// Same with the default ridge 1e-6 * trace/dim of the raw estimate.
SpdMatrix empirical_covariance(std::span<const Eigen::VectorXd> samples);

}  // namespace massmc
