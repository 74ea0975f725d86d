#include "massmc/spd_matrix.hpp"

#include <cmath>
#include <stdexcept>

#include "massmc/errors.hpp"

namespace massmc {

SpdMatrix::SpdMatrix(Eigen::MatrixXd entries) : cache_(std::make_shared<FactorCache>()) {
  if (entries.rows() == 0 || entries.rows() != entries.cols()) {
    throw std::invalid_argument("SpdMatrix: entries must be square and non-empty");
  }
  const double scale = entries.cwiseAbs().maxCoeff();
  const double asym = (entries - entries.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(scale, 1e-300)) {
    throw std::invalid_argument("SpdMatrix: entries are not symmetric");
  }
  // Symmetrize exactly so downstream blends cannot accumulate drift.
  entries_ = 0.5 * (entries + entries.transpose());
}

SpdMatrix SpdMatrix::identity(Eigen::Index dim) {
  return SpdMatrix(Eigen::MatrixXd::Identity(dim, dim));
}

SpdMatrix SpdMatrix::diagonal(const Eigen::VectorXd& diag) {
  return SpdMatrix(Eigen::MatrixXd(diag.asDiagonal()));
}

const Eigen::LLT<Eigen::MatrixXd>& SpdMatrix::llt() const {
  std::call_once(cache_->once, [this] {
    cache_->llt.compute(entries_);
    if (cache_->llt.info() == Eigen::Success) {
      Eigen::MatrixXd lower = cache_->llt.matrixL();
      // Eigen accepts a trailing zero pivot; the contract requires all > 0.
      if (lower.diagonal().minCoeff() > 0.0) {
        cache_->lower = std::move(lower);
        cache_->ok = true;
      }
    }
  });
  if (!cache_->ok) {
    throw NotPositiveDefinite("Cholesky factorization failed: matrix is not positive definite");
  }
  return cache_->llt;
}

const Eigen::MatrixXd& SpdMatrix::cholesky() const {
  llt();
  return cache_->lower;
}

Eigen::VectorXd SpdMatrix::solve(const Eigen::VectorXd& rhs) const {
  if (rhs.size() != dim()) {
    throw std::invalid_argument("SpdMatrix::solve: dimension mismatch");
  }
  return llt().solve(rhs);
}

SpdMatrix SpdMatrix::inverse() const {
  Eigen::MatrixXd inv = llt().solve(Eigen::MatrixXd::Identity(dim(), dim()));
  return SpdMatrix(0.5 * (inv + inv.transpose()));
}

double SpdMatrix::log_det() const {
  return 2.0 * cholesky().diagonal().array().log().sum();
}

double SpdMatrix::quadratic_form(const Eigen::VectorXd& v) const {
  return v.dot(entries_ * v);
}

Eigen::VectorXd sample_zero_mean_gaussian(const SpdMatrix& cov, RngStream& rng) {
  Eigen::VectorXd z(cov.dim());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = rng.normal();
  return cov.cholesky().triangularView<Eigen::Lower>() * z;
}

SpdMatrix empirical_covariance(std::span<const Eigen::VectorXd> samples, double ridge) {
  if (samples.size() < 2) {
    throw InsufficientSamples("empirical_covariance: need at least 2 samples");
  }
  const Eigen::Index d = samples.front().size();
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(d, d);
  for (const auto& p : samples) {
    if (p.size() != d) {
      throw std::invalid_argument("empirical_covariance: inconsistent sample dimensions");
    }
    acc.noalias() += p * p.transpose();
  }
  acc /= static_cast<double>(samples.size());
  acc += ridge * Eigen::MatrixXd::Identity(d, d);
  return SpdMatrix(std::move(acc));
}

SpdMatrix empirical_covariance(std::span<const Eigen::VectorXd> samples) {
  if (samples.size() < 2) {
    throw InsufficientSamples("empirical_covariance: need at least 2 samples");
  }
  const Eigen::Index d = samples.front().size();
  double trace = 0.0;
  for (const auto& p : samples) trace += p.squaredNorm();
  trace /= static_cast<double>(samples.size());
  const double ridge = 1e-6 * trace / static_cast<double>(d);
  return empirical_covariance(samples, ridge);
}

}  // namespace massmc
