#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>

namespace massmc {

struct Dataset {
  Eigen::MatrixXd features;              // n x d, row per observation
  std::optional<Eigen::VectorXd> labels;  // length n when present

  long n() const { return features.rows(); }
  long feature_dim() const { return features.cols(); }
};

/// n i.i.d. standard-normal scalars; pure function of (n, seed).
Dataset generate_gaussian_data(long n, std::uint64_t seed);

// Two-component Gaussian mixture (means [1,-1] and [-1,1], identity
// covariance, equal weights) labeled by the linear rule x0 - x1 > 0,
// ties to class 0.
Dataset generate_mixture_lr_data(long n, std::uint64_t seed);

// Rectangular numeric CSV ('.' decimal separator, optional single header row
// detected by a non-numeric cell). The label column is coerced to {0,1};
// remaining columns become features in order.
Dataset load_csv_dataset(const std::string& path, int label_column);

/// In-place z-scoring of every feature column (constant columns left alone).
void standardize_features(Dataset& data);

}  // namespace massmc
