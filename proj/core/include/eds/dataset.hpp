#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace eds {

/// A regression dataset: N samples with d-dimensional features and
/// m-dimensional labels, stored row-major per sample.
struct Dataset {
  Eigen::MatrixXd features;  // N x d
  Eigen::MatrixXd labels;    // N x m
  std::vector<std::string> feature_names;
  std::vector<std::string> label_names;

  Eigen::Index size() const { return features.rows(); }
  Eigen::Index feature_dim() const { return features.cols(); }
  Eigen::Index label_dim() const { return labels.cols(); }

  Eigen::VectorXd feature_row(Eigen::Index i) const { return features.row(i); }
  Eigen::VectorXd label_row(Eigen::Index i) const { return labels.row(i); }

  /// Subset by row indices, preserving order.
  Dataset subset(const std::vector<Eigen::Index>& rows) const {
    Dataset out;
    out.features.resize(static_cast<Eigen::Index>(rows.size()), features.cols());
    out.labels.resize(static_cast<Eigen::Index>(rows.size()), labels.cols());
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(rows.size()); ++i) {
      out.features.row(i) = features.row(rows[static_cast<std::size_t>(i)]);
      out.labels.row(i) = labels.row(rows[static_cast<std::size_t>(i)]);
    }
    out.feature_names = feature_names;
    out.label_names = label_names;
    return out;
  }
};

/// Per-column affine transform z = (x - mean) / std fitted on a dataset.
/// Uses the population convention (divide by N) for the variance.
struct Standardization {
  Eigen::VectorXd feature_mean, feature_std;
  Eigen::VectorXd label_mean, label_std;

  Dataset apply(const Dataset& d) const;
  Dataset invert(const Dataset& d) const;
  Eigen::VectorXd apply_features(const Eigen::VectorXd& x) const;
  Eigen::VectorXd apply_labels(const Eigen::VectorXd& y) const;
  Eigen::VectorXd invert_features(const Eigen::VectorXd& z) const;
  Eigen::VectorXd invert_labels(const Eigen::VectorXd& z) const;
};

/// Fit a standardization on d. Throws ConstantColumn if any feature or
/// label column has zero variance.
Standardization fit_standardization(const Dataset& d);

/// Convenience: fit on d and return the transformed copy plus the params.
std::pair<Dataset, Standardization> standardize(const Dataset& d);

/// Uniformly sampled row subset (distinct rows, in draw order).
Dataset random_subset(const Dataset& d, Eigen::Index count, std::uint64_t seed);

}  // namespace eds
