#include "eds/dataset.hpp"

#include "eds/errors.hpp"
#include "eds/rng.hpp"

namespace eds {

namespace {

void standardize_matrix(const Eigen::MatrixXd& in, const Eigen::VectorXd& mean,
                        const Eigen::VectorXd& std, Eigen::MatrixXd& out) {
  out = (in.rowwise() - mean.transpose()).array().rowwise() /
        std.transpose().array();
}

void unstandardize_matrix(const Eigen::MatrixXd& in, const Eigen::VectorXd& mean,
                          const Eigen::VectorXd& std, Eigen::MatrixXd& out) {
  out = (in.array().rowwise() * std.transpose().array()).matrix().rowwise() +
        mean.transpose();
}

}  // namespace

Dataset Standardization::apply(const Dataset& d) const {
  Dataset out;
  standardize_matrix(d.features, feature_mean, feature_std, out.features);
  standardize_matrix(d.labels, label_mean, label_std, out.labels);
  out.feature_names = d.feature_names;
  out.label_names = d.label_names;
  return out;
}

Dataset Standardization::invert(const Dataset& d) const {
  Dataset out;
  unstandardize_matrix(d.features, feature_mean, feature_std, out.features);
  unstandardize_matrix(d.labels, label_mean, label_std, out.labels);
  out.feature_names = d.feature_names;
  out.label_names = d.label_names;
  return out;
}

Eigen::VectorXd Standardization::apply_features(const Eigen::VectorXd& x) const {
  return (x - feature_mean).cwiseQuotient(feature_std);
}

Eigen::VectorXd Standardization::apply_labels(const Eigen::VectorXd& y) const {
  return (y - label_mean).cwiseQuotient(label_std);
}

Eigen::VectorXd Standardization::invert_features(const Eigen::VectorXd& z) const {
  return z.cwiseProduct(feature_std) + feature_mean;
}

Eigen::VectorXd Standardization::invert_labels(const Eigen::VectorXd& z) const {
  return z.cwiseProduct(label_std) + label_mean;
}

namespace {

void fit_columns(const Eigen::MatrixXd& m, const char* what,
                 Eigen::VectorXd& mean, Eigen::VectorXd& std) {
  const auto n = static_cast<double>(m.rows());
  mean = m.colwise().mean();
  Eigen::VectorXd var =
      (m.rowwise() - mean.transpose()).array().square().colwise().sum() / n;
  std.resize(m.cols());
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    if (!(var[j] > 0.0)) {
      throw ConstantColumn(std::string(what) + " column " + std::to_string(j) +
                           " has zero variance; cannot standardize");
    }
    std[j] = std::sqrt(var[j]);
  }
}

}  // namespace

Standardization fit_standardization(const Dataset& d) {
  if (d.size() == 0) throw ConstantColumn("cannot standardize an empty dataset");
  Standardization s;
  fit_columns(d.features, "feature", s.feature_mean, s.feature_std);
  fit_columns(d.labels, "label", s.label_mean, s.label_std);
  return s;
}

std::pair<Dataset, Standardization> standardize(const Dataset& d) {
  Standardization s = fit_standardization(d);
  return {s.apply(d), s};
}

Dataset random_subset(const Dataset& d, Eigen::Index count, std::uint64_t seed) {
  if (count > d.size()) {
    throw SizeTooLarge("requested subset of " + std::to_string(count) +
                       " rows from a dataset with " + std::to_string(d.size()));
  }
  Rng rng(seed);
  auto picks = rng.sample_without_replacement(
      static_cast<std::size_t>(d.size()), static_cast<std::size_t>(count));
  std::vector<Eigen::Index> rows(picks.begin(), picks.end());
  return d.subset(rows);
}

}  // namespace eds
