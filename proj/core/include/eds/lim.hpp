#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "eds/dataset.hpp"
#include "eds/geometry.hpp"

namespace eds {

/// Access to the Frobenius norm of a function's Hessian tensor,
/// ||H(x)||_F = sqrt(sum over outputs l and index pairs (i,j) of H_l(i,j)^2).
class HessianOracle {
 public:
  /// Directly from a norm callable.
  static HessianOracle analytic(std::function<double(const Point&)> norm);

  /// Constant bound (e.g. for functions with constant Hessians).
  static HessianOracle constant(double bound);

  /// From a callable returning one Hessian matrix per output.
  static HessianOracle from_tensor(
      std::function<std::vector<Eigen::MatrixXd>(const Point&)> tensor);

  /// Central finite differences of a vector-valued function, step `h` per
  /// coordinate.
  static HessianOracle finite_difference(
      std::function<Eigen::VectorXd(const Point&)> f, int input_dim,
      double h = 1e-4);

  double operator()(const Point& x) const { return norm_(x); }

 private:
  explicit HessianOracle(std::function<double(const Point&)> norm)
      : norm_(std::move(norm)) {}
  std::function<double(const Point&)> norm_;
};

/// Oracle for the same function expressed in standardized coordinates:
/// given per-output raw Hessians H_l, the standardized Hessian is
/// (1/sigma_label_l) * diag(sigma_feat) H_l diag(sigma_feat), evaluated at
/// the de-standardized point.
HessianOracle standardized_oracle(
    std::function<std::vector<Eigen::MatrixXd>(const Point&)> raw_tensor,
    const Standardization& s);

/// Piecewise-linear prediction through a triangulation whose real vertices
/// carry labels. Row r of `labels` belongs to the r-th inserted real vertex.
/// Returns nullopt when x lies outside the hull.
std::optional<Eigen::VectorXd> predict_at(const Triangulation& t,
                                          const Eigen::MatrixXd& labels,
                                          const Point& x);

/// Piecewise-linear interpolation model over a Delaunay triangulation.
/// Immutable snapshot: safe for concurrent queries.
class LinearInterpolationModel {
 public:
  /// labels: one row per real vertex, in insertion order.
  LinearInterpolationModel(Triangulation tri, Eigen::MatrixXd labels);

  /// Barycentric-weighted label average over the containing cell, or
  /// nullopt when x is outside the hull of the model's vertices.
  std::optional<Eigen::VectorXd> predict(const Point& x) const;

  /// ||predict(x) - y||_2, or nullopt outside the hull.
  std::optional<double> point_error(const Point& x, const Eigen::VectorXd& y) const;

  const Triangulation& triangulation() const { return tri_; }
  const Eigen::MatrixXd& labels() const { return labels_; }
  Eigen::Index label_dim() const { return labels_.cols(); }

 private:
  Triangulation tri_;
  Eigen::MatrixXd labels_;
};

/// Estimate of max ||H(x)||_F over a simplex: the oracle's maximum over the
/// vertices plus `probes` uniformly sampled interior points drawn with a
/// fixed seed (deterministic across calls). A lower estimate of the true
/// max for non-constant Hessians.
double probe_max_hessian(const std::vector<Point>& vertices,
                         const HessianOracle& oracle, int probes);

/// Upper bound (1/2) * g_s * g_c on the linear-interpolation error over a
/// simplex, with g_c from probe_max_hessian.
double error_upper_bound(const std::vector<Point>& vertices,
                         const HessianOracle& oracle, int probes);

}  // namespace eds
