#include "eds/lim.hpp"

#include <cmath>

#include "eds/errors.hpp"
#include "eds/rng.hpp"

namespace eds {

HessianOracle HessianOracle::analytic(std::function<double(const Point&)> norm) {
  return HessianOracle(std::move(norm));
}

HessianOracle HessianOracle::constant(double bound) {
  return HessianOracle([bound](const Point&) { return bound; });
}

HessianOracle HessianOracle::from_tensor(
    std::function<std::vector<Eigen::MatrixXd>(const Point&)> tensor) {
  return HessianOracle([t = std::move(tensor)](const Point& x) {
    double sq = 0.0;
    for (const auto& h : t(x)) sq += h.squaredNorm();
    return std::sqrt(sq);
  });
}

HessianOracle HessianOracle::finite_difference(
    std::function<Eigen::VectorXd(const Point&)> f, int input_dim, double h) {
  return HessianOracle([f = std::move(f), n = input_dim, h](const Point& x) {
    const Eigen::VectorXd f0 = f(x);
    double sq = 0.0;
    for (int i = 0; i < n; ++i) {
      Point xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      const Eigen::VectorXd dii = (f(xp) - 2.0 * f0 + f(xm)) / (h * h);
      sq += dii.squaredNorm();
      for (int j = i + 1; j < n; ++j) {
        Point a = x, b = x, c = x, d = x;
        a[i] += h; a[j] += h;
        b[i] += h; b[j] -= h;
        c[i] -= h; c[j] += h;
        d[i] -= h; d[j] -= h;
        const Eigen::VectorXd dij = (f(a) - f(b) - f(c) + f(d)) / (4.0 * h * h);
        sq += 2.0 * dij.squaredNorm();  // (i,j) and (j,i)
      }
    }
    return std::sqrt(sq);
  });
}

HessianOracle standardized_oracle(
    std::function<std::vector<Eigen::MatrixXd>(const Point&)> raw_tensor,
    const Standardization& s) {
  return HessianOracle::analytic([t = std::move(raw_tensor), s](const Point& z) {
    const Point x = s.invert_features(z);
    const Eigen::VectorXd& sf = s.feature_std;
    double sq = 0.0;
    const auto mats = t(x);
    for (std::size_t l = 0; l < mats.size(); ++l) {
      const Eigen::MatrixXd scaled =
          (sf.asDiagonal() * mats[l] * sf.asDiagonal()) / s.label_std[static_cast<Eigen::Index>(l)];
      sq += scaled.squaredNorm();
    }
    return std::sqrt(sq);
  });
}

std::optional<Eigen::VectorXd> predict_at(const Triangulation& t,
                                          const Eigen::MatrixXd& labels,
                                          const Point& x) {
  auto loc = t.locate(x);
  if (!loc) return std::nullopt;
  const Simplex& s = t.simplex(loc->simplex_id);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(labels.cols());
  for (std::size_t i = 0; i < s.vertex_ids.size(); ++i) {
    const Eigen::Index row = s.vertex_ids[i] - t.first_real_vertex_id();
    y += loc->weights[static_cast<Eigen::Index>(i)] * labels.row(row).transpose();
  }
  return y;
}

LinearInterpolationModel::LinearInterpolationModel(Triangulation tri,
                                                   Eigen::MatrixXd labels)
    : tri_(std::move(tri)), labels_(std::move(labels)) {
  if (labels_.rows() != tri_.real_vertex_count())
    throw DimensionMismatch("one label row per real vertex is required");
}

std::optional<Eigen::VectorXd> LinearInterpolationModel::predict(const Point& x) const {
  return predict_at(tri_, labels_, x);
}

std::optional<double> LinearInterpolationModel::point_error(
    const Point& x, const Eigen::VectorXd& y) const {
  auto p = predict(x);
  if (!p) return std::nullopt;
  return (*p - y).norm();
}

double probe_max_hessian(const std::vector<Point>& vertices,
                         const HessianOracle& oracle, int probes) {
  const int n = static_cast<int>(vertices[0].size());
  if (probes < n + 1) probes = n + 1;
  double gc = 0.0;
  for (const auto& v : vertices) gc = std::max(gc, oracle(v));
  // Uniform interior samples: Dirichlet(1,...,1) barycentric weights from a
  // fixed-seed stream, so the estimate is deterministic.
  Rng rng(0x5eed5eedULL);
  for (int s = 0; s < probes; ++s) {
    Eigen::VectorXd w(n + 1);
    double sum = 0.0;
    for (int i = 0; i <= n; ++i) {
      double u = rng.uniform();
      while (u <= 0.0) u = rng.uniform();
      w[i] = -std::log(u);
      sum += w[i];
    }
    Point x = Point::Zero(n);
    for (int i = 0; i <= n; ++i) x += (w[i] / sum) * vertices[static_cast<std::size_t>(i)];
    gc = std::max(gc, oracle(x));
  }
  return gc;
}

double error_upper_bound(const std::vector<Point>& vertices,
                         const HessianOracle& oracle, int probes) {
  return 0.5 * size_gs(vertices) * probe_max_hessian(vertices, oracle, probes);
}

}  // namespace eds
