#include "eds/datagen.hpp"

#include <cmath>
#include <string>

#include "eds/errors.hpp"
#include "eds/rng.hpp"

namespace eds {

double motivation_value(double x1, double x2) {
  return 1.0 / (0.33 + x1 * x1 + x2 * x2);
}

std::vector<Eigen::MatrixXd> motivation_hessian(const Point& x) {
  // f = u^-1 with u = 0.33 + |x|^2:  H_ij = -2 d_ij u^-2 + 8 x_i x_j u^-3
  const double u = 0.33 + x.squaredNorm();
  Eigen::MatrixXd h = 8.0 * x * x.transpose() / (u * u * u);
  h.diagonal().array() -= 2.0 / (u * u);
  return {h};
}

namespace {

Dataset motivation_base(Eigen::Index n_samples, std::uint64_t seed) {
  Dataset d;
  d.features.resize(n_samples, 2);
  d.labels.resize(n_samples, 1);
  d.feature_names = {"x0", "x1"};
  d.label_names = {"y0"};
  Rng rng(seed);
  for (Eigen::Index i = 0; i < n_samples; ++i) {
    const double x1 = rng.uniform(-3.0, 3.0);
    const double x2 = rng.uniform(-3.0, 3.0);
    d.features(i, 0) = x1;
    d.features(i, 1) = x2;
    d.labels(i, 0) = motivation_value(x1, x2);
  }
  return d;
}

}  // namespace

Dataset gen_motivation(Eigen::Index n_samples, std::uint64_t seed) {
  return motivation_base(n_samples, seed);
}

Dataset gen_motivation_noisy(Eigen::Index n_samples, std::uint64_t seed,
                             double noise_sigma) {
  Dataset d = motivation_base(n_samples, seed);
  Rng rng(seed ^ 0x6e6f697379ULL);  // independent stream for the noise
  for (Eigen::Index i = 0; i < n_samples; ++i)
    d.labels(i, 0) += noise_sigma * rng.normal();
  return d;
}

Eigen::Vector3d lorenz_rhs(const LorenzParams& p, const Eigen::Vector3d& s) {
  return {p.sigma * (s[1] - s[0]),
          s[0] * (p.rho - s[2]) - s[1],
          s[0] * s[1] - p.beta * s[2]};
}

std::vector<Eigen::MatrixXd> lorenz_hessian(const LorenzParams&) {
  Eigen::MatrixXd h1 = Eigen::MatrixXd::Zero(3, 3);
  Eigen::MatrixXd h2 = Eigen::MatrixXd::Zero(3, 3);
  h2(0, 2) = h2(2, 0) = -1.0;
  Eigen::MatrixXd h3 = Eigen::MatrixXd::Zero(3, 3);
  h3(0, 1) = h3(1, 0) = 1.0;
  return {h1, h2, h3};
}

Eigen::VectorXd rk4_step(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                         const Eigen::VectorXd& state, double dt) {
  const Eigen::VectorXd k1 = f(state);
  const Eigen::VectorXd k2 = f(state + 0.5 * dt * k1);
  const Eigen::VectorXd k3 = f(state + 0.5 * dt * k2);
  const Eigen::VectorXd k4 = f(state + dt * k3);
  Eigen::VectorXd next = state + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!next.allFinite()) throw NonFiniteState("integration step produced non-finite state");
  return next;
}

Dataset gen_lorenz(const LorenzParams& p, std::uint64_t seed) {
  const auto steps = static_cast<Eigen::Index>(std::llround(p.horizon / p.dt));
  Dataset d;
  d.features.resize(p.n_inits * steps, 3);
  d.labels.resize(p.n_inits * steps, 3);
  d.feature_names = {"x0", "x1", "x2"};
  d.label_names = {"y0", "y1", "y2"};
  Rng rng(seed);
  const auto f = [&p](const Eigen::VectorXd& s) -> Eigen::VectorXd {
    return lorenz_rhs(p, s);
  };
  Eigen::Index row = 0;
  for (int traj = 0; traj < p.n_inits; ++traj) {
    Eigen::VectorXd s(3);
    for (int i = 0; i < 3; ++i) s[i] = rng.uniform(p.init_lo, p.init_hi);
    for (Eigen::Index k = 0; k < steps; ++k, ++row) {
      d.features.row(row) = s.transpose();
      d.labels.row(row) = lorenz_rhs(p, s).transpose();
      try {
        s = rk4_step(f, s, p.dt);
      } catch (const NonFiniteState&) {
        throw NonFiniteState("trajectory " + std::to_string(traj) +
                                 " diverged",
                             static_cast<long>(k));
      }
    }
  }
  return d;
}

double rectangle_label(int x1, int y1, int x2, int y2, bool recenter) {
  // Closed forms over the inclusive index ranges; a brute-force double loop
  // exists in the tests as the independent check.
  const auto count = [](int a, int b) { return static_cast<double>(b - a + 1); };
  const auto sum1 = [](int a, int b) {
    const double fa = a, fb = b;
    return (fa + fb) * (fb - fa + 1.0) / 2.0;
  };
  const auto sum2 = [](int a, int b) {
    const auto cube = [](double m) { return m * (m + 1.0) * (2.0 * m + 1.0) / 6.0; };
    return cube(b) - cube(a - 1.0);
  };
  const double nx = count(x1, x2), ny = count(y1, y2);
  double j = 0.0;
  if (!recenter) {
    j = ny * sum2(x1, x2) + nx * sum2(y1, y2);
  } else {
    const double cx = 0.5 * (x1 + x2), cy = 0.5 * (y1 + y2);
    const double sx = sum2(x1, x2) - 2.0 * cx * sum1(x1, x2) + nx * cx * cx;
    const double sy = sum2(y1, y2) - 2.0 * cy * sum1(y1, y2) + ny * cy * cy;
    j = ny * sx + nx * sy;
  }
  return j / 1e8;
}

Dataset gen_rectangles(Eigen::Index n_samples, int image_size, std::uint64_t seed,
                       bool recenter) {
  Dataset d;
  d.features.resize(n_samples, 4);
  d.labels.resize(n_samples, 1);
  d.feature_names = {"x0", "x1", "x2", "x3"};
  d.label_names = {"y0"};
  Rng rng(seed);
  for (Eigen::Index i = 0; i < n_samples; ++i) {
    const int x1 = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(image_size)));
    const int y1 = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(image_size)));
    const int x2 = x1 + 1 + static_cast<int>(rng.uniform_index(
                                static_cast<std::uint64_t>(image_size - x1)));
    const int y2 = y1 + 1 + static_cast<int>(rng.uniform_index(
                                static_cast<std::uint64_t>(image_size - y1)));
    d.features(i, 0) = x1;
    d.features(i, 1) = y1;
    d.features(i, 2) = x2;
    d.features(i, 3) = y2;
    d.labels(i, 0) = rectangle_label(x1, y1, x2, y2, recenter);
  }
  return d;
}

}  // namespace eds
