#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "eds/dataset.hpp"
#include "eds/geometry.hpp"

namespace eds {

/// f(x1,x2) = 1 / (0.33 + x1^2 + x2^2): a sharp radial peak that makes
/// uniform sampling badly imbalanced near the origin.
double motivation_value(double x1, double x2);

/// Analytic Hessian of the peak function (one output): raw-coordinate 2x2
/// matrix per output.
std::vector<Eigen::MatrixXd> motivation_hessian(const Point& x);

/// n_samples uniform draws on [-3,3]^2 with the peak-function label.
Dataset gen_motivation(Eigen::Index n_samples, std::uint64_t seed);

/// Same features, label with additive Gaussian noise of the given sigma.
/// Exercises the noisy-duplicate and residual-violation paths.
Dataset gen_motivation_noisy(Eigen::Index n_samples, std::uint64_t seed,
                             double noise_sigma);

struct LorenzParams {
  double sigma = 10.0;
  double rho = 28.0;
  double beta = 8.0 / 3.0;
  double dt = 0.02;
  double horizon = 20.0;  // per-trajectory integration time
  int n_inits = 30;
  double init_lo = -10.0;
  double init_hi = 10.0;
};

Eigen::Vector3d lorenz_rhs(const LorenzParams& p, const Eigen::Vector3d& state);

/// The three constant per-output Hessians of the Lorenz right-hand side
/// (every output is quadratic in the state).
std::vector<Eigen::MatrixXd> lorenz_hessian(const LorenzParams& p);

/// Trajectories from uniform random initial states, features = states along
/// the RK4 path, labels = the analytic right-hand side at each state.
/// Throws NonFiniteState if the integration diverges.
Dataset gen_lorenz(const LorenzParams& p, std::uint64_t seed);

/// Classical fourth-order Runge-Kutta update. Throws NonFiniteState when
/// the result is not finite.
Eigen::VectorXd rk4_step(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                         const Eigen::VectorXd& state, double dt);

/// Polar second moment of a filled integer rectangle [x1..x2]x[y1..y2]
/// (endpoints inclusive): sum of (i^2 + j^2) over the lit pixels, divided
/// by 1e8. With recenter, i and j are taken relative to the rectangle
/// centroid before squaring.
double rectangle_label(int x1, int y1, int x2, int y2, bool recenter = false);

/// Random axis-aligned rectangles with integer corners,
/// 0 <= x1 < x2 <= image_size (same for y); features (x1,y1,x2,y2), label
/// from rectangle_label.
Dataset gen_rectangles(Eigen::Index n_samples, int image_size, std::uint64_t seed,
                       bool recenter = false);

}  // namespace eds
