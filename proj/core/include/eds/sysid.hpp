#pragma once

#include <string>
#include <vector>

#include "eds/dataset.hpp"
#include "eds/geometry.hpp"

namespace eds {

/// Polynomial feature library in a fixed canonical order: terms grouped by
/// ascending total degree, lexicographically descending exponents within a
/// degree (1, x, y, z, x^2, xy, xz, y^2, yz, z^2 for n=3, d=2).
struct PolyLibrary {
  int dim = 0;
  int degree = 0;
  std::vector<std::vector<int>> exponents;  // one multi-index per term

  static PolyLibrary create(int dim, int degree = 2);

  Eigen::Index size() const { return static_cast<Eigen::Index>(exponents.size()); }

  /// Monomial values at x, in canonical order.
  Eigen::VectorXd featurize(const Point& x) const;

  /// One featurized row per input row.
  Eigen::MatrixXd featurize_rows(const Eigen::MatrixXd& states) const;

  /// Human-readable term, e.g. "1", "x0", "x0*x2^2".
  std::string term_name(Eigen::Index term) const;
};

/// Sparse polynomial dynamics model: one coefficient column per output.
struct SparseModel {
  PolyLibrary library;
  Eigen::MatrixXd coefficients;  // terms x outputs
  double alpha = 0.0;
  long iterations = 0;        // coordinate-descent sweeps of the slowest output
  bool converged = false;
  std::vector<double> objective_trace;  // per-sweep lasso objective, concatenated by output

  Eigen::VectorXd predict(const Point& x) const;
  Eigen::MatrixXd predict_rows(const Eigen::MatrixXd& states) const;
};

/// Cyclic coordinate descent for min (1/(2N))||y - F w||^2 + alpha*||w||_1
/// per target column, with soft-thresholding. The constant library column
/// is penalized like any other (no separate intercept). Convergence:
/// max coefficient update < tol within max_iter sweeps; non-convergence is
/// reported in the model metadata, not thrown.
SparseModel lasso_fit(const Eigen::MatrixXd& features,
                      const Eigen::MatrixXd& targets, const PolyLibrary& library,
                      double alpha = 0.01, double tol = 1e-6,
                      long max_iter = 10000);

/// Convenience: featurize raw states with the library, then fit.
SparseModel fit_dynamics(const Eigen::MatrixXd& states,
                         const Eigen::MatrixXd& derivatives, int degree = 2,
                         double alpha = 0.01, double tol = 1e-6,
                         long max_iter = 10000);

struct EvalMetrics {
  double rmse = 0.0;       // sqrt(mean over samples of mean-over-outputs squared residual)
  double max_error = 0.0;  // max over samples of the residual infinity norm
};

EvalMetrics evaluate(const SparseModel& model, const Eigen::MatrixXd& states,
                     const Eigen::MatrixXd& derivatives);

/// RK4 integration of the identified dynamics; row k is the state after k
/// steps (row 0 = x0). Throws NonFiniteState with the step index on
/// divergence.
Eigen::MatrixXd rollout(const SparseModel& model, const Eigen::VectorXd& x0,
                        double dt, int steps);

/// Coefficients re-expressed for raw (de-standardized) inputs and outputs,
/// by expanding each standardized monomial; same library order. Valid for
/// any library degree.
Eigen::MatrixXd raw_coefficients(const SparseModel& model, const Standardization& s);

}  // namespace eds
