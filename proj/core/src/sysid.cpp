#include "eds/sysid.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "eds/datagen.hpp"
#include "eds/errors.hpp"

namespace eds {

namespace {

void enumerate_degree(int dim, int remaining, std::vector<int>& current,
                      std::vector<std::vector<int>>& out) {
  if (static_cast<int>(current.size()) == dim - 1) {
    current.push_back(remaining);
    out.push_back(current);
    current.pop_back();
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    current.push_back(e);
    enumerate_degree(dim, remaining - e, current, out);
    current.pop_back();
  }
}

double int_pow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

}  // namespace

PolyLibrary PolyLibrary::create(int dim, int degree) {
  PolyLibrary lib;
  lib.dim = dim;
  lib.degree = degree;
  for (int g = 0; g <= degree; ++g) {
    std::vector<int> current;
    enumerate_degree(dim, g, current, lib.exponents);
  }
  return lib;
}

Eigen::VectorXd PolyLibrary::featurize(const Point& x) const {
  if (static_cast<int>(x.size()) != dim)
    throw DimensionMismatch("featurize input dimension does not match the library");
  Eigen::VectorXd out(size());
  for (Eigen::Index t = 0; t < size(); ++t) {
    double v = 1.0;
    const auto& e = exponents[static_cast<std::size_t>(t)];
    for (int i = 0; i < dim; ++i) v *= int_pow(x[i], e[static_cast<std::size_t>(i)]);
    out[t] = v;
  }
  return out;
}

Eigen::MatrixXd PolyLibrary::featurize_rows(const Eigen::MatrixXd& states) const {
  Eigen::MatrixXd out(states.rows(), size());
  for (Eigen::Index r = 0; r < states.rows(); ++r)
    out.row(r) = featurize(states.row(r).transpose()).transpose();
  return out;
}

std::string PolyLibrary::term_name(Eigen::Index term) const {
  const auto& e = exponents[static_cast<std::size_t>(term)];
  std::string s;
  for (int i = 0; i < dim; ++i) {
    const int p = e[static_cast<std::size_t>(i)];
    if (p == 0) continue;
    if (!s.empty()) s += "*";
    s += "x" + std::to_string(i);
    if (p > 1) s += "^" + std::to_string(p);
  }
  return s.empty() ? "1" : s;
}

Eigen::VectorXd SparseModel::predict(const Point& x) const {
  return coefficients.transpose() * library.featurize(x);
}

Eigen::MatrixXd SparseModel::predict_rows(const Eigen::MatrixXd& states) const {
  return library.featurize_rows(states) * coefficients;
}

SparseModel lasso_fit(const Eigen::MatrixXd& features,
                      const Eigen::MatrixXd& targets, const PolyLibrary& library,
                      double alpha, double tol, long max_iter) {
  const Eigen::Index n = features.rows();
  const Eigen::Index p = features.cols();
  const Eigen::Index m = targets.cols();
  SparseModel model;
  model.library = library;
  model.alpha = alpha;
  model.coefficients = Eigen::MatrixXd::Zero(p, m);
  model.converged = true;

  const Eigen::VectorXd col_sq =
      (features.colwise().squaredNorm() / static_cast<double>(n)).transpose();

  for (Eigen::Index out = 0; out < m; ++out) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd resid = targets.col(out);
    long sweeps = 0;
    bool ok = false;
    while (sweeps < max_iter) {
      ++sweeps;
      double max_update = 0.0;
      for (Eigen::Index j = 0; j < p; ++j) {
        if (col_sq[j] <= 0.0) continue;
        const double old = w[j];
        const double rho =
            features.col(j).dot(resid) / static_cast<double>(n) + col_sq[j] * old;
        const double soft = std::abs(rho) > alpha
                                ? (rho > 0 ? rho - alpha : rho + alpha)
                                : 0.0;
        const double next = soft / col_sq[j];
        if (next != old) {
          resid -= (next - old) * features.col(j);
          w[j] = next;
          max_update = std::max(max_update, std::abs(next - old));
        }
      }
      model.objective_trace.push_back(
          resid.squaredNorm() / (2.0 * static_cast<double>(n)) +
          alpha * w.lpNorm<1>());
      if (max_update < tol) {
        ok = true;
        break;
      }
    }
    model.coefficients.col(out) = w;
    model.iterations = std::max(model.iterations, sweeps);
    model.converged = model.converged && ok;
  }
  return model;
}

SparseModel fit_dynamics(const Eigen::MatrixXd& states,
                         const Eigen::MatrixXd& derivatives, int degree,
                         double alpha, double tol, long max_iter) {
  const PolyLibrary lib = PolyLibrary::create(static_cast<int>(states.cols()), degree);
  return lasso_fit(lib.featurize_rows(states), derivatives, lib, alpha, tol,
                   max_iter);
}

EvalMetrics evaluate(const SparseModel& model, const Eigen::MatrixXd& states,
                     const Eigen::MatrixXd& derivatives) {
  const Eigen::MatrixXd resid = model.predict_rows(states) - derivatives;
  EvalMetrics m;
  m.rmse = std::sqrt(resid.squaredNorm() /
                     static_cast<double>(resid.rows() * resid.cols()));
  for (Eigen::Index r = 0; r < resid.rows(); ++r)
    m.max_error = std::max(m.max_error, resid.row(r).cwiseAbs().maxCoeff());
  return m;
}

Eigen::MatrixXd rollout(const SparseModel& model, const Eigen::VectorXd& x0,
                        double dt, int steps) {
  Eigen::MatrixXd traj(steps + 1, x0.size());
  traj.row(0) = x0.transpose();
  Eigen::VectorXd s = x0;
  const auto f = [&model](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return model.predict(x);
  };
  for (int k = 0; k < steps; ++k) {
    try {
      s = rk4_step(f, s, dt);
    } catch (const NonFiniteState&) {
      throw NonFiniteState("rollout diverged", k);
    }
    traj.row(k + 1) = s.transpose();
  }
  return traj;
}

Eigen::MatrixXd raw_coefficients(const SparseModel& model, const Standardization& s) {
  const PolyLibrary& lib = model.library;
  const Eigen::Index m = model.coefficients.cols();
  // Position of each multi-index in the library, for writing results back.
  std::map<std::vector<int>, Eigen::Index> term_index;
  for (Eigen::Index t = 0; t < lib.size(); ++t)
    term_index[lib.exponents[static_cast<std::size_t>(t)]] = t;

  Eigen::MatrixXd raw = Eigen::MatrixXd::Zero(lib.size(), m);
  const std::vector<int> const_term(static_cast<std::size_t>(lib.dim), 0);

  for (Eigen::Index out = 0; out < m; ++out) {
    // y = mu_l + sigma_l * sum_t c_t * prod_i ((x_i - mu_i)/sigma_i)^e_i
    std::map<std::vector<int>, double> acc;
    acc[const_term] = s.label_mean[out];
    for (Eigen::Index t = 0; t < lib.size(); ++t) {
      const double c = model.coefficients(t, out);
      if (c == 0.0) continue;
      std::map<std::vector<int>, double> poly;
      poly[const_term] = s.label_std[out] * c;
      const auto& e = lib.exponents[static_cast<std::size_t>(t)];
      for (int i = 0; i < lib.dim; ++i) {
        for (int rep = 0; rep < e[static_cast<std::size_t>(i)]; ++rep) {
          // multiply by (x_i - mu_i)/sigma_i
          std::map<std::vector<int>, double> next;
          for (const auto& [mono, coef] : poly) {
            std::vector<int> up = mono;
            ++up[static_cast<std::size_t>(i)];
            next[up] += coef / s.feature_std[i];
            next[mono] += coef * (-s.feature_mean[i] / s.feature_std[i]);
          }
          poly.swap(next);
        }
      }
      for (const auto& [mono, coef] : poly) acc[mono] += coef;
    }
    for (const auto& [mono, coef] : acc) {
      raw(term_index.at(mono), out) += coef;
    }
  }
  return raw;
}

}  // namespace eds
