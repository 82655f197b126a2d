#include "eds/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "eds/errors.hpp"

namespace eds {

namespace {
constexpr double kRhoFloor = 1e-300;  // below this, ln(rho) is meaningless
}

RegionCdr cdr_analytic(const std::vector<Point>& vertices, long occupancy,
                       const HessianOracle& oracle, int probes, int simplex_id) {
  RegionCdr r;
  r.simplex_id = simplex_id;
  r.gc = probe_max_hessian(vertices, oracle, probes);
  r.gs = size_gs(vertices);
  r.count = occupancy;
  r.rho = r.gc * r.gs / static_cast<double>(occupancy);
  return r;
}

RegionCdr cdr_empirical(const std::vector<double>& interior_errors,
                        int dimension, int simplex_id) {
  if (interior_errors.empty())
    throw NoInteriorSamples("empirical CDR needs at least one interior error");
  RegionCdr r;
  r.simplex_id = simplex_id;
  r.count = dimension + 1;
  const double emax = *std::max_element(interior_errors.begin(), interior_errors.end());
  r.rho = 2.0 * emax / static_cast<double>(dimension + 1);
  return r;
}

LogCdrStats log_cdr_stats(const std::vector<double>& rhos, double z) {
  LogCdrStats s;
  s.z = z;
  std::vector<double> logs;
  logs.reserve(rhos.size());
  for (double r : rhos) {
    if (r <= kRhoFloor) {
      ++s.excluded;
    } else {
      logs.push_back(std::log(r));
    }
  }
  s.k = logs.size();
  if (s.k < 2)
    throw InsufficientRegions("log-CDR fit needs at least two positive-CDR regions");
  double sum = 0.0;
  for (double l : logs) sum += l;
  s.mu_hat = sum / static_cast<double>(s.k);
  double ss = 0.0;
  for (double l : logs) ss += (l - s.mu_hat) * (l - s.mu_hat);
  s.sigma_sq_hat = ss / static_cast<double>(s.k - 1);
  return s;
}

CdrClass classify(double rho, const LogCdrStats& stats) {
  const double l = std::log(rho);
  const double sigma = std::sqrt(stats.sigma_sq_hat);
  if (l > stats.mu_hat + stats.z * sigma) return CdrClass::HighCdr;
  if (l < stats.mu_hat - stats.z * sigma) return CdrClass::LowCdr;
  return CdrClass::MediumCdr;
}

double imbalance_score(const LogCdrStats& stats) {
  return stats.mu_hat + stats.z * std::sqrt(stats.sigma_sq_hat);
}

double log_domain_threshold(double psi, int n) {
  return std::log(2.0 * psi / static_cast<double>(n + 1));
}

double convergence_factor(int n) {
  return std::pow(static_cast<double>(n + 1), -2.0 / static_cast<double>(n));
}

double predicted_error_decay(double psi0, int n, int k) {
  return psi0 * std::pow(convergence_factor(n), static_cast<double>(k));
}

std::vector<RegionCdr> triangulation_cdrs(const Triangulation& t,
                                          const HessianOracle& oracle,
                                          int probes) {
  std::vector<RegionCdr> out;
  for (int id : t.real_simplex_ids()) {
    out.push_back(cdr_analytic(t.simplex_points(id), t.dimension() + 1, oracle,
                               probes, id));
  }
  return out;
}

}  // namespace eds
