#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "eds/geometry.hpp"
#include "eds/lim.hpp"

namespace eds {

/// Complexity-to-density ratio of one region: local complexity (max Hessian
/// norm g_c) times squared diameter (g_s), divided by occupancy.
struct RegionCdr {
  int simplex_id = -1;
  double rho = 0.0;
  double gc = std::numeric_limits<double>::quiet_NaN();  // NaN when not derived analytically
  double gs = std::numeric_limits<double>::quiet_NaN();
  long count = 0;
};

/// Normal model of ln(rho) across regions, fit by MLE with the unbiased
/// (k-1) variance divisor.
struct LogCdrStats {
  double mu_hat = 0.0;
  double sigma_sq_hat = 0.0;
  std::size_t k = 0;         // regions entering the fit
  double z = 2.0;            // confidence multiplier for classification
  std::size_t excluded = 0;  // regions dropped for rho <= 1e-300
};

enum class CdrClass { HighCdr, MediumCdr, LowCdr };

/// rho = g_c * g_s / occupancy, with g_c estimated by probing the oracle at
/// the vertices plus `probes` fixed-seed interior samples.
RegionCdr cdr_analytic(const std::vector<Point>& vertices, long occupancy,
                       const HessianOracle& oracle, int probes = 32,
                       int simplex_id = -1);

/// Error-based proxy: rho = 2 * max(e) / (n+1), inverted from the
/// interpolation error bound (1/2) * g_s * g_c with occupancy n+1.
/// Throws NoInteriorSamples on an empty error list.
RegionCdr cdr_empirical(const std::vector<double>& interior_errors,
                        int dimension, int simplex_id = -1);

/// MLE fit of ln(rho). Non-positive rhos (<= 1e-300) are excluded and
/// counted; throws InsufficientRegions when fewer than two remain.
LogCdrStats log_cdr_stats(const std::vector<double>& rhos, double z = 2.0);

/// High when ln(rho) > mu + z*sigma, Low when ln(rho) < mu - z*sigma,
/// Medium otherwise (boundaries inclusive into Medium).
CdrClass classify(double rho, const LogCdrStats& stats);

/// mu_hat + z * sigma_hat: the global imbalance score of a tessellation.
double imbalance_score(const LogCdrStats& stats);

/// Log-domain equivalent of an error threshold psi for comparing against
/// imbalance_score: ln(2*psi/(n+1)), from the same bound inversion as
/// cdr_empirical.
double log_domain_threshold(double psi, int n);

/// Expected per-refinement-round error decay factor (n+1)^(-2/n) in
/// dimension n.
double convergence_factor(int n);

/// psi0 * convergence_factor(n)^k after k refinement rounds.
double predicted_error_decay(double psi0, int n, int k);

/// Analytic CDR for every real cell of a triangulation (occupancy n+1 per
/// Delaunay cell).
std::vector<RegionCdr> triangulation_cdrs(const Triangulation& t,
                                          const HessianOracle& oracle,
                                          int probes = 32);

}  // namespace eds
