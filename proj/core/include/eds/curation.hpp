#pragma once

#include <cstdint>
#include <vector>

#include "eds/dataset.hpp"
#include "eds/metrics.hpp"

namespace eds {

/// How points whose interpolation error exceeds psi are routed.
///
/// The published pseudocode of the algorithm sends high-error points to the
/// auxiliary set, while its companion flowchart (and the convergence
/// argument) sends them to the representative set. HighErrorToRepresentative
/// follows the flowchart and actually refines the model;
/// PseudocodeLiteral reproduces the pseudocode as printed, for comparison.
enum class Routing { HighErrorToRepresentative, PseudocodeLiteral };

struct EdsConfig {
  double psi = 0.05;      // error threshold, standardized label units; > 0
  int batch_size = 100;   // progress granularity only; results are order-exact
  double z = 2.0;         // confidence multiplier for reported CDR stats
  std::uint64_t seed = 0; // drives the initial n+1 vertex draw
  int max_passes = 5;     // total passes including the streaming pass
  Routing routing = Routing::HighErrorToRepresentative;
};

struct PassStats {
  long insertions = 0;       // error-driven promotions into the representative set
  long aux_assignments = 0;  // points assigned to (or retained in) the auxiliary set
  long hull_insertions = 0;  // points inserted because they fell outside the hull
  double max_residual_error = 0.0;  // largest error left in the auxiliary set
};

struct EdsResult {
  std::vector<Eigen::Index> representative_ids;  // in insertion order
  std::vector<Eigen::Index> auxiliary_ids;
  std::vector<PassStats> per_pass;
  long violations = 0;  // auxiliary points exceeding psi against the final model
  EdsConfig config;
};

/// Streaming curation: seeds a triangulation from n+1 random rows, then
/// routes every remaining row by its interpolation error. Points outside
/// the hull are always inserted. Under the default routing, verification
/// passes re-check the auxiliary set against the refined model and promote
/// stale violators until clean or max_passes is reached.
/// Duplicate-coordinate rows can never be inserted; they stay auxiliary and
/// count as violations when their error exceeds psi.
/// Throws DatasetTooSmall (fewer than n+2 rows) or NonFiniteData.
EdsResult run_eds(const Dataset& d, const EdsConfig& config);

struct RepresentativenessReport {
  double max_error = 0.0;     // over evaluated points with a defined prediction
  long violation_count = 0;   // evaluated errors exceeding psi
  long outside_count = 0;     // evaluated points outside the subset's hull
  bool stats_valid = false;   // false when fewer than 2 regions had samples
  LogCdrStats stats;          // empirical log-CDR of the subset's tessellation
  double imbalance = 0.0;     // mu_hat + z*sigma_hat, when stats_valid
  double log_threshold = 0.0; // ln(2*psi/(n+1)) for comparison against imbalance
};

/// Rebuilds the interpolation model from the representative rows (in their
/// recorded order) and evaluates every auxiliary row against it.
RepresentativenessReport verify_representativeness(const Dataset& d,
                                                   const EdsResult& result);

/// Same assessment for an arbitrary row subset: model from `subset_rows`,
/// errors from all remaining rows. When the leading n+1 subset rows are
/// affinely dependent the subset order is rotated until a valid seed is
/// found (tried at most subset-size times).
RepresentativenessReport assess_subset(const Dataset& d,
                                       const std::vector<Eigen::Index>& subset_rows,
                                       double psi, double z = 2.0);

/// Uniform random row subset ("minor dataset") for baseline comparisons;
/// deterministic under seed. Throws SizeTooLarge.
std::vector<Eigen::Index> random_minor_subset(const Dataset& d, Eigen::Index size,
                                              std::uint64_t seed);

}  // namespace eds
