#include "eds/curation.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>

#include "eds/errors.hpp"
#include "eds/rng.hpp"

namespace eds {

namespace {

std::vector<Point> rows_as_points(const Dataset& d,
                                  const std::vector<Eigen::Index>& rows,
                                  std::size_t count) {
  std::vector<Point> pts;
  pts.reserve(count);
  for (std::size_t i = 0; i < count; ++i) pts.push_back(d.feature_row(rows[i]));
  return pts;
}

/// Triangulation plus the dataset rows backing its real vertices, in vertex
/// order. Predictions read labels straight from the dataset.
struct WorkingModel {
  const Dataset& d;
  Triangulation tri;
  std::vector<Eigen::Index> rows;  // rows[k] backs real vertex k

  std::optional<double> error_of(Eigen::Index row) const {
    const Point x = d.feature_row(row);
    const auto loc = tri.locate(x);
    if (!loc) return std::nullopt;
    const Simplex& s = tri.simplex(loc->simplex_id);
    Eigen::VectorXd pred = Eigen::VectorXd::Zero(d.label_dim());
    for (std::size_t i = 0; i < s.vertex_ids.size(); ++i) {
      const auto k = static_cast<std::size_t>(s.vertex_ids[i] - tri.first_real_vertex_id());
      pred += loc->weights[static_cast<Eigen::Index>(i)] *
              d.labels.row(rows[k]).transpose();
    }
    return (pred - d.labels.row(row).transpose()).norm();
  }

  void insert_row(Eigen::Index row) {
    tri.insert(d.feature_row(row));
    rows.push_back(row);
  }
};

}  // namespace

EdsResult run_eds(const Dataset& d, const EdsConfig& config) {
  const Eigen::Index n_rows = d.size();
  const auto dim = static_cast<int>(d.feature_dim());
  if (!(config.psi > 0.0)) throw std::invalid_argument("psi must be positive");
  if (config.batch_size < 1) throw std::invalid_argument("batch size must be at least 1");
  if (config.max_passes < 1) throw std::invalid_argument("max_passes must be at least 1");
  if (n_rows < dim + 2)
    throw DatasetTooSmall("curation needs at least n+2 rows; got " +
                          std::to_string(n_rows));
  if (!d.features.allFinite() || !d.labels.allFinite())
    throw NonFiniteData("dataset contains NaN or infinite entries");

  const Bbox bbox = Bbox::of_rows(d.features);
  Rng rng(config.seed);

  // Seed draw, redrawn while the n+1 rows are affinely dependent.
  std::optional<WorkingModel> model;
  std::vector<Eigen::Index> seed_rows;
  for (int attempt = 0; attempt < 100 && !model; ++attempt) {
    const auto picks = rng.sample_without_replacement(
        static_cast<std::size_t>(n_rows), static_cast<std::size_t>(dim) + 1);
    seed_rows.assign(picks.begin(), picks.end());
    try {
      Triangulation tri(rows_as_points(d, seed_rows, seed_rows.size()), bbox);
      model.emplace(WorkingModel{d, std::move(tri), seed_rows});
    } catch (const DegenerateSeed&) {
    }
  }
  if (!model)
    throw DegenerateSeed("no affinely independent seed found in 100 draws");

  EdsResult res;
  res.config = config;

  std::vector<char> is_seed(static_cast<std::size_t>(n_rows), 0);
  for (Eigen::Index r : seed_rows) is_seed[static_cast<std::size_t>(r)] = 1;
  std::vector<char> blocked(static_cast<std::size_t>(n_rows), 0);
  std::vector<Eigen::Index> aux;

  // Streaming pass over the dataset in row order.
  PassStats first;
  for (Eigen::Index i = 0; i < n_rows; ++i) {
    if (is_seed[static_cast<std::size_t>(i)]) continue;
    const auto e = model->error_of(i);
    if (!e) {  // outside the hull: insert unconditionally
      try {
        model->insert_row(i);
        ++first.hull_insertions;
      } catch (const DuplicatePoint&) {
        blocked[static_cast<std::size_t>(i)] = 1;
        aux.push_back(i);
        ++first.aux_assignments;
      }
      continue;
    }
    if (config.routing == Routing::HighErrorToRepresentative && *e > config.psi) {
      try {
        model->insert_row(i);
        ++first.insertions;
        continue;
      } catch (const DuplicatePoint&) {
        blocked[static_cast<std::size_t>(i)] = 1;
      }
    }
    aux.push_back(i);
    ++first.aux_assignments;
    first.max_residual_error = std::max(first.max_residual_error, *e);
  }
  res.per_pass.push_back(first);

  // Verification passes: promote auxiliary points whose error against the
  // refined model still exceeds psi. The literal routing mode has no such
  // repair step, matching the single-sweep pseudocode.
  if (config.routing == Routing::HighErrorToRepresentative) {
    for (int pass = 2; pass <= config.max_passes; ++pass) {
      PassStats ps;
      bool promoted = false;
      std::vector<Eigen::Index> keep;
      keep.reserve(aux.size());
      for (Eigen::Index idx : aux) {
        const auto e = model->error_of(idx);
        if (!blocked[static_cast<std::size_t>(idx)]) {
          if (!e) {  // unreachable while the hull only grows; kept for safety
            try {
              model->insert_row(idx);
              ++ps.hull_insertions;
              promoted = true;
              continue;
            } catch (const DuplicatePoint&) {
              blocked[static_cast<std::size_t>(idx)] = 1;
            }
          } else if (*e > config.psi) {
            try {
              model->insert_row(idx);
              ++ps.insertions;
              promoted = true;
              continue;
            } catch (const DuplicatePoint&) {
              blocked[static_cast<std::size_t>(idx)] = 1;
            }
          }
        }
        keep.push_back(idx);
        ++ps.aux_assignments;
        if (e) ps.max_residual_error = std::max(ps.max_residual_error, *e);
      }
      aux.swap(keep);
      res.per_pass.push_back(ps);
      if (!promoted) break;
    }
  }

  res.representative_ids = model->rows;
  res.auxiliary_ids = aux;
  for (Eigen::Index idx : aux) {
    const auto e = model->error_of(idx);
    if (!e || *e > config.psi) ++res.violations;
  }
  return res;
}

namespace {

RepresentativenessReport assess_rows(const Dataset& d,
                                     const std::vector<Eigen::Index>& subset_rows,
                                     const std::vector<Eigen::Index>& eval_rows,
                                     double psi, double z) {
  const auto dim = static_cast<int>(d.feature_dim());
  if (static_cast<int>(subset_rows.size()) < dim + 1)
    throw DatasetTooSmall("subset smaller than n+1 cannot form a model");

  const Bbox bbox = Bbox::of_rows(d.features);
  std::optional<WorkingModel> model;
  std::vector<Eigen::Index> order(subset_rows);
  for (std::size_t rot = 0; rot < order.size() && !model; ++rot) {
    if (rot > 0) std::rotate(order.begin(), order.begin() + 1, order.end());
    try {
      Triangulation tri(rows_as_points(d, order, static_cast<std::size_t>(dim) + 1), bbox);
      std::vector<Eigen::Index> rows(order.begin(), order.begin() + dim + 1);
      model.emplace(WorkingModel{d, std::move(tri), std::move(rows)});
    } catch (const DegenerateSeed&) {
      continue;
    }
    for (std::size_t i = static_cast<std::size_t>(dim) + 1; i < order.size(); ++i) {
      try {
        model->insert_row(order[i]);
      } catch (const DuplicatePoint&) {
        // coincident subset rows carry no extra geometry; drop from the model
      }
    }
  }
  if (!model)
    throw DegenerateSeed("no rotation of the subset starts with an affinely independent seed");

  RepresentativenessReport rep;
  rep.log_threshold = log_domain_threshold(psi, dim);
  std::map<int, std::vector<double>> cell_errors;
  for (Eigen::Index idx : eval_rows) {
    const Point x = d.feature_row(idx);
    const auto loc = model->tri.locate(x);
    if (!loc) {
      ++rep.outside_count;
      continue;
    }
    const Simplex& s = model->tri.simplex(loc->simplex_id);
    Eigen::VectorXd pred = Eigen::VectorXd::Zero(d.label_dim());
    for (std::size_t i = 0; i < s.vertex_ids.size(); ++i) {
      const auto k =
          static_cast<std::size_t>(s.vertex_ids[i] - model->tri.first_real_vertex_id());
      pred += loc->weights[static_cast<Eigen::Index>(i)] *
              d.labels.row(model->rows[k]).transpose();
    }
    const double e = (pred - d.labels.row(idx).transpose()).norm();
    rep.max_error = std::max(rep.max_error, e);
    if (e > psi) ++rep.violation_count;
    cell_errors[loc->simplex_id].push_back(e);
  }

  std::vector<double> rhos;
  rhos.reserve(cell_errors.size());
  for (const auto& [cell, errs] : cell_errors)
    rhos.push_back(cdr_empirical(errs, dim, cell).rho);
  try {
    rep.stats = log_cdr_stats(rhos, z);
    rep.stats_valid = true;
    rep.imbalance = imbalance_score(rep.stats);
  } catch (const InsufficientRegions&) {
    rep.stats_valid = false;
  }
  return rep;
}

}  // namespace

RepresentativenessReport verify_representativeness(const Dataset& d,
                                                   const EdsResult& result) {
  return assess_rows(d, result.representative_ids, result.auxiliary_ids,
                     result.config.psi, result.config.z);
}

RepresentativenessReport assess_subset(const Dataset& d,
                                       const std::vector<Eigen::Index>& subset_rows,
                                       double psi, double z) {
  std::vector<char> in_subset(static_cast<std::size_t>(d.size()), 0);
  for (Eigen::Index r : subset_rows) in_subset[static_cast<std::size_t>(r)] = 1;
  std::vector<Eigen::Index> eval_rows;
  for (Eigen::Index i = 0; i < d.size(); ++i)
    if (!in_subset[static_cast<std::size_t>(i)]) eval_rows.push_back(i);
  return assess_rows(d, subset_rows, eval_rows, psi, z);
}

std::vector<Eigen::Index> random_minor_subset(const Dataset& d, Eigen::Index size,
                                              std::uint64_t seed) {
  if (size > d.size())
    throw SizeTooLarge("minor subset of " + std::to_string(size) +
                       " rows requested from " + std::to_string(d.size()));
  Rng rng(seed);
  const auto picks = rng.sample_without_replacement(
      static_cast<std::size_t>(d.size()), static_cast<std::size_t>(size));
  return {picks.begin(), picks.end()};
}

}  // namespace eds
