// Command-line surface for the curation toolkit: dataset generation,
// curation, imbalance metrics, sparse system identification, and report
// consolidation. Every artifact embeds its exact configuration; reruns with
// the same flags reproduce files byte-identically.

#include <CLI11.hpp>
#include <json.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "eds/curation.hpp"
#include "eds/datagen.hpp"
#include "eds/errors.hpp"
#include "eds/io.hpp"
#include "eds/lim.hpp"
#include "eds/metrics.hpp"
#include "eds/sysid.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_text(const std::string& path, const std::string& content) {
  if (const fs::path parent = fs::path(path).parent_path(); !parent.empty())
    fs::create_directories(parent);
  std::ofstream out(path);
  if (!out) throw eds::IoError("cannot open " + path + " for writing");
  out << content;
  if (!out) throw eds::IoError("failed while writing " + path);
}

void write_json_file(const std::string& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw eds::IoError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw eds::ParseError(path + ": " + e.what());
  }
}

json standardization_json(const eds::Standardization& s) {
  const auto vec = [](const Eigen::VectorXd& v) {
    std::vector<double> out(v.data(), v.data() + v.size());
    return out;
  };
  return {{"feature_mean", vec(s.feature_mean)},
          {"feature_std", vec(s.feature_std)},
          {"label_mean", vec(s.label_mean)},
          {"label_std", vec(s.label_std)}};
}

eds::Standardization standardization_from_json(const json& j) {
  const auto vec = [](const json& a) {
    Eigen::VectorXd v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<Eigen::Index>(i)] = a[i].get<double>();
    return v;
  };
  eds::Standardization s;
  s.feature_mean = vec(j.at("feature_mean"));
  s.feature_std = vec(j.at("feature_std"));
  s.label_mean = vec(j.at("label_mean"));
  s.label_std = vec(j.at("label_std"));
  return s;
}

json stats_json(const eds::LogCdrStats& s) {
  return {{"mu_hat", s.mu_hat},
          {"sigma_sq_hat", s.sigma_sq_hat},
          {"sigma_hat", std::sqrt(s.sigma_sq_hat)},
          {"k", s.k},
          {"z", s.z},
          {"excluded_regions", s.excluded}};
}

json report_json(const eds::RepresentativenessReport& r) {
  json j{{"max_error", r.max_error},
         {"violation_count", r.violation_count},
         {"outside_count", r.outside_count},
         {"stats_valid", r.stats_valid},
         {"log_domain_threshold", r.log_threshold}};
  if (r.stats_valid) {
    j["log_cdr"] = stats_json(r.stats);
    j["imbalance_score"] = r.imbalance;
    j["meets_log_domain_threshold"] = r.imbalance <= r.log_threshold;
  }
  return j;
}

const char* class_name(eds::CdrClass c) {
  switch (c) {
    case eds::CdrClass::HighCdr: return "high";
    case eds::CdrClass::MediumCdr: return "medium";
    default: return "low";
  }
}

std::string routing_name(eds::Routing r) {
  return r == eds::Routing::HighErrorToRepresentative ? "high-error"
                                                      : "pseudocode-literal";
}

eds::Routing routing_from_name(const std::string& s) {
  if (s == "high-error") return eds::Routing::HighErrorToRepresentative;
  if (s == "pseudocode-literal") return eds::Routing::PseudocodeLiteral;
  throw UsageError("unknown routing '" + s +
                   "' (expected high-error or pseudocode-literal)");
}

/// Triangulation over given dataset rows (in order), duplicates dropped.
/// Returns the triangulation and the surviving rows in vertex order.
std::pair<eds::Triangulation, std::vector<Eigen::Index>> build_model_rows(
    const eds::Dataset& d, const std::vector<Eigen::Index>& rows) {
  const auto dim = static_cast<int>(d.feature_dim());
  if (static_cast<int>(rows.size()) < dim + 1)
    throw UsageError("subset has fewer than n+1 rows");
  const eds::Bbox bbox = eds::Bbox::of_rows(d.features);
  std::vector<Eigen::Index> order(rows);
  for (std::size_t rot = 0; rot < order.size(); ++rot) {
    if (rot > 0) std::rotate(order.begin(), order.begin() + 1, order.end());
    std::vector<eds::Point> seeds;
    for (int i = 0; i <= dim; ++i) seeds.push_back(d.feature_row(order[static_cast<std::size_t>(i)]));
    try {
      eds::Triangulation tri(seeds, bbox);
      std::vector<Eigen::Index> kept(order.begin(), order.begin() + dim + 1);
      for (std::size_t i = static_cast<std::size_t>(dim) + 1; i < order.size(); ++i) {
        try {
          tri.insert(d.feature_row(order[i]));
          kept.push_back(order[i]);
        } catch (const eds::DuplicatePoint&) {
        }
      }
      return {std::move(tri), std::move(kept)};
    } catch (const eds::DegenerateSeed&) {
      continue;
    }
  }
  throw eds::DegenerateSeed("no rotation of the rows yields an affinely independent seed");
}

// ---------------------------------------------------------------------------
// gen

struct GenArgs {
  std::string generator;
  std::string out = "data";
  long n = 5000;
  std::uint64_t seed = 0;
  double noise_sigma = 0.05;
  int image_size = 280;
  bool recenter = false;
  bool raw = false;
  int lorenz_inits = 30;
  double lorenz_horizon = 20.0;
  double lorenz_dt = 0.02;
};

int cmd_gen(const GenArgs& a) {
  eds::Dataset d;
  json params{{"seed", a.seed}};
  if (a.generator == "motivation") {
    d = eds::gen_motivation(a.n, a.seed);
    params["n_samples"] = a.n;
  } else if (a.generator == "motivation-noisy") {
    d = eds::gen_motivation_noisy(a.n, a.seed, a.noise_sigma);
    params["n_samples"] = a.n;
    params["noise_sigma"] = a.noise_sigma;
  } else if (a.generator == "lorenz") {
    eds::LorenzParams p;
    p.n_inits = a.lorenz_inits;
    p.horizon = a.lorenz_horizon;
    p.dt = a.lorenz_dt;
    d = eds::gen_lorenz(p, a.seed);
    params["sigma"] = p.sigma;
    params["rho"] = p.rho;
    params["beta"] = p.beta;
    params["dt"] = p.dt;
    params["horizon"] = p.horizon;
    params["n_inits"] = p.n_inits;
    params["init_range"] = {p.init_lo, p.init_hi};
  } else if (a.generator == "rectangles") {
    d = eds::gen_rectangles(a.n, a.image_size, a.seed, a.recenter);
    params["n_samples"] = a.n;
    params["image_size"] = a.image_size;
    params["recenter"] = a.recenter;
  } else {
    throw UsageError("unknown generator '" + a.generator +
                     "' (expected motivation, motivation-noisy, lorenz, rectangles)");
  }

  json meta{{"format_version", 1},
            {"generator", a.generator},
            {"params", params},
            {"rows", d.size()},
            {"feature_dim", d.feature_dim()},
            {"label_dim", d.label_dim()},
            {"standardized", !a.raw}};
  if (a.raw) {
    eds::write_dataset_csv(a.out + ".csv", d);
  } else {
    const auto [std_data, s] = eds::standardize(d);
    eds::write_dataset_csv(a.out + ".csv", std_data);
    meta["standardization"] = standardization_json(s);
  }
  write_json_file(a.out + ".meta.json", meta);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// curate

struct CurateArgs {
  std::string in;
  std::string out_dir = ".";
  double psi = 0.05;
  int batch = 100;
  double z = 2.0;
  std::uint64_t seed = 0;
  int max_passes = 5;
  std::string routing = "high-error";
};

int cmd_curate(const CurateArgs& a) {
  const eds::Dataset d = eds::read_dataset_csv(a.in);
  eds::EdsConfig cfg;
  cfg.psi = a.psi;
  cfg.batch_size = a.batch;
  cfg.z = a.z;
  cfg.seed = a.seed;
  cfg.max_passes = a.max_passes;
  cfg.routing = routing_from_name(a.routing);
  if (!(cfg.psi > 0.0)) throw UsageError("--psi must be positive");

  const eds::EdsResult res = eds::run_eds(d, cfg);
  const eds::RepresentativenessReport rep = eds::verify_representativeness(d, res);

  const json config{{"command", "curate"},
                    {"input", a.in},
                    {"psi", cfg.psi},
                    {"batch_size", cfg.batch_size},
                    {"z", cfg.z},
                    {"seed", cfg.seed},
                    {"max_passes", cfg.max_passes},
                    {"routing", routing_name(cfg.routing)}};

  json per_pass = json::array();
  for (const auto& p : res.per_pass) {
    per_pass.push_back({{"insertions", p.insertions},
                        {"aux_assignments", p.aux_assignments},
                        {"hull_insertions", p.hull_insertions},
                        {"max_residual_error", p.max_residual_error}});
  }
  json result{{"format_version", 1},
              {"config", config},
              {"dataset_rows", d.size()},
              {"representative_ids", res.representative_ids},
              {"auxiliary_ids", res.auxiliary_ids},
              {"representative_count", res.representative_ids.size()},
              {"auxiliary_count", res.auxiliary_ids.size()},
              {"per_pass", per_pass},
              {"passes", res.per_pass.size()},
              {"violations", res.violations}};

  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  write_json_file((dir / "result.json").string(), result);

  std::vector<Eigen::Index> rep_rows(res.representative_ids.begin(),
                                     res.representative_ids.end());
  std::vector<Eigen::Index> aux_rows(res.auxiliary_ids.begin(),
                                     res.auxiliary_ids.end());
  eds::write_dataset_csv((dir / "representative.csv").string(), d.subset(rep_rows));
  eds::write_dataset_csv((dir / "auxiliary.csv").string(), d.subset(aux_rows));

  json verification{{"format_version", 1}, {"config", config}};
  verification["report"] = report_json(rep);
  write_json_file((dir / "verification.json").string(), verification);

  // Per-auxiliary-row error against the final model, for histograms.
  {
    auto [tri, rows] = build_model_rows(d, rep_rows);
    Eigen::MatrixXd labels(static_cast<Eigen::Index>(rows.size()), d.label_dim());
    for (std::size_t i = 0; i < rows.size(); ++i)
      labels.row(static_cast<Eigen::Index>(i)) = d.labels.row(rows[i]);
    std::string csv = "row,error\n";
    for (Eigen::Index idx : aux_rows) {
      const auto pred = eds::predict_at(tri, labels, d.feature_row(idx));
      const double e =
          pred ? (*pred - d.label_row(idx)).norm()
               : std::numeric_limits<double>::quiet_NaN();
      csv += std::to_string(idx) + "," + eds::double_repr(e) + "\n";
    }
    write_text((dir / "errors.csv").string(), csv);
  }

  if (res.violations > 0)
    std::cerr << "warning: " << res.violations
              << " auxiliary points still exceed psi\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// metrics

struct MetricsArgs {
  std::string in;
  std::string subset;  // result.json; empty = whole dataset
  std::string oracle = "empirical";
  std::string meta;  // sidecar with standardization, for analytic oracles
  std::string out = "metrics.json";
  double psi = 0.05;
  double z = 2.0;
  int probes = 32;
};

eds::HessianOracle analytic_oracle_for(const std::string& generator,
                                       const eds::Standardization& s) {
  if (generator == "motivation" || generator == "motivation-noisy")
    return eds::standardized_oracle(eds::motivation_hessian, s);
  if (generator == "lorenz") {
    const eds::LorenzParams p;
    return eds::standardized_oracle(
        [h = eds::lorenz_hessian(p)](const eds::Point&) { return h; }, s);
  }
  throw UsageError("no analytic oracle for generator '" + generator + "'");
}

int cmd_metrics(const MetricsArgs& a) {
  const eds::Dataset d = eds::read_dataset_csv(a.in);
  const auto dim = static_cast<int>(d.feature_dim());

  std::vector<Eigen::Index> subset_rows;
  if (!a.subset.empty()) {
    const json res = read_json_file(a.subset);
    for (const auto& v : res.at("representative_ids"))
      subset_rows.push_back(v.get<Eigen::Index>());
  } else {
    subset_rows.resize(static_cast<std::size_t>(d.size()));
    for (Eigen::Index i = 0; i < d.size(); ++i)
      subset_rows[static_cast<std::size_t>(i)] = i;
  }

  json out{{"format_version", 1},
           {"config",
            {{"command", "metrics"},
             {"input", a.in},
             {"subset", a.subset},
             {"oracle", a.oracle},
             {"psi", a.psi},
             {"z", a.z},
             {"probes", a.probes}}}};

  std::vector<eds::RegionCdr> cdrs;
  if (a.oracle == "empirical") {
    auto [tri, rows] = build_model_rows(d, subset_rows);
    Eigen::MatrixXd labels(static_cast<Eigen::Index>(rows.size()), d.label_dim());
    for (std::size_t i = 0; i < rows.size(); ++i)
      labels.row(static_cast<Eigen::Index>(i)) = d.labels.row(rows[i]);
    std::set<Eigen::Index> in_subset(subset_rows.begin(), subset_rows.end());
    std::map<int, std::vector<double>> cell_errors;
    long outside = 0;
    for (Eigen::Index i = 0; i < d.size(); ++i) {
      if (in_subset.count(i)) continue;
      const auto loc = tri.locate(d.feature_row(i));
      if (!loc) {
        ++outside;
        continue;
      }
      const eds::Simplex& s = tri.simplex(loc->simplex_id);
      Eigen::VectorXd pred = Eigen::VectorXd::Zero(d.label_dim());
      for (std::size_t k = 0; k < s.vertex_ids.size(); ++k)
        pred += loc->weights[static_cast<Eigen::Index>(k)] *
                labels.row(s.vertex_ids[k] - tri.first_real_vertex_id()).transpose();
      cell_errors[loc->simplex_id].push_back((pred - d.label_row(i)).norm());
    }
    for (const auto& [cell, errs] : cell_errors)
      cdrs.push_back(eds::cdr_empirical(errs, dim, cell));
    out["evaluated_outside_hull"] = outside;
    out["regions_with_samples"] = cdrs.size();
    out["regions_total"] = tri.real_simplex_count();
  } else if (a.oracle.rfind("analytic:", 0) == 0) {
    if (a.meta.empty())
      throw UsageError("--meta sidecar is required for analytic oracles");
    const json meta = read_json_file(a.meta);
    if (!meta.value("standardized", false))
      throw UsageError("analytic oracle expects a standardized dataset with a sidecar transform");
    const eds::Standardization s = standardization_from_json(meta.at("standardization"));
    const eds::HessianOracle oracle =
        analytic_oracle_for(a.oracle.substr(9), s);
    auto [tri, rows] = build_model_rows(d, subset_rows);
    cdrs = eds::triangulation_cdrs(tri, oracle, a.probes);
    out["regions_total"] = tri.real_simplex_count();
  } else {
    throw UsageError("unknown oracle '" + a.oracle +
                     "' (expected empirical or analytic:<generator>)");
  }

  std::vector<double> rhos;
  rhos.reserve(cdrs.size());
  for (const auto& c : cdrs) rhos.push_back(c.rho);
  const eds::LogCdrStats stats = eds::log_cdr_stats(rhos, a.z);

  json regions = json::array();
  long high = 0, medium = 0, low = 0;
  for (const auto& c : cdrs) {
    json r{{"simplex_id", c.simplex_id}, {"rho", c.rho}, {"count", c.count}};
    if (std::isfinite(c.gc)) r["gc"] = c.gc;
    if (std::isfinite(c.gs)) r["gs"] = c.gs;
    if (c.rho > 0.0) {
      const eds::CdrClass cls = eds::classify(c.rho, stats);
      r["class"] = class_name(cls);
      (cls == eds::CdrClass::HighCdr ? high
       : cls == eds::CdrClass::MediumCdr ? medium
                                         : low)++;
    } else {
      r["class"] = "excluded";
    }
    regions.push_back(std::move(r));
  }
  out["regions"] = std::move(regions);
  out["log_cdr"] = stats_json(stats);
  out["imbalance_score"] = eds::imbalance_score(stats);
  out["log_domain_threshold"] = eds::log_domain_threshold(a.psi, dim);
  out["class_counts"] = {{"high", high}, {"medium", medium}, {"low", low}};
  write_json_file(a.out, out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// sindy

struct SindyArgs {
  std::string train;
  std::string test;
  std::string meta;  // optional: enables raw-unit coefficients
  std::string out = "sindy.json";
  double alpha = 0.01;
  double tol = 1e-6;
  long max_iter = 10000;
  int degree = 2;
  std::string rollout_x0;  // comma-separated state
  int rollout_steps = 0;
  double rollout_dt = 0.02;
  std::string rollout_out;
};

int cmd_sindy(const SindyArgs& a) {
  const eds::Dataset train = eds::read_dataset_csv(a.train);
  const eds::Dataset test = eds::read_dataset_csv(a.test);
  if (train.feature_dim() != test.feature_dim() ||
      train.label_dim() != test.label_dim())
    throw UsageError("train and test column shapes differ");

  const eds::SparseModel model = eds::fit_dynamics(
      train.features, train.labels, a.degree, a.alpha, a.tol, a.max_iter);
  const eds::EvalMetrics train_m = eds::evaluate(model, train.features, train.labels);
  const eds::EvalMetrics test_m = eds::evaluate(model, test.features, test.labels);

  json terms = json::array();
  for (Eigen::Index t = 0; t < model.library.size(); ++t)
    terms.push_back(model.library.term_name(t));
  json coef = json::array();
  for (Eigen::Index t = 0; t < model.coefficients.rows(); ++t) {
    json row = json::array();
    for (Eigen::Index c = 0; c < model.coefficients.cols(); ++c)
      row.push_back(model.coefficients(t, c));
    coef.push_back(std::move(row));
  }

  json out{{"format_version", 1},
           {"config",
            {{"command", "sindy"},
             {"train", a.train},
             {"test", a.test},
             {"alpha", a.alpha},
             {"tol", a.tol},
             {"max_iter", a.max_iter},
             {"degree", a.degree}}},
           {"library", {{"dim", model.library.dim},
                        {"degree", model.library.degree},
                        {"terms", terms}}},
           {"coefficients", coef},
           {"iterations", model.iterations},
           {"converged", model.converged},
           {"train", {{"rmse", train_m.rmse}, {"max_error", train_m.max_error}}},
           {"test", {{"rmse", test_m.rmse}, {"max_error", test_m.max_error}}}};

  if (!a.meta.empty()) {
    const json meta = read_json_file(a.meta);
    if (meta.value("standardized", false)) {
      const eds::Standardization s =
          standardization_from_json(meta.at("standardization"));
      const Eigen::MatrixXd raw = eds::raw_coefficients(model, s);
      json raw_j = json::array();
      for (Eigen::Index t = 0; t < raw.rows(); ++t) {
        json row = json::array();
        for (Eigen::Index c = 0; c < raw.cols(); ++c) row.push_back(raw(t, c));
        raw_j.push_back(std::move(row));
      }
      out["raw_coefficients"] = std::move(raw_j);
    }
  }

  if (a.rollout_steps > 0) {
    if (a.rollout_x0.empty()) throw UsageError("--rollout-steps needs --rollout-x0");
    std::vector<double> x0v;
    std::stringstream ss(a.rollout_x0);
    std::string cell;
    while (std::getline(ss, cell, ',')) x0v.push_back(std::stod(cell));
    if (static_cast<Eigen::Index>(x0v.size()) != train.feature_dim())
      throw UsageError("--rollout-x0 dimension differs from the state dimension");
    Eigen::VectorXd x0(static_cast<Eigen::Index>(x0v.size()));
    for (std::size_t i = 0; i < x0v.size(); ++i) x0[static_cast<Eigen::Index>(i)] = x0v[i];
    const Eigen::MatrixXd traj =
        eds::rollout(model, x0, a.rollout_dt, a.rollout_steps);
    std::string csv = "step";
    for (Eigen::Index c = 0; c < traj.cols(); ++c)
      csv += ",x" + std::to_string(c);
    csv += "\n";
    for (Eigen::Index r = 0; r < traj.rows(); ++r) {
      csv += std::to_string(r);
      for (Eigen::Index c = 0; c < traj.cols(); ++c)
        csv += "," + eds::double_repr(traj(r, c));
      csv += "\n";
    }
    const std::string rollout_path =
        a.rollout_out.empty() ? "rollout.csv" : a.rollout_out;
    write_text(rollout_path, csv);
    out["rollout"] = {{"x0", x0v},
                      {"dt", a.rollout_dt},
                      {"steps", a.rollout_steps},
                      {"path", rollout_path}};
  }

  write_json_file(a.out, out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// subset

struct SubsetArgs {
  std::string in;
  std::string out = "subset.csv";
  std::string ids_out;
  long size = 0;
  std::uint64_t seed = 0;
};

int cmd_subset(const SubsetArgs& a) {
  const eds::Dataset d = eds::read_dataset_csv(a.in);
  const auto rows = eds::random_minor_subset(d, a.size, a.seed);
  eds::write_dataset_csv(a.out, d.subset(rows));
  if (!a.ids_out.empty()) {
    write_json_file(a.ids_out, json{{"format_version", 1},
                                    {"config",
                                     {{"command", "subset"},
                                      {"input", a.in},
                                      {"size", a.size},
                                      {"seed", a.seed}}},
                                    {"rows", rows}});
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// report

struct ReportArgs {
  std::string run_dir;
  std::string out_dir;
};

int cmd_report(const ReportArgs& a) {
  const fs::path run(a.run_dir);
  const fs::path out_dir = a.out_dir.empty() ? run / "report" : fs::path(a.out_dir);

  const std::vector<std::string> required = {"data.csv", "result.json",
                                             "verification.json", "metrics.json",
                                             "errors.csv"};
  for (const auto& name : required) {
    if (!fs::exists(run / name))
      throw eds::IoError("missing artifact: " + (run / name).string());
  }

  const eds::Dataset d = eds::read_dataset_csv((run / "data.csv").string());
  const json result = read_json_file((run / "result.json").string());
  const json verification = read_json_file((run / "verification.json").string());
  const json metrics = read_json_file((run / "metrics.json").string());

  json report{{"format_version", 1}};
  json dataset_section{{"rows", d.size()},
                       {"feature_dim", d.feature_dim()},
                       {"label_dim", d.label_dim()}};
  if (fs::exists(run / "data.meta.json"))
    dataset_section["meta"] = read_json_file((run / "data.meta.json").string());
  report["dataset"] = dataset_section;
  report["curation"] = result;
  report["metrics"] = metrics;

  // Error section: histogram of the auxiliary errors.
  {
    std::ifstream in(run / "errors.csv");
    std::string line;
    std::getline(in, line);  // header
    std::vector<double> errors;
    while (std::getline(in, line)) {
      const auto comma = line.find(',');
      if (comma == std::string::npos) continue;
      errors.push_back(std::stod(line.substr(comma + 1)));
    }
    double emax = 0.0;
    for (double e : errors)
      if (std::isfinite(e)) emax = std::max(emax, e);
    const int bins = 50;
    std::vector<long> counts(bins, 0);
    const double width = emax > 0 ? emax / bins : 1.0;
    for (double e : errors) {
      if (!std::isfinite(e)) continue;
      int b = static_cast<int>(e / width);
      if (b >= bins) b = bins - 1;
      ++counts[static_cast<std::size_t>(b)];
    }
    std::string csv = "bin_lo,bin_hi,count\n";
    for (int b = 0; b < bins; ++b) {
      csv += eds::double_repr(b * width) + "," + eds::double_repr((b + 1) * width) +
             "," + std::to_string(counts[static_cast<std::size_t>(b)]) + "\n";
    }
    fs::create_directories(out_dir);
    write_text((out_dir / "error_histogram.csv").string(), csv);
    report["errors"] = {{"count", errors.size()},
                        {"max", emax},
                        {"verification", verification.value("report", json())}};
  }

  // Tessellation of the representative rows, as JSON and plot-ready edges.
  std::vector<Eigen::Index> rep_rows;
  for (const auto& v : result.at("representative_ids"))
    rep_rows.push_back(v.get<Eigen::Index>());
  auto [tri, rows] = build_model_rows(d, rep_rows);
  write_text((out_dir / "tessellation.json").string(), eds::triangulation_json(tri));
  {
    std::set<std::pair<int, int>> edges;
    for (int id : tri.real_simplex_ids()) {
      const auto& verts = tri.simplex(id).vertex_ids;
      for (std::size_t i = 0; i < verts.size(); ++i)
        for (std::size_t j = i + 1; j < verts.size(); ++j)
          edges.insert({std::min(verts[i], verts[j]), std::max(verts[i], verts[j])});
    }
    std::string csv;
    for (Eigen::Index c = 0; c < d.feature_dim(); ++c) csv += (c ? ",a" : "a") + std::to_string(c);
    for (Eigen::Index c = 0; c < d.feature_dim(); ++c) csv += ",b" + std::to_string(c);
    csv += "\n";
    for (const auto& [va, vb] : edges) {
      const eds::Point& pa = tri.vertex(va);
      const eds::Point& pb = tri.vertex(vb);
      for (Eigen::Index c = 0; c < pa.size(); ++c)
        csv += (c ? "," : "") + eds::double_repr(pa[c]);
      for (Eigen::Index c = 0; c < pb.size(); ++c) csv += "," + eds::double_repr(pb[c]);
      csv += "\n";
    }
    write_text((out_dir / "tessellation_edges.csv").string(), csv);
  }

  // CDR scatter: per-region centroid + rho + class.
  {
    std::map<int, json> by_id;
    if (metrics.contains("regions")) {
      for (const auto& r : metrics.at("regions")) by_id[r.at("simplex_id").get<int>()] = r;
    }
    std::string csv = "simplex_id";
    for (Eigen::Index c = 0; c < d.feature_dim(); ++c) csv += ",c" + std::to_string(c);
    csv += ",rho,log_rho,class\n";
    for (const auto& [id, r] : by_id) {
      const eds::Simplex& s = tri.simplex(id);
      if (!s.alive || s.is_virtual) continue;
      eds::Point centroid = eds::Point::Zero(d.feature_dim());
      for (int v : s.vertex_ids) centroid += tri.vertex(v);
      centroid /= static_cast<double>(s.vertex_ids.size());
      const double rho = r.at("rho").get<double>();
      csv += std::to_string(id);
      for (Eigen::Index c = 0; c < centroid.size(); ++c)
        csv += "," + eds::double_repr(centroid[c]);
      csv += "," + eds::double_repr(rho) + "," +
             (rho > 0 ? eds::double_repr(std::log(rho)) : "nan") + "," +
             r.value("class", "") + "\n";
    }
    write_text((out_dir / "cdr_scatter.csv").string(), csv);
  }

  if (fs::exists(run / "sindy.json"))
    report["sysid"] = read_json_file((run / "sindy.json").string());
  if (fs::exists(run / "rollout.csv"))
    fs::copy_file(run / "rollout.csv", out_dir / "rollout.csv",
                  fs::copy_options::overwrite_existing);

  write_json_file((out_dir / "report.json").string(), report);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Curation toolkit: triangulation-based representative-subset "
               "selection, imbalance metrics, and sparse system identification"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* cg = app.add_subcommand("gen", "Generate a benchmark dataset (CSV + sidecar JSON)");
  cg->add_option("generator", gen.generator,
                 "motivation | motivation-noisy | lorenz | rectangles")
      ->required();
  cg->add_option("--n", gen.n, "sample count (ignored for lorenz)");
  cg->add_option("--seed", gen.seed, "RNG seed");
  cg->add_option("--out", gen.out, "output stem (<stem>.csv, <stem>.meta.json)");
  cg->add_option("--noise-sigma", gen.noise_sigma, "label noise for motivation-noisy");
  cg->add_option("--image-size", gen.image_size, "rectangle coordinate range");
  cg->add_flag("--recenter", gen.recenter, "rectangle label about the centroid");
  cg->add_flag("--raw", gen.raw, "write raw (unstandardized) values");
  cg->add_option("--lorenz-inits", gen.lorenz_inits, "trajectory count");
  cg->add_option("--lorenz-horizon", gen.lorenz_horizon, "per-trajectory time span");
  cg->add_option("--lorenz-dt", gen.lorenz_dt, "integration step");

  CurateArgs cur;
  auto* cc = app.add_subcommand("curate", "Split a dataset into representative and auxiliary subsets");
  cc->add_option("--in", cur.in, "input CSV (standardized units)")->required();
  cc->add_option("--out-dir", cur.out_dir, "artifact directory");
  cc->add_option("--psi", cur.psi, "error threshold (standardized label units)");
  cc->add_option("--batch", cur.batch, "batch size (progress granularity)");
  cc->add_option("--z", cur.z, "confidence multiplier for CDR stats");
  cc->add_option("--seed", cur.seed, "seed for the initial vertex draw");
  cc->add_option("--max-passes", cur.max_passes, "total passes incl. the streaming pass");
  cc->add_option("--routing", cur.routing, "high-error | pseudocode-literal");

  MetricsArgs met;
  auto* cm = app.add_subcommand("metrics", "Per-region CDR table and log-CDR statistics");
  cm->add_option("--in", met.in, "input CSV")->required();
  cm->add_option("--subset", met.subset, "result.json whose representative rows form the tessellation");
  cm->add_option("--oracle", met.oracle, "empirical | analytic:<generator>");
  cm->add_option("--meta", met.meta, "dataset sidecar (required for analytic oracles)");
  cm->add_option("--out", met.out, "output JSON path");
  cm->add_option("--psi", met.psi, "error threshold for the log-domain comparison");
  cm->add_option("--z", met.z, "confidence multiplier");
  cm->add_option("--probes", met.probes, "interior Hessian probes per region");

  SindyArgs sin;
  auto* cs = app.add_subcommand("sindy", "Fit sparse polynomial dynamics and evaluate");
  cs->add_option("--train", sin.train, "training CSV")->required();
  cs->add_option("--test", sin.test, "test CSV")->required();
  cs->add_option("--meta", sin.meta, "dataset sidecar (enables raw-unit coefficients)");
  cs->add_option("--out", sin.out, "output JSON path");
  cs->add_option("--alpha", sin.alpha, "L1 penalty");
  cs->add_option("--tol", sin.tol, "coordinate-descent tolerance");
  cs->add_option("--max-iter", sin.max_iter, "max coordinate-descent sweeps");
  cs->add_option("--degree", sin.degree, "polynomial library degree");
  cs->add_option("--rollout-x0", sin.rollout_x0, "comma-separated initial state");
  cs->add_option("--rollout-steps", sin.rollout_steps, "RK4 steps to integrate");
  cs->add_option("--rollout-dt", sin.rollout_dt, "RK4 step size");
  cs->add_option("--rollout-out", sin.rollout_out, "rollout CSV path");

  SubsetArgs sub;
  auto* cu = app.add_subcommand("subset", "Extract a uniform random row subset");
  cu->add_option("--in", sub.in, "input CSV")->required();
  cu->add_option("--size", sub.size, "subset row count")->required();
  cu->add_option("--seed", sub.seed, "RNG seed");
  cu->add_option("--out", sub.out, "subset CSV path");
  cu->add_option("--ids-out", sub.ids_out, "optional JSON with the selected row ids");

  ReportArgs rep;
  auto* cr = app.add_subcommand("report", "Consolidate run artifacts into a report + plot CSVs");
  cr->add_option("--run-dir", rep.run_dir, "directory with data.csv, result.json, ...")->required();
  cr->add_option("--out-dir", rep.out_dir, "report directory (default <run-dir>/report)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (cg->parsed()) return cmd_gen(gen);
    if (cc->parsed()) return cmd_curate(cur);
    if (cm->parsed()) return cmd_metrics(met);
    if (cs->parsed()) return cmd_sindy(sin);
    if (cu->parsed()) return cmd_subset(sub);
    if (cr->parsed()) return cmd_report(rep);
  } catch (const eds::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const eds::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const eds::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
