#include "eds/io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "eds/errors.hpp"

namespace eds {

std::string double_repr(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_dataset_csv(const std::string& path, const Dataset& d) {
  if (const auto parent = std::filesystem::path(path).parent_path(); !parent.empty())
    std::filesystem::create_directories(parent);
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  for (std::size_t i = 0; i < d.feature_names.size(); ++i) {
    if (i) out << ',';
    out << d.feature_names[i];
  }
  for (const auto& name : d.label_names) out << ',' << name;
  out << '\n';
  for (Eigen::Index r = 0; r < d.size(); ++r) {
    for (Eigen::Index c = 0; c < d.features.cols(); ++c) {
      if (c) out << ',';
      out << double_repr(d.features(r, c));
    }
    for (Eigen::Index c = 0; c < d.labels.cols(); ++c)
      out << ',' << double_repr(d.labels(r, c));
    out << '\n';
  }
  if (!out) throw IoError("failed while writing " + path);
}

Dataset read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  Dataset d;
  std::stringstream header(line);
  std::string cell;
  while (std::getline(header, cell, ',')) {
    if (cell.rfind("x", 0) == 0) {
      if (!d.label_names.empty())
        throw ParseError(path + ": feature column after label columns");
      d.feature_names.push_back(cell);
    } else if (cell.rfind("y", 0) == 0) {
      d.label_names.push_back(cell);
    } else {
      throw ParseError(path + ": column '" + cell + "' is neither x* nor y*");
    }
  }
  const auto nf = static_cast<Eigen::Index>(d.feature_names.size());
  const auto nl = static_cast<Eigen::Index>(d.label_names.size());
  if (nf == 0 || nl == 0)
    throw ParseError(path + ": need at least one feature and one label column");

  std::vector<double> values;
  Eigen::Index rows = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    Eigen::Index cols = 0;
    while (std::getline(ss, cell, ',')) {
      double v = 0.0;
      const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc() || res.ptr != cell.data() + cell.size())
        throw ParseError(path + ":" + std::to_string(line_no) +
                         ": bad number '" + cell + "'");
      values.push_back(v);
      ++cols;
    }
    if (cols != nf + nl)
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(nf + nl) + " columns, got " +
                       std::to_string(cols));
    ++rows;
  }
  d.features.resize(rows, nf);
  d.labels.resize(rows, nl);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const std::size_t base = static_cast<std::size_t>(r * (nf + nl));
    for (Eigen::Index c = 0; c < nf; ++c)
      d.features(r, c) = values[base + static_cast<std::size_t>(c)];
    for (Eigen::Index c = 0; c < nl; ++c)
      d.labels(r, c) = values[base + static_cast<std::size_t>(nf + c)];
  }
  return d;
}

std::string triangulation_json(const Triangulation& t) {
  nlohmann::json j;
  j["format_version"] = 1;
  j["dimension"] = t.dimension();
  j["virtual_vertex_count"] = t.dimension() + 1;
  nlohmann::json verts = nlohmann::json::array();
  for (int v = 0; v < t.vertex_count(); ++v) {
    nlohmann::json coords = nlohmann::json::array();
    for (Eigen::Index c = 0; c < t.vertex(v).size(); ++c)
      coords.push_back(t.vertex(v)[c]);
    verts.push_back(coords);
  }
  j["vertices"] = std::move(verts);
  nlohmann::json cells = nlohmann::json::array();
  for (int id : t.all_simplex_ids()) {
    const Simplex& s = t.simplex(id);
    cells.push_back({{"id", id},
                     {"vertex_ids", s.vertex_ids},
                     {"is_virtual", s.is_virtual}});
  }
  j["simplices"] = std::move(cells);
  return j.dump(2);
}

}  // namespace eds
