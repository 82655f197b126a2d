#include <doctest.h>

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "eds/dataset.hpp"
#include "eds/errors.hpp"
#include "eds/geometry.hpp"
#include "eds/io.hpp"
#include "eds/rng.hpp"

namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "eds_io_test";
  fs::create_directories(dir);
  return dir / name;
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p);
  out << content;
}

double reparse(const std::string& s) {
  double v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  REQUIRE(res.ec == std::errc());
  return v;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("shortest round-trip double formatting") {
  CHECK(eds::double_repr(1.0) == "1");
  CHECK(eds::double_repr(0.5) == "0.5");
  CHECK(eds::double_repr(-2.25) == "-2.25");
  CHECK(eds::double_repr(0.1) == "0.1");
  for (double v : {0.0, 1.0 / 3.0, 1e-300, 1e300, 3.141592653589793, -2.5e-8,
                   0.30000000000000004}) {
    const std::string s = eds::double_repr(v);
    CHECK(reparse(s) == v);
  }
}

TEST_CASE("dataset CSV round trip is bit exact") {
  eds::Rng rng(1);
  eds::Dataset d;
  d.features.resize(50, 3);
  d.labels.resize(50, 2);
  for (Eigen::Index i = 0; i < 50; ++i) {
    for (Eigen::Index j = 0; j < 3; ++j)
      d.features(i, j) = std::ldexp(rng.uniform() - 0.5, int(rng.uniform_index(40)) - 20);
    d.labels(i, 0) = rng.normal();
    d.labels(i, 1) = rng.uniform(-1e6, 1e6);
  }
  d.feature_names = {"x0", "x1", "x2"};
  d.label_names = {"y0", "y1"};

  const fs::path p = temp_file("roundtrip.csv");
  eds::write_dataset_csv(p.string(), d);
  const eds::Dataset back = eds::read_dataset_csv(p.string());
  CHECK(back.feature_names == d.feature_names);
  CHECK(back.label_names == d.label_names);
  REQUIRE(back.features.rows() == 50);
  CHECK((back.features - d.features).norm() == 0.0);
  CHECK((back.labels - d.labels).norm() == 0.0);
}

TEST_CASE("header layout determines the column split") {
  const fs::path p = temp_file("basic.csv");
  write_file(p, "x0,x1,y0\n1,2,3\n4,5,6\n");
  const eds::Dataset d = eds::read_dataset_csv(p.string());
  CHECK(d.feature_dim() == 2);
  CHECK(d.label_dim() == 1);
  CHECK(d.size() == 2);
  CHECK(d.features(1, 1) == 5.0);
  CHECK(d.labels(0, 0) == 3.0);
}

TEST_CASE("windows line endings are tolerated") {
  const fs::path p = temp_file("crlf.csv");
  write_file(p, "x0,y0\r\n1,2\r\n3,4\r\n");
  const eds::Dataset d = eds::read_dataset_csv(p.string());
  CHECK(d.size() == 2);
  CHECK(d.labels(1, 0) == 4.0);
}

TEST_CASE("malformed input raises parse errors") {
  const fs::path feature_after_label = temp_file("bad_order.csv");
  write_file(feature_after_label, "x0,y0,x1\n1,2,3\n");
  CHECK_THROWS_AS(eds::read_dataset_csv(feature_after_label.string()), eds::ParseError);

  const fs::path bad_cell = temp_file("bad_cell.csv");
  write_file(bad_cell, "x0,y0\n1,abc\n");
  CHECK_THROWS_AS(eds::read_dataset_csv(bad_cell.string()), eds::ParseError);

  const fs::path ragged = temp_file("ragged.csv");
  write_file(ragged, "x0,x1,y0\n1,2,3\n4,5\n");
  CHECK_THROWS_AS(eds::read_dataset_csv(ragged.string()), eds::ParseError);

  CHECK_THROWS_AS(eds::read_dataset_csv("/nonexistent/nowhere.csv"), eds::IoError);
}

TEST_CASE("triangulation export is valid versioned JSON") {
  const std::vector<eds::Point> seeds = {Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 0),
                                         Eigen::Vector2d(0, 1)};
  eds::Triangulation tri(seeds, eds::Bbox::of_points(seeds));
  tri.insert(Eigen::Vector2d(1, 1));
  const std::string j = eds::triangulation_json(tri);
  const auto parsed = nlohmann::json::parse(j);
  CHECK(parsed.at("format_version").get<int>() == 1);
  CHECK(parsed.at("dimension").get<int>() == 2);
  CHECK(parsed.at("vertices").size() == 7);  // 3 virtual + 4 real
  long real_cells = 0;
  for (const auto& s : parsed.at("simplices")) {
    CHECK(s.at("vertex_ids").size() == 3);
    if (!s.at("is_virtual").get<bool>()) ++real_cells;
  }
  CHECK(real_cells == 2);
}

}  // TEST_SUITE
