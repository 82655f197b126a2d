#pragma once

#include <string>

#include "eds/dataset.hpp"
#include "eds/geometry.hpp"

namespace eds {

/// Shortest decimal text that round-trips the exact double value.
std::string double_repr(double v);

/// CSV with header `x0,...,y0,...`, one sample per row, round-trippable
/// values. Throws IoError on filesystem failure.
void write_dataset_csv(const std::string& path, const Dataset& d);

/// Parses a CSV produced by write_dataset_csv (or any file whose header
/// names columns x* and y*). Throws IoError / ParseError.
Dataset read_dataset_csv(const std::string& path);

/// JSON string with the vertex coordinates and per-cell vertex ids of a
/// triangulation (virtual cells flagged), for external plotting.
std::string triangulation_json(const Triangulation& t);

}  // namespace eds
