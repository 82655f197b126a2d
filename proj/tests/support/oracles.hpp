// Independent reference implementations used to cross-check the library.
// These deliberately take different routes than the production code: the
// Delaunay oracle enumerates every candidate simplex and tests emptiness via
// an explicitly solved circumcenter, instead of incremental insertion with
// determinant predicates.
#pragma once

#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "eds/geometry.hpp"

namespace oracle {

struct DelaunayCells {
  // Vertex index sets (sorted) that must appear in any Delaunay triangulation
  // of the input: their circumsphere is strictly empty.
  std::set<std::vector<int>> certain;
  // Sets whose circumsphere is empty up to ties: co-spherical configurations
  // where several triangulations are equally valid.
  std::set<std::vector<int>> ambiguous;
};

inline bool circumsphere(const std::vector<eds::Point>& v, eds::Point& center,
                         double& r2) {
  const auto n = static_cast<Eigen::Index>(v.size()) - 1;
  Eigen::MatrixXd a(n, n);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a.row(i) = 2.0 * (v[static_cast<std::size_t>(i + 1)] - v[0]).transpose();
    b[i] = v[static_cast<std::size_t>(i + 1)].squaredNorm() - v[0].squaredNorm();
  }
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) return false;
  center = lu.solve(b);
  r2 = (center - v[0]).squaredNorm();
  return true;
}

/// Exhaustive Delaunay reference: O(N^(n+2)). Usable for small N only.
inline DelaunayCells brute_force_delaunay(const std::vector<eds::Point>& pts) {
  DelaunayCells out;
  const int n = static_cast<int>(pts[0].size());
  const int count = static_cast<int>(pts.size());
  std::vector<int> idx(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) idx[static_cast<std::size_t>(i)] = i;

  const auto advance = [&]() {
    int k = n;
    while (k >= 0 && idx[static_cast<std::size_t>(k)] == count - (n + 1 - k)) --k;
    if (k < 0) return false;
    ++idx[static_cast<std::size_t>(k)];
    for (int j = k + 1; j <= n; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    return true;
  };

  do {
    std::vector<eds::Point> v;
    for (int i = 0; i <= n; ++i) v.push_back(pts[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])]);
    eds::Point c;
    double r2 = 0.0;
    if (!circumsphere(v, c, r2)) continue;
    if (eds::simplex_volume(v) < 1e-12) continue;
    bool empty = true;
    bool tie = false;
    const double band = 1e-9 * std::max(1.0, r2);
    for (int q = 0; q < count; ++q) {
      if (std::find(idx.begin(), idx.end(), q) != idx.end()) continue;
      const double d2 = (pts[static_cast<std::size_t>(q)] - c).squaredNorm();
      if (d2 < r2 - band) {
        empty = false;
        break;
      }
      if (d2 <= r2 + band) tie = true;
    }
    if (empty) (tie ? out.ambiguous : out.certain).insert(idx);
  } while (advance());
  return out;
}

/// Real cells of a triangulation as sorted input-index sets. Assumes points
/// were inserted in order with no duplicates, so vertex k maps to input k.
inline std::set<std::vector<int>> real_cell_index_sets(const eds::Triangulation& t) {
  std::set<std::vector<int>> out;
  const int base = t.first_real_vertex_id();
  for (int id : t.real_simplex_ids()) {
    std::vector<int> verts;
    for (int v : t.simplex(id).vertex_ids) verts.push_back(v - base);
    std::sort(verts.begin(), verts.end());
    out.insert(std::move(verts));
  }
  return out;
}

/// Structural invariants: mutual neighbor links, shared facets, and every
/// interior facet bordering exactly two alive cells.
inline void check_structure(const eds::Triangulation& t) {
  const auto ids = t.all_simplex_ids();
  const std::set<int> alive(ids.begin(), ids.end());
  for (int id : ids) {
    const eds::Simplex& s = t.simplex(id);
    REQUIRE(s.vertex_ids.size() == static_cast<std::size_t>(t.dimension()) + 1);
    for (std::size_t f = 0; f < s.neighbor_ids.size(); ++f) {
      const int nb = s.neighbor_ids[f];
      if (nb < 0) continue;
      REQUIRE(alive.count(nb) == 1);
      // Facet opposite vertex f must be shared, and the neighbor must point back.
      std::set<int> facet(s.vertex_ids.begin(), s.vertex_ids.end());
      facet.erase(s.vertex_ids[f]);
      const eds::Simplex& o = t.simplex(nb);
      bool back = false;
      for (std::size_t g = 0; g < o.neighbor_ids.size(); ++g) {
        if (o.neighbor_ids[g] != id) continue;
        std::set<int> other(o.vertex_ids.begin(), o.vertex_ids.end());
        other.erase(o.vertex_ids[g]);
        REQUIRE(other == facet);
        back = true;
      }
      REQUIRE(back);
    }
  }
}

/// Shoelace area of the 2-D convex hull (Andrew monotone chain).
inline double hull_area_2d(std::vector<eds::Point> pts) {
  std::sort(pts.begin(), pts.end(), [](const eds::Point& a, const eds::Point& b) {
    return a[0] != b[0] ? a[0] < b[0] : a[1] < b[1];
  });
  const auto cross = [](const eds::Point& o, const eds::Point& a, const eds::Point& b) {
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
  };
  std::vector<eds::Point> h(2 * pts.size() + 1);
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {  // lower chain
    while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  const std::size_t lower_end = k + 1;
  for (std::size_t i = pts.size() - 1; i-- > 0;) {  // upper chain
    while (k >= lower_end && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k > 0 ? k - 1 : 0);
  double area = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const auto& a = h[i];
    const auto& b = h[(i + 1) % h.size()];
    area += a[0] * b[1] - b[0] * a[1];
  }
  return 0.5 * std::abs(area);
}

/// Total volume of the real cells.
inline double total_real_volume(const eds::Triangulation& t) {
  double vol = 0.0;
  for (int id : t.real_simplex_ids()) vol += eds::simplex_volume(t.simplex_points(id));
  return vol;
}

}  // namespace oracle
