#pragma once

#include <Eigen/Dense>
#include <atomic>
#include <cstdint>
#include <optional>
#include <vector>

namespace eds {

/// A feature-space point in standardized units.
using Point = Eigen::VectorXd;

enum class SphereSide { Inside, Outside, CoSpherical };

struct Bbox {
  Eigen::VectorXd lo, hi;

  static Bbox of_points(const std::vector<Point>& pts);
  static Bbox of_rows(const Eigen::MatrixXd& rows);

  Eigen::VectorXd center() const { return 0.5 * (lo + hi); }
  double diagonal() const { return (hi - lo).norm(); }
  Eigen::Index dim() const { return lo.size(); }
};

/// One cell of the triangulation. `vertex_ids` and `neighbor_ids` are
/// parallel: neighbor_ids[i] is the cell across the facet opposite
/// vertex_ids[i], or -1 on the outer boundary of the bounding simplex.
struct Simplex {
  std::vector<int> vertex_ids;
  std::vector<int> neighbor_ids;
  bool is_virtual = false;  // true when any vertex belongs to the bounding simplex
  bool alive = true;
};

/// Barycentric weights of `p` with respect to an explicit vertex list.
/// Throws SingularSimplex when the vertices are affinely dependent.
Eigen::VectorXd barycentric(const std::vector<Point>& vertices, const Point& p);

/// Side of p relative to the circumsphere of a non-degenerate simplex.
/// |det| below 1e-12 * scale^(n+2) reports CoSpherical.
SphereSide in_sphere(const std::vector<Point>& vertices, const Point& p);

/// Max squared Euclidean distance over vertex pairs (attained at vertices
/// for any convex region, so this is the exact region diameter squared).
double size_gs(const std::vector<Point>& vertices);

/// |det of edge matrix| / n!
double simplex_volume(const std::vector<Point>& vertices);

/// Dimension-generic incremental Delaunay triangulation (Bowyer-Watson).
///
/// The data region is enclosed in a regular bounding simplex whose n+1
/// "virtual" vertices (ids 0..n) are placed at circumradius 10x the bbox
/// diagonal around the bbox center. Points outside the current hull are
/// insertable because they fall in virtual cells. Conflict tests against
/// virtual cells take the limit of the in-sphere determinant as the virtual
/// vertices recede to infinity, so the structure over the real vertices is
/// the true Delaunay triangulation regardless of how far the bounding
/// vertices sit; their concrete coordinates only matter for point location
/// and export.
class Triangulation {
 public:
  /// Builds the bounding simplex and inserts the n+1 seed points.
  /// Throws DegenerateSeed when the seeds are affinely dependent and
  /// DimensionMismatch on inconsistent dimensions.
  Triangulation(const std::vector<Point>& seed_points, const Bbox& bbox);

  Triangulation(const Triangulation& other);
  Triangulation& operator=(const Triangulation& other);
  Triangulation(Triangulation&&) noexcept = default;
  Triangulation& operator=(Triangulation&&) noexcept = default;

  int dimension() const { return dim_; }
  const Bbox& bbox() const { return bbox_; }

  /// Inserts a point, restoring the Delaunay property, and returns its
  /// vertex id. Throws DuplicatePoint (within 1e-12 of an existing real
  /// vertex) or OutsideSuperSimplex.
  int insert(const Point& p);

  struct Location {
    int simplex_id;
    Eigen::VectorXd weights;  // aligned with the cell's vertex_ids
  };

  /// Containing real cell and barycentric coordinates, or nullopt when p
  /// lies outside the hull of the real vertices. Points on shared facets
  /// resolve to the lowest cell id. Throws EmptyTriangulation when no real
  /// cell exists.
  std::optional<Location> locate(const Point& p) const;

  const Point& vertex(int id) const { return vertices_[static_cast<std::size_t>(id)]; }
  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int real_vertex_count() const { return vertex_count() - (dim_ + 1); }
  bool is_virtual_vertex(int id) const { return id <= dim_; }
  int first_real_vertex_id() const { return dim_ + 1; }

  const Simplex& simplex(int id) const { return simplices_[static_cast<std::size_t>(id)]; }
  int simplex_slot_count() const { return static_cast<int>(simplices_.size()); }
  std::vector<int> real_simplex_ids() const;
  std::vector<int> all_simplex_ids() const;  // alive cells, virtual included
  std::size_t real_simplex_count() const;

  std::vector<Point> simplex_points(int id) const;
  Eigen::VectorXd barycentric_in(int simplex_id, const Point& p) const;

 private:
  int locate_cell(const Point& p) const;  // any alive cell, -1 outside bounding simplex
  bool conflicts(int simplex_id, const Point& p) const;
  int make_simplex(std::vector<int> verts);
  void retire_simplex(int id);
  bool point_in_bounding_simplex(const Point& p) const;

  int dim_ = 0;
  Bbox bbox_;
  std::vector<Point> vertices_;       // ids 0..dim_ are virtual
  std::vector<Eigen::VectorXd> virtual_dirs_;  // unit directions of the virtual vertices
  Eigen::VectorXd super_center_;
  std::vector<Simplex> simplices_;
  std::vector<int> free_slots_;
  std::size_t alive_count_ = 0;
  mutable std::atomic<int> hint_{-1};
};

}  // namespace eds
