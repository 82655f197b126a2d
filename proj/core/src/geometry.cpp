#include "eds/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "eds/errors.hpp"

namespace eds {

namespace {

constexpr double kDetEps = 1e-12;       // relative determinant tolerance
constexpr double kFacetTol = 1e-10;     // barycentric "on the facet" band
constexpr double kDuplicateTol = 1e-12; // distance below which points coincide

double pow_int(double base, int exp) {
  double r = 1.0;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

/// det of the n x n edge matrix [v1-v0 ... vn-v0]; sign encodes orientation
/// of the vertex order.
double edge_det(const std::vector<Point>& v) {
  const Eigen::Index n = v[0].size();
  Eigen::MatrixXd e(n, n);
  for (Eigen::Index j = 0; j < n; ++j) e.col(j) = v[static_cast<std::size_t>(j) + 1] - v[0];
  return e.determinant();
}

/// A matrix row given as a polynomial in T: row(T) = sum_d T^d * coef[d].
/// Used to evaluate determinant signs in the limit T -> infinity, where T is
/// the distance of the bounding-simplex vertices from the data.
struct PolyRow {
  std::vector<Eigen::RowVectorXd> coef;  // index = degree; may hold empty slots
};

/// Sign of the leading (highest-degree) nonzero coefficient of
/// det(rows(T)) as T -> infinity. Coefficients are accepted as nonzero when
/// they exceed `tol`. Returns 0 when every coefficient vanishes.
int leading_det_sign(const std::vector<PolyRow>& rows, double tol) {
  const int m = static_cast<int>(rows.size());
  std::vector<std::vector<int>> degree_options(static_cast<std::size_t>(m));
  int max_total = 0;
  for (int i = 0; i < m; ++i) {
    const auto& cs = rows[static_cast<std::size_t>(i)].coef;
    for (int d = 0; d < static_cast<int>(cs.size()); ++d) {
      if (cs[static_cast<std::size_t>(d)].size() > 0)
        degree_options[static_cast<std::size_t>(i)].push_back(d);
    }
    max_total += degree_options[static_cast<std::size_t>(i)].back();
  }

  std::vector<double> coef_by_degree(static_cast<std::size_t>(max_total) + 1, 0.0);
  std::vector<std::size_t> choice(static_cast<std::size_t>(m), 0);
  Eigen::MatrixXd mat(m, m);
  for (;;) {
    int total = 0, quad_rows = 0;
    for (int i = 0; i < m; ++i) {
      const int d = degree_options[static_cast<std::size_t>(i)][choice[static_cast<std::size_t>(i)]];
      total += d;
      if (d == 2) ++quad_rows;
    }
    // Degree-2 coefficient rows are all parallel (only the norm column is
    // nonzero), so any term using two of them is exactly zero.
    if (quad_rows <= 1) {
      for (int i = 0; i < m; ++i) {
        const int d = degree_options[static_cast<std::size_t>(i)][choice[static_cast<std::size_t>(i)]];
        mat.row(i) = rows[static_cast<std::size_t>(i)].coef[static_cast<std::size_t>(d)];
      }
      coef_by_degree[static_cast<std::size_t>(total)] += mat.determinant();
    }
    // odometer over per-row degree choices
    int i = 0;
    for (; i < m; ++i) {
      auto& c = choice[static_cast<std::size_t>(i)];
      if (++c < degree_options[static_cast<std::size_t>(i)].size()) break;
      c = 0;
    }
    if (i == m) break;
  }

  for (int d = max_total; d >= 0; --d) {
    const double c = coef_by_degree[static_cast<std::size_t>(d)];
    if (std::abs(c) > tol) return c > 0 ? 1 : -1;
  }
  return 0;
}

}  // namespace

Bbox Bbox::of_points(const std::vector<Point>& pts) {
  if (pts.empty()) throw DimensionMismatch("cannot take the bounding box of zero points");
  Bbox b{pts[0], pts[0]};
  for (const auto& p : pts) {
    if (p.size() != b.lo.size())
      throw DimensionMismatch("points of mixed dimension in bounding box");
    b.lo = b.lo.cwiseMin(p);
    b.hi = b.hi.cwiseMax(p);
  }
  return b;
}

Bbox Bbox::of_rows(const Eigen::MatrixXd& rows) {
  if (rows.rows() == 0) throw DimensionMismatch("cannot take the bounding box of zero points");
  return Bbox{rows.colwise().minCoeff(), rows.colwise().maxCoeff()};
}

Eigen::VectorXd barycentric(const std::vector<Point>& vertices, const Point& p) {
  const Eigen::Index n = p.size();
  if (static_cast<Eigen::Index>(vertices.size()) != n + 1)
    throw DimensionMismatch("barycentric needs n+1 vertices for an n-dimensional point");
  // Exact vertex hit: return the exact Kronecker-delta weights.
  for (std::size_t j = 0; j < vertices.size(); ++j) {
    if (vertices[j].size() == n && (vertices[j].array() == p.array()).all()) {
      Eigen::VectorXd w = Eigen::VectorXd::Zero(n + 1);
      w[static_cast<Eigen::Index>(j)] = 1.0;
      return w;
    }
  }
  Eigen::MatrixXd e(n, n);
  for (Eigen::Index j = 0; j < n; ++j) e.col(j) = vertices[static_cast<std::size_t>(j) + 1] - vertices[0];
  const double scale = std::max(1.0, e.cwiseAbs().maxCoeff());
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(e);
  if (std::abs(lu.determinant()) <= kDetEps * pow_int(scale, static_cast<int>(n)))
    throw SingularSimplex("affinely dependent simplex vertices");
  Eigen::VectorXd mu = lu.solve(p - vertices[0]);
  Eigen::VectorXd w(n + 1);
  w[0] = 1.0 - mu.sum();
  w.tail(n) = mu;
  return w;
}

SphereSide in_sphere(const std::vector<Point>& vertices, const Point& p) {
  const Eigen::Index n = p.size();
  if (static_cast<Eigen::Index>(vertices.size()) != n + 1)
    throw DimensionMismatch("in_sphere needs n+1 vertices for an n-dimensional point");
  Eigen::MatrixXd m(n + 1, n + 1);
  double coord_scale = 1.0;
  for (Eigen::Index i = 0; i <= n; ++i) {
    const Eigen::VectorXd d = vertices[static_cast<std::size_t>(i)] - p;
    m.row(i).head(n) = d.transpose();
    m(i, n) = d.squaredNorm();
    coord_scale = std::max(coord_scale, d.cwiseAbs().maxCoeff());
  }
  const double det = m.determinant();
  if (std::abs(det) < kDetEps * pow_int(coord_scale, static_cast<int>(n) + 2))
    return SphereSide::CoSpherical;
  const double orient = edge_det(vertices);
  const double s = (n % 2 == 0 ? 1.0 : -1.0) * det * orient;
  return s > 0 ? SphereSide::Inside : SphereSide::Outside;
}

double size_gs(const std::vector<Point>& vertices) {
  double best = 0.0;
  for (std::size_t i = 0; i < vertices.size(); ++i)
    for (std::size_t j = i + 1; j < vertices.size(); ++j)
      best = std::max(best, (vertices[i] - vertices[j]).squaredNorm());
  return best;
}

double simplex_volume(const std::vector<Point>& vertices) {
  const Eigen::Index n = vertices[0].size();
  if (static_cast<Eigen::Index>(vertices.size()) != n + 1)
    throw DimensionMismatch("volume needs n+1 vertices for an n-dimensional simplex");
  double fact = 1.0;
  for (Eigen::Index k = 2; k <= n; ++k) fact *= static_cast<double>(k);
  return std::abs(edge_det(vertices)) / fact;
}

Triangulation::Triangulation(const std::vector<Point>& seed_points, const Bbox& bbox) {
  if (seed_points.empty()) throw DimensionMismatch("no seed points");
  dim_ = static_cast<int>(seed_points[0].size());
  if (dim_ < 1) throw DimensionMismatch("points must have at least one coordinate");
  if (static_cast<int>(seed_points.size()) != dim_ + 1)
    throw DimensionMismatch("triangulation needs exactly n+1 seed points");
  for (const auto& p : seed_points)
    if (static_cast<int>(p.size()) != dim_)
      throw DimensionMismatch("seed points of mixed dimension");
  if (static_cast<int>(bbox.dim()) != dim_)
    throw DimensionMismatch("bounding box dimension does not match the points");

  bbox_ = bbox;
  super_center_ = bbox.center();
  double radius = 10.0 * bbox.diagonal();
  if (!(radius > 0.0)) radius = 10.0;

  // Regular bounding simplex: rows of the Helmert-style matrix Q give n+1
  // evenly spread directions in R^n (the centered standard-basis corners of
  // a regular simplex, expressed in an orthonormal basis of the sum-zero
  // hyperplane). Each row has norm sqrt(n/(n+1)).
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(dim_ + 1, dim_);
  for (int k = 1; k <= dim_; ++k) {
    const double denom = std::sqrt(static_cast<double>(k) * (k + 1));
    for (int i = 0; i < k; ++i) q(i, k - 1) = 1.0 / denom;
    q(k, k - 1) = -static_cast<double>(k) / denom;
  }
  vertices_.reserve(static_cast<std::size_t>(2 * dim_ + 2));
  for (int i = 0; i <= dim_; ++i) {
    Eigen::VectorXd dir = q.row(i).transpose().normalized();
    virtual_dirs_.push_back(dir);
    vertices_.push_back(super_center_ + radius * dir);
  }

  std::vector<int> all(static_cast<std::size_t>(dim_) + 1);
  for (int i = 0; i <= dim_; ++i) all[static_cast<std::size_t>(i)] = i;
  make_simplex(std::move(all));
  hint_.store(0, std::memory_order_relaxed);

  for (const auto& p : seed_points) {
    try {
      insert(p);
    } catch (const DuplicatePoint&) {
      throw DegenerateSeed("coincident seed points");
    }
  }
  if (real_simplex_count() == 0)
    throw DegenerateSeed("seed points are affinely dependent");
}

Triangulation::Triangulation(const Triangulation& other)
    : dim_(other.dim_),
      bbox_(other.bbox_),
      vertices_(other.vertices_),
      virtual_dirs_(other.virtual_dirs_),
      super_center_(other.super_center_),
      simplices_(other.simplices_),
      free_slots_(other.free_slots_),
      alive_count_(other.alive_count_) {
  hint_.store(other.hint_.load(std::memory_order_relaxed), std::memory_order_relaxed);
}

Triangulation& Triangulation::operator=(const Triangulation& other) {
  if (this != &other) {
    dim_ = other.dim_;
    bbox_ = other.bbox_;
    vertices_ = other.vertices_;
    virtual_dirs_ = other.virtual_dirs_;
    super_center_ = other.super_center_;
    simplices_ = other.simplices_;
    free_slots_ = other.free_slots_;
    alive_count_ = other.alive_count_;
    hint_.store(other.hint_.load(std::memory_order_relaxed), std::memory_order_relaxed);
  }
  return *this;
}

int Triangulation::make_simplex(std::vector<int> verts) {
  Simplex s;
  s.vertex_ids = std::move(verts);
  s.neighbor_ids.assign(s.vertex_ids.size(), -1);
  s.is_virtual = std::any_of(s.vertex_ids.begin(), s.vertex_ids.end(),
                             [this](int v) { return v <= dim_; });
  s.alive = true;
  int id;
  if (!free_slots_.empty()) {
    id = free_slots_.back();
    free_slots_.pop_back();
    simplices_[static_cast<std::size_t>(id)] = std::move(s);
  } else {
    id = static_cast<int>(simplices_.size());
    simplices_.push_back(std::move(s));
  }
  ++alive_count_;
  return id;
}

void Triangulation::retire_simplex(int id) {
  Simplex& s = simplices_[static_cast<std::size_t>(id)];
  s.alive = false;
  s.vertex_ids.clear();
  s.neighbor_ids.clear();
  --alive_count_;
  free_slots_.push_back(id);
}

std::vector<Point> Triangulation::simplex_points(int id) const {
  const Simplex& s = simplices_[static_cast<std::size_t>(id)];
  std::vector<Point> pts;
  pts.reserve(s.vertex_ids.size());
  for (int v : s.vertex_ids) pts.push_back(vertices_[static_cast<std::size_t>(v)]);
  return pts;
}

Eigen::VectorXd Triangulation::barycentric_in(int simplex_id, const Point& p) const {
  return barycentric(simplex_points(simplex_id), p);
}

std::vector<int> Triangulation::real_simplex_ids() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < simplices_.size(); ++i)
    if (simplices_[i].alive && !simplices_[i].is_virtual) out.push_back(static_cast<int>(i));
  return out;
}

std::vector<int> Triangulation::all_simplex_ids() const {
  std::vector<int> out;
  out.reserve(alive_count_);
  for (std::size_t i = 0; i < simplices_.size(); ++i)
    if (simplices_[i].alive) out.push_back(static_cast<int>(i));
  return out;
}

std::size_t Triangulation::real_simplex_count() const {
  std::size_t c = 0;
  for (const auto& s : simplices_)
    if (s.alive && !s.is_virtual) ++c;
  return c;
}

bool Triangulation::point_in_bounding_simplex(const Point& p) const {
  std::vector<Point> corners;
  corners.reserve(static_cast<std::size_t>(dim_) + 1);
  for (int i = 0; i <= dim_; ++i) corners.push_back(vertices_[static_cast<std::size_t>(i)]);
  Eigen::VectorXd w = barycentric(corners, p);
  return w.minCoeff() >= -kFacetTol;
}

int Triangulation::locate_cell(const Point& p) const {
  int cur = hint_.load(std::memory_order_relaxed);
  if (cur < 0 || cur >= static_cast<int>(simplices_.size()) ||
      !simplices_[static_cast<std::size_t>(cur)].alive) {
    cur = -1;
    for (std::size_t i = 0; i < simplices_.size(); ++i)
      if (simplices_[i].alive) {
        cur = static_cast<int>(i);
        break;
      }
    if (cur < 0) throw EmptyTriangulation("triangulation has no cells");
  }

  // Visibility walk: step through the facet with the most negative weight.
  const std::size_t cap = static_cast<std::size_t>(dim_ + 1) * alive_count_ + 16;
  bool walk_ok = true;
  for (std::size_t step = 0; step < cap; ++step) {
    Eigen::VectorXd w;
    try {
      w = barycentric_in(cur, p);
    } catch (const SingularSimplex&) {
      walk_ok = false;  // realization of a boundary cell collapsed; scan instead
      break;
    }
    Eigen::Index worst;
    const double wmin = w.minCoeff(&worst);
    if (wmin >= -kFacetTol) {
      hint_.store(cur, std::memory_order_relaxed);
      return cur;
    }
    const int next =
        simplices_[static_cast<std::size_t>(cur)].neighbor_ids[static_cast<std::size_t>(worst)];
    if (next < 0) return -1;  // crossed the outer boundary: p is outside the bounding simplex
    cur = next;
  }

  // Fallback: deterministic linear scan, lowest containing id first.
  int best = -1;
  double best_min = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < simplices_.size(); ++i) {
    if (!simplices_[i].alive) continue;
    Eigen::VectorXd w;
    try {
      w = barycentric_in(static_cast<int>(i), p);
    } catch (const SingularSimplex&) {
      continue;
    }
    const double wmin = w.minCoeff();
    if (wmin >= -kFacetTol) {
      hint_.store(static_cast<int>(i), std::memory_order_relaxed);
      return static_cast<int>(i);
    }
    if (wmin > best_min) {
      best_min = wmin;
      best = static_cast<int>(i);
    }
  }
  if (!point_in_bounding_simplex(p)) return -1;
  (void)walk_ok;
  return best;  // inside the bounding simplex but near a realization crack
}

bool Triangulation::conflicts(int simplex_id, const Point& p) const {
  const Simplex& s = simplices_[static_cast<std::size_t>(simplex_id)];
  const auto n = static_cast<Eigen::Index>(dim_);
  if (!s.is_virtual) {
    return in_sphere(simplex_points(simplex_id), p) == SphereSide::Inside;
  }

  // Virtual cell: evaluate the in-sphere sign in the limit where the
  // bounding vertices recede to infinity along their fixed directions.
  // p conflicts iff sign(det M) * sign(det H) > 0, where M has rows
  // (x_i - p, |x_i - p|^2) and H has rows (x_i, 1), both in vertex order;
  // virtual rows become polynomials in the recession parameter.
  std::vector<PolyRow> m_rows, h_rows;
  m_rows.reserve(s.vertex_ids.size());
  h_rows.reserve(s.vertex_ids.size());
  const Eigen::VectorXd cp = super_center_ - p;
  double coord_scale = 1.0;
  for (int vid : s.vertex_ids) {
    PolyRow mr, hr;
    if (vid <= dim_) {
      const Eigen::VectorXd& u = virtual_dirs_[static_cast<std::size_t>(vid)];
      Eigen::RowVectorXd m0(n + 1), m1(n + 1), m2(n + 1);
      m0 << cp.transpose(), cp.squaredNorm();
      m1 << u.transpose(), 2.0 * u.dot(cp);
      m2.setZero();
      m2(n) = 1.0;  // |u|^2
      mr.coef = {m0, m1, m2};
      Eigen::RowVectorXd h0(n + 1), h1(n + 1);
      h0 << super_center_.transpose(), 1.0;
      h1 << u.transpose(), 0.0;
      hr.coef = {h0, h1};
      coord_scale = std::max(coord_scale, cp.cwiseAbs().maxCoeff());
      coord_scale = std::max(coord_scale, super_center_.cwiseAbs().maxCoeff());
    } else {
      const Eigen::VectorXd& x = vertices_[static_cast<std::size_t>(vid)];
      const Eigen::VectorXd d = x - p;
      Eigen::RowVectorXd m0(n + 1), h0(n + 1);
      m0 << d.transpose(), d.squaredNorm();
      h0 << x.transpose(), 1.0;
      mr.coef = {m0};
      hr.coef = {h0};
      coord_scale = std::max(coord_scale, d.cwiseAbs().maxCoeff());
      coord_scale = std::max(coord_scale, x.cwiseAbs().maxCoeff());
    }
    m_rows.push_back(std::move(mr));
    h_rows.push_back(std::move(hr));
  }
  const double tol_m = kDetEps * pow_int(coord_scale, dim_ + 2);
  const double tol_h = kDetEps * pow_int(coord_scale, dim_);
  const int sm = leading_det_sign(m_rows, tol_m);
  if (sm == 0) return false;  // co-spherical in the limit: treat as outside
  const int sh = leading_det_sign(h_rows, tol_h);
  return sm * sh > 0;
}

std::optional<Triangulation::Location> Triangulation::locate(const Point& p) const {
  if (static_cast<int>(p.size()) != dim_)
    throw DimensionMismatch("query point dimension does not match the triangulation");
  if (real_simplex_count() == 0)
    throw EmptyTriangulation("triangulation has no real cells");
  const int start = locate_cell(p);
  if (start < 0) return std::nullopt;

  // p may sit on a shared facet; walk the star of cells whose closure
  // contains p and pick the lowest real id.
  std::vector<int> stack{start};
  std::vector<char> seen(simplices_.size(), 0);
  seen[static_cast<std::size_t>(start)] = 1;
  int best_real = -1;
  while (!stack.empty()) {
    const int c = stack.back();
    stack.pop_back();
    Eigen::VectorXd w;
    try {
      w = barycentric_in(c, p);
    } catch (const SingularSimplex&) {
      continue;
    }
    if (w.minCoeff() < -kFacetTol) continue;
    const Simplex& s = simplices_[static_cast<std::size_t>(c)];
    if (!s.is_virtual && (best_real < 0 || c < best_real)) best_real = c;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      if (std::abs(w[i]) <= kFacetTol) {
        const int nb = s.neighbor_ids[static_cast<std::size_t>(i)];
        if (nb >= 0 && !seen[static_cast<std::size_t>(nb)]) {
          seen[static_cast<std::size_t>(nb)] = 1;
          stack.push_back(nb);
        }
      }
    }
  }
  if (best_real < 0) return std::nullopt;
  return Location{best_real, barycentric_in(best_real, p)};
}

int Triangulation::insert(const Point& p) {
  if (static_cast<int>(p.size()) != dim_)
    throw DimensionMismatch("point dimension does not match the triangulation");
  if (!p.allFinite()) throw NonFiniteData("point has non-finite coordinates");

  const int start = locate_cell(p);
  if (start < 0)
    throw OutsideSuperSimplex("point lies outside the bounding simplex");

  // Duplicate rejection: the containing cell (and its facet neighbors, in
  // case p sits on a facet) hold every real vertex p could coincide with.
  auto check_duplicates = [&](int sid) {
    for (int vid : simplices_[static_cast<std::size_t>(sid)].vertex_ids) {
      if (vid > dim_ && (vertices_[static_cast<std::size_t>(vid)] - p).norm() <= kDuplicateTol)
        throw DuplicatePoint("point coincides with an existing vertex");
    }
  };
  check_duplicates(start);
  for (int nb : simplices_[static_cast<std::size_t>(start)].neighbor_ids)
    if (nb >= 0) check_duplicates(nb);

  // Cavity search: every cell whose (limit) circumsphere contains p.
  std::vector<char> in_cavity(simplices_.size(), 0), tested(simplices_.size(), 0);
  std::vector<int> cavity{start}, stack{start};
  in_cavity[static_cast<std::size_t>(start)] = 1;
  tested[static_cast<std::size_t>(start)] = 1;
  while (!stack.empty()) {
    const int c = stack.back();
    stack.pop_back();
    for (int nb : simplices_[static_cast<std::size_t>(c)].neighbor_ids) {
      if (nb < 0 || tested[static_cast<std::size_t>(nb)]) continue;
      tested[static_cast<std::size_t>(nb)] = 1;
      if (conflicts(nb, p)) {
        in_cavity[static_cast<std::size_t>(nb)] = 1;
        cavity.push_back(nb);
        stack.push_back(nb);
      }
    }
  }

  const int p_id = static_cast<int>(vertices_.size());
  vertices_.push_back(p);

  // Re-tessellate: one new cell per boundary facet of the cavity, with the
  // new vertex in slot 0. Internal facets (those containing p) pair up via
  // their sorted vertex key.
  std::map<std::vector<int>, std::pair<int, int>> open_facets;
  std::vector<int> created;
  for (int c : cavity) {
    const Simplex s = simplices_[static_cast<std::size_t>(c)];  // copy: slots mutate below
    for (std::size_t i = 0; i < s.vertex_ids.size(); ++i) {
      const int nb = s.neighbor_ids[i];
      if (nb >= 0 && in_cavity[static_cast<std::size_t>(nb)]) continue;
      std::vector<int> nv;
      nv.reserve(s.vertex_ids.size());
      nv.push_back(p_id);
      for (std::size_t j = 0; j < s.vertex_ids.size(); ++j)
        if (j != i) nv.push_back(s.vertex_ids[j]);
      const int ns = make_simplex(nv);
      created.push_back(ns);
      simplices_[static_cast<std::size_t>(ns)].neighbor_ids[0] = nb;
      if (nb >= 0) {
        Simplex& outside = simplices_[static_cast<std::size_t>(nb)];
        for (std::size_t j = 0; j < outside.vertex_ids.size(); ++j) {
          const int v = outside.vertex_ids[j];
          if (std::find(nv.begin() + 1, nv.end(), v) == nv.end()) {
            outside.neighbor_ids[j] = ns;
            break;
          }
        }
      }
      for (std::size_t k = 1; k < nv.size(); ++k) {
        std::vector<int> key;
        key.reserve(nv.size() - 2);
        for (std::size_t j = 1; j < nv.size(); ++j)
          if (j != k) key.push_back(nv[j]);
        std::sort(key.begin(), key.end());
        auto it = open_facets.find(key);
        if (it == open_facets.end()) {
          open_facets.emplace(std::move(key),
                              std::make_pair(ns, static_cast<int>(k)));
        } else {
          const auto [other, oslot] = it->second;
          simplices_[static_cast<std::size_t>(ns)].neighbor_ids[k] = other;
          simplices_[static_cast<std::size_t>(other)].neighbor_ids[static_cast<std::size_t>(oslot)] = ns;
          open_facets.erase(it);
        }
      }
    }
  }
  for (int c : cavity) retire_simplex(c);
  hint_.store(created.front(), std::memory_order_relaxed);
  return p_id;
}

}  // namespace eds
