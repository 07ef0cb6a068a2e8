#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace spls {

// Conforming simplicial mesh with per-cell subdomain tags. Cells store dim+1
// vertex indices and are kept positively oriented. Vertex flags are derived
// once after construction: a vertex is "boundary" when it lies on the domain
// bounding box and "interface" when it touches cells of at least two tags.
struct Mesh {
  int dim = 2;
  int level = 1;
  std::vector<std::array<double, 3>> vertices;  // z unused in 2d
  std::vector<std::array<int, 4>> cells;        // dim+1 entries used
  std::vector<int> tags;                        // subdomain tag per cell, >= 1
  std::vector<char> on_boundary;
  std::vector<char> on_interface;
  std::array<double, 3> box_lo{0, 0, 0};
  std::array<double, 3> box_hi{0, 0, 0};

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_cells() const { return static_cast<int>(cells.size()); }
  int verts_per_cell() const { return dim + 1; }
};

enum class InterfaceKind { None, VerticalAtHalf, CrossAtHalf };

inline InterfaceKind interface_kind_from_string(const std::string& s) {
  if (s == "none") return InterfaceKind::None;
  if (s == "vertical-at-half") return InterfaceKind::VerticalAtHalf;
  if (s == "cross-at-half") return InterfaceKind::CrossAtHalf;
  throw std::invalid_argument("unknown interface kind: " + s);
}

// Diagonal orientation of the structured square generators. Uniform splits
// every grid square along its lower-left to upper-right diagonal.
// CenterSymmetric flips the diagonal in the two quadrants where exactly one
// center-line coordinate exceeds the midpoint, which makes the triangulation
// invariant under point reflection through the domain center; red refinement
// preserves the pattern.
enum class DiagonalPattern { Uniform, CenterSymmetric };

inline DiagonalPattern diagonal_pattern_from_string(const std::string& s) {
  if (s == "uniform") return DiagonalPattern::Uniform;
  if (s == "center-symmetric") return DiagonalPattern::CenterSymmetric;
  throw std::invalid_argument("unknown diagonal pattern: " + s);
}

inline const char* to_string(DiagonalPattern p) {
  return p == DiagonalPattern::Uniform ? "uniform" : "center-symmetric";
}

namespace detail {

inline double cell_signed_volume(const Mesh& m, int c) {
  const auto& cell = m.cells[c];
  const auto& p0 = m.vertices[cell[0]];
  if (m.dim == 2) {
    const auto& p1 = m.vertices[cell[1]];
    const auto& p2 = m.vertices[cell[2]];
    const double ax = p1[0] - p0[0], ay = p1[1] - p0[1];
    const double bx = p2[0] - p0[0], by = p2[1] - p0[1];
    return 0.5 * (ax * by - ay * bx);
  }
  double e[3][3];
  for (int i = 0; i < 3; ++i)
    for (int d = 0; d < 3; ++d)
      e[i][d] = m.vertices[cell[i + 1]][d] - p0[d];
  const double det = e[0][0] * (e[1][1] * e[2][2] - e[1][2] * e[2][1]) -
                     e[0][1] * (e[1][0] * e[2][2] - e[1][2] * e[2][0]) +
                     e[0][2] * (e[1][0] * e[2][1] - e[1][1] * e[2][0]);
  return det / 6.0;
}

inline std::array<double, 3> cell_barycenter(const Mesh& m, int c) {
  std::array<double, 3> b{0, 0, 0};
  const int nv = m.verts_per_cell();
  for (int i = 0; i < nv; ++i)
    for (int d = 0; d < 3; ++d) b[d] += m.vertices[m.cells[c][i]][d];
  for (int d = 0; d < 3; ++d) b[d] /= nv;
  return b;
}

inline void finalize(Mesh& m) {
  const int nv = m.n_vertices();
  for (int d = 0; d < 3; ++d) {
    m.box_lo[d] = 0.0;
    m.box_hi[d] = 0.0;
  }
  for (int d = 0; d < m.dim; ++d) {
    double lo = m.vertices[0][d], hi = m.vertices[0][d];
    for (const auto& p : m.vertices) {
      lo = std::min(lo, p[d]);
      hi = std::max(hi, p[d]);
    }
    m.box_lo[d] = lo;
    m.box_hi[d] = hi;
  }
  const double tol = 1e-12;
  m.on_boundary.assign(nv, 0);
  for (int v = 0; v < nv; ++v) {
    for (int d = 0; d < m.dim; ++d) {
      if (std::abs(m.vertices[v][d] - m.box_lo[d]) <= tol ||
          std::abs(m.vertices[v][d] - m.box_hi[d]) <= tol) {
        m.on_boundary[v] = 1;
        break;
      }
    }
  }
  // A vertex is on the interface when its incident cells carry >= 2 tags.
  std::vector<int> first_tag(nv, -1);
  m.on_interface.assign(nv, 0);
  for (int c = 0; c < m.n_cells(); ++c) {
    for (int i = 0; i < m.verts_per_cell(); ++i) {
      const int v = m.cells[c][i];
      if (first_tag[v] == -1) {
        first_tag[v] = m.tags[c];
      } else if (first_tag[v] != m.tags[c]) {
        m.on_interface[v] = 1;
      }
    }
  }
}

inline void require_even(int n, const char* who) {
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument(std::string(who) + ": n must be even and >= 2");
}

}  // namespace detail

inline double cell_volume(const Mesh& m, int c) {
  return std::abs(detail::cell_signed_volume(m, c));
}

inline double cell_diameter(const Mesh& m, int c) {
  const int nv = m.verts_per_cell();
  double d2 = 0;
  for (int i = 0; i < nv; ++i) {
    for (int j = i + 1; j < nv; ++j) {
      const auto& a = m.vertices[m.cells[c][i]];
      const auto& b = m.vertices[m.cells[c][j]];
      double s = 0;
      for (int d = 0; d < m.dim; ++d) s += (a[d] - b[d]) * (a[d] - b[d]);
      d2 = std::max(d2, s);
    }
  }
  return std::sqrt(d2);
}

inline double max_cell_diameter(const Mesh& m) {
  double h = 0;
  for (int c = 0; c < m.n_cells(); ++c) h = std::max(h, cell_diameter(m, c));
  return h;
}

inline double total_volume(const Mesh& m) {
  double v = 0;
  for (int c = 0; c < m.n_cells(); ++c) v += cell_volume(m, c);
  return v;
}

inline int find_vertex(const Mesh& m, const std::array<double, 3>& x,
                       double tol = 1e-12) {
  for (int v = 0; v < m.n_vertices(); ++v) {
    double d = 0;
    for (int k = 0; k < m.dim; ++k) d = std::max(d, std::abs(m.vertices[v][k] - x[k]));
    if (d <= tol) return v;
  }
  return -1;
}

// Structured triangulation of (0,1)^2 with n x n grid squares, split along a
// diagonal chosen by `pattern`. Tags: none -> 1 everywhere; vertical-at-half
// -> 1 left / 2 right of x = 1/2; cross-at-half -> the four quadrants of the
// interface {x = 1/2} u {y = 1/2} numbered 1..4 as (low x, low y),
// (high x, low y), (low x, high y), (high x, high y).
inline Mesh unit_square_mesh(int n, InterfaceKind kind,
                             DiagonalPattern pattern = DiagonalPattern::Uniform) {
  detail::require_even(n, "unit_square_mesh");
  Mesh m;
  m.dim = 2;
  m.level = 1;
  const int s = n + 1;
  m.vertices.resize(static_cast<size_t>(s) * s);
  for (int j = 0; j < s; ++j)
    for (int i = 0; i < s; ++i)
      m.vertices[static_cast<size_t>(j) * s + i] = {double(i) / n, double(j) / n, 0.0};
  auto vid = [s](int i, int j) { return j * s + i; };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = vid(i, j), v10 = vid(i + 1, j);
      const int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      const double cx = (i + 0.5) / n, cy = (j + 0.5) / n;
      const bool anti = pattern == DiagonalPattern::CenterSymmetric &&
                        (cx > 0.5) != (cy > 0.5);
      if (anti) {
        m.cells.push_back({v00, v10, v01, -1});
        m.cells.push_back({v10, v11, v01, -1});
      } else {
        m.cells.push_back({v00, v10, v11, -1});
        m.cells.push_back({v00, v11, v01, -1});
      }
    }
  }
  m.tags.resize(m.cells.size());
  for (int c = 0; c < m.n_cells(); ++c) {
    const auto b = detail::cell_barycenter(m, c);
    switch (kind) {
      case InterfaceKind::None:
        m.tags[c] = 1;
        break;
      case InterfaceKind::VerticalAtHalf:
        m.tags[c] = b[0] < 0.5 ? 1 : 2;
        break;
      case InterfaceKind::CrossAtHalf:
        m.tags[c] = 1 + (b[0] > 0.5 ? 1 : 0) + (b[1] > 0.5 ? 2 : 0);
        break;
    }
  }
  detail::finalize(m);
  return m;
}

// Structured triangulation of (-1,1)^2; cells with barycenter in the open
// first quadrant are tagged 2, the rest 1. The origin is a mesh vertex.
inline Mesh square2_mesh(int n, DiagonalPattern pattern = DiagonalPattern::Uniform) {
  detail::require_even(n, "square2_mesh");
  Mesh m;
  m.dim = 2;
  m.level = 1;
  const int s = n + 1;
  m.vertices.resize(static_cast<size_t>(s) * s);
  for (int j = 0; j < s; ++j)
    for (int i = 0; i < s; ++i)
      m.vertices[static_cast<size_t>(j) * s + i] = {-1.0 + 2.0 * i / n,
                                                    -1.0 + 2.0 * j / n, 0.0};
  auto vid = [s](int i, int j) { return j * s + i; };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int v00 = vid(i, j), v10 = vid(i + 1, j);
      const int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
      const double bx = -1.0 + 2.0 * (i + 0.5) / n, by = -1.0 + 2.0 * (j + 0.5) / n;
      const bool anti = pattern == DiagonalPattern::CenterSymmetric &&
                        (bx > 0.0) != (by > 0.0);
      if (anti) {
        m.cells.push_back({v00, v10, v01, -1});
        m.cells.push_back({v10, v11, v01, -1});
      } else {
        m.cells.push_back({v00, v10, v11, -1});
        m.cells.push_back({v00, v11, v01, -1});
      }
    }
  }
  m.tags.resize(m.cells.size());
  for (int c = 0; c < m.n_cells(); ++c) {
    const auto b = detail::cell_barycenter(m, c);
    m.tags[c] = (b[0] > 0.0 && b[1] > 0.0) ? 2 : 1;
  }
  detail::finalize(m);
  return m;
}

// Kuhn triangulation of (0,1)^3: each grid cube is split into the six
// tetrahedra spanned by the monotone vertex paths from its low corner to its
// high corner. Neighboring cubes induce matching face triangulations. Tags:
// 1 for barycenter x < 1/2, else 2.
inline Mesh unit_cube_mesh(int n) {
  detail::require_even(n, "unit_cube_mesh");
  Mesh m;
  m.dim = 3;
  m.level = 1;
  const int s = n + 1;
  m.vertices.resize(static_cast<size_t>(s) * s * s);
  for (int k = 0; k < s; ++k)
    for (int j = 0; j < s; ++j)
      for (int i = 0; i < s; ++i)
        m.vertices[(static_cast<size_t>(k) * s + j) * s + i] = {
            double(i) / n, double(j) / n, double(k) / n};
  auto vid = [s](int i, int j, int k) { return (k * s + j) * s + i; };
  static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                  {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        for (const auto& p : perms) {
          int off[4][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}, {1, 1, 1}};
          off[1][p[0]] = 1;
          off[2][p[0]] = 1;
          off[2][p[1]] = 1;
          std::array<int, 4> cell;
          for (int v = 0; v < 4; ++v)
            cell[v] = vid(i + off[v][0], j + off[v][1], k + off[v][2]);
          m.cells.push_back(cell);
        }
      }
    }
  }
  m.tags.resize(m.cells.size());
  for (int c = 0; c < m.n_cells(); ++c) {
    // Orient positively; vertex order within a cell is not load bearing.
    if (detail::cell_signed_volume(m, c) < 0) std::swap(m.cells[c][2], m.cells[c][3]);
    m.tags[c] = detail::cell_barycenter(m, c)[0] < 0.5 ? 1 : 2;
  }
  detail::finalize(m);
  return m;
}

namespace detail {

struct EdgeSplitter {
  const Mesh* parent;
  Mesh* child;
  int singular_vertex = -1;  // -1: plain midpoints
  double kappa = 0.5;
  std::map<std::pair<int, int>, int> edge_point;

  int split(int a, int b) {
    const auto key = std::minmax(a, b);
    auto it = edge_point.find(key);
    if (it != edge_point.end()) return it->second;
    const auto& pa = parent->vertices[a];
    const auto& pb = parent->vertices[b];
    std::array<double, 3> p{0, 0, 0};
    if (singular_vertex == a && kappa != 0.5) {
      for (int d = 0; d < 3; ++d) p[d] = pa[d] + kappa * (pb[d] - pa[d]);
    } else if (singular_vertex == b && kappa != 0.5) {
      for (int d = 0; d < 3; ++d) p[d] = pb[d] + kappa * (pa[d] - pb[d]);
    } else {
      for (int d = 0; d < 3; ++d) p[d] = 0.5 * (pa[d] + pb[d]);
    }
    const int id = child->n_vertices();
    child->vertices.push_back(p);
    edge_point.emplace(key, id);
    return id;
  }
};

inline Mesh refine_impl(const Mesh& m, int singular_vertex, double kappa) {
  Mesh r;
  r.dim = m.dim;
  r.level = m.level + 1;
  r.vertices = m.vertices;
  EdgeSplitter es{&m, &r, singular_vertex, kappa};
  const bool graded = singular_vertex >= 0 && kappa != 0.5;

  if (m.dim == 2) {
    for (int c = 0; c < m.n_cells(); ++c) {
      const int v0 = m.cells[c][0], v1 = m.cells[c][1], v2 = m.cells[c][2];
      const int s01 = es.split(v0, v1);
      const int s12 = es.split(v1, v2);
      const int s02 = es.split(v0, v2);
      const std::array<int, 4> kids[4] = {{v0, s01, s02, -1},
                                          {s01, v1, s12, -1},
                                          {s02, s12, v2, -1},
                                          {s01, s12, s02, -1}};
      for (const auto& kid : kids) {
        r.cells.push_back(kid);
        r.tags.push_back(m.tags[c]);
      }
    }
  } else {
    for (int c = 0; c < m.n_cells(); ++c) {
      const int v0 = m.cells[c][0], v1 = m.cells[c][1];
      const int v2 = m.cells[c][2], v3 = m.cells[c][3];
      const int m01 = es.split(v0, v1), m02 = es.split(v0, v2);
      const int m03 = es.split(v0, v3), m12 = es.split(v1, v2);
      const int m13 = es.split(v1, v3), m23 = es.split(v2, v3);
      // Four corner children plus the inner octahedron cut along m02-m13;
      // orderings chosen so midpoint splitting keeps positive orientation.
      const std::array<int, 4> kids[8] = {
          {v0, m01, m02, m03},   {m01, v1, m12, m13},  {m02, m12, v2, m23},
          {m03, m13, m23, v3},   {m01, m02, m03, m13}, {m01, m02, m13, m12},
          {m02, m03, m13, m23},  {m02, m12, m23, m13}};
      for (const auto& kid : kids) {
        r.cells.push_back(kid);
        r.tags.push_back(m.tags[c]);
      }
    }
  }
  finalize(r);
  if (graded) {
    for (int c = 0; c < r.n_cells(); ++c) {
      if (cell_signed_volume(r, c) <= 0)
        throw std::runtime_error("graded_refine: degenerate child cell");
    }
  }
  return r;
}

}  // namespace detail

inline Mesh uniform_refine(const Mesh& m) { return detail::refine_impl(m, -1, 0.5); }

// Red refinement with edges incident to the singular vertex split at
// parameter kappa from it instead of at the midpoint. kappa = 1/2 reproduces
// uniform refinement exactly.
inline Mesh graded_refine(const Mesh& m, int singular_vertex, double kappa) {
  if (!(kappa > 0.0 && kappa <= 0.5))
    throw std::invalid_argument("graded_refine: kappa must lie in (0, 1/2]");
  if (singular_vertex < 0 || singular_vertex >= m.n_vertices())
    throw std::invalid_argument("graded_refine: singular vertex out of range");
  return detail::refine_impl(m, singular_vertex, kappa);
}

// Structural checks: index ranges, positive volumes, facet conformity,
// boundary coverage, duplicate vertices and interface fitting (no cell may
// straddle an axis-aligned plane carrying interface facets). Returns a list
// of human-readable violations; empty means the mesh is sound.
inline std::vector<std::string> validate(const Mesh& m) {
  std::vector<std::string> issues;
  const int nv = m.n_vertices(), nc = m.n_cells(), k = m.verts_per_cell();
  if (m.dim != 2 && m.dim != 3) {
    issues.push_back("dim must be 2 or 3");
    return issues;
  }
  if (static_cast<int>(m.tags.size()) != nc) {
    issues.push_back("tag count does not match cell count");
    return issues;
  }
  double scale = 0;
  for (int d = 0; d < m.dim; ++d) scale = std::max(scale, m.box_hi[d] - m.box_lo[d]);
  const double tol = 1e-12 * std::max(scale, 1.0);

  for (int c = 0; c < nc; ++c) {
    for (int i = 0; i < k; ++i) {
      const int v = m.cells[c][i];
      if (v < 0 || v >= nv) {
        issues.push_back("cell " + std::to_string(c) + ": vertex index out of range");
        return issues;
      }
      for (int j = i + 1; j < k; ++j)
        if (m.cells[c][j] == v)
          issues.push_back("cell " + std::to_string(c) + ": repeated vertex");
    }
    if (m.tags[c] < 1)
      issues.push_back("cell " + std::to_string(c) + ": tag must be >= 1");
    if (detail::cell_signed_volume(m, c) <= 0)
      issues.push_back("cell " + std::to_string(c) + ": non-positive volume");
  }

  {
    std::map<std::array<double, 3>, int> seen;
    for (int v = 0; v < nv; ++v) {
      auto [it, inserted] = seen.emplace(m.vertices[v], v);
      if (!inserted)
        issues.push_back("duplicate vertex coordinates: " + std::to_string(it->second) +
                         " and " + std::to_string(v));
    }
  }

  // Facet incidence: every facet is shared by exactly two cells or lies on
  // the bounding box, and the boundary facets tile the box surface.
  struct FacetInfo {
    int count = 0;
    int cells[2] = {-1, -1};
  };
  std::map<std::array<int, 3>, FacetInfo> facets;
  for (int c = 0; c < nc; ++c) {
    for (int skip = 0; skip < k; ++skip) {
      std::array<int, 3> f{-1, -1, -1};
      int w = 0;
      for (int i = 0; i < k; ++i)
        if (i != skip) f[w++] = m.cells[c][i];
      std::sort(f.begin(), f.begin() + w);
      auto& info = facets[f];
      if (info.count < 2) info.cells[info.count] = c;
      info.count++;
    }
  }
  double boundary_measure = 0;
  for (const auto& [f, info] : facets) {
    if (info.count > 2) {
      issues.push_back("facet shared by more than two cells");
      continue;
    }
    if (info.count == 1) {
      // Must lie within a single bounding-box face.
      bool on_box_face = false;
      for (int d = 0; d < m.dim && !on_box_face; ++d) {
        for (double side : {m.box_lo[d], m.box_hi[d]}) {
          bool all = true;
          for (int i = 0; i < m.dim; ++i)
            if (std::abs(m.vertices[f[i]][d] - side) > tol) all = false;
          if (all) {
            on_box_face = true;
            break;
          }
        }
      }
      if (!on_box_face) {
        issues.push_back("interior facet belongs to a single cell (hanging node or hole)");
        continue;
      }
      if (m.dim == 2) {
        const auto& a = m.vertices[f[0]];
        const auto& b = m.vertices[f[1]];
        boundary_measure += std::hypot(a[0] - b[0], a[1] - b[1]);
      } else {
        const auto& a = m.vertices[f[0]];
        const auto& b = m.vertices[f[1]];
        const auto& c2 = m.vertices[f[2]];
        double u[3], v[3];
        for (int d = 0; d < 3; ++d) {
          u[d] = b[d] - a[d];
          v[d] = c2[d] - a[d];
        }
        const double cx = u[1] * v[2] - u[2] * v[1];
        const double cy = u[2] * v[0] - u[0] * v[2];
        const double cz = u[0] * v[1] - u[1] * v[0];
        boundary_measure += 0.5 * std::sqrt(cx * cx + cy * cy + cz * cz);
      }
    }
  }
  double expected_boundary = 0;
  if (m.dim == 2) {
    const double w = m.box_hi[0] - m.box_lo[0], h = m.box_hi[1] - m.box_lo[1];
    expected_boundary = 2 * (w + h);
  } else {
    const double w = m.box_hi[0] - m.box_lo[0], h = m.box_hi[1] - m.box_lo[1];
    const double d = m.box_hi[2] - m.box_lo[2];
    expected_boundary = 2 * (w * h + w * d + h * d);
  }
  if (std::abs(boundary_measure - expected_boundary) > 1e-9 * std::max(expected_boundary, 1.0))
    issues.push_back("boundary facets do not tile the bounding box surface");

  // Interface fitting: collect facets separating different tags, group them
  // into axis-aligned planes and flag cells whose interior crosses a plane
  // near its active region.
  struct PlaneStrip {
    std::vector<std::array<double, 6>> boxes;  // facet bounding boxes
  };
  std::map<std::pair<int, double>, PlaneStrip> planes;
  for (const auto& [f, info] : facets) {
    if (info.count != 2) continue;
    if (m.tags[info.cells[0]] == m.tags[info.cells[1]]) continue;
    int axis = -1;
    double value = 0;
    for (int d = 0; d < m.dim; ++d) {
      bool flat = true;
      for (int i = 1; i < m.dim; ++i)
        if (std::abs(m.vertices[f[i]][d] - m.vertices[f[0]][d]) > tol) flat = false;
      if (flat) {
        axis = d;
        value = m.vertices[f[0]][d];
        break;
      }
    }
    if (axis < 0) {
      issues.push_back("interface facet is not axis-aligned");
      continue;
    }
    std::array<double, 6> bb = {0, 0, 0, 0, 0, 0};
    for (int d = 0; d < 3; ++d) {
      double lo = m.vertices[f[0]][d], hi = lo;
      for (int i = 1; i < m.dim; ++i) {
        lo = std::min(lo, m.vertices[f[i]][d]);
        hi = std::max(hi, m.vertices[f[i]][d]);
      }
      bb[d] = lo;
      bb[3 + d] = hi;
    }
    planes[{axis, value}].boxes.push_back(bb);
  }
  for (int c = 0; c < nc; ++c) {
    std::array<double, 6> cb = {0, 0, 0, 0, 0, 0};
    for (int d = 0; d < 3; ++d) {
      double lo = m.vertices[m.cells[c][0]][d], hi = lo;
      for (int i = 1; i < k; ++i) {
        lo = std::min(lo, m.vertices[m.cells[c][i]][d]);
        hi = std::max(hi, m.vertices[m.cells[c][i]][d]);
      }
      cb[d] = lo;
      cb[3 + d] = hi;
    }
    for (const auto& [key, strip] : planes) {
      const auto [axis, value] = key;
      if (!(cb[axis] < value - tol && cb[3 + axis] > value + tol)) continue;
      bool near = false;
      for (const auto& bb : strip.boxes) {
        bool overlap = true;
        for (int d = 0; d < m.dim; ++d)
          if (cb[3 + d] < bb[d] - tol || cb[d] > bb[3 + d] + tol) overlap = false;
        if (overlap) {
          near = true;
          break;
        }
      }
      if (near)
        issues.push_back("cell " + std::to_string(c) +
                         " straddles the interface plane axis " +
                         std::to_string(axis) + " = " + std::to_string(value));
    }
  }
  return issues;
}

// Text format: one header line "dim nv nc", nv coordinate lines, nc lines of
// dim+1 zero-based vertex indices followed by the subdomain tag.
inline void write_mesh_text(const Mesh& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_mesh_text: cannot open " + path);
  out << m.dim << " " << m.n_vertices() << " " << m.n_cells() << "\n";
  char buf[96];
  for (const auto& p : m.vertices) {
    if (m.dim == 2)
      std::snprintf(buf, sizeof buf, "%.17g %.17g\n", p[0], p[1]);
    else
      std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", p[0], p[1], p[2]);
    out << buf;
  }
  for (int c = 0; c < m.n_cells(); ++c) {
    for (int i = 0; i < m.verts_per_cell(); ++i) out << m.cells[c][i] << " ";
    out << m.tags[c] << "\n";
  }
  if (!out) throw std::runtime_error("write_mesh_text: write failed for " + path);
}

inline Mesh read_mesh_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("read_mesh_text: cannot open " + path);
  Mesh m;
  int nv = 0, nc = 0;
  if (!(in >> m.dim >> nv >> nc))
    throw std::invalid_argument("read_mesh_text: malformed header");
  if (m.dim != 2 && m.dim != 3)
    throw std::invalid_argument("read_mesh_text: dim must be 2 or 3");
  if (nv <= 0 || nc <= 0)
    throw std::invalid_argument("read_mesh_text: non-positive counts");
  m.vertices.resize(nv);
  for (int v = 0; v < nv; ++v) {
    std::array<double, 3> p{0, 0, 0};
    for (int d = 0; d < m.dim; ++d)
      if (!(in >> p[d]))
        throw std::invalid_argument("read_mesh_text: bad coordinate line " +
                                    std::to_string(v));
    m.vertices[v] = p;
  }
  m.cells.resize(nc);
  m.tags.resize(nc);
  for (int c = 0; c < nc; ++c) {
    std::array<int, 4> cell{-1, -1, -1, -1};
    for (int i = 0; i < m.dim + 1; ++i) {
      if (!(in >> cell[i]))
        throw std::invalid_argument("read_mesh_text: bad cell line " + std::to_string(c));
      if (cell[i] < 0 || cell[i] >= nv)
        throw std::invalid_argument("read_mesh_text: vertex index out of range in cell " +
                                    std::to_string(c));
    }
    if (!(in >> m.tags[c]))
      throw std::invalid_argument("read_mesh_text: missing tag in cell " + std::to_string(c));
    m.cells[c] = cell;
  }
  m.level = 1;
  detail::finalize(m);
  return m;
}

}  // namespace spls
