#pragma once

#include "spls/coefficient.hpp"
#include "spls/fespace.hpp"
#include "spls/mesh.hpp"
#include "spls/quadrature.hpp"

#include <Eigen/Sparse>

#include <cstdio>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <vector>

namespace spls {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

namespace detail {

// Affine geometry of one cell: volume, hat-function gradients and vertex
// coordinates. Gradients are constant per cell for P1.
struct CellGeometry {
  double vol = 0;
  std::array<std::array<double, 3>, 4> grad{};   // per local vertex
  std::array<std::array<double, 3>, 4> coord{};  // per local vertex

  std::array<double, 3> point(int dim, int nverts,
                              const std::array<double, 4>& bary) const {
    std::array<double, 3> x{0, 0, 0};
    for (int i = 0; i < nverts; ++i)
      for (int d = 0; d < dim; ++d) x[d] += bary[i] * coord[i][d];
    return x;
  }
};

inline CellGeometry cell_geometry(const Mesh& m, int c) {
  CellGeometry g;
  const int k = m.verts_per_cell();
  for (int i = 0; i < k; ++i) g.coord[i] = m.vertices[m.cells[c][i]];
  if (m.dim == 2) {
    const double ax = g.coord[1][0] - g.coord[0][0];
    const double ay = g.coord[1][1] - g.coord[0][1];
    const double bx = g.coord[2][0] - g.coord[0][0];
    const double by = g.coord[2][1] - g.coord[0][1];
    const double det = ax * by - ay * bx;
    if (det <= 0) throw std::runtime_error("cell_geometry: non-positive cell");
    g.vol = 0.5 * det;
    // rows of the inverse Jacobian transpose
    g.grad[1] = {by / det, -bx / det, 0};
    g.grad[2] = {-ay / det, ax / det, 0};
  } else {
    double e[3][3];
    for (int i = 0; i < 3; ++i)
      for (int d = 0; d < 3; ++d) e[i][d] = g.coord[i + 1][d] - g.coord[0][d];
    const double det = e[0][0] * (e[1][1] * e[2][2] - e[1][2] * e[2][1]) -
                       e[0][1] * (e[1][0] * e[2][2] - e[1][2] * e[2][0]) +
                       e[0][2] * (e[1][0] * e[2][1] - e[1][1] * e[2][0]);
    if (det <= 0) throw std::runtime_error("cell_geometry: non-positive cell");
    g.vol = det / 6.0;
    // inverse of [e0; e1; e2] transposed, via cofactors
    const double inv = 1.0 / det;
    g.grad[1] = {(e[1][1] * e[2][2] - e[1][2] * e[2][1]) * inv,
                 (e[1][2] * e[2][0] - e[1][0] * e[2][2]) * inv,
                 (e[1][0] * e[2][1] - e[1][1] * e[2][0]) * inv};
    g.grad[2] = {(e[2][1] * e[0][2] - e[2][2] * e[0][1]) * inv,
                 (e[2][2] * e[0][0] - e[2][0] * e[0][2]) * inv,
                 (e[2][0] * e[0][1] - e[2][1] * e[0][0]) * inv};
    g.grad[3] = {(e[0][1] * e[1][2] - e[0][2] * e[1][1]) * inv,
                 (e[0][2] * e[1][0] - e[0][0] * e[1][2]) * inv,
                 (e[0][0] * e[1][1] - e[0][1] * e[1][0]) * inv};
  }
  for (int d = 0; d < 3; ++d) {
    g.grad[0][d] = 0;
    for (int i = 1; i < k; ++i) g.grad[0][d] -= g.grad[i][d];
  }
  return g;
}

}  // namespace detail

// A-weighted stiffness over all vertices (no boundary condition), entries
// int_cell a grad(phi_i) . grad(phi_j). With a == 1 this is the plain
// stiffness matrix of the full vertex set.
inline SpMat assemble_scalar_stiffness_full(const Mesh& m, const Coefficient& A,
                                            int quad_degree) {
  const int nv = m.n_vertices();
  const int k = m.verts_per_cell();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(m.n_cells()) * k * k);
  const QuadratureRule rule =
      A.constant_per_tag ? QuadratureRule{} : simplex_quadrature(m.dim, quad_degree);
  for (int c = 0; c < m.n_cells(); ++c) {
    const auto g = detail::cell_geometry(m, c);
    double acoef = 0;
    if (A.constant_per_tag) {
      acoef = A(m.tags[c], detail::cell_barycenter(m, c)) * g.vol;
    } else {
      for (int q = 0; q < rule.size(); ++q)
        acoef += rule.weights[q] * A(m.tags[c], g.point(m.dim, k, rule.points[q]));
      acoef *= g.vol;
    }
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        double dot = 0;
        for (int d = 0; d < m.dim; ++d) dot += g.grad[i][d] * g.grad[j][d];
        trips.emplace_back(m.cells[c][i], m.cells[c][j], acoef * dot);
      }
    }
  }
  SpMat S(nv, nv);
  S.setFromTriplets(trips.begin(), trips.end());
  S.makeCompressed();
  return S;
}

inline SpMat restrict_to(const SpMat& full, const std::vector<int>& row_map,
                         int nrows, const std::vector<int>& col_map, int ncols) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(full.nonZeros());
  for (int col = 0; col < full.outerSize(); ++col) {
    const int cc = col_map.empty() ? col : col_map[col];
    if (cc < 0) continue;
    for (SpMat::InnerIterator it(full, col); it; ++it) {
      const int rr = row_map.empty() ? static_cast<int>(it.row()) : row_map[it.row()];
      if (rr < 0) continue;
      trips.emplace_back(rr, cc, it.value());
    }
  }
  SpMat out(nrows, ncols);
  out.setFromTriplets(trips.begin(), trips.end());
  out.makeCompressed();
  return out;
}

// Stiffness on the test space, int grad(u) . grad(v) over free dofs only.
inline SpMat assemble_stiffness(const ScalarP1Space& V) {
  const SpMat full = assemble_scalar_stiffness_full(*V.mesh, make_unit_coefficient(), 1);
  return restrict_to(full, V.vertex_to_dof, V.n_dofs, V.vertex_to_dof, V.n_dofs);
}

// Load vector (f, phi_m) over free dofs.
inline Vec assemble_load(const ScalarP1Space& V,
                         const std::function<double(const std::array<double, 3>&)>& f,
                         int quad_degree) {
  if (quad_degree < 2)
    throw std::invalid_argument("assemble_load: quadrature degree must be >= 2");
  const Mesh& m = *V.mesh;
  const QuadratureRule rule = simplex_quadrature(m.dim, quad_degree);
  Vec F = Vec::Zero(V.n_dofs);
  const int k = m.verts_per_cell();
  for (int c = 0; c < m.n_cells(); ++c) {
    const auto g = detail::cell_geometry(m, c);
    for (int q = 0; q < rule.size(); ++q) {
      const double fw = f(g.point(m.dim, k, rule.points[q])) * rule.weights[q] * g.vol;
      for (int i = 0; i < k; ++i) {
        const int dof = V.vertex_to_dof[m.cells[c][i]];
        if (dof >= 0) F[dof] += fw * rule.points[q][i];
      }
    }
  }
  return F;
}

// Coupling between trial and test spaces over all test vertices,
//   G[k, m] = int < A Phi_k , grad(phi_m) >,
// rows indexed by trial dofs. With coefficient vectors gamma and v this
// realizes b(v_h, q_h) = gamma^T G v.
inline SpMat assemble_coupling_full(const BrokenVectorP1Space& W, const Coefficient& A,
                                    int quad_degree) {
  const Mesh& m = *W.mesh;
  const int k = m.verts_per_cell();
  const QuadratureRule rule = simplex_quadrature(m.dim, quad_degree);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(m.n_cells()) * k * k * m.dim);
  for (int c = 0; c < m.n_cells(); ++c) {
    const auto g = detail::cell_geometry(m, c);
    const int s = W.sub_of_tag(m.tags[c]);
    // int_cell a phi_i for each local vertex i
    std::array<double, 4> aphi{0, 0, 0, 0};
    for (int q = 0; q < rule.size(); ++q) {
      const double aw =
          A(m.tags[c], g.point(m.dim, k, rule.points[q])) * rule.weights[q] * g.vol;
      for (int i = 0; i < k; ++i) aphi[i] += aw * rule.points[q][i];
    }
    for (int i = 0; i < k; ++i) {
      const int loc = W.sub_local[s][m.cells[c][i]];
      for (int comp = 0; comp < m.dim; ++comp) {
        const int row = W.dof(s, comp, loc);
        for (int j = 0; j < k; ++j)
          trips.emplace_back(row, m.cells[c][j], aphi[i] * g.grad[j][comp]);
      }
    }
  }
  SpMat G(W.n_dofs, m.n_vertices());
  G.setFromTriplets(trips.begin(), trips.end());
  G.makeCompressed();
  return G;
}

inline SpMat assemble_coupling(const BrokenVectorP1Space& W, const ScalarP1Space& V,
                               const Coefficient& A, int quad_degree) {
  const SpMat full = assemble_coupling_full(W, A, quad_degree);
  return restrict_to(full, {}, W.n_dofs, V.vertex_to_dof, V.n_dofs);
}

// Gram matrix of the trial basis {A Phi} in the weighted inner product
// (p, q) = int < A^{-1} p, q >, which reduces to the a-weighted block mass
//   M_A[(s,c,i), (s,c,j)] = int_sub a phi_i phi_j
// with identical diagonal blocks per component and no cross-component terms.
inline SpMat assemble_block_mass(const BrokenVectorP1Space& W, const Coefficient& A,
                                 int quad_degree) {
  const Mesh& m = *W.mesh;
  const int k = m.verts_per_cell();
  const QuadratureRule rule = simplex_quadrature(m.dim, quad_degree);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(m.n_cells()) * k * k * m.dim);
  for (int c = 0; c < m.n_cells(); ++c) {
    const auto g = detail::cell_geometry(m, c);
    const int s = W.sub_of_tag(m.tags[c]);
    double local[4][4] = {};
    for (int q = 0; q < rule.size(); ++q) {
      const double aw =
          A(m.tags[c], g.point(m.dim, k, rule.points[q])) * rule.weights[q] * g.vol;
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
          local[i][j] += aw * rule.points[q][i] * rule.points[q][j];
    }
    for (int i = 0; i < k; ++i) {
      const int li = W.sub_local[s][m.cells[c][i]];
      for (int j = 0; j < k; ++j) {
        const int lj = W.sub_local[s][m.cells[c][j]];
        for (int comp = 0; comp < m.dim; ++comp)
          trips.emplace_back(W.dof(s, comp, li), W.dof(s, comp, lj), local[i][j]);
      }
    }
  }
  SpMat M(W.n_dofs, W.n_dofs);
  M.setFromTriplets(trips.begin(), trips.end());
  M.makeCompressed();
  return M;
}

// Everything the saddle point solver needs. Matrices over free test dofs
// carry no Dirichlet rows/columns, so S and M_A are symmetric positive
// definite by construction; the *_full variants keep all vertices and back
// boundary-data liftings.
struct AssembledSystem {
  int dim = 0;
  int n_free = 0;
  int n_trial = 0;
  int n_vertices = 0;
  SpMat S;            // free x free stiffness
  SpMat S_A;          // free x free a-weighted stiffness
  SpMat S_A_lift;     // free x all-vertices a-weighted stiffness
  SpMat S_A_full;     // all x all
  SpMat G;            // trial x free coupling
  SpMat G_full;       // trial x all-vertices
  SpMat M_A;          // trial x trial block mass
  Vec F;              // load over free dofs
};

inline AssembledSystem assemble_system(
    const Mesh& m, const ScalarP1Space& V, const BrokenVectorP1Space& W,
    const Coefficient& A, const std::function<double(const std::array<double, 3>&)>& f,
    int quad_bilinear, int quad_load) {
  AssembledSystem sys;
  sys.dim = m.dim;
  sys.n_free = V.n_dofs;
  sys.n_trial = W.n_dofs;
  sys.n_vertices = m.n_vertices();
  sys.S_A_full = assemble_scalar_stiffness_full(m, A, quad_bilinear);
  sys.S_A = restrict_to(sys.S_A_full, V.vertex_to_dof, V.n_dofs, V.vertex_to_dof, V.n_dofs);
  sys.S_A_lift = restrict_to(sys.S_A_full, V.vertex_to_dof, V.n_dofs, {}, m.n_vertices());
  {
    const SpMat plain = assemble_scalar_stiffness_full(m, make_unit_coefficient(), 1);
    sys.S = restrict_to(plain, V.vertex_to_dof, V.n_dofs, V.vertex_to_dof, V.n_dofs);
  }
  sys.G_full = assemble_coupling_full(W, A, quad_bilinear);
  sys.G = restrict_to(sys.G_full, {}, W.n_dofs, V.vertex_to_dof, V.n_dofs);
  sys.M_A = assemble_block_mass(W, A, quad_bilinear);
  sys.F = assemble_load(V, f, quad_load);
  return sys;
}

// Coordinate text dump, one "row col value" line per stored entry.
inline void dump_matrix(const SpMat& M, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("dump_matrix: cannot open " + path);
  char buf[80];
  for (int col = 0; col < M.outerSize(); ++col) {
    for (SpMat::InnerIterator it(M, col); it; ++it) {
      std::snprintf(buf, sizeof buf, "%ld %ld %.17g\n", static_cast<long>(it.row()),
                    static_cast<long>(it.col()), it.value());
      out << buf;
    }
  }
}

}  // namespace spls
