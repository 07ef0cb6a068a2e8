#pragma once

#include "spls/coefficient.hpp"
#include "spls/mesh.hpp"

#include <array>
#include <stdexcept>
#include <vector>

namespace spls {

// Continuous P1 test space with homogeneous Dirichlet boundary: one degree of
// freedom per interior vertex, boundary vertices are fixed at zero.
struct ScalarP1Space {
  const Mesh* mesh = nullptr;
  std::vector<int> vertex_to_dof;  // -1 on the Dirichlet boundary
  std::vector<int> dof_to_vertex;
  int n_dofs = 0;
};

inline ScalarP1Space build_test_space(const Mesh& m) {
  ScalarP1Space V;
  V.mesh = &m;
  V.vertex_to_dof.assign(m.n_vertices(), -1);
  for (int v = 0; v < m.n_vertices(); ++v) {
    if (!m.on_boundary[v]) {
      V.vertex_to_dof[v] = V.n_dofs++;
      V.dof_to_vertex.push_back(v);
    }
  }
  return V;
}

// Broken vector P1 trial space: on each subdomain submesh, continuous P1
// vector fields with no boundary restrictions. Interface vertices are
// duplicated between subdomains. Coefficients are taken with respect to the
// basis {A Phi}, where Phi runs over the per-subdomain scalar hats times the
// coordinate directions; the block layout is
//   [sub 1, comp x | sub 1, comp y (| comp z) | sub 2, comp x | ...].
struct BrokenVectorP1Space {
  const Mesh* mesh = nullptr;
  std::vector<int> block_tags;                 // distinct tags, ascending
  std::vector<std::vector<int>> sub_vertices;  // global vertex ids, ascending
  std::vector<std::vector<int>> sub_local;     // nv-sized maps, -1 if absent
  std::vector<std::vector<int>> sub_cells;     // cell ids per subdomain
  std::vector<int> block_offset;
  int n_dofs = 0;

  int subdomains() const { return static_cast<int>(block_tags.size()); }
  int sub_size(int s) const { return static_cast<int>(sub_vertices[s].size()); }
  int dof(int s, int comp, int local) const {
    return block_offset[s] + comp * sub_size(s) + local;
  }
  int sub_of_tag(int tag) const {
    for (int s = 0; s < subdomains(); ++s)
      if (block_tags[s] == tag) return s;
    throw std::invalid_argument("broken space: unknown tag");
  }
};

inline BrokenVectorP1Space build_broken_space(const Mesh& m) {
  BrokenVectorP1Space W;
  W.mesh = &m;
  for (int c = 0; c < m.n_cells(); ++c) {
    bool seen = false;
    for (int t : W.block_tags) seen = seen || (t == m.tags[c]);
    if (!seen) W.block_tags.push_back(m.tags[c]);
  }
  std::sort(W.block_tags.begin(), W.block_tags.end());
  const int ns = W.subdomains();
  W.sub_vertices.resize(ns);
  W.sub_local.assign(ns, std::vector<int>(m.n_vertices(), -1));
  W.sub_cells.resize(ns);
  for (int c = 0; c < m.n_cells(); ++c) {
    const int s = W.sub_of_tag(m.tags[c]);
    W.sub_cells[s].push_back(c);
    for (int i = 0; i < m.verts_per_cell(); ++i) {
      const int v = m.cells[c][i];
      if (W.sub_local[s][v] == -1) W.sub_local[s][v] = 0;  // mark
    }
  }
  W.block_offset.resize(ns);
  for (int s = 0; s < ns; ++s) {
    for (int v = 0; v < m.n_vertices(); ++v)
      if (W.sub_local[s][v] == 0) W.sub_vertices[s].push_back(v);
    for (int i = 0; i < W.sub_size(s); ++i) W.sub_local[s][W.sub_vertices[s][i]] = i;
    W.block_offset[s] = W.n_dofs;
    W.n_dofs += m.dim * W.sub_size(s);
  }
  return W;
}

// Evaluates the trial field A(x) q(x) at a barycentric point of a cell, where
// q is the broken P1 vector field with the given coefficients.
template <class Vector>
std::array<double, 3> evaluate_broken(const BrokenVectorP1Space& W,
                                      const Coefficient& A,
                                      const Vector& gamma, int cell,
                                      const std::array<double, 4>& bary) {
  const Mesh& m = *W.mesh;
  const int s = W.sub_of_tag(m.tags[cell]);
  std::array<double, 3> x{0, 0, 0}, q{0, 0, 0};
  for (int i = 0; i < m.verts_per_cell(); ++i) {
    const int v = m.cells[cell][i];
    const int loc = W.sub_local[s][v];
    for (int d = 0; d < m.dim; ++d) {
      x[d] += bary[i] * m.vertices[v][d];
      q[d] += bary[i] * gamma[W.dof(s, d, loc)];
    }
  }
  const double a = A(m.tags[cell], x);
  for (int d = 0; d < m.dim; ++d) q[d] *= a;
  return q;
}

}  // namespace spls
