#include "spls/fespace.hpp"

#include <gtest/gtest.h>

#include <vector>

namespace {

std::array<double, 3> bary_point(const spls::Mesh& m, int cell,
                                 const std::array<double, 4>& bary) {
  std::array<double, 3> x{0, 0, 0};
  for (int i = 0; i < m.verts_per_cell(); ++i)
    for (int d = 0; d < m.dim; ++d)
      x[d] += bary[i] * m.vertices[m.cells[cell][i]][d];
  return x;
}

}  // namespace

TEST(TestSpace, CountsInteriorVertices) {
  const auto m2 = spls::unit_square_mesh(2, spls::InterfaceKind::None);
  const auto V2 = spls::build_test_space(m2);
  EXPECT_EQ(V2.n_dofs, 1);

  const auto m4 = spls::unit_square_mesh(4, spls::InterfaceKind::None);
  const auto V4 = spls::build_test_space(m4);
  EXPECT_EQ(V4.n_dofs, 9);

  const auto c2 = spls::unit_cube_mesh(2);
  const auto Vc = spls::build_test_space(c2);
  EXPECT_EQ(Vc.n_dofs, 1);
}

TEST(TestSpace, MapsAreInverse) {
  const auto m = spls::unit_square_mesh(4, spls::InterfaceKind::CrossAtHalf);
  const auto V = spls::build_test_space(m);
  for (int dof = 0; dof < V.n_dofs; ++dof)
    EXPECT_EQ(V.vertex_to_dof[V.dof_to_vertex[dof]], dof);
  for (int v = 0; v < m.n_vertices(); ++v) {
    if (m.on_boundary[v]) {
      EXPECT_EQ(V.vertex_to_dof[v], -1);
    } else {
      EXPECT_EQ(V.dof_to_vertex[V.vertex_to_dof[v]], v);
    }
  }
}

TEST(BrokenSpace, VerticalSplitCountsAndDuplication) {
  const auto m = spls::unit_square_mesh(2, spls::InterfaceKind::VerticalAtHalf);
  const auto W = spls::build_broken_space(m);
  ASSERT_EQ(W.subdomains(), 2);
  EXPECT_EQ(W.block_tags[0], 1);
  EXPECT_EQ(W.block_tags[1], 2);
  EXPECT_EQ(W.sub_size(0), 6);
  EXPECT_EQ(W.sub_size(1), 6);
  EXPECT_EQ(W.n_dofs, 24);

  // Interface vertices belong to both subdomains with distinct dofs.
  int shared = 0;
  for (int v = 0; v < m.n_vertices(); ++v) {
    if (W.sub_local[0][v] >= 0 && W.sub_local[1][v] >= 0) {
      ++shared;
      EXPECT_NEAR(m.vertices[v][0], 0.5, 1e-15);
      EXPECT_NE(W.dof(0, 0, W.sub_local[0][v]), W.dof(1, 0, W.sub_local[1][v]));
    }
  }
  EXPECT_EQ(shared, 3);
}

TEST(BrokenSpace, DofLayoutIsABijection) {
  const auto m = spls::unit_square_mesh(4, spls::InterfaceKind::CrossAtHalf);
  const auto W = spls::build_broken_space(m);
  ASSERT_EQ(W.subdomains(), 4);
  std::vector<char> seen(W.n_dofs, 0);
  for (int s = 0; s < W.subdomains(); ++s) {
    for (int comp = 0; comp < m.dim; ++comp) {
      for (int i = 0; i < W.sub_size(s); ++i) {
        const int dof = W.dof(s, comp, i);
        ASSERT_GE(dof, 0);
        ASSERT_LT(dof, W.n_dofs);
        EXPECT_EQ(seen[dof], 0);
        seen[dof] = 1;
      }
    }
  }
  for (char s : seen) EXPECT_EQ(s, 1);
  EXPECT_THROW(W.sub_of_tag(99), std::invalid_argument);
}

TEST(BrokenSpace, SubdomainVerticesComeFromOwnCells) {
  const auto m = spls::unit_cube_mesh(2);
  const auto W = spls::build_broken_space(m);
  ASSERT_EQ(W.subdomains(), 2);
  // 3x3x3 vertex grid split at x = 1/2: each half sees 2 of 3 x-layers.
  EXPECT_EQ(W.sub_size(0), 18);
  EXPECT_EQ(W.sub_size(1), 18);
  EXPECT_EQ(W.n_dofs, 3 * 36);
  for (int s = 0; s < 2; ++s) {
    for (int v : W.sub_vertices[s]) {
      const double x = m.vertices[v][0];
      if (s == 0) EXPECT_LE(x, 0.5 + 1e-15);
      if (s == 1) EXPECT_GE(x, 0.5 - 1e-15);
    }
  }
}

TEST(BrokenSpace, EvaluatesConstantFieldTimesCoefficient) {
  const auto m = spls::unit_square_mesh(2, spls::InterfaceKind::VerticalAtHalf);
  const auto W = spls::build_broken_space(m);
  const auto A = spls::make_constant_coefficient({{1, 2.0}, {2, 5.0}});
  std::vector<double> gamma(W.n_dofs, 0.0);
  const double cx = 0.75, cy = -1.25;
  for (int s = 0; s < W.subdomains(); ++s)
    for (int i = 0; i < W.sub_size(s); ++i) {
      gamma[W.dof(s, 0, i)] = cx;
      gamma[W.dof(s, 1, i)] = cy;
    }
  const std::array<double, 4> bary{0.2, 0.3, 0.5, 0.0};
  for (int c = 0; c < m.n_cells(); ++c) {
    const double a = m.tags[c] == 1 ? 2.0 : 5.0;
    const auto q = spls::evaluate_broken(W, A, gamma, c, bary);
    EXPECT_NEAR(q[0], a * cx, 1e-14);
    EXPECT_NEAR(q[1], a * cy, 1e-14);
  }
}

TEST(BrokenSpace, ReproducesLinearFieldsExactly) {
  const auto m = spls::unit_square_mesh(4, spls::InterfaceKind::CrossAtHalf);
  const auto W = spls::build_broken_space(m);
  const auto A = spls::make_unit_coefficient();
  auto fx = [](const std::array<double, 3>& x) { return 1.0 + 2.0 * x[0] - 0.5 * x[1]; };
  auto fy = [](const std::array<double, 3>& x) { return -0.25 + x[0] + 3.0 * x[1]; };
  std::vector<double> gamma(W.n_dofs, 0.0);
  for (int s = 0; s < W.subdomains(); ++s)
    for (int i = 0; i < W.sub_size(s); ++i) {
      const auto& p = m.vertices[W.sub_vertices[s][i]];
      gamma[W.dof(s, 0, i)] = fx(p);
      gamma[W.dof(s, 1, i)] = fy(p);
    }
  const std::array<double, 4> barys[3] = {
      {1.0 / 3, 1.0 / 3, 1.0 / 3, 0}, {0.6, 0.3, 0.1, 0}, {0.1, 0.2, 0.7, 0}};
  for (int c = 0; c < m.n_cells(); ++c) {
    for (const auto& b : barys) {
      const auto x = bary_point(m, c, b);
      const auto q = spls::evaluate_broken(W, A, gamma, c, b);
      EXPECT_NEAR(q[0], fx(x), 1e-13);
      EXPECT_NEAR(q[1], fy(x), 1e-13);
    }
  }
}
