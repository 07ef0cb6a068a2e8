#pragma once

#include "spls/assembly.hpp"
#include "spls/quadrature.hpp"
#include "spls/solvers.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace spls {

// Evaluates a computed flux field cell by cell. Two representations back it:
// coefficients of the broken trial basis {A Phi}, or a nodal potential z over
// all vertices with flux a grad(z).
class DiscreteFluxView {
 public:
  DiscreteFluxView(const BrokenVectorP1Space& W, const Coefficient& A, const Vec& gamma)
      : W_(&W), mesh_(W.mesh), A_(&A), coeffs_(&gamma) {}

  DiscreteFluxView(const Mesh& m, const Coefficient& A, const Vec& potential)
      : mesh_(&m), A_(&A), coeffs_(&potential) {
    if (potential.size() != m.n_vertices())
      throw std::invalid_argument("flux view: potential must cover all vertices");
  }

  void set_cell(int c) {
    cell_ = c;
    if (W_) return;
    const auto g = detail::cell_geometry(*mesh_, c);
    geom_ = g;
    for (int d = 0; d < 3; ++d) grad_[d] = 0;
    const int k = mesh_->verts_per_cell();
    for (int i = 0; i < k; ++i) {
      const double zi = (*coeffs_)[mesh_->cells[c][i]];
      for (int d = 0; d < mesh_->dim; ++d) grad_[d] += zi * g.grad[i][d];
    }
  }

  std::array<double, 3> operator()(const std::array<double, 4>& bary) const {
    if (W_) return evaluate_broken(*W_, *A_, *coeffs_, cell_, bary);
    const auto x = geom_.point(mesh_->dim, mesh_->verts_per_cell(), bary);
    const double a = (*A_)(mesh_->tags[cell_], x);
    return {a * grad_[0], a * grad_[1], a * grad_[2]};
  }

  const Mesh& mesh() const { return *mesh_; }

 private:
  const BrokenVectorP1Space* W_ = nullptr;
  const Mesh* mesh_;
  const Coefficient* A_;
  const Vec* coeffs_;
  int cell_ = -1;
  detail::CellGeometry geom_;
  std::array<double, 3> grad_{0, 0, 0};
};

inline DiscreteFluxView flux_view(const SplsSolution& sol, const BrokenVectorP1Space& W,
                                  const Coefficient& A) {
  if (sol.trial == TrialMode::Projection) return DiscreteFluxView(W, A, sol.gamma_p);
  return DiscreteFluxView(*W.mesh, A, sol.p_potential);
}

// || sigma - p_h || in the weighted norm int a^{-1} |.|^2, accumulated by
// cellwise quadrature against the exact flux sigma.
inline double flux_error(
    const Coefficient& A,
    const std::function<std::array<double, 3>(int, const std::array<double, 3>&)>& exact,
    DiscreteFluxView& ph, int quad_degree) {
  const Mesh& m = ph.mesh();
  const QuadratureRule rule = simplex_quadrature(m.dim, quad_degree);
  const int k = m.verts_per_cell();
  double err2 = 0;
  for (int c = 0; c < m.n_cells(); ++c) {
    const auto g = detail::cell_geometry(m, c);
    ph.set_cell(c);
    double cell2 = 0;
    for (int q = 0; q < rule.size(); ++q) {
      const auto x = g.point(m.dim, k, rule.points[q]);
      const auto s = exact(m.tags[c], x);
      const auto p = ph(rule.points[q]);
      double d2 = 0;
      for (int d = 0; d < m.dim; ++d) d2 += (s[d] - p[d]) * (s[d] - p[d]);
      cell2 += rule.weights[q] * d2 / A(m.tags[c], x);
    }
    err2 += cell2 * g.vol;
  }
  return std::sqrt(err2);
}

// log2 ratios of consecutive errors; the first entry is 0 by convention.
inline std::vector<double> convergence_rates(const std::vector<double>& errors) {
  std::vector<double> rates(errors.size(), 0.0);
  for (size_t i = 1; i < errors.size(); ++i) {
    if (errors[i - 1] > 0 && errors[i] > 0)
      rates[i] = std::log2(errors[i - 1] / errors[i]);
  }
  return rates;
}

// Nodal interpolant of g on the boundary, zero at interior vertices. Used to
// seed the iteration when the solution does not vanish on the boundary.
inline Vec boundary_interpolant(
    const Mesh& m, const std::function<double(const std::array<double, 3>&)>& g) {
  Vec out = Vec::Zero(m.n_vertices());
  for (int v = 0; v < m.n_vertices(); ++v)
    if (m.on_boundary[v]) out[v] = g(m.vertices[v]);
  return out;
}

// Stability constants of the discrete pair, computed densely:
//   m_h    smallest singular value of the projected coupling relative to the
//          test norm (inf-sup of the projected trial space),
//   m_h0   same with the unprojected trial space a grad(V_h),
//   c_hat  coercivity of the projected Gram relative to the weighted
//          stiffness, so that m_h >= c_hat * m_h0 must hold.
struct StabilityEstimates {
  double m_h = 0;
  double m_h0 = 0;
  double c_hat = 0;
};

inline StabilityEstimates estimate_stability(const AssembledSystem& sys,
                                             const SystemOperators& ops,
                                             int max_test_dofs = 2000) {
  const int n = sys.n_free;
  if (n > max_test_dofs)
    throw std::runtime_error("estimate_stability: test space too large for dense solve");
  Eigen::MatrixXd T(n, n);
  {
    const Eigen::MatrixXd Gd = Eigen::MatrixXd(sys.G);
    Eigen::MatrixXd X(sys.n_trial, n);
    for (int j = 0; j < n; ++j) X.col(j) = ops.MA_solve.solve(Gd.col(j));
    T = Gd.transpose() * X;
    T = 0.5 * (T + T.transpose()).eval();
  }
  const Eigen::MatrixXd Sd = Eigen::MatrixXd(sys.S);
  const Eigen::MatrixXd SAd = Eigen::MatrixXd(sys.S_A);
  StabilityEstimates est;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  eig.compute(T, Sd, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  est.m_h = std::sqrt(std::max(0.0, eig.eigenvalues().minCoeff()));
  eig.compute(SAd, Sd, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  est.m_h0 = std::sqrt(std::max(0.0, eig.eigenvalues().minCoeff()));
  eig.compute(T, SAd, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  est.c_hat = std::sqrt(std::max(0.0, eig.eigenvalues().minCoeff()));
  return est;
}

}  // namespace spls
