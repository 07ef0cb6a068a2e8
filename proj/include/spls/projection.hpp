#pragma once

#include "spls/assembly.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include <stdexcept>
#include <string>

namespace spls {

namespace detail {

// Sparse SPD solve wrapper: Cholesky with one step of iterative refinement,
// falling back to conjugate gradients when the factorization fails or the
// refined residual is still too large.
class SpdSolver {
 public:
  void compute(const SpMat& M, std::string name, bool force_cg = false,
               double rel_tol = 1e-12) {
    mat_ = &M;
    name_ = std::move(name);
    rel_tol_ = rel_tol;
    use_cg_ = force_cg;
    if (!use_cg_) {
      llt_.compute(M);
      if (llt_.info() != Eigen::Success) use_cg_ = true;
    }
    if (use_cg_) {
      cg_.setTolerance(1e-14);
      cg_.setMaxIterations(40 * M.rows() + 100);
      cg_.compute(M);
      if (cg_.info() != Eigen::Success)
        throw std::runtime_error("inner solve (" + name_ + "): setup failed");
    }
  }

  Vec solve(const Vec& rhs) const {
    const double rnorm = rhs.norm();
    if (rnorm == 0) return Vec::Zero(rhs.size());
    Vec x;
    if (!use_cg_) {
      x = llt_.solve(rhs);
      Vec r = rhs - (*mat_) * x;
      if (r.norm() > rel_tol_ * rnorm) {
        x += llt_.solve(r);
        r = rhs - (*mat_) * x;
      }
      if (r.norm() <= rel_tol_ * rnorm) return x;
      // fall through to CG, warm started
      Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper> cg;
      cg.setTolerance(1e-14);
      cg.setMaxIterations(40 * mat_->rows() + 100);
      cg.compute(*mat_);
      x = cg.solveWithGuess(rhs, x);
      r = rhs - (*mat_) * x;
      if (r.norm() > rel_tol_ * rnorm)
        throw std::runtime_error("inner solve (" + name_ + "): residual " +
                                 std::to_string(r.norm() / rnorm));
      return x;
    }
    x = cg_.solve(rhs);
    const Vec r = rhs - (*mat_) * x;
    if (r.norm() > rel_tol_ * rnorm)
      throw std::runtime_error("inner solve (" + name_ + "): residual " +
                               std::to_string(r.norm() / rnorm));
    return x;
  }

 private:
  const SpMat* mat_ = nullptr;
  std::string name_;
  double rel_tol_ = 1e-12;
  bool use_cg_ = false;
  Eigen::SimplicialLLT<SpMat> llt_;
  Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper> cg_;
};

}  // namespace detail

// Factorized operators shared by the outer iteration. The projection onto
// the trial space and the test-space stiffness solves reuse these
// factorizations across all iterations.
struct SystemOperators {
  const AssembledSystem* sys = nullptr;
  detail::SpdSolver S_solve;    // plain stiffness, free dofs
  detail::SpdSolver MA_solve;   // trial Gram matrix

  SystemOperators() = default;
  explicit SystemOperators(const AssembledSystem& s, bool force_cg = false,
                           double inner_tol = 1e-12) {
    compute(s, force_cg, inner_tol);
  }
  void compute(const AssembledSystem& s, bool force_cg = false,
               double inner_tol = 1e-12) {
    sys = &s;
    S_solve.compute(s.S, "stiffness", force_cg, inner_tol);
    MA_solve.compute(s.M_A, "trial gram", force_cg, inner_tol);
  }

  // Weighted projection of the gradient-type field induced by the nodal
  // vector v (over free dofs): gamma solves M_A gamma = G v, i.e. the
  // returned coefficients represent the closest trial function to A grad(v).
  Vec apply_Rh(const Vec& v) const { return MA_solve.solve(sys->G * v); }

  // Same, but v ranges over every vertex so boundary data participates.
  Vec apply_Rh_full(const Vec& v_full) const {
    return MA_solve.solve(sys->G_full * v_full);
  }

  // Trial-space inner product (p, q) in coefficient form.
  double h_inner(const Vec& gamma_p, const Vec& gamma_q) const {
    return gamma_p.dot(sys->M_A * gamma_q);
  }
};

}  // namespace spls
