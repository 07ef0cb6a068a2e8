#pragma once

#include "spls/coefficient.hpp"
#include "spls/fespace.hpp"
#include "spls/projection.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace spls {

// Outer iteration flavors: fixed-step ascent, steepest ascent, and the
// conjugate-direction version of the same update.
enum class Variant { U, UG, UCG };

// Which trial space the flux iterates live in: the weighted projection of
// gradient fields onto the broken space, or gradient fields themselves.
enum class TrialMode { Projection, NoProjection };

inline Variant variant_from_string(const std::string& s) {
  if (s == "u") return Variant::U;
  if (s == "ug") return Variant::UG;
  if (s == "ucg") return Variant::UCG;
  throw std::invalid_argument("unknown variant '" + s + "' (expected u, ug or ucg)");
}

inline const char* to_string(Variant v) {
  switch (v) {
    case Variant::U: return "u";
    case Variant::UG: return "ug";
    default: return "ucg";
  }
}

inline TrialMode trial_mode_from_string(const std::string& s) {
  if (s == "projection") return TrialMode::Projection;
  if (s == "no-projection" || s == "noprojection") return TrialMode::NoProjection;
  throw std::invalid_argument("unknown trial mode '" + s +
                              "' (expected projection or no-projection)");
}

inline const char* to_string(TrialMode t) {
  return t == TrialMode::Projection ? "projection" : "no-projection";
}

struct SolverConfig {
  Variant variant = Variant::UCG;
  TrialMode trial = TrialMode::Projection;
  double tol = 1e-10;   // absolute tolerance on the trial-space residual norm
  int max_iter = 500;
  double alpha0 = 0;    // fixed step for the U variant; 0 picks 1/a_max
};

struct SolverReport {
  int iterations = 0;
  bool converged = false;
  double final_residual = 0;
  double final_u_norm = 0;  // |u|_1 of the multiplier, vanishes at convergence
  std::vector<double> residual_history;  // one entry per iterate, initial included
};

struct SplsSolution {
  TrialMode trial = TrialMode::Projection;
  Vec u;            // multiplier over free test dofs
  Vec gamma_p;      // projection mode: flux coefficients in the broken basis
  Vec p_potential;  // no-projection mode: nodal z over all vertices, p = A grad(z)
  SolverReport report;
};

// Saddle point least squares iteration. Each pass updates the flux along a
// direction in the trial space, then refreshes the multiplier u so that
// a0(u, v) = F(v) - b(v, p) holds for every test function. The residual is
// the trial-space representation of A grad(u); its norm drives the stopping
// test, and u itself tends to zero as b(v, p) -> F(v).
//
// g_full (optional, over all vertices) lifts nonzero boundary data: the
// iteration starts from the flux induced by the boundary interpolant instead
// of zero, and updates stay in the zero-boundary trial space.
inline SplsSolution solve_spls(const AssembledSystem& sys, const SystemOperators& ops,
                               const ScalarP1Space& V, const Coefficient& A,
                               const SolverConfig& cfg, const Vec* g_full = nullptr) {
  if (g_full && g_full->size() != sys.n_vertices)
    throw std::invalid_argument("solve_spls: boundary lifting has wrong length");
  if (!(cfg.tol > 0)) throw std::invalid_argument("solve_spls: tol must be positive");
  const bool proj = cfg.trial == TrialMode::Projection;
  const double alpha0 = cfg.alpha0 > 0 ? cfg.alpha0 : 1.0 / A.a_max;

  SplsSolution sol;
  sol.trial = cfg.trial;

  Vec u;            // multiplier
  Vec gp, gq, gd;   // projection mode: flux, residual, direction coefficients
  Vec zp, zd;       // no-projection mode: flux and direction potentials
  double rho = 0;   // squared trial-space residual norm

  if (proj) {
    gp = g_full ? ops.apply_Rh_full(*g_full) : Vec(Vec::Zero(sys.n_trial));
    u = ops.S_solve.solve(sys.F - sys.G.transpose() * gp);
    const Vec t = sys.G * u;
    gq = ops.MA_solve.solve(t);
    rho = std::max(0.0, t.dot(gq));
    gd = gq;
  } else {
    zp = Vec::Zero(sys.n_free);
    Vec rhs = sys.F;
    if (g_full) rhs -= sys.S_A_lift * (*g_full);
    u = ops.S_solve.solve(rhs);
    rho = std::max(0.0, u.dot(sys.S_A * u));
    zd = u;
  }

  auto& hist = sol.report.residual_history;
  hist.push_back(std::sqrt(rho));
  int it = 0;
  while (std::sqrt(rho) > cfg.tol && it < cfg.max_iter) {
    ++it;
    Vec h;
    double alpha;
    if (proj) {
      h = ops.S_solve.solve(-(sys.G.transpose() * gd));
      if (cfg.variant == Variant::U) {
        alpha = alpha0;
      } else {
        const double denom = gq.dot(sys.G * h);
        if (denom == 0)
          throw std::runtime_error("solve_spls: breakdown, flat direction with residual " +
                                   std::to_string(std::sqrt(rho)));
        alpha = -rho / denom;
      }
      gp += alpha * gd;
    } else {
      h = ops.S_solve.solve(-(sys.S_A * zd));
      if (cfg.variant == Variant::U) {
        alpha = alpha0;
      } else {
        const double denom = (sys.S_A * u).dot(h);
        if (denom == 0)
          throw std::runtime_error("solve_spls: breakdown, flat direction with residual " +
                                   std::to_string(std::sqrt(rho)));
        alpha = -rho / denom;
      }
      zp += alpha * zd;
    }
    u += alpha * h;

    double rho_new;
    if (proj) {
      const Vec t = sys.G * u;
      gq = ops.MA_solve.solve(t);
      rho_new = std::max(0.0, t.dot(gq));
    } else {
      rho_new = std::max(0.0, u.dot(sys.S_A * u));
    }
    hist.push_back(std::sqrt(rho_new));
    if (cfg.variant == Variant::UCG && rho > 0) {
      const double beta = rho_new / rho;
      if (proj) gd = gq + beta * gd;
      else zd = u + beta * zd;
    } else {
      if (proj) gd = gq;
      else zd = u;
    }
    rho = rho_new;
  }

  sol.report.iterations = it;
  sol.report.final_residual = std::sqrt(rho);
  sol.report.converged = sol.report.final_residual <= cfg.tol;
  sol.report.final_u_norm = std::sqrt(std::max(0.0, u.dot(sys.S * u)));
  sol.u = u;
  if (proj) {
    sol.gamma_p = gp;
  } else {
    Vec pot = g_full ? Vec(*g_full) : Vec(Vec::Zero(sys.n_vertices));
    for (int v = 0; v < sys.n_vertices; ++v) {
      const int dof = V.vertex_to_dof[v];
      if (dof >= 0) pot[v] += zp[dof];
    }
    sol.p_potential = pot;
  }
  return sol;
}

}  // namespace spls
