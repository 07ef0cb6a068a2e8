#pragma once

#include "spls/coefficient.hpp"
#include "spls/mesh.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace spls {

// A complete benchmark instance: domain builder, diffusion coefficient,
// source term and (when known) the exact solution and its flux a grad(u).
struct ProblemSpec {
  std::string name;
  int dim = 2;
  int default_initial_n = 4;
  std::function<Mesh(int n)> initial_mesh;
  Coefficient A;
  std::function<double(const std::array<double, 3>&)> f;
  std::function<double(const std::array<double, 3>&)> exact_u;
  // Exact flux a grad(u); the tag picks the subdomain branch when the
  // point sits on an interface.
  std::function<std::array<double, 3>(int tag, const std::array<double, 3>&)> exact_flux;
  bool nonzero_boundary = false;
  bool has_singular_point = false;
  std::array<double, 3> singular_point{0, 0, 0};
  int quad_bilinear = 2;  // enough for piecewise constant a
  int quad_load = 5;
  int quad_error = 5;
};

// Exponent of the leading corner singularity r^lambda for a checkerboard-type
// interface with contrast k at the origin of the four-subdomain layout used
// here (one quadrant at k, the rest at 1).
inline double singular_exponent(double k) {
  return (4.0 / M_PI) * std::atan(std::sqrt((3.0 + k) / (1.0 + 3.0 * k)));
}

// Piecewise smooth solution on the unit square with the coefficient equal to
// c on two diagonally opposite quadrants and 1 elsewhere. The flux
// a grad(u) = 2 pi (cos(2 pi x) sin(2 pi y), sin(2 pi x) cos(2 pi y)) is
// globally smooth while u itself scales by 1/a per quadrant. The default
// center-symmetric triangulation shares the symmetry of the coefficient and
// reproduces the published benchmark columns for this problem.
inline ProblemSpec make_intersecting_problem(
    double c, DiagonalPattern pattern = DiagonalPattern::CenterSymmetric) {
  if (c <= 0) throw std::invalid_argument("intersecting: c must be positive");
  ProblemSpec p;
  p.name = "intersecting";
  p.dim = 2;
  p.default_initial_n = 4;
  p.initial_mesh = [pattern](int n) {
    return unit_square_mesh(n, InterfaceKind::CrossAtHalf, pattern);
  };
  p.A = make_constant_coefficient({{1, 1.0}, {2, c}, {3, c}, {4, 1.0}});
  const double twopi = 2.0 * M_PI;
  p.f = [twopi](const std::array<double, 3>& x) {
    return 2.0 * twopi * twopi * std::sin(twopi * x[0]) * std::sin(twopi * x[1]);
  };
  p.exact_u = [c, twopi](const std::array<double, 3>& x) {
    const double a = ((x[0] > 0.5) == (x[1] > 0.5)) ? 1.0 : c;
    return std::sin(twopi * x[0]) * std::sin(twopi * x[1]) / a;
  };
  p.exact_flux = [twopi](int, const std::array<double, 3>& x) {
    return std::array<double, 3>{twopi * std::cos(twopi * x[0]) * std::sin(twopi * x[1]),
                                 twopi * std::sin(twopi * x[0]) * std::cos(twopi * x[1]),
                                 0.0};
  };
  return p;
}

namespace detail {

struct SingularData {
  double k, lam, b, t;  // t = lam * pi / 4
  // angular factor and its derivative, branch chosen by quadrant
  double mu(double theta, bool in_q1) const {
    if (in_q1) return std::cos(lam * (theta - M_PI / 4.0));
    const double s = std::abs(theta - M_PI / 4.0);
    return b * std::cos(lam * (M_PI - s));
  }
  double dmu(double theta, bool in_q1) const {
    if (in_q1) return -lam * std::sin(lam * (theta - M_PI / 4.0));
    const double s = std::abs(theta - M_PI / 4.0);
    const double sgn = theta >= M_PI / 4.0 ? 1.0 : -1.0;
    return b * lam * std::sin(lam * (M_PI - s)) * sgn;
  }
};

inline SingularData singular_data(double k) {
  SingularData d;
  d.k = k;
  d.lam = singular_exponent(k);
  d.t = d.lam * M_PI / 4.0;
  d.b = -k * std::sin(d.t) / std::sin(3.0 * d.t);
  return d;
}

inline double angle_of(const std::array<double, 3>& x) {
  double th = std::atan2(x[1], x[0]);
  if (th < 0) th += 2.0 * M_PI;
  return th;
}

}  // namespace detail

// Corner singularity on (-1,1)^2: coefficient k on the open first quadrant,
// 1 elsewhere. Exact solution r^lambda (1-r)^2 mu(theta) with the angular
// factor matched so that both the trace and the conormal flux are continuous
// across the two interface rays. The solution does not vanish on the outer
// boundary, so runs carry boundary data.
inline ProblemSpec make_singular_problem(
    double k, DiagonalPattern pattern = DiagonalPattern::Uniform) {
  if (k <= 0) throw std::invalid_argument("singular: k must be positive");
  ProblemSpec p;
  p.name = "singular";
  p.dim = 2;
  p.default_initial_n = 4;
  p.initial_mesh = [pattern](int n) { return square2_mesh(n, pattern); };
  p.A = make_constant_coefficient({{1, 1.0}, {2, k}});
  const auto d = detail::singular_data(k);
  p.has_singular_point = true;
  p.singular_point = {0, 0, 0};
  p.nonzero_boundary = true;
  p.quad_error = 6;
  auto in_q1 = [](const std::array<double, 3>& x) { return x[0] > 0 && x[1] > 0; };
  p.f = [d, in_q1](const std::array<double, 3>& x) {
    const double r = std::hypot(x[0], x[1]);
    if (r < 1e-300) return 0.0;
    const double a = in_q1(x) ? d.k : 1.0;
    const double mu = d.mu(detail::angle_of(x), in_q1(x));
    return a * mu * std::pow(r, d.lam - 1.0) *
           (2.0 * (2.0 * d.lam + 1.0) - (4.0 * d.lam + 4.0) * r);
  };
  p.exact_u = [d, in_q1](const std::array<double, 3>& x) {
    const double r = std::hypot(x[0], x[1]);
    if (r < 1e-300) return 0.0;
    const double om = 1.0 - r;
    return std::pow(r, d.lam) * om * om * d.mu(detail::angle_of(x), in_q1(x));
  };
  p.exact_flux = [d, in_q1](int tag, const std::array<double, 3>& x) {
    const double r = std::hypot(x[0], x[1]);
    if (r < 1e-300) return std::array<double, 3>{0, 0, 0};
    const bool q1 = tag > 0 ? tag == 2 : in_q1(x);
    const double a = q1 ? d.k : 1.0;
    const double th = detail::angle_of(x);
    const double mu = d.mu(th, q1), dmu = d.dmu(th, q1);
    const double om = 1.0 - r;
    const double ur = std::pow(r, d.lam - 1.0) * om * (d.lam * om - 2.0 * r) * mu;
    const double ut = std::pow(r, d.lam - 1.0) * om * om * dmu;  // (1/r) du/dtheta
    const double cth = x[0] / r, sth = x[1] / r;
    return std::array<double, 3>{a * (ur * cth - ut * sth), a * (ur * sth + ut * cth),
                                 0.0};
  };
  return p;
}

// 3D interface problem on the unit cube, coefficient 1 for x < 1/2 and k for
// x > 1/2, with a polynomial solution vanishing on the boundary whose conormal
// flux is continuous across the interface plane.
inline ProblemSpec make_cube_problem(double k) {
  if (k <= 0) throw std::invalid_argument("cube: k must be positive");
  ProblemSpec p;
  p.name = "cube";
  p.dim = 3;
  p.default_initial_n = 2;
  p.initial_mesh = [](int n) { return unit_cube_mesh(n); };
  p.A = make_constant_coefficient({{1, 1.0}, {2, k}});
  auto left = [](const std::array<double, 3>& x) { return x[0] < 0.5; };
  p.f = [k, left](const std::array<double, 3>& x) {
    const double Y = x[1] * x[1] - x[1];
    if (left(x)) {
      const double Z = x[2] * x[2] - x[2];
      const double P = x[0] * x[0] - 0.5 * x[0];
      return -2.0 * k * (Y * Z + P * (Y + Z));
    }
    const double Zt = x[2] - x[2] * x[2];
    const double Xt = x[0] * x[0] - 1.5 * x[0] + 0.5;
    return -2.0 * k * (Y * Zt + Xt * Zt - Xt * Y);
  };
  p.exact_u = [k, left](const std::array<double, 3>& x) {
    const double Y = x[1] * x[1] - x[1];
    if (left(x)) return k * (x[0] * x[0] - 0.5 * x[0]) * Y * (x[2] * x[2] - x[2]);
    return (x[0] - 0.5) * (x[0] - 1.0) * Y * (x[2] - x[2] * x[2]);
  };
  p.exact_flux = [k, left](int tag, const std::array<double, 3>& x) {
    const double Y = x[1] * x[1] - x[1];
    const double dY = 2.0 * x[1] - 1.0;
    const bool is_left = tag > 0 ? tag == 1 : left(x);
    if (is_left) {
      const double P = x[0] * x[0] - 0.5 * x[0];
      const double Z = x[2] * x[2] - x[2];
      return std::array<double, 3>{k * (2.0 * x[0] - 0.5) * Y * Z, k * P * dY * Z,
                                   k * P * Y * (2.0 * x[2] - 1.0)};
    }
    const double Xt = x[0] * x[0] - 1.5 * x[0] + 0.5;
    const double Zt = x[2] - x[2] * x[2];
    return std::array<double, 3>{k * (2.0 * x[0] - 1.5) * Y * Zt, k * Xt * dY * Zt,
                                 k * Xt * Y * (1.0 - 2.0 * x[2])};
  };
  return p;
}

namespace detail {

// w(t) = 1/(t^3 - t) on (0,1) and derivatives of exp(w): the boundary factor
// of the oscillatory benchmark decays to zero with all derivatives.
struct BumpFactor {
  double E = 0, w = 0, w1 = 0, w2 = 0;  // exp(w), w, w', w''
};

inline BumpFactor bump_factor(double t) {
  BumpFactor b;
  const double den = t * t * t - t;
  if (den == 0) return b;  // boundary point, factor vanishes
  b.w = 1.0 / den;
  if (b.w < -700.0) return b;  // exp underflow, treat as exact zero
  const double q = 3.0 * t * t - 1.0;
  b.w1 = -q * b.w * b.w;
  b.w2 = -6.0 * t * b.w * b.w + 2.0 * q * q * b.w * b.w * b.w;
  b.E = std::exp(b.w);
  return b;
}

}  // namespace detail

// Smooth problem with a highly oscillatory coefficient 1/(4 + P sin(2 pi x /
// eps) + P sin(2 pi y / eps)) and a bump-like exact solution vanishing to all
// orders on the boundary of the unit square.
inline ProblemSpec make_oscillatory_problem(
    double eps, double P = 1.8, DiagonalPattern pattern = DiagonalPattern::Uniform) {
  if (eps <= 0) throw std::invalid_argument("oscillatory: eps must be positive");
  if (P <= 0 || P >= 2) throw std::invalid_argument("oscillatory: need 0 < P < 2");
  ProblemSpec p;
  p.name = "oscillatory";
  p.dim = 2;
  p.default_initial_n = 4;
  p.initial_mesh = [pattern](int n) {
    return unit_square_mesh(n, InterfaceKind::None, pattern);
  };
  const double twopi_eps = 2.0 * M_PI / eps;
  auto denom = [P, twopi_eps](const std::array<double, 3>& x) {
    return 4.0 + P * (std::sin(twopi_eps * x[0]) + std::sin(twopi_eps * x[1]));
  };
  p.A.value = [denom](int, const std::array<double, 3>& x) { return 1.0 / denom(x); };
  p.A.constant_per_tag = false;
  p.A.a_min = 1.0 / (4.0 + 2.0 * P);
  p.A.a_max = 1.0 / (4.0 - 2.0 * P);
  p.quad_bilinear = 5;
  const double C = 0.5 * std::sqrt(4.0 - P * P);
  p.exact_u = [C](const std::array<double, 3>& x) {
    const auto bx = detail::bump_factor(x[0]);
    const auto by = detail::bump_factor(x[1]);
    return C * (x[0] * x[0] + x[1] * x[1]) * bx.E * by.E;
  };
  // grad(u) and laplacian(u) in one pass
  auto derivs = [C](const std::array<double, 3>& x, double& u, double& ux, double& uy,
                    double& lap) {
    const auto bx = detail::bump_factor(x[0]);
    const auto by = detail::bump_factor(x[1]);
    const double E = bx.E * by.E;
    const double s = x[0] * x[0] + x[1] * x[1];
    u = C * s * E;
    if (E == 0) {
      ux = uy = lap = 0;
      return;
    }
    const double gx = 2.0 * x[0] + s * bx.w1;
    const double gy = 2.0 * x[1] + s * by.w1;
    ux = C * E * gx;
    uy = C * E * gy;
    const double uxx = C * E * (2.0 + 2.0 * x[0] * bx.w1 + s * bx.w2 + gx * bx.w1);
    const double uyy = C * E * (2.0 + 2.0 * x[1] * by.w1 + s * by.w2 + gy * by.w1);
    lap = uxx + uyy;
  };
  p.f = [P, twopi_eps, denom, derivs](const std::array<double, 3>& x) {
    double u, ux, uy, lap;
    derivs(x, u, ux, uy, lap);
    const double D = denom(x);
    const double ax = -twopi_eps * P * std::cos(twopi_eps * x[0]) / (D * D);
    const double ay = -twopi_eps * P * std::cos(twopi_eps * x[1]) / (D * D);
    return -(ax * ux + ay * uy + lap / D);
  };
  p.exact_flux = [denom, derivs](int, const std::array<double, 3>& x) {
    double u, ux, uy, lap;
    derivs(x, u, ux, uy, lap);
    const double a = 1.0 / denom(x);
    return std::array<double, 3>{a * ux, a * uy, 0.0};
  };
  return p;
}

}  // namespace spls
