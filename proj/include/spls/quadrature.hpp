#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace spls {

// Quadrature rule on the reference simplex. Points are stored as barycentric
// coordinates (dim+1 entries per point); weights are normalized so they sum
// to one, i.e. integral over a cell is approximated by
//   |cell| * sum_q w_q f(x_q).
struct QuadratureRule {
  int dim = 2;
  int degree = 1;
  std::vector<std::array<double, 4>> points;  // barycentric, dim+1 entries used
  std::vector<double> weights;

  int size() const { return static_cast<int>(points.size()); }
};

namespace detail {

// Gauss nodes/weights for int_0^1 (1-t)^alpha f(t) dt, exact for polynomials
// of degree <= 2n-1. Golub-Welsch on the Jacobi(alpha, 0) recurrence.
inline void gauss_jacobi01(int n, double alpha, std::vector<double>& t,
                           std::vector<double>& w) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    if (k == 0) {
      J(k, k) = -alpha / (alpha + 2.0);
    } else {
      const double s = 2.0 * k + alpha;
      J(k, k) = -(alpha * alpha) / (s * (s + 2.0));
    }
  }
  for (int k = 1; k < n; ++k) {
    const double s = 2.0 * k + alpha;
    const double b2 = 4.0 * k * k * (k + alpha) * (k + alpha) /
                      (s * s * (s + 1.0) * (s - 1.0));
    J(k, k - 1) = J(k - 1, k) = std::sqrt(b2);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("gauss_jacobi01: eigensolver failed");

  // Total mass of (1-x)^alpha on [-1,1]; the [-1,1] -> [0,1] map divides the
  // weights by 2^(alpha+1).
  const double mu0 = std::pow(2.0, alpha + 1.0) / (alpha + 1.0);
  t.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    t[i] = 0.5 * (1.0 + es.eigenvalues()(i));
    const double v0 = es.eigenvectors()(0, i);
    w[i] = mu0 * v0 * v0 / std::pow(2.0, alpha + 1.0);
  }
}

}  // namespace detail

// Conical-product rule on the reference triangle/tetrahedron, exact for all
// polynomials of total degree <= degree. All weights are positive.
inline QuadratureRule simplex_quadrature(int dim, int degree) {
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("simplex_quadrature: dim must be 2 or 3");
  if (degree < 1 || degree > 6)
    throw std::invalid_argument(
        "simplex_quadrature: unsupported degree (expected 1..6)");

  const int n = (degree + 2) / 2;  // ceil((degree+1)/2)
  std::vector<double> t0, w0, t1, w1, t2, w2;
  detail::gauss_jacobi01(n, 0.0, t0, w0);  // plain Gauss-Legendre on [0,1]
  detail::gauss_jacobi01(n, 1.0, t1, w1);
  if (dim == 3) detail::gauss_jacobi01(n, 2.0, t2, w2);

  QuadratureRule rule;
  rule.dim = dim;
  rule.degree = degree;
  const double volume = (dim == 2) ? 0.5 : 1.0 / 6.0;

  if (dim == 2) {
    // x = xi, y = (1-xi) eta with weight (1-xi); exactness carries over from
    // the 1d rules.
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double x = t1[i];
        const double y = (1.0 - t1[i]) * t0[j];
        rule.points.push_back({1.0 - x - y, x, y, 0.0});
        rule.weights.push_back(w1[i] * w0[j] / volume);
      }
    }
  } else {
    // x = xi, y = (1-xi) eta, z = (1-xi)(1-eta) zeta, weight (1-xi)^2 (1-eta).
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          const double x = t2[i];
          const double y = (1.0 - t2[i]) * t1[j];
          const double z = (1.0 - t2[i]) * (1.0 - t1[j]) * t0[k];
          rule.points.push_back({1.0 - x - y - z, x, y, z});
          rule.weights.push_back(w2[i] * w1[j] * w0[k] / volume);
        }
      }
    }
  }
  return rule;
}

}  // namespace spls
