#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "cs3/poly_form.hpp"

namespace cs3 {

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre recurrence. Spectrally accurate for the trigonometric-polynomial
/// integrands that arise here.
struct QuadratureRule {
  int nodes_per_axis = 32;
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;  // sum to 2

  explicit QuadratureRule(int n = 32) : nodes_per_axis(n), nodes(n), weights(n) {
    for (int i = 0; i < n; ++i) {
      // Chebyshev initial guess for the i-th root of P_n.
      double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double p0 = 0.0, p1 = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        p0 = 1.0;
        p1 = t;
        for (int k = 2; k <= n; ++k) {
          double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        double deriv = n * (t * p1 - p0) / (t * t - 1.0);
        double step = p1 / deriv;
        t -= step;
        if (std::fabs(step) < 1e-15) break;
      }
      // Recompute the derivative at the converged node for the weight.
      p0 = 1.0;
      p1 = t;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      double deriv = n * (t * p1 - p0) / (t * t - 1.0);
      nodes[i] = t;
      weights[i] = 2.0 / ((1.0 - t * t) * deriv * deriv);
    }
  }
};

/// Full-measure parameterization of a 3-manifold embedded in R^N with
/// analytic tangent maps. The orientation sign fixes the sign convention of
/// reported integrals (it is part of the chart, not of the integrand).
struct Chart {
  std::string name;
  int ambient_dim = 0;
  std::array<double, 3> lo{}, hi{};
  double orientation_sign = 1.0;
  // embed(u, x): x has ambient_dim entries.
  std::function<void(const double*, double*)> embed;
  // tangents(u, t): t is row-major 3 x ambient_dim (rows du, dv, dw).
  std::function<void(const double*, double*)> tangents;
  // Distance from the target manifold, for chart validation.
  std::function<double(const double*)> manifold_residual;
};

/// Hyperspherical chart of the unit S^3 in R^4 over (0,pi)x(0,pi)x(0,2pi).
/// The orientation sign is chosen so that integrating xi^rho^kappa (the
/// volume form for the inwards orientation) gives +2 pi^2.
inline Chart s3_chart() {
  Chart c;
  c.name = "s3-hyperspherical";
  c.ambient_dim = 4;
  c.lo = {0.0, 0.0, 0.0};
  c.hi = {std::numbers::pi, std::numbers::pi, 2.0 * std::numbers::pi};
  c.orientation_sign = -1.0;
  c.embed = [](const double* u, double* x) {
    const double chi = u[0], theta = u[1], phi = u[2];
    x[0] = std::cos(chi);
    x[1] = std::sin(chi) * std::cos(theta);
    x[2] = std::sin(chi) * std::sin(theta) * std::cos(phi);
    x[3] = std::sin(chi) * std::sin(theta) * std::sin(phi);
  };
  c.tangents = [](const double* u, double* t) {
    const double chi = u[0], theta = u[1], phi = u[2];
    const double sc = std::sin(chi), cc = std::cos(chi);
    const double st = std::sin(theta), ct = std::cos(theta);
    const double sp = std::sin(phi), cp = std::cos(phi);
    // d/d chi
    t[0] = -sc;
    t[1] = cc * ct;
    t[2] = cc * st * cp;
    t[3] = cc * st * sp;
    // d/d theta
    t[4] = 0.0;
    t[5] = -sc * st;
    t[6] = sc * ct * cp;
    t[7] = sc * ct * sp;
    // d/d phi
    t[8] = 0.0;
    t[9] = 0.0;
    t[10] = -sc * st * sp;
    t[11] = sc * st * cp;
  };
  c.manifold_residual = [](const double* x) {
    return std::fabs(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3] - 1.0);
  };
  return c;
}

namespace detail {

inline void rot_z(double t, double m[3][3], bool derivative) {
  const double c = std::cos(t), s = std::sin(t);
  double r[3][3] = {{c, -s, 0}, {s, c, 0}, {0, 0, derivative ? 0.0 : 1.0}};
  if (derivative) {
    r[0][0] = -s;
    r[0][1] = -c;
    r[1][0] = c;
    r[1][1] = -s;
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = r[i][j];
}

inline void rot_y(double t, double m[3][3], bool derivative) {
  const double c = std::cos(t), s = std::sin(t);
  double r[3][3] = {{c, 0, s}, {0, derivative ? 0.0 : 1.0, 0}, {-s, 0, c}};
  if (derivative) {
    r[0][0] = -s;
    r[0][2] = c;
    r[2][0] = -c;
    r[2][2] = -s;
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m[i][j] = r[i][j];
}

inline void mat3_mul(const double a[3][3], const double b[3][3], double out[3][3]) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      out[i][j] = 0.0;
      for (int k = 0; k < 3; ++k) out[i][j] += a[i][k] * b[k][j];
    }
}

}  // namespace detail

/// Z-Y-Z Euler chart of SO(3) embedded in R^9 (row-major), over
/// (0,2pi)x(0,pi)x(0,2pi). Orientation fixed so that the left-invariant
/// volume omega1^omega2^psi integrates to +8 pi^2.
inline Chart so3_chart() {
  Chart c;
  c.name = "so3-euler-zyz";
  c.ambient_dim = 9;
  c.lo = {0.0, 0.0, 0.0};
  c.hi = {2.0 * std::numbers::pi, std::numbers::pi, 2.0 * std::numbers::pi};
  c.orientation_sign = -1.0;
  c.embed = [](const double* u, double* x) {
    double za[3][3], yb[3][3], zg[3][3], tmp[3][3], r[3][3];
    detail::rot_z(u[0], za, false);
    detail::rot_y(u[1], yb, false);
    detail::rot_z(u[2], zg, false);
    detail::mat3_mul(za, yb, tmp);
    detail::mat3_mul(tmp, zg, r);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) x[3 * i + j] = r[i][j];
  };
  c.tangents = [](const double* u, double* t) {
    double za[3][3], yb[3][3], zg[3][3], dza[3][3], dyb[3][3], dzg[3][3];
    detail::rot_z(u[0], za, false);
    detail::rot_y(u[1], yb, false);
    detail::rot_z(u[2], zg, false);
    detail::rot_z(u[0], dza, true);
    detail::rot_y(u[1], dyb, true);
    detail::rot_z(u[2], dzg, true);
    double tmp[3][3], d[3][3];
    auto store = [&](int row, const double m[3][3]) {
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) t[9 * row + 3 * i + j] = m[i][j];
    };
    detail::mat3_mul(dza, yb, tmp);
    detail::mat3_mul(tmp, zg, d);
    store(0, d);
    detail::mat3_mul(za, dyb, tmp);
    detail::mat3_mul(tmp, zg, d);
    store(1, d);
    detail::mat3_mul(za, yb, tmp);
    detail::mat3_mul(tmp, dzg, d);
    store(2, d);
  };
  c.manifold_residual = [](const double* x) {
    double worst = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double dot = 0.0;
        for (int k = 0; k < 3; ++k) dot += x[3 * k + i] * x[3 * k + j];
        worst = std::max(worst, std::fabs(dot - (i == j ? 1.0 : 0.0)));
      }
    double det = x[0] * (x[4] * x[8] - x[5] * x[7]) - x[1] * (x[3] * x[8] - x[5] * x[6]) +
                 x[2] * (x[3] * x[7] - x[4] * x[6]);
    return std::max(worst, std::fabs(det - 1.0));
  };
  return c;
}

/// Pointwise 3-form evaluator: value at embedded point x on the chart's
/// three tangent vectors (row-major 3 x ambient_dim).
using Integrand3 = std::function<double(const double* x, const double* tangents)>;

inline Integrand3 make_integrand(const PolyForm& form, double scale = 1.0) {
  return [form, scale](const double* x, const double* t) {
    return scale * form.value_on(x, t);
  };
}

inline Integrand3 make_integrand(const ScaledPolyForm& form) {
  return make_integrand(form.form, form.scale.to_double());
}

/// Numeric Chern-Simons of a matrix of polynomial 1-forms against the trace
/// pairing: evaluates tr(theta ^ d theta) + (2/3) tr(theta^3) pointwise from
/// the symbolic entries without expanding the trace symbolically.
inline Integrand3 matrix_cs_integrand(const MatrixPolyForm& theta, const PiScalar& scale) {
  const int n = theta.size;
  std::vector<PolyForm> dtheta;
  dtheta.reserve(n * n);
  for (const auto& e : theta.entries) dtheta.push_back(exterior_derivative_poly(e));
  const double s = scale.to_double();
  const int nv = theta.num_vars();
  if (nv > 16) throw Error("matrix_cs_integrand supports at most 16 ambient variables");
  return [n, nv, s, theta, dtheta](const double* x, const double* t) {
    // A[a] = theta(V_a), B[a<b] = dtheta(V_a, V_b), as dense matrices.
    std::vector<double> a(3 * n * n), b(3 * n * n);
    auto pair_slot = [](int i, int j) { return i + j - 1; };  // (0,1)->0 (0,2)->1 (1,2)->2
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const PolyForm& e = theta.at(i, j);
        for (int v = 0; v < 3; ++v) a[v * n * n + i * n + j] = e.value_on(x, t + v * nv);
        const PolyForm& de = dtheta[i * n + j];
        for (int p = 0; p < 3; ++p)
          for (int q = p + 1; q < 3; ++q) {
            double pairt[2 * 16];
            for (int v = 0; v < nv; ++v) {
              pairt[v] = t[p * nv + v];
              pairt[nv + v] = t[q * nv + v];
            }
            b[pair_slot(p, q) * n * n + i * n + j] = de.value_on(x, pairt);
          }
      }
    auto tr_ab = [n](const double* m1, const double* m2) {
      double tr = 0.0;
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) tr += m1[i * n + k] * m2[k * n + i];
      return tr;
    };
    auto tr_abc = [n](const double* m1, const double* m2, const double* m3) {
      double tr = 0.0;
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
          double ik = 0.0;
          for (int l = 0; l < n; ++l) ik += m2[k * n + l] * m3[l * n + i];
          tr += m1[i * n + k] * ik;
        }
      return tr;
    };
    const double* a0 = a.data();
    const double* a1 = a.data() + n * n;
    const double* a2 = a.data() + 2 * n * n;
    const double* b01 = b.data();
    const double* b02 = b.data() + n * n;
    const double* b12 = b.data() + 2 * n * n;
    double quad = tr_ab(a0, b12) - tr_ab(a1, b02) + tr_ab(a2, b01);
    double cubic = 2.0 * (tr_abc(a0, a1, a2) - tr_abc(a1, a0, a2));
    return s * (quad + cubic);
  };
}

/// Deterministic pairwise reduction; the summation order is fixed by the
/// grid traversal regardless of any parallel evaluation.
inline double pairwise_sum(std::vector<double>& v) {
  if (v.empty()) return 0.0;
  std::size_t n = v.size();
  while (n > 1) {
    std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i + half < n; ++i) v[i] += v[i + half];
    n = half;
  }
  return v[0];
}

/// Tensor-product Gauss-Legendre integral of a 3-form over a chart:
/// orientation_sign * sum w_i f(embed(u_i))(du, dv, dw).
inline double integrate_threeform(const Integrand3& f, const Chart& chart,
                                  const QuadratureRule& rule) {
  const int n = rule.nodes_per_axis;
  std::array<std::vector<double>, 3> axis_nodes, axis_weights;
  for (int ax = 0; ax < 3; ++ax) {
    axis_nodes[ax].resize(n);
    axis_weights[ax].resize(n);
    const double mid = 0.5 * (chart.hi[ax] + chart.lo[ax]);
    const double half = 0.5 * (chart.hi[ax] - chart.lo[ax]);
    for (int i = 0; i < n; ++i) {
      axis_nodes[ax][i] = mid + half * rule.nodes[i];
      axis_weights[ax][i] = half * rule.weights[i];
    }
  }
  std::vector<double> contributions;
  contributions.reserve(static_cast<std::size_t>(n) * n * n);
  std::vector<double> x(chart.ambient_dim), t(3 * chart.ambient_dim);
  double u[3];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        u[0] = axis_nodes[0][i];
        u[1] = axis_nodes[1][j];
        u[2] = axis_nodes[2][k];
        chart.embed(u, x.data());
        chart.tangents(u, t.data());
        double val = f(x.data(), t.data());
        if (!std::isfinite(val)) throw EvaluationError("integrand returned a non-finite value");
        contributions.push_back(axis_weights[0][i] * axis_weights[1][j] * axis_weights[2][k] *
                                val);
      }
  return chart.orientation_sign * pairwise_sum(contributions);
}

struct RefinementResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::vector<double> sequence;
};

/// Integral on a doubling sequence of grids; the error estimate is the
/// difference of the finest two levels. Throws NonConvergent when the last
/// difference exceeds the previous one.
inline RefinementResult grid_refinement_estimate(const Integrand3& f, const Chart& chart,
                                                 int base_nodes, int levels) {
  if (levels < 2) throw Error("grid_refinement_estimate needs at least two levels");
  RefinementResult out;
  int n = base_nodes;
  for (int l = 0; l < levels; ++l, n *= 2)
    out.sequence.push_back(integrate_threeform(f, chart, QuadratureRule(n)));
  out.value = out.sequence.back();
  const std::size_t L = out.sequence.size();
  out.error_estimate = std::fabs(out.sequence[L - 1] - out.sequence[L - 2]);
  if (L >= 3) {
    double prev = std::fabs(out.sequence[L - 2] - out.sequence[L - 3]);
    if (out.error_estimate > prev)
      throw NonConvergent("refinement differences are increasing");
  }
  return out;
}

}  // namespace cs3
