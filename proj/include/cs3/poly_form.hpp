#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cs3/coframe.hpp"
#include "cs3/polynomial.hpp"

namespace cs3 {

/// Differential form on ambient R^N with polynomial coefficients; the
/// exterior derivative is exact. Multi-indices over {dx_1 .. dx_N} reuse the
/// coframe bit-mask representation.
class PolyForm {
 public:
  PolyForm(int num_vars = 0, int degree = 0) : num_vars_(num_vars), degree_(degree) {}

  int num_vars() const { return num_vars_; }
  int degree() const { return degree_; }
  const std::map<Mask, Polynomial>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(Mask mask, const Polynomial& p) {
    if (mask_degree(mask) != degree_) throw Error("PolyForm: multi-index length != degree");
    if (p.is_zero()) return;
    auto it = terms_.find(mask);
    if (it == terms_.end()) {
      terms_.emplace(mask, p);
    } else {
      it->second = it->second + p;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  Polynomial coefficient(Mask mask) const {
    auto it = terms_.find(mask);
    return it == terms_.end() ? Polynomial(num_vars_) : it->second;
  }

  static PolyForm zero_form(int num_vars, const Polynomial& p) {
    PolyForm f(num_vars, 0);
    f.add_term(0u, p);
    return f;
  }

  static PolyForm d_coordinate(int num_vars, int v) {
    PolyForm f(num_vars, 1);
    f.add_term(1u << v, Polynomial::constant(num_vars, Rational(1)));
    return f;
  }

  friend PolyForm operator+(const PolyForm& a, const PolyForm& b) {
    PolyForm out = a;
    for (const auto& [m, p] : b.terms_) out.add_term(m, p);
    return out;
  }
  friend PolyForm operator-(const PolyForm& a, const PolyForm& b) {
    PolyForm out = a;
    for (const auto& [m, p] : b.terms_) out.add_term(m, -p);
    return out;
  }
  friend PolyForm operator*(const Rational& s, const PolyForm& a) {
    PolyForm out(a.num_vars_, a.degree_);
    for (const auto& [m, p] : a.terms_) out.add_term(m, s * p);
    return out;
  }
  friend PolyForm operator*(const Polynomial& s, const PolyForm& a) {
    PolyForm out(a.num_vars_, a.degree_);
    for (const auto& [m, p] : a.terms_) out.add_term(m, s * p);
    return out;
  }
  PolyForm operator-() const { return Rational(-1) * *this; }

  friend bool operator==(const PolyForm& a, const PolyForm& b) {
    return a.num_vars_ == b.num_vars_ && a.degree_ == b.degree_ && a.terms_ == b.terms_;
  }

  /// Pointwise value on an ordered tuple of tangent vectors (row-major
  /// tangents[k*num_vars + v]), for degrees up to three.
  double value_on(const double* x, const double* tangents) const {
    double sum = 0.0;
    for (const auto& [mask, p] : terms_) {
      auto idx = mask_indices(mask);
      double minor = 1.0;
      const int n = num_vars_;
      switch (idx.size()) {
        case 0:
          minor = 1.0;
          break;
        case 1:
          minor = tangents[idx[0]];
          break;
        case 2: {
          double a = tangents[idx[0]], b = tangents[idx[1]];
          double c = tangents[n + idx[0]], d = tangents[n + idx[1]];
          minor = a * d - b * c;
          break;
        }
        case 3: {
          std::array<std::array<double, 3>, 3> m;
          for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) m[r][c] = tangents[r * n + idx[c]];
          minor = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                  m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                  m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
          break;
        }
        default:
          throw EvaluationError("value_on supports degree <= 3");
      }
      sum += p.eval(x) * minor;
    }
    return sum;
  }

  std::string str(const std::vector<std::string>& names = {}) const {
    std::ostringstream os;
    os << "degree " << degree_ << "\n";
    for (const auto& [mask, p] : terms_) {
      os << "  d{";
      auto idx = mask_indices(mask);
      for (std::size_t i = 0; i < idx.size(); ++i) os << (i ? "," : "") << idx[i] + 1;
      os << "} : " << p.str(names) << "\n";
    }
    return os.str();
  }

 private:
  int num_vars_;
  int degree_;
  std::map<Mask, Polynomial> terms_;
};

inline PolyForm wedge(const PolyForm& a, const PolyForm& b) {
  if (a.num_vars() != b.num_vars()) throw Error("wedge: ambient dimension mismatch");
  PolyForm out(a.num_vars(), a.degree() + b.degree());
  for (const auto& [i, p] : a.terms())
    for (const auto& [j, q] : b.terms()) {
      auto merged = wedge_merge(i, j);
      if (!merged) continue;
      out.add_term(merged->first, Rational(merged->second) * (p * q));
    }
  return out;
}

/// Exact exterior derivative d(P dx_I) = sum_v dP/dx_v dx_v ^ dx_I.
inline PolyForm exterior_derivative_poly(const PolyForm& f) {
  PolyForm out(f.num_vars(), f.degree() + 1);
  for (const auto& [mask, p] : f.terms())
    for (int v = 0; v < f.num_vars(); ++v) {
      if (mask & (1u << v)) continue;
      Polynomial dp = p.derivative(v);
      if (dp.is_zero()) continue;
      auto merged = wedge_merge(1u << v, mask);
      out.add_term(merged->first, Rational(merged->second) * dp);
    }
  return out;
}

/// Pullback along a polynomial map phi: R^M -> R^N given by its component
/// polynomials (in the M source variables). Exact; commutes with d.
inline PolyForm pullback(const std::vector<Polynomial>& phi, const PolyForm& f) {
  if (static_cast<int>(phi.size()) != f.num_vars())
    throw Error("pullback: component count != ambient dimension");
  const int src_vars = phi.empty() ? 0 : phi.front().num_vars();
  std::vector<PolyForm> dphi;
  dphi.reserve(phi.size());
  for (const auto& comp : phi) {
    PolyForm df(src_vars, 1);
    for (int v = 0; v < src_vars; ++v) df.add_term(1u << v, comp.derivative(v));
    dphi.push_back(df);
  }
  PolyForm out(src_vars, f.degree());
  for (const auto& [mask, p] : f.terms()) {
    PolyForm term = PolyForm::zero_form(src_vars, p.compose(phi));
    for (int i : mask_indices(mask)) term = wedge(term, dphi[i]);
    out = out + term;
  }
  return out;
}

/// x4^2 -> 1 - x1^2 - x2^2 - x3^2 on every coefficient (the quadric ideal
/// of the unit sphere in R^4, reduced by single-variable elimination).
inline Polynomial reduce_mod_sphere(const Polynomial& p) {
  if (p.num_vars() != 4) throw Error("reduce_mod_sphere expects 4 variables");
  Polynomial repl = Polynomial::constant(4, Rational(1));
  for (int v = 0; v < 3; ++v)
    repl = repl - Polynomial::variable(4, v) * Polynomial::variable(4, v);
  return p.eliminate_square(3, repl);
}

inline PolyForm reduce_mod_sphere(const PolyForm& f) {
  if (f.num_vars() != 4) throw Error("reduce_mod_sphere expects 4 variables");
  PolyForm out(4, f.degree());
  for (const auto& [mask, p] : f.terms()) out.add_term(mask, reduce_mod_sphere(p));
  return out;
}

/// Contraction with the Euler field sum x_v d/dx_v.
inline PolyForm interior_euler(const PolyForm& f) {
  PolyForm out(f.num_vars(), f.degree() - 1);
  for (const auto& [mask, p] : f.terms()) {
    auto idx = mask_indices(mask);
    for (std::size_t t = 0; t < idx.size(); ++t) {
      Rational sign = (t % 2 == 0) ? Rational(1) : Rational(-1);
      out.add_term(mask & ~(1u << idx[t]),
                   sign * (Polynomial::variable(f.num_vars(), idx[t]) * p));
    }
  }
  return out;
}

/// Normal form modulo the full differential ideal of the sphere,
/// (|x|^2 - 1) and its differential: subtract the conormal component
/// nu ^ i_E(f) (exact on the sphere where <E, E> = 1) and reduce the
/// coefficients. A form restricts to zero on S^3 iff this returns zero.
inline PolyForm reduce_mod_sphere_forms(const PolyForm& f) {
  if (f.num_vars() != 4) throw Error("reduce_mod_sphere_forms expects 4 variables");
  if (f.degree() == 0) return reduce_mod_sphere(f);
  PolyForm nu(4, 1);
  for (int v = 0; v < 4; ++v) nu.add_term(1u << v, Polynomial::variable(4, v));
  return reduce_mod_sphere(f - wedge(nu, interior_euler(f)));
}

/// Square matrix of polynomial entries representing a map into a matrix
/// group; the inverse is either the transpose (orthogonal) or the adjugate
/// (unimodular with determinant one). Validation is symbolic, modulo the
/// sphere ideal when the map is declared on S^3.
struct PolyMatrixMap {
  enum class Inverse { orthogonal, unimodular };

  int size = 0;
  int num_vars = 0;
  std::vector<Polynomial> entries;  // row-major
  Inverse mode = Inverse::orthogonal;
  bool on_sphere = false;

  const Polynomial& at(int r, int c) const { return entries[r * size + c]; }
  Polynomial& at(int r, int c) { return entries[r * size + c]; }

  static PolyMatrixMap make(int size, int num_vars, Inverse mode, bool on_sphere) {
    PolyMatrixMap m;
    m.size = size;
    m.num_vars = num_vars;
    m.mode = mode;
    m.on_sphere = on_sphere;
    m.entries.assign(size * size, Polynomial(num_vars));
    return m;
  }

  Polynomial reduced(const Polynomial& p) const {
    return on_sphere ? reduce_mod_sphere(p) : p;
  }

  void validate() const {
    if (mode == Inverse::orthogonal) {
      for (int i = 0; i < size; ++i)
        for (int j = 0; j < size; ++j) {
          Polynomial s(num_vars);
          for (int k = 0; k < size; ++k) s = s + at(i, k) * at(j, k);
          if (i == j) s = s - Polynomial::constant(num_vars, Rational(1));
          if (!reduced(s).is_zero())
            throw NotInGroup("matrix map is not orthogonal at entry (" + std::to_string(i) +
                             "," + std::to_string(j) + ")");
        }
    } else {
      std::vector<int> all(size);
      for (int i = 0; i < size; ++i) all[i] = i;
      Polynomial det = minor_det(all, all);
      if (!reduced(det - Polynomial::constant(num_vars, Rational(1))).is_zero())
        throw NotInGroup("matrix map does not have determinant one");
    }
  }

  /// Pointwise validation for maps whose group membership is not symbolic
  /// (e.g. the identity on an orthogonal group sampled at matrix points).
  double group_residual_at(const std::vector<double>& x) const {
    MatD m = eval(x.data());
    double worst = 0.0;
    if (mode == Inverse::orthogonal) {
      MatD g = m * m.transpose() - MatD::identity(size);
      worst = g.max_abs();
    } else {
      worst = std::fabs(determinant(m) - 1.0);
    }
    return worst;
  }

  std::vector<Polynomial> inverse_entries() const {
    std::vector<Polynomial> inv(size * size, Polynomial(num_vars));
    if (mode == Inverse::orthogonal) {
      for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c) inv[r * size + c] = at(c, r);
      return inv;
    }
    // Adjugate: inverse equals the transposed cofactor matrix when det = 1.
    for (int r = 0; r < size; ++r)
      for (int c = 0; c < size; ++c) {
        std::vector<int> rows, cols;
        for (int i = 0; i < size; ++i) {
          if (i != r) rows.push_back(i);
          if (i != c) cols.push_back(i);
        }
        Polynomial minor = minor_det(rows, cols);
        inv[c * size + r] = ((r + c) % 2 == 0) ? minor : -minor;
      }
    return inv;
  }

  MatD eval(const double* x) const {
    MatD m(size, size);
    for (int r = 0; r < size; ++r)
      for (int c = 0; c < size; ++c) m(r, c) = at(r, c).eval(x);
    return m;
  }

 private:
  /// Determinant of the submatrix on the given row and column index lists,
  /// by first-row cofactor expansion.
  Polynomial minor_det(const std::vector<int>& rows, const std::vector<int>& cols) const {
    if (rows.empty()) return Polynomial::constant(num_vars, Rational(1));
    if (rows.size() == 1) return at(rows[0], cols[0]);
    Polynomial det(num_vars);
    std::vector<int> sub_rows(rows.begin() + 1, rows.end());
    for (std::size_t c = 0; c < cols.size(); ++c) {
      std::vector<int> sub_cols;
      for (std::size_t i = 0; i < cols.size(); ++i)
        if (i != c) sub_cols.push_back(cols[i]);
      Polynomial term = at(rows[0], cols[c]) * minor_det(sub_rows, sub_cols);
      det = (c % 2 == 0) ? det + term : det - term;
    }
    return det;
  }
};

/// m x m matrix of scalar PolyForms (all of one degree).
struct MatrixPolyForm {
  int size = 0;
  std::vector<PolyForm> entries;

  static MatrixPolyForm make(int size, int num_vars, int degree) {
    MatrixPolyForm m;
    m.size = size;
    m.entries.assign(size * size, PolyForm(num_vars, degree));
    return m;
  }

  const PolyForm& at(int r, int c) const { return entries[r * size + c]; }
  PolyForm& at(int r, int c) { return entries[r * size + c]; }
  int num_vars() const { return entries.front().num_vars(); }
  int degree() const { return entries.front().degree(); }
};

/// sigma^-1 d sigma as a matrix of polynomial 1-forms. Validates group
/// membership and the Maurer-Cartan equation d theta + theta ^ theta = 0
/// (modulo the full sphere ideal when declared on S^3).
inline MatrixPolyForm mc_pullback(const PolyMatrixMap& sigma, bool check_mc = true) {
  sigma.validate();
  const int n = sigma.size;
  const int nv = sigma.num_vars;
  auto inv = sigma.inverse_entries();
  MatrixPolyForm theta = MatrixPolyForm::make(n, nv, 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      PolyForm sum(nv, 1);
      for (int k = 0; k < n; ++k) {
        // inv[i,k] * d(sigma[k,j])
        PolyForm d_entry(nv, 1);
        for (int v = 0; v < nv; ++v) d_entry.add_term(1u << v, sigma.at(k, j).derivative(v));
        sum = sum + inv[i * n + k] * d_entry;
      }
      theta.at(i, j) = sum;
    }
  if (check_mc) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        PolyForm resid = exterior_derivative_poly(theta.at(i, j));
        for (int k = 0; k < n; ++k) resid = resid + wedge(theta.at(i, k), theta.at(k, j));
        if (sigma.on_sphere) resid = reduce_mod_sphere_forms(resid);
        if (!resid.is_zero())
          throw NotInGroup("Maurer-Cartan equation fails for the pullback at entry (" +
                           std::to_string(i) + "," + std::to_string(j) + ")");
      }
  }
  return theta;
}

/// 3-form with its symbolic scale q * pi^k factored out; the polynomial part
/// stays rational.
struct ScaledPolyForm {
  PolyForm form;
  PiScalar scale;

  double value_on(const double* x, const double* tangents) const {
    return scale.to_double() * form.value_on(x, tangents);
  }
};

/// Chern-Simons 3-form of a matrix of 1-forms with the trace pairing:
/// tr(theta ^ d theta) + (2/3) tr(theta ^ theta ^ theta).
inline ScaledPolyForm trace_cs_poly(const MatrixPolyForm& theta, const PiScalar& scale) {
  const int n = theta.size;
  PolyForm cs(theta.num_vars(), 3);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      cs = cs + wedge(theta.at(i, j), exterior_derivative_poly(theta.at(j, i)));
  PolyForm cubic(theta.num_vars(), 3);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        cubic = cubic + wedge(wedge(theta.at(i, j), theta.at(j, k)), theta.at(k, i));
  cs = cs + Rational(2, 3) * cubic;
  return {cs, scale};
}

/// Pullback of every entry along a polynomial map.
inline MatrixPolyForm pullback(const std::vector<Polynomial>& phi, const MatrixPolyForm& theta) {
  MatrixPolyForm out = MatrixPolyForm::make(
      theta.size, phi.empty() ? 0 : phi.front().num_vars(), theta.degree());
  for (int i = 0; i < theta.size * theta.size; ++i)
    out.entries[i] = pullback(phi, theta.entries[i]);
  return out;
}

/// If the reduced form is an exact rational multiple of the reduced
/// reference, returns that multiple.
inline std::optional<Rational> as_multiple_of(const PolyForm& form, const PolyForm& reference) {
  PolyForm f = reduce_mod_sphere_forms(form);
  PolyForm ref = reduce_mod_sphere_forms(reference);
  if (ref.is_zero()) return f.is_zero() ? std::optional<Rational>(Rational(0)) : std::nullopt;
  const auto& [mask0, p0] = *ref.terms().begin();
  const auto& lead = *p0.terms().begin();
  Polynomial fp = f.coefficient(mask0);
  auto it = fp.terms().find(lead.first);
  Rational ratio = it == fp.terms().end() ? Rational(0) : it->second / lead.second;
  PolyForm resid = f - ratio * ref;
  if (!reduce_mod_sphere_forms(resid).is_zero()) return std::nullopt;
  return ratio;
}

}  // namespace cs3
