#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cs3/linalg.hpp"

namespace cs3 {

inline MatR commutator(const MatR& a, const MatR& b) { return a * b - b * a; }

inline std::vector<Rational> vectorize(const MatR& m) {
  std::vector<Rational> v;
  v.reserve(m.rows() * m.cols());
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) v.push_back(m(r, c));
  return v;
}

/// Structure constants c^k_{ij} of a list of matrices, solved exactly.
/// Throws DependentBasis for a rank-deficient list and NotClosed when some
/// bracket leaves the span.
inline Tensor3<Rational> structure_constants_from_matrices(const std::vector<MatR>& basis) {
  const int dim = static_cast<int>(basis.size());
  const int m = basis.front().rows();
  MatR span(m * m, dim);
  for (int b = 0; b < dim; ++b) {
    auto v = vectorize(basis[b]);
    for (int r = 0; r < m * m; ++r) span(r, b) = v[r];
  }
  SpanSolver solver(span);
  Tensor3<Rational> c(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) {
      double resid = 0.0;
      auto coords = solver.coordinates(vectorize(commutator(basis[i], basis[j])), &resid);
      if (resid != 0.0)
        throw NotClosed("bracket [e_" + std::to_string(i) + ", e_" + std::to_string(j) +
                        "] leaves the span");
      for (int k = 0; k < dim; ++k) {
        c(k, i, j) = coords[k];
        c(k, j, i) = -coords[k];
      }
    }
  return c;
}

/// Finite-dimensional matrix Lie algebra with an exact rational basis.
/// Structure constants are computed and the Jacobi identity checked at
/// construction, so instances are immutable and freely shareable.
class LieAlgebra {
 public:
  LieAlgebra(std::string name, std::vector<MatR> basis)
      : name_(std::move(name)),
        basis_(std::move(basis)),
        dim_(static_cast<int>(basis_.size())),
        mat_size_(basis_.front().rows()),
        structure_(structure_constants_from_matrices(basis_)),
        span_(make_span(basis_)) {
    validate();
  }

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  int mat_size() const { return mat_size_; }
  const std::vector<MatR>& basis() const { return basis_; }
  const Tensor3<Rational>& structure() const { return structure_; }

  /// Bracket in basis coordinates: [v, w]^k = sum c^k_{ij} v_i w_j.
  template <class S>
  std::vector<S> bracket(const std::vector<S>& v, const std::vector<S>& w) const {
    std::vector<S> out(dim_, S{});
    for (int i = 0; i < dim_; ++i) {
      if (scalar_traits<S>::is_zero(v[i])) continue;
      for (int j = 0; j < dim_; ++j) {
        if (scalar_traits<S>::is_zero(w[j])) continue;
        for (int k = 0; k < dim_; ++k) {
          const Rational& c = structure_(k, i, j);
          if (c.is_zero()) continue;
          out[k] = out[k] + scalar_traits<S>::from_rational(c) * v[i] * w[j];
        }
      }
    }
    return out;
  }

  /// Coordinates of a matrix in the basis; throws NotClosed if off-span.
  template <class S>
  std::vector<S> coordinates(const Matrix<S>& m, double tol = 0.0) const {
    std::vector<S> vec;
    vec.reserve(mat_size_ * mat_size_);
    for (int r = 0; r < mat_size_; ++r)
      for (int c = 0; c < mat_size_; ++c) vec.push_back(m(r, c));
    double resid = 0.0;
    auto coords = span_->coordinates(std::move(vec), &resid);
    if (resid > tol) throw NotClosed("matrix not in algebra " + name_);
    return coords;
  }

  template <class S>
  Matrix<S> from_coordinates(const std::vector<S>& v) const {
    Matrix<S> m(mat_size_, mat_size_);
    for (int b = 0; b < dim_; ++b) {
      if (scalar_traits<S>::is_zero(v[b])) continue;
      for (int r = 0; r < mat_size_; ++r)
        for (int c = 0; c < mat_size_; ++c)
          m(r, c) = m(r, c) + v[b] * scalar_traits<S>::from_rational(basis_[b](r, c));
    }
    return m;
  }

  /// Max Jacobi residual over all basis triples; zero for a valid algebra.
  Rational jacobi_residual() const {
    Rational worst(0);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j)
        for (int k = 0; k < dim_; ++k)
          for (int l = 0; l < dim_; ++l) {
            Rational s(0);
            for (int m = 0; m < dim_; ++m)
              s += structure_(m, i, j) * structure_(l, m, k) +
                   structure_(m, j, k) * structure_(l, m, i) +
                   structure_(m, k, i) * structure_(l, m, j);
            if (s.abs() > worst) worst = s.abs();
          }
    return worst;
  }

 private:
  std::string name_;
  std::vector<MatR> basis_;
  int dim_;
  int mat_size_;
  Tensor3<Rational> structure_;
  std::shared_ptr<SpanSolver> span_;

  static std::shared_ptr<SpanSolver> make_span(const std::vector<MatR>& basis) {
    const int m = basis.front().rows();
    MatR span(m * m, static_cast<int>(basis.size()));
    for (std::size_t b = 0; b < basis.size(); ++b) {
      auto v = vectorize(basis[b]);
      for (int r = 0; r < m * m; ++r) span(r, static_cast<int>(b)) = v[r];
    }
    return std::make_shared<SpanSolver>(std::move(span));
  }

  void validate() const {
    if (!jacobi_residual().is_zero())
      throw Error("Jacobi identity fails for algebra " + name_);
  }
};

/// Symmetric invariant bilinear form on a Lie algebra. The Gram matrix is
/// exact rational; the overall scale is carried symbolically as q * pi^k so
/// that normalizations like (1/16) pi^-2 stay exact.
struct BilinearForm {
  const LieAlgebra* algebra = nullptr;
  MatR gram;
  PiScalar scale = PiScalar(Rational(1));

  template <class S>
  Matrix<S> scaled_gram() const {
    Matrix<S> g(gram.rows(), gram.cols());
    for (int r = 0; r < gram.rows(); ++r)
      for (int c = 0; c < gram.cols(); ++c)
        g(r, c) = convert<S>(PiScalar(gram(r, c)) * scale);
    return g;
  }

  template <class S>
  S pair(const std::vector<S>& v, const std::vector<S>& w) const {
    S out{};
    for (int i = 0; i < gram.rows(); ++i) {
      if (scalar_traits<S>::is_zero(v[i])) continue;
      for (int j = 0; j < gram.cols(); ++j) {
        if (gram(i, j).is_zero() || scalar_traits<S>::is_zero(w[j])) continue;
        out = out + convert<S>(PiScalar(gram(i, j)) * scale) * v[i] * w[j];
      }
    }
    return out;
  }

 private:
  template <class S>
  static S convert(const PiScalar& v);
};

template <>
inline PiScalar BilinearForm::convert<PiScalar>(const PiScalar& v) {
  return v;
}
template <>
inline Rational BilinearForm::convert<Rational>(const PiScalar& v) {
  return v.as_rational();
}
template <>
inline double BilinearForm::convert<double>(const PiScalar& v) {
  return v.to_double();
}

/// <X, Y> = tr(XY) on the given algebra, optionally rescaled.
inline BilinearForm trace_form(const LieAlgebra& g, PiScalar scale = PiScalar(Rational(1))) {
  BilinearForm b;
  b.algebra = &g;
  b.scale = scale;
  b.gram = MatR(g.dim(), g.dim());
  for (int i = 0; i < g.dim(); ++i)
    for (int j = i; j < g.dim(); ++j) {
      Rational t = (g.basis()[i] * g.basis()[j]).trace();
      b.gram(i, j) = t;
      b.gram(j, i) = t;
    }
  return b;
}

/// The normalization used throughout: (1/16) pi^-2 times the trace form.
inline PiScalar standard_cs_scale() { return PiScalar(Rational(1, 16), -2); }

/// True iff <[Z,X],Y> + <X,[Z,Y]> vanishes for all basis triples. Exact.
inline bool check_ad_invariance(const BilinearForm& b) {
  const LieAlgebra& g = *b.algebra;
  const int n = g.dim();
  for (int z = 0; z < n; ++z)
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        Rational s(0);
        for (int k = 0; k < n; ++k)
          s += g.structure()(k, z, x) * b.gram(k, y) + b.gram(x, k) * g.structure()(k, z, y);
        if (!s.is_zero()) return false;
      }
  return true;
}

namespace builtin {

inline MatR unit(int n, int r, int c) {
  MatR m(n, n);
  m(r, c) = Rational(1);
  return m;
}

/// so(3) in the basis dual to the coframe (omega1, omega2, psi):
/// L1 rotates the 12-plane, L2 the 13-plane, L3 the 23-plane.
inline LieAlgebra make_so3() {
  MatR l1 = unit(3, 1, 0) - unit(3, 0, 1);
  MatR l2 = unit(3, 2, 0) - unit(3, 0, 2);
  MatR l3 = unit(3, 2, 1) - unit(3, 1, 2);
  return LieAlgebra("so3", {l1, l2, l3});
}

/// su(2) realified as quaternion left multiplications on R^4; the basis is
/// dual to the coframe (xi, rho, kappa), with [e1,e2] = 2 e3 cyclically.
inline LieAlgebra make_su2() {
  MatR li(4, 4), lj(4, 4), lk(4, 4);
  auto set_cols = [](MatR& m, std::initializer_list<std::pair<int, int>> cols) {
    int c = 0;
    for (auto [row, sign] : cols) {
      m(row, c) = Rational(sign);
      ++c;
    }
  };
  set_cols(li, {{1, 1}, {0, -1}, {3, 1}, {2, -1}});
  set_cols(lj, {{2, 1}, {3, -1}, {0, -1}, {1, 1}});
  set_cols(lk, {{3, 1}, {2, 1}, {1, -1}, {0, -1}});
  return LieAlgebra("su2", {li, lj, lk});
}

/// so(p,q) for a diagonal signature; generators ordered by plane (a<b).
inline LieAlgebra make_so_signature(const std::string& name, const std::vector<int>& eta) {
  const int n = static_cast<int>(eta.size());
  std::vector<MatR> basis;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      basis.push_back(Rational(eta[b]) * unit(n, a, b) - Rational(eta[a]) * unit(n, b, a));
  return LieAlgebra(name, basis);
}

/// so(4) ordered so that the so(3) block on coordinates 2..4 comes first
/// (images of L1, L2, L3) followed by the three first-row generators.
inline LieAlgebra make_so4() {
  auto embed = [](const MatR& m3) {
    MatR m(4, 4);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) m(r + 1, c + 1) = m3(r, c);
    return m;
  };
  MatR l1 = unit(3, 1, 0) - unit(3, 0, 1);
  MatR l2 = unit(3, 2, 0) - unit(3, 0, 2);
  MatR l3 = unit(3, 2, 1) - unit(3, 1, 2);
  std::vector<MatR> basis = {embed(l1), embed(l2), embed(l3)};
  for (int a = 1; a < 4; ++a) basis.push_back(unit(4, 0, a) - unit(4, a, 0));
  return LieAlgebra("so4", basis);
}

/// so(2,1) with eta = diag(1,1,-1) in the basis matching the printed
/// Levi-Civita matrices: one rotation (12) and two boosts (13, 23).
inline LieAlgebra make_so21() {
  MatR k1 = unit(3, 1, 0) - unit(3, 0, 1);
  MatR k2 = unit(3, 0, 2) + unit(3, 2, 0);
  MatR k3 = unit(3, 1, 2) + unit(3, 2, 1);
  return LieAlgebra("so21", {k1, k2, k3});
}

inline LieAlgebra make_sl(const std::string& name, int n) {
  std::vector<MatR> basis;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) basis.push_back(unit(n, i, j));
  for (int i = 0; i + 1 < n; ++i) basis.push_back(unit(n, i, i) - unit(n, i + 1, i + 1));
  return LieAlgebra(name, basis);
}

}  // namespace builtin

/// Built-in algebras by name: so3, su2, so4, sl3, sl4, so21, so31, so22.
inline const LieAlgebra& algebra(const std::string& name) {
  static const std::map<std::string, LieAlgebra> registry = [] {
    std::map<std::string, LieAlgebra> r;
    r.emplace("so3", builtin::make_so3());
    r.emplace("su2", builtin::make_su2());
    r.emplace("so4", builtin::make_so4());
    r.emplace("sl3", builtin::make_sl("sl3", 3));
    r.emplace("sl4", builtin::make_sl("sl4", 4));
    r.emplace("so21", builtin::make_so21());
    r.emplace("so31", builtin::make_so_signature("so31", {1, 1, 1, -1}));
    r.emplace("so22", builtin::make_so_signature("so22", {-1, 1, 1, -1}));
    return r;
  }();
  auto it = registry.find(name);
  if (it == registry.end()) throw Error("unknown algebra: " + name);
  return it->second;
}

}  // namespace cs3
