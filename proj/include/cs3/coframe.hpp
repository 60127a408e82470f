#pragma once

#include <algorithm>
#include <bit>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cs3/decomposition.hpp"
#include "cs3/lie_algebra.hpp"

namespace cs3 {

/// Strictly increasing multi-index over coframe generators, stored as a bit
/// mask. Canonical by construction; the wedge sign is the parity of the
/// number of transpositions needed to interleave two masks.
using Mask = unsigned;

inline int mask_degree(Mask m) { return std::popcount(m); }

inline std::vector<int> mask_indices(Mask m) {
  std::vector<int> idx;
  for (int i = 0; m != 0; ++i, m >>= 1)
    if (m & 1u) idx.push_back(i);
  return idx;
}

inline Mask mask_of(std::initializer_list<int> idx) {
  Mask m = 0;
  for (int i : idx) m |= (1u << i);
  return m;
}

/// Merged mask and interleaving sign of wedging I with J; nullopt when the
/// indices overlap (the product vanishes).
inline std::optional<std::pair<Mask, int>> wedge_merge(Mask i, Mask j) {
  if ((i & j) != 0) return std::nullopt;
  int sign = 1;
  Mask jj = j;
  while (jj != 0) {
    int b = std::countr_zero(jj);
    jj &= jj - 1;
    // Count generators of I that must be passed to insert b in order.
    Mask above = i >> (b + 1);
    if (std::popcount(above) % 2 != 0) sign = -sign;
  }
  return std::make_pair(i | j, sign);
}

/// Exterior algebra of global left-invariant coframe 1-forms with the
/// structure-constant differential d w^k = -(1/2) f^k_{ij} w^i ^ w^j.
/// Antisymmetry of f and d o d = 0 on generators are checked at construction.
class CoframeComplex {
 public:
  CoframeComplex(int rank, Tensor3<Rational> f, std::vector<std::string> labels)
      : rank_(rank), f_(std::move(f)), labels_(std::move(labels)) {
    for (int k = 0; k < rank_; ++k)
      for (int i = 0; i < rank_; ++i)
        for (int j = 0; j < rank_; ++j)
          if (!(f_(k, i, j) + f_(k, j, i)).is_zero())
            throw Error("coframe structure constants not antisymmetric");
    if (!d_squared_vanishes())
      throw Error("coframe structure constants violate d o d = 0");
  }

  int rank() const { return rank_; }
  const Tensor3<Rational>& structure() const { return f_; }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  int rank_;
  Tensor3<Rational> f_;
  std::vector<std::string> labels_;

  bool d_squared_vanishes() const {
    // d(d w^l) = 0 is the Jacobi identity for f; expand on w^i^w^j^w^k.
    for (int l = 0; l < rank_; ++l)
      for (int i = 0; i < rank_; ++i)
        for (int j = 0; j < rank_; ++j)
          for (int k = 0; k < rank_; ++k) {
            Rational s(0);
            for (int m = 0; m < rank_; ++m)
              s += f_(l, m, i) * f_(m, j, k) + f_(l, m, j) * f_(m, k, i) +
                   f_(l, m, k) * f_(m, i, j);
            if (!s.is_zero()) return false;
          }
    return true;
  }
};

/// Coframe of the group whose Lie algebra is g (dual left-invariant frame).
inline CoframeComplex complex_from_algebra(const LieAlgebra& g, std::vector<std::string> labels) {
  return CoframeComplex(g.dim(), g.structure(), std::move(labels));
}

inline const CoframeComplex& su2_complex() {
  static const CoframeComplex c = complex_from_algebra(algebra("su2"), {"xi", "rho", "kappa"});
  return c;
}

inline const CoframeComplex& so3_complex() {
  static const CoframeComplex c = complex_from_algebra(algebra("so3"), {"omega1", "omega2", "psi"});
  return c;
}

inline CoframeComplex abelian_complex(int rank) {
  std::vector<std::string> labels;
  for (int i = 0; i < rank; ++i) labels.push_back("w" + std::to_string(i + 1));
  return CoframeComplex(rank, Tensor3<Rational>(rank), std::move(labels));
}

/// Graded differential form with constant coefficients in a coframe basis.
/// Coefficients are scalars (value_dim 1, algebra null) or Lie-algebra
/// elements in basis coordinates. Sparse over canonical multi-indices.
template <class S>
struct ValuedForm {
  int degree = 0;
  const LieAlgebra* algebra = nullptr;
  int value_dim = 1;
  std::map<Mask, std::vector<S>> terms;

  static ValuedForm scalar(int degree) { return {degree, nullptr, 1, {}}; }
  static ValuedForm valued(int degree, const LieAlgebra& g) {
    return {degree, &g, g.dim(), {}};
  }

  bool is_scalar() const { return algebra == nullptr; }

  void add_term(Mask mask, const std::vector<S>& coeff) {
    if (mask_degree(mask) != degree) throw Error("multi-index length != degree");
    auto it = terms.find(mask);
    if (it == terms.end()) {
      if (vec_max_abs(coeff) != 0.0) terms.emplace(mask, coeff);
      return;
    }
    for (int i = 0; i < value_dim; ++i) it->second[i] = it->second[i] + coeff[i];
    if (all_zero(it->second)) terms.erase(it);
  }

  std::vector<S> coefficient(Mask mask) const {
    auto it = terms.find(mask);
    if (it != terms.end()) return it->second;
    return std::vector<S>(value_dim, S{});
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& [mask, v] : terms) m = std::max(m, vec_max_abs(v));
    return m;
  }

  bool is_zero() const { return terms.empty(); }

  template <class T>
  ValuedForm<T> cast() const
    requires std::is_same_v<S, Rational>
  {
    ValuedForm<T> out{degree, algebra, value_dim, {}};
    for (const auto& [mask, v] : terms) {
      std::vector<T> w(v.size());
      for (std::size_t i = 0; i < v.size(); ++i) w[i] = scalar_traits<T>::from_rational(v[i]);
      out.terms.emplace(mask, std::move(w));
    }
    return out;
  }

  friend ValuedForm operator+(const ValuedForm& a, const ValuedForm& b) {
    check_compatible(a, b);
    ValuedForm out = a;
    for (const auto& [mask, v] : b.terms) out.add_term(mask, v);
    return out;
  }
  friend ValuedForm operator-(const ValuedForm& a, const ValuedForm& b) {
    check_compatible(a, b);
    ValuedForm out = a;
    for (const auto& [mask, v] : b.terms) {
      std::vector<S> neg(v.size());
      for (std::size_t i = 0; i < v.size(); ++i) neg[i] = -v[i];
      out.add_term(mask, neg);
    }
    return out;
  }
  friend ValuedForm operator*(const S& s, const ValuedForm& a) {
    ValuedForm out = a;
    for (auto it = out.terms.begin(); it != out.terms.end();) {
      for (auto& c : it->second) c = s * c;
      it = all_zero(it->second) ? out.terms.erase(it) : std::next(it);
    }
    return out;
  }

  friend bool operator==(const ValuedForm& a, const ValuedForm& b) {
    return a.degree == b.degree && a.algebra == b.algebra && a.terms == b.terms;
  }

 private:
  static bool all_zero(const std::vector<S>& v) {
    for (const auto& c : v)
      if (!scalar_traits<S>::is_zero(c)) return false;
    return true;
  }
  static void check_compatible(const ValuedForm& a, const ValuedForm& b) {
    if (a.degree != b.degree || a.algebra != b.algebra)
      throw AlgebraMismatch("form addition with mismatched degree or value space");
  }
};

template <class S>
ValuedForm<S> generator(const CoframeComplex& c, int i) {
  auto f = ValuedForm<S>::scalar(1);
  f.add_term(1u << i, {scalar_traits<S>::from_rational(Rational(1))});
  (void)c;
  return f;
}

template <class S>
ValuedForm<S> unit_form() {
  auto f = ValuedForm<S>::scalar(0);
  f.add_term(0u, {scalar_traits<S>::from_rational(Rational(1))});
  return f;
}

/// Wedge product; at least one factor must be scalar-valued.
template <class S>
ValuedForm<S> wedge(const ValuedForm<S>& a, const ValuedForm<S>& b, const CoframeComplex& c) {
  if (!a.is_scalar() && !b.is_scalar())
    throw AlgebraMismatch("wedge of two algebra-valued forms is undefined");
  if (a.degree + b.degree > c.rank())
    throw DegreeOverflow("wedge degree exceeds coframe rank");
  const bool scalar_left = a.is_scalar();
  ValuedForm<S> out = scalar_left && b.is_scalar()
                          ? ValuedForm<S>::scalar(a.degree + b.degree)
                          : ValuedForm<S>::valued(a.degree + b.degree,
                                                  scalar_left ? *b.algebra : *a.algebra);
  for (const auto& [i, v] : a.terms)
    for (const auto& [j, w] : b.terms) {
      auto merged = wedge_merge(i, j);
      if (!merged) continue;
      const auto& [mask, sign] = *merged;
      const S s = scalar_traits<S>::from_rational(Rational(sign)) *
                  (scalar_left ? v[0] : w[0]);
      const std::vector<S>& vec = scalar_left ? w : v;
      std::vector<S> coeff(vec.size());
      for (std::size_t t = 0; t < vec.size(); ++t) coeff[t] = s * vec[t];
      out.add_term(mask, coeff);
    }
  return out;
}

/// <a, b>: scalar (p+q)-form from two g-valued forms via a bilinear form.
template <class S>
ValuedForm<S> pairing(const ValuedForm<S>& a, const ValuedForm<S>& b, const BilinearForm& form) {
  if (a.is_scalar() || b.is_scalar() || a.algebra != b.algebra)
    throw AlgebraMismatch("pairing requires two forms valued in the same algebra");
  const Matrix<S> gram = form.template scaled_gram<S>();
  ValuedForm<S> out = ValuedForm<S>::scalar(a.degree + b.degree);
  for (const auto& [i, v] : a.terms)
    for (const auto& [j, w] : b.terms) {
      auto merged = wedge_merge(i, j);
      if (!merged) continue;
      const auto& [mask, sign] = *merged;
      S val{};
      for (int r = 0; r < gram.rows(); ++r) {
        if (scalar_traits<S>::is_zero(v[r])) continue;
        for (int cidx = 0; cidx < gram.cols(); ++cidx) {
          if (scalar_traits<S>::is_zero(gram(r, cidx)) || scalar_traits<S>::is_zero(w[cidx]))
            continue;
          val = val + v[r] * gram(r, cidx) * w[cidx];
        }
      }
      out.add_term(mask, {scalar_traits<S>::from_rational(Rational(sign)) * val});
    }
  return out;
}

/// [a, b]: g-valued (p+q)-form.
template <class S>
ValuedForm<S> bracket(const ValuedForm<S>& a, const ValuedForm<S>& b) {
  if (a.is_scalar() || b.is_scalar() || a.algebra != b.algebra)
    throw AlgebraMismatch("bracket requires two forms valued in the same algebra");
  ValuedForm<S> out = ValuedForm<S>::valued(a.degree + b.degree, *a.algebra);
  for (const auto& [i, v] : a.terms)
    for (const auto& [j, w] : b.terms) {
      auto merged = wedge_merge(i, j);
      if (!merged) continue;
      const auto& [mask, sign] = *merged;
      auto br = a.algebra->bracket(v, w);
      if (sign < 0)
        for (auto& x : br) x = -x;
      out.add_term(mask, br);
    }
  return out;
}

/// Structure-constant differential; raises the degree by one.
template <class S>
ValuedForm<S> differential(const ValuedForm<S>& a, const CoframeComplex& c) {
  ValuedForm<S> out = a.is_scalar() ? ValuedForm<S>::scalar(a.degree + 1)
                                    : ValuedForm<S>::valued(a.degree + 1, *a.algebra);
  if (a.degree >= c.rank()) return out;
  for (const auto& [mask, v] : a.terms) {
    auto idx = mask_indices(mask);
    for (std::size_t pos = 0; pos < idx.size(); ++pos) {
      const int i = idx[pos];
      const Mask rest = mask & ~(1u << i);
      const int pos_sign = (pos % 2 == 0) ? 1 : -1;
      for (int j = 0; j < c.rank(); ++j)
        for (int k = j + 1; k < c.rank(); ++k) {
          const Rational& f = c.structure()(i, j, k);
          if (f.is_zero()) continue;
          auto merged = wedge_merge(mask_of({j, k}), rest);
          if (!merged) continue;
          const auto& [key, sign] = *merged;
          const S factor =
              scalar_traits<S>::from_rational(Rational(-pos_sign * sign) * f);
          std::vector<S> coeff(v.size());
          for (std::size_t t = 0; t < v.size(); ++t) coeff[t] = factor * v[t];
          out.add_term(key, coeff);
        }
    }
  }
  return out;
}

/// Curvature dtheta + (1/2)[theta, theta] of a g-valued 1-form.
template <class S>
ValuedForm<S> curvature(const ValuedForm<S>& theta, const CoframeComplex& c) {
  if (theta.degree != 1) throw Error("curvature requires a 1-form");
  const S half = scalar_traits<S>::from_rational(Rational(1, 2));
  return differential(theta, c) + half * bracket(theta, theta);
}

/// Chern-Simons 3-form <theta, dtheta> + (1/3) <theta, [theta, theta]>.
template <class S>
ValuedForm<S> chern_simons(const ValuedForm<S>& theta, const BilinearForm& form,
                           const CoframeComplex& c) {
  if (theta.degree != 1) throw Error("chern_simons requires a 1-form");
  const S third = scalar_traits<S>::from_rational(Rational(1, 3));
  return pairing(theta, differential(theta, c), form) +
         third * pairing(theta, bracket(theta, theta), form);
}

/// Same 3-form computed as <theta, curvature> - (1/6) <theta, [theta, theta]>.
template <class S>
ValuedForm<S> chern_simons_via_curvature(const ValuedForm<S>& theta, const BilinearForm& form,
                                         const CoframeComplex& c) {
  const S sixth = scalar_traits<S>::from_rational(Rational(1, 6));
  return pairing(theta, curvature(theta, c), form) -
         sixth * pairing(theta, bracket(theta, theta), form);
}

/// Splits an ambient-valued form into its subalgebra and complement parts.
template <class S>
std::pair<ValuedForm<S>, ValuedForm<S>> decompose_form(const ValuedForm<S>& theta,
                                                       const OrthogonalDecomposition& d) {
  if (theta.algebra != &d.ambient())
    throw AlgebraMismatch("decompose_form: form not valued in the ambient algebra");
  ValuedForm<S> top = ValuedForm<S>::valued(theta.degree, d.ambient());
  ValuedForm<S> perp = top;
  for (const auto& [mask, v] : theta.terms) {
    top.add_term(mask, d.top(v));
    perp.add_term(mask, d.perp(v));
  }
  return {top, perp};
}

/// Residual of CS(theta) = CS(theta_top) + <theta_perp, curvature_perp>.
/// Requires [theta_perp, theta_perp] to take values in the subalgebra and
/// throws PreconditionViolated (with the offending term) otherwise.
template <class S>
ValuedForm<S> blindness_residual(const ValuedForm<S>& theta, const OrthogonalDecomposition& d,
                                 const BilinearForm& form, const CoframeComplex& c,
                                 double tol = 1e-12) {
  auto [top, perp] = decompose_form(theta, d);
  auto perp_sq = bracket(perp, perp);
  for (const auto& [mask, v] : perp_sq.terms) {
    auto off = d.perp(v);
    double resid = vec_max_abs(off);
    bool bad = scalar_traits<S>::exact ? resid != 0.0 : resid > tol;
    if (bad) {
      auto idx = mask_indices(mask);
      std::string where;
      for (int i : idx) where += (where.empty() ? "" : ",") + std::to_string(i);
      throw PreconditionViolated("[theta_perp, theta_perp] leaves the subalgebra at w^{" +
                                 where + "}");
    }
  }
  auto theta_curv = curvature(theta, c);
  auto perp_curv = decompose_form(theta_curv, d).second;
  return chern_simons(theta, form, c) - chern_simons(top, form, c) -
         pairing(perp, perp_curv, form);
}

/// Maurer-Cartan form of the complex's own group: mu = sum w^i (x) e_i.
template <class S>
ValuedForm<S> maurer_cartan_form(const CoframeComplex& c, const LieAlgebra& g) {
  if (g.dim() != c.rank()) throw AlgebraMismatch("coframe rank != algebra dimension");
  ValuedForm<S> mu = ValuedForm<S>::valued(1, g);
  for (int i = 0; i < c.rank(); ++i) mu.add_term(1u << i, basis_vector<S>(c.rank(), i));
  return mu;
}

inline std::string printable(const Rational& v) { return v.str(); }
inline std::string printable(const PiScalar& v) { return v.str(); }
inline std::string printable(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

/// Canonical text dump: one line per term, indices ascending, coefficients
/// in basis order. Used by the CLI --dump-forms flag and golden tests.
template <class S>
std::string to_text(const ValuedForm<S>& form, const CoframeComplex& c) {
  std::vector<std::pair<std::vector<int>, const std::vector<S>*>> rows;
  for (const auto& [mask, v] : form.terms) rows.push_back({mask_indices(mask), &v});
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::ostringstream os;
  os << "degree " << form.degree << "\n";
  for (const auto& [idx, v] : rows) {
    os << "  ";
    if (idx.empty()) os << "1";
    for (std::size_t i = 0; i < idx.size(); ++i)
      os << (i ? "^" : "") << c.labels()[idx[i]];
    os << " :";
    for (const auto& coeff : *v) os << " " << printable(coeff);
    os << "\n";
  }
  return os.str();
}

}  // namespace cs3
