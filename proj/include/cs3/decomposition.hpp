#pragma once

#include <array>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cs3/lie_algebra.hpp"

namespace cs3 {

/// Orthogonal splitting of an ambient algebra into an embedded subalgebra
/// and its complement with respect to an invariant bilinear form. The
/// embedding is an explicit linear map on bases; projectors are exact.
class OrthogonalDecomposition {
 public:
  OrthogonalDecomposition(const LieAlgebra& ambient, const LieAlgebra& sub, MatR embed,
                          const BilinearForm& form)
      : ambient_(&ambient), sub_(&sub), embed_(std::move(embed)) {
    const MatR& g = form.gram;
    MatR restricted = embed_.transpose() * g * embed_;
    if (determinant(restricted).is_zero())
      throw DegenerateRestriction("bilinear form degenerate on subalgebra " + sub.name());
    proj_top_ = embed_ * inverse(restricted) * embed_.transpose() * g;
    proj_perp_ = MatR::identity(ambient.dim()) - proj_top_;
    perp_basis_ = kernel_basis(embed_.transpose() * g);
    validate(g);
  }

  const LieAlgebra& ambient() const { return *ambient_; }
  const LieAlgebra& sub() const { return *sub_; }
  const MatR& embed() const { return embed_; }
  const MatR& projector_top() const { return proj_top_; }
  const MatR& projector_perp() const { return proj_perp_; }
  const std::vector<std::vector<Rational>>& perp_basis() const { return perp_basis_; }

  template <class S>
  std::vector<S> top(const std::vector<S>& v) const {
    return proj_top_.cast<S>().apply(v);
  }
  template <class S>
  std::vector<S> perp(const std::vector<S>& v) const {
    return proj_perp_.cast<S>().apply(v);
  }

 private:
  const LieAlgebra* ambient_;
  const LieAlgebra* sub_;
  MatR embed_;
  MatR proj_top_, proj_perp_;
  std::vector<std::vector<Rational>> perp_basis_;

  void validate(const MatR& gram) const {
    if (!(proj_top_ * proj_top_ == proj_top_) || !(proj_perp_ * proj_perp_ == proj_perp_))
      throw Error("decomposition projectors not idempotent");
    // <g, g-perp> = 0 and [g, g-perp] in g-perp, on basis pairs.
    for (int s = 0; s < sub_->dim(); ++s) {
      std::vector<Rational> es(ambient_->dim());
      for (int r = 0; r < ambient_->dim(); ++r) es[r] = embed_(r, s);
      for (const auto& p : perp_basis_) {
        Rational ip(0);
        for (int i = 0; i < ambient_->dim(); ++i)
          for (int j = 0; j < ambient_->dim(); ++j) ip += es[i] * gram(i, j) * p[j];
        if (!ip.is_zero()) throw Error("perp basis not orthogonal to subalgebra");
        auto br = ambient_->bracket(es, p);
        if (vec_max_abs(proj_top_.apply(br)) != 0.0)
          throw Error("[g, g-perp] leaves g-perp; form is not invariant");
      }
    }
  }
};

/// True iff [g-perp, g-perp] lands back in g on all basis pairs.
inline bool is_symmetric_pair(const OrthogonalDecomposition& d) {
  for (const auto& p : d.perp_basis())
    for (const auto& q : d.perp_basis())
      if (vec_max_abs(d.perp(d.ambient().bracket(p, q))) != 0.0) return false;
  return true;
}

/// Splits [v1, v2] of two g-perp elements into its g and g-perp parts.
/// Inputs are given in ambient basis coordinates and must lie in g-perp.
template <class S>
std::pair<std::vector<S>, std::vector<S>> perp_bracket_component(
    const OrthogonalDecomposition& d, const std::vector<S>& v1, const std::vector<S>& v2,
    double tol = 1e-12) {
  if (vec_max_abs(d.top(v1)) > tol || vec_max_abs(d.top(v2)) > tol)
    throw PreconditionViolated("perp_bracket_component: input not in g-perp");
  auto br = d.ambient().bracket(v1, v2);
  return {d.top(br), d.perp(br)};
}

template <class S>
std::vector<S> basis_vector(int n, int i) {
  std::vector<S> v(n, S{});
  v[i] = scalar_traits<S>::from_rational(Rational(1));
  return v;
}

/// Coefficient tensor of the Chern-Simons 3-form of a Maurer-Cartan form in
/// the coframe dual to the basis, built from the alternation of
/// (X,Y,Z) -> -(1/6) <X, [Y,Z]>. Totally antisymmetric by construction.
template <class S>
Tensor3<S> maurer_cartan_cs_tensor(const LieAlgebra& g, const BilinearForm& form) {
  const int n = g.dim();
  Tensor3<S> t(n);
  const Matrix<S> gram = form.scaled_gram<S>();
  const S sixth = scalar_traits<S>::from_rational(Rational(1, 6));
  static constexpr std::array<std::array<int, 3>, 6> perms = {
      {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}}};
  auto pair_with_bracket = [&](int a, int b, int c) -> S {
    S out{};
    for (int k = 0; k < n; ++k) {
      const Rational& cs = g.structure()(k, b, c);
      if (cs.is_zero() || scalar_traits<S>::is_zero(gram(a, k))) continue;
      out = out + scalar_traits<S>::from_rational(cs) * gram(a, k);
    }
    return out;
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        std::array<int, 3> idx = {i, j, k};
        S sum{};
        for (std::size_t p = 0; p < perms.size(); ++p) {
          S term = pair_with_bracket(idx[perms[p][0]], idx[perms[p][1]], idx[perms[p][2]]);
          sum = p < 3 ? sum + term : sum - term;
        }
        t(i, j, k) = -(sixth * sum);
      }
  return t;
}

/// Embedding matrix for a subalgebra placed as a diagonal block at the given
/// offset inside the ambient matrices (the inclusion used by all built-in
/// pairs: the small algebra acts on the trailing coordinates).
inline MatR block_embedding(const LieAlgebra& ambient, const LieAlgebra& sub, int offset) {
  MatR e(ambient.dim(), sub.dim());
  for (int s = 0; s < sub.dim(); ++s) {
    MatR big(ambient.mat_size(), ambient.mat_size());
    for (int r = 0; r < sub.mat_size(); ++r)
      for (int c = 0; c < sub.mat_size(); ++c) big(r + offset, c + offset) = sub.basis()[s](r, c);
    auto coords = ambient.coordinates(big);
    for (int r = 0; r < ambient.dim(); ++r) e(r, s) = coords[r];
  }
  return e;
}

/// sl(n+1) complement element [[a, Z], [X, -(a/n) I]] for the block
/// decomposition with sl(n) in the lower-right corner.
inline MatR sl_perp_element(int n, const Rational& a, const std::vector<Rational>& x,
                            const std::vector<Rational>& z) {
  MatR m(n + 1, n + 1);
  m(0, 0) = a;
  for (int i = 0; i < n; ++i) {
    m(i + 1, 0) = x[i];
    m(0, i + 1) = z[i];
    m(i + 1, i + 1) = -a / Rational(n);
  }
  return m;
}

/// Reads (a, X, Z) off an sl(n+1) matrix that lies in the complement.
template <class S>
std::tuple<S, std::vector<S>, std::vector<S>> sl_perp_components(const Matrix<S>& m) {
  const int n = m.rows() - 1;
  S a = m(0, 0);
  std::vector<S> x(n), z(n);
  for (int i = 0; i < n; ++i) {
    x[i] = m(i + 1, 0);
    z[i] = m(0, i + 1);
  }
  return {a, x, z};
}

/// Built-in orthogonal decompositions keyed as "so4/so3", "sl4/sl3",
/// "so31/so21", "so22/so21", all built on the trace form.
inline const OrthogonalDecomposition& decomposition(const std::string& name) {
  static const std::map<std::string, OrthogonalDecomposition> registry = [] {
    std::map<std::string, OrthogonalDecomposition> r;
    auto add = [&r](const std::string& key, const std::string& amb, const std::string& sub) {
      const LieAlgebra& a = algebra(amb);
      const LieAlgebra& s = algebra(sub);
      r.emplace(key, OrthogonalDecomposition(a, s, block_embedding(a, s, 1), trace_form(a)));
    };
    add("so4/so3", "so4", "so3");
    add("sl4/sl3", "sl4", "sl3");
    add("so31/so21", "so31", "so21");
    add("so22/so21", "so22", "so21");
    return r;
  }();
  auto it = registry.find(name);
  if (it == registry.end()) throw Error("unknown decomposition: " + name);
  return it->second;
}

}  // namespace cs3
