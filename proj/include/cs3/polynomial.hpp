#pragma once

#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cs3/rational.hpp"

namespace cs3 {

/// Sparse multivariate polynomial with exact rational coefficients.
/// Terms are keyed by exponent vectors; zero coefficients are never stored,
/// so the map order doubles as the canonical (lexicographic) dump order.
class Polynomial {
 public:
  using Exponents = std::vector<std::uint8_t>;

  explicit Polynomial(int num_vars = 0) : num_vars_(num_vars) {}

  static Polynomial constant(int num_vars, const Rational& c) {
    Polynomial p(num_vars);
    p.add_term(Exponents(num_vars, 0), c);
    return p;
  }

  static Polynomial variable(int num_vars, int v) {
    Polynomial p(num_vars);
    Exponents e(num_vars, 0);
    e[v] = 1;
    p.add_term(e, Rational(1));
    return p;
  }

  int num_vars() const { return num_vars_; }
  const std::map<Exponents, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Exponents& e, const Rational& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    Polynomial out = a;
    for (const auto& [e, c] : b.terms_) out.add_term(e, c);
    return out;
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    Polynomial out = a;
    for (const auto& [e, c] : b.terms_) out.add_term(e, -c);
    return out;
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial out(a.num_vars_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        Exponents e = ea;
        for (int v = 0; v < out.num_vars_; ++v) e[v] += eb[v];
        out.add_term(e, ca * cb);
      }
    return out;
  }
  friend Polynomial operator*(const Rational& s, const Polynomial& a) {
    Polynomial out(a.num_vars_);
    for (const auto& [e, c] : a.terms_) out.add_term(e, s * c);
    return out;
  }
  Polynomial operator-() const { return Rational(-1) * *this; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.num_vars_ == b.num_vars_ && a.terms_ == b.terms_;
  }

  Polynomial derivative(int v) const {
    Polynomial out(num_vars_);
    for (const auto& [e, c] : terms_) {
      if (e[v] == 0) continue;
      Exponents d = e;
      d[v] -= 1;
      out.add_term(d, Rational(e[v]) * c);
    }
    return out;
  }

  int total_degree() const {
    int deg = 0;
    for (const auto& [e, c] : terms_) {
      int d = 0;
      for (auto x : e) d += x;
      deg = std::max(deg, d);
    }
    return deg;
  }

  int degree_in(int v) const {
    int deg = 0;
    for (const auto& [e, c] : terms_) deg = std::max<int>(deg, e[v]);
    return deg;
  }

  double eval(const double* x) const {
    double sum = 0.0;
    for (const auto& [e, c] : terms_) {
      double term = c.to_double();
      for (int v = 0; v < num_vars_; ++v)
        for (int k = 0; k < e[v]; ++k) term *= x[v];
      sum += term;
    }
    return sum;
  }

  Rational eval_rational(const std::vector<Rational>& x) const {
    Rational sum(0);
    for (const auto& [e, c] : terms_) {
      Rational term = c;
      for (int v = 0; v < num_vars_; ++v)
        for (int k = 0; k < e[v]; ++k) term *= x[v];
      sum += term;
    }
    return sum;
  }

  /// Substitutes args[v] for variable v (polynomial composition).
  Polynomial compose(const std::vector<Polynomial>& args) const {
    const int out_vars = args.empty() ? 0 : args.front().num_vars();
    Polynomial out(out_vars);
    for (const auto& [e, c] : terms_) {
      Polynomial term = Polynomial::constant(out_vars, c);
      for (int v = 0; v < num_vars_; ++v)
        for (int k = 0; k < e[v]; ++k) term = term * args[v];
      out = out + term;
    }
    return out;
  }

  /// Replaces every x_v^2 factor by the given polynomial until the degree in
  /// x_v drops below two. Terminating since the replacement is x_v-free.
  Polynomial eliminate_square(int v, const Polynomial& replacement) const {
    Polynomial cur = *this;
    while (cur.degree_in(v) >= 2) {
      Polynomial next(num_vars_);
      for (const auto& [e, c] : cur.terms_) {
        if (e[v] < 2) {
          next.add_term(e, c);
          continue;
        }
        Exponents d = e;
        d[v] -= 2;
        Polynomial stub(num_vars_);
        stub.add_term(d, c);
        next = next + stub * replacement;
      }
      cur = next;
    }
    return cur;
  }

  std::string str(const std::vector<std::string>& names = {}) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      os << (first ? "" : " + ") << c.str();
      for (int v = 0; v < num_vars_; ++v) {
        if (e[v] == 0) continue;
        os << "*" << (v < static_cast<int>(names.size()) ? names[v] : "x" + std::to_string(v + 1));
        if (e[v] > 1) os << "^" << static_cast<int>(e[v]);
      }
      first = false;
    }
    return os.str();
  }

 private:
  int num_vars_;
  std::map<Exponents, Rational> terms_;
};

}  // namespace cs3
