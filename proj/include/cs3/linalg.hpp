#pragma once

#include <cmath>
#include <initializer_list>
#include <optional>
#include <vector>

#include "cs3/errors.hpp"
#include "cs3/rational.hpp"

namespace cs3 {

/// Dense row-major matrix over an arbitrary scalar. Sizes in this library
/// stay tiny (largest is the 15x15 Gram matrix of sl(4)), so no attempt is
/// made to be clever about storage or blocking.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(rows * cols, T{}) {}
  Matrix(int rows, int cols, std::initializer_list<T> vals)
      : rows_(rows), cols_(cols), data_(vals) {
    if (static_cast<int>(data_.size()) != rows * cols)
      throw Error("matrix initializer size mismatch");
  }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = scalar_traits<T>::from_rational(Rational(1));
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  T& operator()(int r, int c) { return data_[r * cols_ + c]; }
  const T& operator()(int r, int c) const { return data_[r * cols_ + c]; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    Matrix r = a;
    for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] = r.data_[i] + b.data_[i];
    return r;
  }
  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    Matrix r = a;
    for (std::size_t i = 0; i < r.data_.size(); ++i) r.data_[i] = r.data_[i] - b.data_[i];
    return r;
  }
  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    Matrix r(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (scalar_traits<T>::is_zero(aik)) continue;
        for (int j = 0; j < b.cols_; ++j) r(i, j) = r(i, j) + aik * b(k, j);
      }
    return r;
  }
  friend Matrix operator*(const T& s, const Matrix& a) {
    Matrix r = a;
    for (auto& v : r.data_) v = s * v;
    return r;
  }
  Matrix operator-() const {
    Matrix r = *this;
    for (auto& v : r.data_) v = -v;
    return r;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  T trace() const {
    T t{};
    for (int i = 0; i < rows_; ++i) t = t + (*this)(i, i);
    return t;
  }

  std::vector<T> apply(const std::vector<T>& v) const {
    std::vector<T> out(rows_, T{});
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j)
        if (!scalar_traits<T>::is_zero((*this)(i, j)))
          out[i] = out[i] + (*this)(i, j) * v[j];
    return out;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, std::fabs(scalar_traits<T>::to_double(v)));
    return m;
  }

  template <class U>
  Matrix<U> cast() const {
    Matrix<U> out(rows_, cols_);
    for (int r = 0; r < rows_; ++r)
      for (int c = 0; c < cols_; ++c)
        out(r, c) = convert_scalar<U>((*this)(r, c));
    return out;
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<T> data_;

  template <class U>
  static U convert_scalar(const T& v);
};

template <>
template <>
inline double Matrix<Rational>::convert_scalar<double>(const Rational& v) {
  return v.to_double();
}
template <>
template <>
inline PiScalar Matrix<Rational>::convert_scalar<PiScalar>(const Rational& v) {
  return PiScalar(v);
}
template <>
template <>
inline Rational Matrix<Rational>::convert_scalar<Rational>(const Rational& v) {
  return v;
}

using MatR = Matrix<Rational>;
using MatD = Matrix<double>;

template <class T>
double vec_max_abs(const std::vector<T>& v) {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, std::fabs(scalar_traits<T>::to_double(x)));
  return m;
}

/// Solves A X = B by Gaussian elimination with pivoting on the largest
/// magnitude entry. Exact for Rational, partially pivoted for double.
template <class T>
Matrix<T> solve_linear(Matrix<T> a, Matrix<T> b) {
  const int n = a.rows();
  if (a.cols() != n || b.rows() != n) throw Error("solve_linear: shape mismatch");
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    double best = 0.0;
    for (int r = col; r < n; ++r) {
      double mag = std::fabs(scalar_traits<T>::to_double(a(r, col)));
      if (!scalar_traits<T>::is_zero(a(r, col)) && mag > best) {
        best = mag;
        pivot = r;
      }
    }
    if (pivot < 0) throw SingularSystem("singular linear system");
    if (pivot != col) {
      for (int c = 0; c < n; ++c) std::swap(a(pivot, c), a(col, c));
      for (int c = 0; c < b.cols(); ++c) std::swap(b(pivot, c), b(col, c));
    }
    T inv_p = scalar_traits<T>::from_rational(Rational(1)) / a(col, col);
    for (int c = col; c < n; ++c) a(col, c) = inv_p * a(col, c);
    for (int c = 0; c < b.cols(); ++c) b(col, c) = inv_p * b(col, c);
    for (int r = 0; r < n; ++r) {
      if (r == col || scalar_traits<T>::is_zero(a(r, col))) continue;
      T factor = a(r, col);
      for (int c = col; c < n; ++c) a(r, c) = a(r, c) - factor * a(col, c);
      for (int c = 0; c < b.cols(); ++c) b(r, c) = b(r, c) - factor * b(col, c);
    }
  }
  return b;
}

template <class T>
Matrix<T> inverse(const Matrix<T>& a) {
  return solve_linear(a, Matrix<T>::identity(a.rows()));
}

template <class T>
T determinant(Matrix<T> a) {
  const int n = a.rows();
  T det = scalar_traits<T>::from_rational(Rational(1));
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    double best = 0.0;
    for (int r = col; r < n; ++r) {
      double mag = std::fabs(scalar_traits<T>::to_double(a(r, col)));
      if (!scalar_traits<T>::is_zero(a(r, col)) && mag > best) {
        best = mag;
        pivot = r;
      }
    }
    if (pivot < 0) return T{};
    if (pivot != col) {
      for (int c = 0; c < n; ++c) std::swap(a(pivot, c), a(col, c));
      det = -det;
    }
    det = det * a(col, col);
    T inv_p = scalar_traits<T>::from_rational(Rational(1)) / a(col, col);
    for (int r = col + 1; r < n; ++r) {
      if (scalar_traits<T>::is_zero(a(r, col))) continue;
      T factor = a(r, col) * inv_p;
      for (int c = col; c < n; ++c) a(r, c) = a(r, c) - factor * a(col, c);
    }
  }
  return det;
}

/// Expresses right-hand sides in the column span of a fixed rational matrix.
/// The reduction is computed once, exactly; solutions for any scalar type
/// reuse the recorded row operations. Throws DependentBasis when the columns
/// are not independent (detected at construction).
class SpanSolver {
 public:
  explicit SpanSolver(MatR span) : span_(std::move(span)) {
    const int m = span_.rows();
    const int k = span_.cols();
    red_ = span_;
    ops_.clear();
    pivot_rows_.clear();
    std::vector<bool> used(m, false);
    for (int col = 0; col < k; ++col) {
      int pivot = -1;
      for (int r = 0; r < m; ++r)
        if (!used[r] && !red_(r, col).is_zero()) {
          pivot = r;
          break;
        }
      if (pivot < 0) throw DependentBasis("span columns are linearly dependent");
      used[pivot] = true;
      pivot_rows_.push_back(pivot);
      Rational inv_p = Rational(1) / red_(pivot, col);
      ops_.push_back({Op::Scale, pivot, 0, inv_p});
      for (int c = 0; c < k; ++c) red_(pivot, c) = inv_p * red_(pivot, c);
      for (int r = 0; r < m; ++r) {
        if (r == pivot || red_(r, col).is_zero()) continue;
        Rational f = red_(r, col);
        ops_.push_back({Op::Eliminate, r, pivot, f});
        for (int c = 0; c < k; ++c) red_(r, c) = red_(r, c) - f * red_(pivot, c);
      }
    }
  }

  int dim() const { return span_.cols(); }
  int ambient() const { return span_.rows(); }

  /// Coordinates of v in the span; residual_out receives the off-span part.
  template <class S>
  std::vector<S> coordinates(std::vector<S> v, double* residual_out = nullptr) const {
    for (const auto& op : ops_) {
      S f = scalar_traits<S>::from_rational(op.factor);
      if (op.kind == Op::Scale)
        v[op.row] = f * v[op.row];
      else
        v[op.row] = v[op.row] - f * v[op.other];
    }
    std::vector<S> coords(span_.cols());
    for (int c = 0; c < span_.cols(); ++c) coords[c] = v[pivot_rows_[c]];
    double resid = 0.0;
    std::vector<bool> is_pivot(span_.rows(), false);
    for (int r : pivot_rows_) is_pivot[r] = true;
    for (int r = 0; r < span_.rows(); ++r)
      if (!is_pivot[r]) resid = std::max(resid, std::fabs(scalar_traits<S>::to_double(v[r])));
    if (residual_out) *residual_out = resid;
    return coords;
  }

 private:
  struct Op {
    enum Kind { Scale, Eliminate } kind;
    int row;
    int other;
    Rational factor;
  };

  MatR span_;
  MatR red_;
  std::vector<Op> ops_;
  std::vector<int> pivot_rows_;
};

/// Rational kernel basis of a (possibly rectangular) matrix.
inline std::vector<std::vector<Rational>> kernel_basis(MatR a) {
  const int rows = a.rows(), cols = a.cols();
  std::vector<int> pivot_col_of_row;
  int lead = 0;
  for (int r = 0; r < rows && lead < cols; ++r) {
    int pr = -1;
    while (lead < cols) {
      for (int rr = r; rr < rows; ++rr)
        if (!a(rr, lead).is_zero()) {
          pr = rr;
          break;
        }
      if (pr >= 0) break;
      ++lead;
    }
    if (pr < 0) break;
    for (int c = 0; c < cols; ++c) std::swap(a(pr, c), a(r, c));
    Rational inv_p = Rational(1) / a(r, lead);
    for (int c = 0; c < cols; ++c) a(r, c) = inv_p * a(r, c);
    for (int rr = 0; rr < rows; ++rr) {
      if (rr == r || a(rr, lead).is_zero()) continue;
      Rational f = a(rr, lead);
      for (int c = 0; c < cols; ++c) a(rr, c) = a(rr, c) - f * a(r, c);
    }
    pivot_col_of_row.push_back(lead);
    ++lead;
  }
  std::vector<bool> is_pivot(cols, false);
  for (int c : pivot_col_of_row) is_pivot[c] = true;
  std::vector<std::vector<Rational>> basis;
  for (int free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<Rational> v(cols, Rational(0));
    v[free] = Rational(1);
    for (std::size_t r = 0; r < pivot_col_of_row.size(); ++r)
      v[pivot_col_of_row[r]] = -a(static_cast<int>(r), free);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Rank-3 array with (k, i, j) indexing, all sides of equal dimension.
template <class T>
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(int dim) : dim_(dim), data_(dim * dim * dim, T{}) {}

  int dim() const { return dim_; }
  T& operator()(int k, int i, int j) { return data_[(k * dim_ + i) * dim_ + j]; }
  const T& operator()(int k, int i, int j) const {
    return data_[(k * dim_ + i) * dim_ + j];
  }

  friend bool operator==(const Tensor3& a, const Tensor3& b) {
    return a.dim_ == b.dim_ && a.data_ == b.data_;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, std::fabs(scalar_traits<T>::to_double(v)));
    return m;
  }

 private:
  int dim_ = 0;
  std::vector<T> data_;
};

}  // namespace cs3
