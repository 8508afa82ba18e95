#pragma once

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

#include "coiso/error.hpp"
#include "coiso/scalar.hpp"

namespace coiso {

// Dense row-major matrix over a commutative ring T.
//
// Arithmetic (+, -, *, transpose) works for any ring.  The elimination
// routines below (rref, rank, nullspace, solve, det, inverse) require a
// field: T = Rat (exact pivoting) or T = double (partial pivoting with a
// relative threshold).
template <class T>
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * cols) {
    require(rows >= 0 && cols >= 0, "Matrix: negative dimension");
  }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  T& operator()(int i, int j) { return a_[size_t(i) * cols_ + j]; }
  const T& operator()(int i, int j) const { return a_[size_t(i) * cols_ + j]; }

  Matrix transpose() const {
    Matrix m(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
    return m;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    require(a.rows_ == b.rows_ && a.cols_ == b.cols_, "Matrix: shape mismatch in +");
    Matrix m(a.rows_, a.cols_);
    for (size_t k = 0; k < a.a_.size(); ++k) m.a_[k] = a.a_[k] + b.a_[k];
    return m;
  }

  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    require(a.rows_ == b.rows_ && a.cols_ == b.cols_, "Matrix: shape mismatch in -");
    Matrix m(a.rows_, a.cols_);
    for (size_t k = 0; k < a.a_.size(); ++k) m.a_[k] = a.a_[k] - b.a_[k];
    return m;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    require(a.cols_ == b.rows_, "Matrix: shape mismatch in *");
    Matrix m(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        for (int j = 0; j < b.cols_; ++j) m(i, j) = m(i, j) + aik * b(k, j);
      }
    return m;
  }

  friend Matrix operator*(const T& s, const Matrix& a) {
    Matrix m(a.rows_, a.cols_);
    for (size_t k = 0; k < a.a_.size(); ++k) m.a_[k] = s * a.a_[k];
    return m;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }

  std::vector<T> apply(const std::vector<T>& v) const {
    require(int(v.size()) == cols_, "Matrix: vector length mismatch");
    std::vector<T> r(rows_, T(0));
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r[i] = r[i] + (*this)(i, j) * v[j];
    return r;
  }

  std::vector<T> col(int j) const {
    std::vector<T> r(rows_);
    for (int i = 0; i < rows_; ++i) r[i] = (*this)(i, j);
    return r;
  }

  void set_col(int j, const std::vector<T>& v) {
    require(int(v.size()) == rows_, "Matrix: column length mismatch");
    for (int i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
  }

  bool is_zero() const {
    for (const T& x : a_)
      if (!ScalarTraits<T>::is_zero(x)) return false;
    return true;
  }

 private:
  int rows_, cols_;
  std::vector<T> a_;
};

template <class T>
Matrix<T> from_columns(int rows, const std::vector<std::vector<T>>& cols) {
  Matrix<T> m(rows, int(cols.size()));
  for (int j = 0; j < int(cols.size()); ++j) m.set_col(j, cols[j]);
  return m;
}

template <class T>
struct RrefResult {
  Matrix<T> mat;            // reduced row echelon form, pivots scaled to 1
  std::vector<int> pivots;  // pivot column per pivot row, increasing
  int rank = 0;
};

namespace detail {

inline double rref_scale(const Matrix<double>& m) {
  double s = 0.0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) s = std::max(s, std::fabs(m(i, j)));
  return s == 0.0 ? 1.0 : s;
}

}  // namespace detail

// Reduced row echelon form.  Exact scalars pick the first nonzero pivot in
// each column (deterministic); floats pick the largest-magnitude entry and
// treat |x| <= rel_tol * max|entry of input| as zero.
template <class T>
RrefResult<T> rref(Matrix<T> m, double rel_tol = kDefaultRelTol) {
  RrefResult<T> res;
  const int rows = m.rows(), cols = m.cols();
  double cut = 0.0;
  if constexpr (!ScalarTraits<T>::exact) {
    cut = rel_tol * detail::rref_scale(m);
  }
  auto negligible = [&](const T& x) {
    if constexpr (ScalarTraits<T>::exact)
      return ScalarTraits<T>::is_zero(x);
    else
      return abs_value(x) <= cut;
  };

  int pr = 0;  // next pivot row
  for (int pc = 0; pc < cols && pr < rows; ++pc) {
    int sel = -1;
    if constexpr (ScalarTraits<T>::exact) {
      for (int i = pr; i < rows; ++i)
        if (!negligible(m(i, pc))) { sel = i; break; }
    } else {
      T best = T(0);
      for (int i = pr; i < rows; ++i)
        if (abs_value(m(i, pc)) > abs_value(best) && !negligible(m(i, pc))) {
          best = m(i, pc);
          sel = i;
        }
    }
    if (sel < 0) continue;
    if (sel != pr)
      for (int j = 0; j < cols; ++j) std::swap(m(sel, j), m(pr, j));
    const T piv = m(pr, pc);
    for (int j = pc; j < cols; ++j) m(pr, j) = m(pr, j) / piv;
    m(pr, pc) = T(1);
    for (int i = 0; i < rows; ++i) {
      if (i == pr) continue;
      const T f = m(i, pc);
      if (negligible(f)) { m(i, pc) = T(0); continue; }
      for (int j = pc; j < cols; ++j) m(i, j) = m(i, j) - f * m(pr, j);
      m(i, pc) = T(0);
    }
    res.pivots.push_back(pc);
    ++pr;
  }
  res.rank = pr;
  res.mat = std::move(m);
  return res;
}

template <class T>
int rank(const Matrix<T>& m, double rel_tol = kDefaultRelTol) {
  return rref(m, rel_tol).rank;
}

// Kernel basis as matrix columns, one per free column, in increasing free
// column order; the free coordinate of each basis vector equals 1.
template <class T>
Matrix<T> nullspace(const Matrix<T>& m, double rel_tol = kDefaultRelTol) {
  RrefResult<T> r = rref(m, rel_tol);
  const int cols = m.cols();
  std::vector<bool> is_pivot(cols, false);
  for (int p : r.pivots) is_pivot[p] = true;
  Matrix<T> basis(cols, cols - r.rank);
  int bj = 0;
  for (int j = 0; j < cols; ++j) {
    if (is_pivot[j]) continue;
    basis(j, bj) = T(1);
    for (int i = 0; i < r.rank; ++i) basis(r.pivots[i], bj) = -r.mat(i, j);
    ++bj;
  }
  return basis;
}

// One particular solution of A x = b with free variables set to zero, or
// nullopt if the system is inconsistent.
template <class T>
std::optional<std::vector<T>> solve(const Matrix<T>& a, const std::vector<T>& b,
                                    double rel_tol = kDefaultRelTol) {
  require(int(b.size()) == a.rows(), "solve: rhs length mismatch");
  Matrix<T> aug(a.rows(), a.cols() + 1);
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  RrefResult<T> r = rref(aug, rel_tol);
  for (int i = 0; i < r.rank; ++i)
    if (r.pivots[i] == a.cols()) return std::nullopt;
  std::vector<T> x(a.cols(), T(0));
  for (int i = 0; i < r.rank; ++i) x[r.pivots[i]] = r.mat(i, a.cols());
  return x;
}

template <class T>
T det(Matrix<T> m, double rel_tol = kDefaultRelTol) {
  require(m.rows() == m.cols(), "det: matrix not square");
  const int n = m.rows();
  double cut = 0.0;
  if constexpr (!ScalarTraits<T>::exact) cut = rel_tol * detail::rref_scale(m);
  T d(1);
  for (int c = 0; c < n; ++c) {
    int sel = -1;
    if constexpr (ScalarTraits<T>::exact) {
      for (int i = c; i < n; ++i)
        if (!ScalarTraits<T>::is_zero(m(i, c))) { sel = i; break; }
    } else {
      T best = T(0);
      for (int i = c; i < n; ++i)
        if (abs_value(m(i, c)) > abs_value(best) && abs_value(m(i, c)) > cut) {
          best = m(i, c);
          sel = i;
        }
    }
    if (sel < 0) return T(0);
    if (sel != c) {
      for (int j = 0; j < n; ++j) std::swap(m(sel, j), m(c, j));
      d = -d;
    }
    d = d * m(c, c);
    const T piv = m(c, c);
    for (int i = c + 1; i < n; ++i) {
      const T f = m(i, c) / piv;
      for (int j = c; j < n; ++j) m(i, j) = m(i, j) - f * m(c, j);
    }
  }
  return d;
}

template <class T>
Matrix<T> inverse(const Matrix<T>& m, double rel_tol = kDefaultRelTol) {
  require(m.rows() == m.cols(), "inverse: matrix not square");
  const int n = m.rows();
  if (n == 0) return m;
  Matrix<T> aug(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = T(1);
  }
  RrefResult<T> r = rref(aug, rel_tol);
  require(r.rank >= n && r.pivots[n - 1] == n - 1, "inverse: singular matrix");
  Matrix<T> inv(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv(i, j) = r.mat(i, n + j);
  return inv;
}

}  // namespace coiso
