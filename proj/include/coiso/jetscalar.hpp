#pragma once

#include <type_traits>
#include <vector>

#include "coiso/matrix.hpp"
#include "coiso/scalar.hpp"

namespace coiso {

// Truncated Taylor scalar in several independent first-order variables
// t_0, ..., t_{m-1} with t_k^2 = 0: coefficients indexed by subsets of the
// variable set, so a width-m jet stores 2^m base scalars.  Variable ids are
// global; widths widen on demand, missing high coefficients read as zero.
//
// One derivative tower level = one variable.  The mixed partial
// d/dt_{k_1} ... d/dt_{k_j} at 0 is the coefficient of the subset
// {k_1, ..., k_j}; extract() peels one variable and stays in the ring.
template <class T>
class JetScalar {
 public:
  JetScalar() : c_(1, T(0)) {}
  template <class I, std::enable_if_t<std::is_integral_v<I>, int> = 0>
  JetScalar(I v) : c_(1, T(v)) {}  // NOLINT: implicit constant lift
  explicit JetScalar(const T& v) : c_(1, v) {}

  static JetScalar constant(const T& v) { return JetScalar(v); }

  // coeff * t_k
  static JetScalar var_term(int k, const T& coeff) {
    JetScalar j;
    j.c_.assign(size_t(2) << k, T(0));
    j.c_[size_t(1) << k] = coeff;
    return j;
  }

  int width() const {
    int w = 0;
    while ((size_t(1) << w) < c_.size()) ++w;
    return w;
  }

  const T& coeff(size_t subset) const {
    static const T zero(0);
    return subset < c_.size() ? c_[subset] : zero;
  }

  const T& constant_part() const { return c_[0]; }

  // d/dt_k at 0, as a jet in the remaining variables.  Subsets containing k
  // are zeroed, subset S without k picks up the old S | {k} coefficient.
  JetScalar extract(int k) const {
    const size_t bit = size_t(1) << k;
    JetScalar out;
    out.c_.assign(c_.size(), T(0));
    for (size_t s = 0; s < c_.size(); ++s)
      if (!(s & bit) && (s | bit) < c_.size()) out.c_[s] = c_[s | bit];
    out.shrink();
    return out;
  }

  bool is_zero() const {
    for (const T& x : c_)
      if (!ScalarTraits<T>::is_zero(x)) return false;
    return true;
  }

  bool is_unit() const { return !ScalarTraits<T>::is_zero(c_[0]); }

  JetScalar inv() const {
    require(is_unit(), "JetScalar: inverse of non-unit (zero constant part)");
    // x = c0 (1 + n), n of positive order: 1/x = c0^{-1} sum (-n)^j, finite.
    JetScalar n = *this;
    const T c0 = c_[0];
    n.c_[0] = T(0);
    for (auto& x : n.c_) x = x / c0;
    JetScalar acc(T(1)), term(T(1));
    const int w = width();
    for (int j = 1; j <= w; ++j) {
      term = term * n;
      if (term.is_zero()) break;
      if (j % 2 == 1)
        acc = acc - term;
      else
        acc = acc + term;
    }
    for (auto& x : acc.c_) x = x / c0;
    return acc;
  }

  friend JetScalar operator+(const JetScalar& a, const JetScalar& b) {
    JetScalar out;
    out.c_.assign(std::max(a.c_.size(), b.c_.size()), T(0));
    for (size_t s = 0; s < out.c_.size(); ++s) out.c_[s] = a.coeff(s) + b.coeff(s);
    return out;
  }

  friend JetScalar operator-(const JetScalar& a, const JetScalar& b) {
    JetScalar out;
    out.c_.assign(std::max(a.c_.size(), b.c_.size()), T(0));
    for (size_t s = 0; s < out.c_.size(); ++s) out.c_[s] = a.coeff(s) - b.coeff(s);
    return out;
  }

  friend JetScalar operator-(const JetScalar& a) {
    JetScalar out = a;
    for (auto& x : out.c_) x = -x;
    return out;
  }

  // Subset convolution over disjoint variable sets.
  friend JetScalar operator*(const JetScalar& a, const JetScalar& b) {
    JetScalar out;
    out.c_.assign(std::max(a.c_.size(), b.c_.size()), T(0));
    for (size_t s = 0; s < out.c_.size(); ++s) {
      T acc(0);
      size_t sub = s;
      while (true) {
        const T& x = a.coeff(sub);
        if (!ScalarTraits<T>::is_zero(x)) acc = acc + x * b.coeff(s ^ sub);
        if (sub == 0) break;
        sub = (sub - 1) & s;
      }
      out.c_[s] = acc;
    }
    return out;
  }

  friend JetScalar operator/(const JetScalar& a, const JetScalar& b) {
    return a * b.inv();
  }

  friend bool operator==(const JetScalar& a, const JetScalar& b) {
    for (size_t s = 0; s < std::max(a.c_.size(), b.c_.size()); ++s)
      if (!(a.coeff(s) == b.coeff(s))) return false;
    return true;
  }
  friend bool operator!=(const JetScalar& a, const JetScalar& b) { return !(a == b); }

 private:
  void shrink() {
    while (c_.size() > 1) {
      bool upper_zero = true;
      for (size_t s = c_.size() / 2; s < c_.size(); ++s)
        if (!ScalarTraits<T>::is_zero(c_[s])) { upper_zero = false; break; }
      if (!upper_zero) break;
      c_.resize(c_.size() / 2);
    }
  }

  std::vector<T> c_;  // size is a power of two
};

template <class T>
struct ScalarTraits<JetScalar<T>> {
  static constexpr bool exact = ScalarTraits<T>::exact;
  static bool is_zero(const JetScalar<T>& x) { return x.is_zero(); }
  static std::string str(const JetScalar<T>& x) {
    return "jet(" + ScalarTraits<T>::str(x.constant_part()) + ", ...)";
  }
};

template <class T>
struct FromRat<JetScalar<T>> {
  static JetScalar<T> get(const Rat& q) {
    return JetScalar<T>::constant(from_rat<T>(q));
  }
};

// Inverse of a matrix of jets with invertible constant part:
// M = M0 + N, M^{-1} = sum_j (-M0^{-1} N)^j M0^{-1}, a finite sum because
// N has no constant term.
template <class T>
Matrix<JetScalar<T>> jet_matrix_inverse(const Matrix<JetScalar<T>>& m,
                                        double rel_tol = kDefaultRelTol) {
  require(m.rows() == m.cols(), "jet_matrix_inverse: matrix not square");
  const int n = m.rows();
  Matrix<T> m0(n, n);
  int maxw = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      m0(i, j) = m(i, j).constant_part();
      maxw = std::max(maxw, m(i, j).width());
    }
  Matrix<T> m0inv = inverse(m0, rel_tol);
  Matrix<JetScalar<T>> m0inv_j(n, n), nil(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      m0inv_j(i, j) = JetScalar<T>(m0inv(i, j));
      nil(i, j) = m(i, j) - JetScalar<T>(m0(i, j));
    }
  Matrix<JetScalar<T>> x = m0inv_j * nil;  // positive order throughout
  Matrix<JetScalar<T>> acc = Matrix<JetScalar<T>>::identity(n);
  Matrix<JetScalar<T>> term = Matrix<JetScalar<T>>::identity(n);
  for (int j = 1; j <= maxw; ++j) {
    term = term * x;
    bool zero = true;
    for (int a = 0; a < n && zero; ++a)
      for (int b = 0; b < n; ++b)
        if (!term(a, b).is_zero()) { zero = false; break; }
    if (zero) break;
    if (j % 2 == 1)
      acc = acc - term;
    else
      acc = acc + term;
  }
  return acc * m0inv_j;
}

}  // namespace coiso
