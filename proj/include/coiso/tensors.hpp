#pragma once

#include <numeric>
#include <vector>

#include "coiso/matrix.hpp"
#include "coiso/multiindex.hpp"

namespace coiso {

inline std::int64_t sym_dim(int k, int d, int w) { return binom(d + k - 1, k) * w; }

// Symmetric k-linear map R^d -> R^w, stored on weakly increasing index
// tuples.  The stored value IS the evaluation on the basis tuple; no
// multinomial factors are folded in.
template <class T>
class SymTensor {
 public:
  SymTensor() = default;
  SymTensor(int k, int d, int w)
      : k_(k), d_(d), w_(w), idx_(k, d), a_(size_t(idx_.count()) * w, T(0)) {
    require(k >= 0 && d >= 1 && w >= 1, "SymTensor: bad shape");
  }

  int order() const { return k_; }
  int source_dim() const { return d_; }
  int target_dim() const { return w_; }
  int slots() const { return idx_.count(); }
  const SymIndex& index() const { return idx_; }

  T& entry(int slot, int t) { return a_[size_t(slot) * w_ + t]; }
  const T& entry(int slot, int t) const { return a_[size_t(slot) * w_ + t]; }

  // Evaluation on a basis tuple in any argument order.
  std::vector<T> eval_basis(const std::vector<int>& tuple) const {
    const int s = idx_.slot(tuple);
    return std::vector<T>(a_.begin() + size_t(s) * w_, a_.begin() + size_t(s + 1) * w_);
  }

  // Full multilinear evaluation, d^k terms.
  std::vector<T> eval(const std::vector<std::vector<T>>& args) const {
    require(int(args.size()) == k_, "SymTensor::eval: wrong argument count");
    for (const auto& v : args)
      require(int(v.size()) == d_, "SymTensor::eval: argument length != d");
    std::vector<T> out(w_, T(0));
    for_each_tuple(k_, d_, [&](const std::vector<int>& t) {
      T coef(1);
      for (int j = 0; j < k_; ++j) coef = coef * args[j][t[j]];
      if constexpr (ScalarTraits<T>::exact) {
        if (ScalarTraits<T>::is_zero(coef)) return;
      }
      const int s = idx_.slot(t);
      for (int c = 0; c < w_; ++c) out[c] = out[c] + coef * a_[size_t(s) * w_ + c];
    });
    return out;
  }

  // Contraction in the first argument: v |-> A(v, ...), one order lower.
  SymTensor contract_first(const std::vector<T>& v) const {
    require(k_ >= 1, "SymTensor::contract_first: order 0");
    require(int(v.size()) == d_, "SymTensor::contract_first: vector length != d");
    SymTensor out(k_ - 1, d_, w_);
    for (int s = 0; s < out.slots(); ++s) {
      std::vector<int> full(k_);
      const std::vector<int>& rest = out.idx_.tuple(s);
      for (int i = 0; i < d_; ++i) {
        std::copy(rest.begin(), rest.end(), full.begin());
        full[k_ - 1] = i;
        const int src = idx_.slot(full);
        for (int c = 0; c < w_; ++c)
          out.entry(s, c) = out.entry(s, c) + v[i] * a_[size_t(src) * w_ + c];
      }
    }
    return out;
  }

  // The column-j image vector, for order-1 tensors used as linear maps.
  Matrix<T> as_matrix() const {
    require(k_ == 1, "SymTensor::as_matrix: order != 1");
    Matrix<T> m(w_, d_);
    for (int j = 0; j < d_; ++j)
      for (int c = 0; c < w_; ++c) m(c, j) = entry(j, c);
    return m;
  }

  static SymTensor from_matrix(const Matrix<T>& m) {
    SymTensor t(1, m.cols(), m.rows());
    for (int j = 0; j < m.cols(); ++j)
      for (int c = 0; c < m.rows(); ++c) t.entry(j, c) = m(c, j);
    return t;
  }

  friend SymTensor operator+(const SymTensor& x, const SymTensor& y) {
    require(x.k_ == y.k_ && x.d_ == y.d_ && x.w_ == y.w_, "SymTensor: shape mismatch");
    SymTensor out = x;
    for (size_t i = 0; i < out.a_.size(); ++i) out.a_[i] = out.a_[i] + y.a_[i];
    return out;
  }

  friend SymTensor operator*(const T& s, const SymTensor& x) {
    SymTensor out = x;
    for (auto& e : out.a_) e = s * e;
    return out;
  }

  friend bool operator==(const SymTensor& x, const SymTensor& y) {
    return x.k_ == y.k_ && x.d_ == y.d_ && x.w_ == y.w_ && x.a_ == y.a_;
  }

  bool is_zero() const {
    for (const T& e : a_)
      if (!ScalarTraits<T>::is_zero(e)) return false;
    return true;
  }

  template <class U, class Fn>
  SymTensor<U> map(Fn&& fn) const {
    SymTensor<U> out(k_, d_, w_);
    for (int s = 0; s < slots(); ++s)
      for (int c = 0; c < w_; ++c) out.entry(s, c) = fn(entry(s, c));
    return out;
  }

 private:
  template <class U>
  friend class SymTensor;

  int k_ = 0, d_ = 1, w_ = 1;
  SymIndex idx_;
  std::vector<T> a_;
};

// General m-linear map R^d -> R^w, dense row-major over index tuples.
template <class T>
class MultiTensor {
 public:
  MultiTensor() = default;
  MultiTensor(int m, int d, int w) : m_(m), d_(d), w_(w) {
    require(m >= 0 && d >= 1 && w >= 1, "MultiTensor: bad shape");
    size_t n = w;
    for (int i = 0; i < m; ++i) n *= d;
    a_.assign(n, T(0));
  }

  int order() const { return m_; }
  int source_dim() const { return d_; }
  int target_dim() const { return w_; }
  size_t total_size() const { return a_.size(); }  // block count times target dim

  size_t flat(const std::vector<int>& tuple) const {
    size_t f = 0;
    for (int i : tuple) f = f * d_ + i;
    return f;
  }

  T& entry(const std::vector<int>& tuple, int c) { return a_[flat(tuple) * w_ + c]; }
  const T& entry(const std::vector<int>& tuple, int c) const {
    return a_[flat(tuple) * w_ + c];
  }
  T& raw(size_t i) { return a_[i]; }
  const T& raw(size_t i) const { return a_[i]; }

  std::vector<T> eval(const std::vector<std::vector<T>>& args) const {
    require(int(args.size()) == m_, "MultiTensor::eval: wrong argument count");
    std::vector<T> out(w_, T(0));
    for_each_tuple(m_, d_, [&](const std::vector<int>& t) {
      T coef(1);
      for (int j = 0; j < m_; ++j) coef = coef * args[j][t[j]];
      if constexpr (ScalarTraits<T>::exact) {
        if (ScalarTraits<T>::is_zero(coef)) return;
      }
      const size_t f = flat(t);
      for (int c = 0; c < w_; ++c) out[c] = out[c] + coef * a_[f * w_ + c];
    });
    return out;
  }

  friend MultiTensor operator+(const MultiTensor& x, const MultiTensor& y) {
    require(x.m_ == y.m_ && x.d_ == y.d_ && x.w_ == y.w_, "MultiTensor: shape mismatch");
    MultiTensor out = x;
    for (size_t i = 0; i < out.a_.size(); ++i) out.a_[i] = out.a_[i] + y.a_[i];
    return out;
  }

  friend MultiTensor operator-(const MultiTensor& x, const MultiTensor& y) {
    require(x.m_ == y.m_ && x.d_ == y.d_ && x.w_ == y.w_, "MultiTensor: shape mismatch");
    MultiTensor out = x;
    for (size_t i = 0; i < out.a_.size(); ++i) out.a_[i] = out.a_[i] - y.a_[i];
    return out;
  }

  friend MultiTensor operator*(const T& s, const MultiTensor& x) {
    MultiTensor out = x;
    for (auto& e : out.a_) e = s * e;
    return out;
  }

  friend bool operator==(const MultiTensor& x, const MultiTensor& y) {
    return x.m_ == y.m_ && x.d_ == y.d_ && x.w_ == y.w_ && x.a_ == y.a_;
  }

  bool is_zero() const {
    for (const T& e : a_)
      if (!ScalarTraits<T>::is_zero(e)) return false;
    return true;
  }

  double max_abs_double() const {
    double s = 0;
    for (const T& e : a_) {
      if constexpr (ScalarTraits<T>::exact)
        s = std::max(s, std::fabs(e.to_double()));
      else
        s = std::max(s, std::fabs(double(e)));
    }
    return s;
  }

  template <class U, class Fn>
  MultiTensor<U> map(Fn&& fn) const {
    MultiTensor<U> out(m_, d_, w_);
    for (size_t i = 0; i < a_.size(); ++i) out.a_[i] = fn(a_[i]);
    return out;
  }

 private:
  template <class U>
  friend class MultiTensor;

  int m_ = 0, d_ = 1, w_ = 1;
  std::vector<T> a_;
};

// Pullback along a linear map f: S -> V given by a (dim V) x (dim S) matrix:
// (f*T)(x_0, ..., x_{m-1}) = T(f x_0, ..., f x_{m-1}).  Applied mode by mode;
// intermediate buffers index already-converted modes over S, the rest over V.
template <class T>
MultiTensor<T> mult_pullback(const MultiTensor<T>& t, const Matrix<T>& f) {
  require(f.rows() == t.source_dim(), "mult_pullback: map target != tensor source");
  const int m = t.order(), dv = t.source_dim(), ds = f.cols(), w = t.target_dim();
  std::vector<T> buf(t.total_size());
  for (size_t i = 0; i < buf.size(); ++i) buf[i] = t.raw(i);
  std::vector<int> dims(m, dv);
  for (int mode = 0; mode < m; ++mode) {
    size_t stride = 1;
    for (int j = mode + 1; j < m; ++j) stride *= size_t(dims[j]);
    size_t nblocks = 1;
    for (int j = 0; j < m; ++j) nblocks *= size_t(dims[j]);
    size_t oblocks = nblocks / size_t(dims[mode]) * size_t(ds);
    std::vector<T> out(oblocks * w, T(0));
    for (size_t b = 0; b < nblocks; ++b) {
      const size_t suffix = b % stride;
      const size_t imode = (b / stride) % size_t(dims[mode]);
      const size_t prefix = b / (stride * size_t(dims[mode]));
      for (int s = 0; s < ds; ++s) {
        const T& coef = f(int(imode), s);
        if constexpr (ScalarTraits<T>::exact) {
          if (ScalarTraits<T>::is_zero(coef)) continue;
        }
        const size_t ob = (prefix * size_t(ds) + size_t(s)) * stride + suffix;
        for (int c = 0; c < w; ++c)
          out[ob * w + c] = out[ob * w + c] + coef * buf[b * w + c];
      }
    }
    buf = std::move(out);
    dims[mode] = ds;
  }
  if (m == 0) return t;
  MultiTensor<T> res(m, ds, w);
  for (size_t i = 0; i < buf.size(); ++i) res.raw(i) = buf[i];
  return res;
}

}  // namespace coiso
