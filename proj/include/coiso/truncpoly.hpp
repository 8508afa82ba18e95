#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "coiso/multiindex.hpp"
#include "coiso/scalar.hpp"

namespace coiso {

namespace detail {

// Shared monomial tables: degree-k monomials in nv variables are the weakly
// increasing variable tuples of SymIndex(k, nv).
inline const SymIndex& monomial_index(int k, int nv) {
  static std::map<std::pair<int, int>, SymIndex> cache;
  auto key = std::make_pair(k, nv);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, SymIndex(k, nv)).first;
  return it->second;
}

}  // namespace detail

// Polynomial in nv variables truncated at total degree deg, dense over
// monomials grouped by degree.  A monomial is named by its sorted variable
// list, so x_0^2 x_3 is {0, 0, 3}.
template <class T>
class TruncPoly {
 public:
  TruncPoly() = default;
  TruncPoly(int nv, int deg) : nv_(nv), deg_(deg), c_(deg + 1) {
    require(nv >= 0 && deg >= 0, "TruncPoly: bad shape");
    for (int k = 0; k <= deg; ++k)
      c_[k].assign(size_t(detail::monomial_index(k, nv).count()), T(0));
  }

  static TruncPoly constant(int nv, int deg, const T& v) {
    TruncPoly p(nv, deg);
    p.c_[0][0] = v;
    return p;
  }

  // The monomial x_i, or the constant 0 when truncating at degree 0.
  static TruncPoly var(int nv, int deg, int i) {
    require(i >= 0 && i < nv, "TruncPoly::var: index out of range");
    TruncPoly p(nv, deg);
    if (deg >= 1) p.c_[1][i] = T(1);
    return p;
  }

  int vars() const { return nv_; }
  int degree() const { return deg_; }
  const T& constant_term() const { return c_[0][0]; }

  T& coeff(const std::vector<int>& mono) {
    const int k = int(mono.size());
    require(k <= deg_, "TruncPoly::coeff: degree out of range");
    return c_[k][detail::monomial_index(k, nv_).slot(mono)];
  }
  const T& coeff(const std::vector<int>& mono) const {
    return const_cast<TruncPoly*>(this)->coeff(mono);
  }

  friend TruncPoly operator+(const TruncPoly& a, const TruncPoly& b) {
    require(a.nv_ == b.nv_ && a.deg_ == b.deg_, "TruncPoly: shape mismatch");
    TruncPoly out = a;
    for (int k = 0; k <= out.deg_; ++k)
      for (size_t s = 0; s < out.c_[k].size(); ++s)
        out.c_[k][s] = out.c_[k][s] + b.c_[k][s];
    return out;
  }

  friend TruncPoly operator-(const TruncPoly& a, const TruncPoly& b) {
    require(a.nv_ == b.nv_ && a.deg_ == b.deg_, "TruncPoly: shape mismatch");
    TruncPoly out = a;
    for (int k = 0; k <= out.deg_; ++k)
      for (size_t s = 0; s < out.c_[k].size(); ++s)
        out.c_[k][s] = out.c_[k][s] - b.c_[k][s];
    return out;
  }

  friend TruncPoly operator*(const T& s, const TruncPoly& a) {
    TruncPoly out = a;
    for (auto& blk : out.c_)
      for (auto& e : blk) e = s * e;
    return out;
  }

  friend TruncPoly operator*(const TruncPoly& a, const TruncPoly& b) {
    require(a.nv_ == b.nv_ && a.deg_ == b.deg_, "TruncPoly: shape mismatch");
    TruncPoly out(a.nv_, a.deg_);
    std::vector<int> merged;
    for (int ka = 0; ka <= a.deg_; ++ka) {
      const SymIndex& ia = detail::monomial_index(ka, a.nv_);
      for (int sa = 0; sa < ia.count(); ++sa) {
        const T& ca = a.c_[ka][sa];
        if (ScalarTraits<T>::is_zero(ca)) continue;
        for (int kb = 0; ka + kb <= a.deg_; ++kb) {
          const SymIndex& ib = detail::monomial_index(kb, a.nv_);
          const SymIndex& io = detail::monomial_index(ka + kb, a.nv_);
          for (int sb = 0; sb < ib.count(); ++sb) {
            const T& cb = b.c_[kb][sb];
            if (ScalarTraits<T>::is_zero(cb)) continue;
            const std::vector<int>& ma = ia.tuple(sa);
            const std::vector<int>& mb = ib.tuple(sb);
            merged.resize(ma.size() + mb.size());
            std::merge(ma.begin(), ma.end(), mb.begin(), mb.end(), merged.begin());
            const int so = io.slot_sorted(merged);
            out.c_[ka + kb][so] = out.c_[ka + kb][so] + ca * cb;
          }
        }
      }
    }
    return out;
  }

  friend bool operator==(const TruncPoly& a, const TruncPoly& b) {
    return a.nv_ == b.nv_ && a.deg_ == b.deg_ && a.c_ == b.c_;
  }

 private:
  int nv_ = 0, deg_ = 0;
  std::vector<std::vector<T>> c_;
};

// Sum coeffs[k] * (g - g(0))^k, Horner in the nilpotent part.  Callers pass
// coeffs[k] = h^(k)(g(0)) / k! to compose a scalar series h after g.
template <class T>
TruncPoly<T> apply_series(const TruncPoly<T>& g, const std::vector<T>& coeffs) {
  require(int(coeffs.size()) == g.degree() + 1, "apply_series: wrong series length");
  TruncPoly<T> y = g - TruncPoly<T>::constant(g.vars(), g.degree(), g.constant_term());
  TruncPoly<T> res = TruncPoly<T>::constant(g.vars(), g.degree(), coeffs[g.degree()]);
  for (int k = g.degree() - 1; k >= 0; --k)
    res = res * y + TruncPoly<T>::constant(g.vars(), g.degree(), coeffs[k]);
  return res;
}

inline TruncPoly<double> sqrt_trunc(const TruncPoly<double>& g) {
  const double g0 = g.constant_term();
  require(g0 > 0, "sqrt_trunc: constant term not positive");
  std::vector<double> coeffs(g.degree() + 1);
  coeffs[0] = std::sqrt(g0);
  for (int k = 1; k <= g.degree(); ++k)
    coeffs[k] = coeffs[k - 1] * (1.5 - k) / (k * g0);
  return apply_series(g, coeffs);
}

inline TruncPoly<double> sin_trunc(const TruncPoly<double>& g) {
  const double s = std::sin(g.constant_term()), c = std::cos(g.constant_term());
  const double cycle[4] = {s, c, -s, -c};
  std::vector<double> coeffs(g.degree() + 1);
  for (int k = 0; k <= g.degree(); ++k) coeffs[k] = cycle[k % 4] / double(factorial(k));
  return apply_series(g, coeffs);
}

inline TruncPoly<double> cos_trunc(const TruncPoly<double>& g) {
  const double s = std::sin(g.constant_term()), c = std::cos(g.constant_term());
  const double cycle[4] = {c, -s, -c, s};
  std::vector<double> coeffs(g.degree() + 1);
  for (int k = 0; k <= g.degree(); ++k) coeffs[k] = cycle[k % 4] / double(factorial(k));
  return apply_series(g, coeffs);
}

}  // namespace coiso
