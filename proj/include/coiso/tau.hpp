#pragma once

#include <vector>

#include "coiso/jetscalar.hpp"
#include "coiso/symplectic.hpp"
#include "coiso/tensors.hpp"

namespace coiso {

enum class TauVariant {
  kPartitionSum,  // one term per ordered set partition of the middle arguments
  kPermSum,       // sum over all middle-argument permutations with 1/(k!(s-1-k)!)
};

namespace detail {

template <class T>
void check_tau_family(const SymplecticSpace& sp,
                      const std::vector<SymTensor<T>>& a, int min_len) {
  require(int(a.size()) >= min_len, "tau: family too short");
  for (int k = 0; k < int(a.size()); ++k) {
    require(a[k].order() == k + 1, "tau: family entry k must have order k+1");
    require(a[k].source_dim() == a[0].source_dim(), "tau: mixed source dims");
    require(a[k].target_dim() == sp.dim(), "tau: tensor target != 2n");
  }
}

}  // namespace detail

// The multilinear map tau_{A_1,...,A_s} of order s+1 with scalar values,
// pairing lower and upper halves of the family through omega across every
// ordered two-block partition of the middle arguments:
//
//   tau(v_0,...,v_s) = sum_{k=0}^{s-1} sum_{{1..s-1} = I ⊔ J, |I| = k}
//       omega(A_{k+1}(v_0, v_I), A_{s-k}(v_J, v_s))
//
// The perm-sum variant replaces the partition sum by a sum over all
// permutations of the middle arguments weighted by 1/(k! (s-1-k)!); the two
// agree exactly and both are kept as mutual cross-checks.
template <class T>
MultiTensor<T> tau_build(const SymplecticSpace& sp, const std::vector<SymTensor<T>>& a,
                         TauVariant variant = TauVariant::kPartitionSum) {
  detail::check_tau_family(sp, a, 2);
  const int s = int(a.size());
  const int d = a[0].source_dim();
  MultiTensor<T> out(s + 1, d, 1);

  std::vector<int> mids(s - 1);
  for_each_tuple(s + 1, d, [&](const std::vector<int>& tup) {
    T val(0);
    if (variant == TauVariant::kPartitionSum) {
      for (unsigned mask = 0; mask < (1u << (s - 1)); ++mask) {
        std::vector<int> lo{tup[0]}, hi;
        for (int j = 1; j <= s - 1; ++j)
          (mask & (1u << (j - 1)) ? lo : hi).push_back(tup[j]);
        hi.push_back(tup[s]);
        const int k = int(lo.size()) - 1;
        val = val + omega_eval(sp, a[k].eval_basis(lo), a[s - k - 1].eval_basis(hi));
      }
    } else {
      for (int j = 1; j <= s - 1; ++j) mids[j - 1] = j;
      std::vector<int> perm = mids;
      std::sort(perm.begin(), perm.end());
      do {
        for (int k = 0; k <= s - 1; ++k) {
          std::vector<int> lo{tup[0]}, hi;
          for (int t = 0; t < k; ++t) lo.push_back(tup[perm[t]]);
          for (int t = k; t < s - 1; ++t) hi.push_back(tup[perm[t]]);
          hi.push_back(tup[s]);
          const T weight = from_rat<T>(Rat(1, factorial(k) * factorial(s - 1 - k)));
          val = val + weight * omega_eval(sp, a[k].eval_basis(lo),
                                          a[s - k - 1].eval_basis(hi));
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
    out.entry(tup, 0) = val;
  });
  return out;
}

struct TauProperties {
  bool antisym_ends = false;    // tau(v_0,...,v_s) = -tau(v_s,v_1,...,v_0)
  bool sym_middle = false;      // symmetric in v_1, ..., v_{s-1}
  bool cyclic = false;          // three-term cyclic identity on (v_0, v_1, v_s)
  bool all() const { return antisym_ends && sym_middle && cyclic; }
};

// Checks the three defining properties of T_s on an order-(s+1) tensor.
// Exact scalars compare exactly; floats use tol * max(1, |T|_inf).
template <class T>
TauProperties tau_property_check(const MultiTensor<T>& t, double tol = 1e-12) {
  const int m = t.order(), s = m - 1, d = t.source_dim(), w = t.target_dim();
  require(s >= 2, "tau_property_check: order must be >= 3");
  double cut = 0.0;
  if constexpr (!ScalarTraits<T>::exact) cut = tol * std::max(1.0, t.max_abs_double());
  auto small = [&](const T& x) {
    if constexpr (ScalarTraits<T>::exact)
      return ScalarTraits<T>::is_zero(x);
    else
      return std::fabs(double(x)) <= cut;
  };

  TauProperties res;
  res.antisym_ends = res.sym_middle = res.cyclic = true;
  for_each_tuple(m, d, [&](const std::vector<int>& tup) {
    std::vector<int> rev = tup;
    std::swap(rev[0], rev[s]);
    std::vector<int> cy2 = tup, cy3 = tup;
    cy2[0] = tup[s]; cy2[1] = tup[0]; cy2[s] = tup[1];
    cy3[0] = tup[1]; cy3[1] = tup[s]; cy3[s] = tup[0];
    for (int c = 0; c < w; ++c) {
      if (!small(t.entry(tup, c) + t.entry(rev, c))) res.antisym_ends = false;
      if (!small(t.entry(tup, c) + t.entry(cy2, c) + t.entry(cy3, c))) res.cyclic = false;
      for (int j = 1; j <= s - 2; ++j) {
        std::vector<int> sw = tup;
        std::swap(sw[j], sw[j + 1]);
        if (!small(t.entry(tup, c) - t.entry(sw, c))) res.sym_middle = false;
      }
    }
  });
  return res;
}

// Solves tau_build(A_1, ..., A_{s-1}, X) = target for the top symmetric
// tensor X.  Only the k = 0 and k = s-1 partition terms involve X, and they
// are linear in it:
//
//   omega(A_1 v_0, X(v_1,...,v_s)) + omega(X(v_0,...,v_{s-1}), A_1 v_s)
//
// Requires A_1 injective; the affine map is then onto T_s, so the system is
// consistent exactly when target satisfies the three defining properties.
template <class T>
SymTensor<T> tau_solve_for_As(const SymplecticSpace& sp,
                              const std::vector<SymTensor<T>>& lower,
                              const MultiTensor<T>& target,
                              double rel_tol = kDefaultRelTol) {
  detail::check_tau_family(sp, lower, 1);
  const int s = int(lower.size()) + 1;
  const int d = lower[0].source_dim(), w = sp.dim();
  require(target.order() == s + 1 && target.source_dim() == d && target.target_dim() == 1,
          "tau_solve_for_As: target shape mismatch");
  Matrix<T> a1 = lower[0].as_matrix();
  require(rank(a1, rel_tol) == d, "tau_solve_for_As: A_1 not injective");
  require(tau_property_check(target).all(), "tau_solve_for_As: target not in T_s");

  // Residual after the X-independent terms.
  std::vector<SymTensor<T>> fam = lower;
  fam.emplace_back(s, d, w);
  MultiTensor<T> resid = target - tau_build(sp, fam);

  Matrix<T> jm = standard_form_matrix<T>(sp.n);
  std::vector<std::vector<T>> ja1(d);  // J A_1 e_i
  for (int i = 0; i < d; ++i) ja1[i] = jm.apply(a1.col(i));

  const SymIndex sidx(s, d);
  const int nunk = sidx.count() * w;
  size_t neq = 1;
  for (int i = 0; i < s + 1; ++i) neq *= size_t(d);
  Matrix<T> sys(int(neq), nunk);
  std::vector<T> rhs(neq);
  size_t row = 0;
  for_each_tuple(s + 1, d, [&](const std::vector<int>& tup) {
    std::vector<int> upper(tup.begin() + 1, tup.end());
    std::vector<int> lowr(tup.begin(), tup.end() - 1);
    const int slot_up = sidx.slot(upper), slot_lo = sidx.slot(lowr);
    // omega(A_1 e_{i_0}, X_up): coefficient of X_up[t] is -(J A_1 e_{i_0})[t]
    for (int t = 0; t < w; ++t)
      sys(int(row), slot_up * w + t) = sys(int(row), slot_up * w + t) - ja1[tup[0]][t];
    // omega(X_lo, A_1 e_{i_s}): coefficient of X_lo[t] is (J A_1 e_{i_s})[t]
    for (int t = 0; t < w; ++t)
      sys(int(row), slot_lo * w + t) = sys(int(row), slot_lo * w + t) + ja1[tup[s]][t];
    rhs[row] = resid.entry(tup, 0);
    ++row;
  });

  auto sol = solve(sys, rhs, rel_tol);
  require(sol.has_value(), "tau_solve_for_As: target not in the image");
  SymTensor<T> x(s, d, w);
  for (int slot = 0; slot < sidx.count(); ++slot)
    for (int t = 0; t < w; ++t) x.entry(slot, t) = (*sol)[slot * w + t];

  if constexpr (ScalarTraits<T>::exact) {
    fam.back() = x;
    check(tau_build(sp, fam) == target, "tau_solve_for_As: verification failed");
  }
  return x;
}

// The shifted-family derivative identity: with B_j(t) = A_j + t A_{j+1}(v, .),
//
//   d/dt|_0 tau_{B_1(t),...,B_{s-1}(t)}(v_0,...,v_{s-1})
//     = tau_{A_1,...,A_s}(v_0,...,v_{s-2}, v, v_{s-1})
//
// Both sides are computed as full order-s tensors (the right side contracted
// with v in the second-to-last slot) and compared.
template <class T>
bool tau_derivative_identity_check(const SymplecticSpace& sp,
                                   const std::vector<SymTensor<T>>& a,
                                   const std::vector<T>& v, double tol = 1e-12) {
  detail::check_tau_family(sp, a, 3);
  const int s = int(a.size());
  const int d = a[0].source_dim();
  require(int(v.size()) == d, "tau_derivative_identity_check: direction length != d");

  using J = JetScalar<T>;
  std::vector<SymTensor<J>> fam;
  for (int k = 0; k + 1 < s; ++k) {
    SymTensor<T> shift = a[k + 1].contract_first(v);
    SymTensor<J> b = a[k].template map<J>([](const T& x) { return J(x); });
    SymTensor<J> sh = shift.template map<J>([](const T& x) { return J::var_term(0, x); });
    fam.push_back(b + sh);
  }
  MultiTensor<J> lhs_jet = tau_build(sp, fam);
  MultiTensor<T> lhs = lhs_jet.template map<T>(
      [](const J& x) { return x.extract(0).constant_part(); });

  MultiTensor<T> full = tau_build(sp, a);
  MultiTensor<T> rhs(s, d, 1);
  for_each_tuple(s, d, [&](const std::vector<int>& tup) {
    // full tuple: (i_0, ..., i_{s-2}, j, i_{s-1}) contracted with v at j
    std::vector<int> ft(s + 1);
    for (int j = 0; j + 1 < s; ++j) ft[j] = tup[j];
    ft[s] = tup[s - 1];
    T acc(0);
    for (int j = 0; j < d; ++j) {
      ft[s - 1] = j;
      acc = acc + v[j] * full.entry(ft, 0);
    }
    rhs.entry(tup, 0) = acc;
  });

  MultiTensor<T> diff = lhs - rhs;
  if constexpr (ScalarTraits<T>::exact)
    return diff.is_zero();
  else
    return diff.max_abs_double() <= tol * std::max(1.0, full.max_abs_double());
}

}  // namespace coiso
