#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "coiso/psi_chart.hpp"
#include "coiso/symgroup.hpp"
#include "coiso/tau.hpp"

namespace coiso {

namespace detail {

// Family of the first-order motion of a jet in direction v, recorded in jet
// variable k: entry i becomes A_{i+1} + t_k A_{i+2}(v, .).  One order shorter
// than the input.
template <class T>
std::vector<SymTensor<JetScalar<T>>> shift_family(
    const std::vector<SymTensor<JetScalar<T>>>& fam,
    const std::vector<JetScalar<T>>& v, int k) {
  using J = JetScalar<T>;
  require(fam.size() >= 2, "shift_family: family too short");
  const J t = J::var_term(k, T(1));
  std::vector<SymTensor<J>> out;
  out.reserve(fam.size() - 1);
  for (size_t i = 0; i + 1 < fam.size(); ++i)
    out.push_back(fam[i] + t * fam[i + 1].contract_first(v));
  return out;
}

template <class T>
std::vector<JetScalar<T>> unit_vector(int d, int j) {
  std::vector<JetScalar<T>> e(d, JetScalar<T>());
  e[j] = JetScalar<T>(1);
  return e;
}

}  // namespace detail

// The tensor tilde-tau over the jet ring, defined by tau itself for families
// of length 2 and otherwise by projecting the chart-corrected derivative of
// the one-shorter tensor:
//
//   out(v_0, ..., v_{s-2}, v, v_{s-1}) =
//     Pi( d/dt eta_{A_i + t A_{i+1}(v,.)}(M_t v_0, ..., M_t v_{s-1}) )
//
// where eta is the level below and M_t moves the chart frame from the base
// column span to the shifted one.  Jet variable var_id carries the
// t-derivative at this level; extract() removes it again, so sibling
// branches reuse the id and the active jet width never exceeds the
// recursion depth.
template <class T>
MultiTensor<JetScalar<T>> tau_tilde_family(
    const SymplecticSpace& sp, const PsiChart<JetScalar<T>>& chart,
    const std::vector<SymTensor<JetScalar<T>>>& fam, int var_id,
    double rel_tol = kDefaultRelTol) {
  using J = JetScalar<T>;
  const int s = int(fam.size());
  require(s >= 2, "tau_tilde: family shorter than 2");
  if (s == 2) return tau_build(sp, fam);

  const int d = fam[0].source_dim();
  Matrix<J> psi0_inv =
      generic_inverse(psi_map(chart, fam[0].as_matrix(), rel_tol), rel_tol);
  MultiTensor<J> out(s + 1, d, 1);
  std::vector<int> dst(s + 1);
  for (int j = 0; j < d; ++j) {
    auto sub = detail::shift_family(fam, detail::unit_vector<T>(d, j), var_id);
    Matrix<J> mt = psi_map(chart, sub[0].as_matrix(), rel_tol) * psi0_inv;
    MultiTensor<J> pulled =
        mult_pullback(tau_tilde_family(sp, chart, sub, var_id + 1, rel_tol), mt);
    dst[s - 1] = j;
    for_each_tuple(s, d, [&](const std::vector<int>& src) {
      for (int m = 0; m < s - 1; ++m) dst[m] = src[m];
      dst[s] = src[s - 1];
      out.entry(dst, 0) = pulled.entry(src, 0).extract(var_id);
    });
  }
  return project_T(s, out);
}

// tilde-tau on a plain family: lift into the jet ring, run the recursion,
// and read back the constant parts (every jet variable introduced along the
// way has been extracted again by the end).
template <class T>
MultiTensor<T> tau_tilde(const SymplecticSpace& sp, const PsiChart<T>& chart,
                         const std::vector<SymTensor<T>>& fam,
                         double rel_tol = kDefaultRelTol) {
  using J = JetScalar<T>;
  detail::check_tau_family(sp, fam, 2);
  if (fam.size() == 2) return tau_build(sp, fam);
  PsiChart<J> chj = chart_cast<J>(chart);
  std::vector<SymTensor<J>> famj;
  famj.reserve(fam.size());
  for (const auto& a : fam)
    famj.push_back(a.template map<J>([](const T& x) { return J(x); }));
  return tau_tilde_family(sp, chj, famj, 0, rel_tol)
      .template map<T>([](const J& x) { return x.constant_part(); });
}

// An evaluable tensor family over the jet ring: the list (A_1, ..., A_s)
// determines the order s+1 tensor eta_{A_1..A_s}.
template <class T>
using JetFamilyMap = std::function<MultiTensor<JetScalar<T>>(
    const std::vector<SymTensor<JetScalar<T>>>&)>;

template <class T>
JetFamilyMap<T> tau_family_map(const SymplecticSpace& sp,
                               TauVariant variant = TauVariant::kPartitionSum) {
  return [sp, variant](const std::vector<SymTensor<JetScalar<T>>>& fam) {
    return tau_build(sp, fam, variant);
  };
}

// Jet variables 0 is reserved for the caller's own derivative direction;
// the recursion inside uses ids from 1 up.
template <class T>
JetFamilyMap<T> tau_tilde_family_map(const SymplecticSpace& sp,
                                     const PsiChart<T>& chart,
                                     double rel_tol = kDefaultRelTol) {
  PsiChart<JetScalar<T>> chj = chart_cast<JetScalar<T>>(chart);
  return [sp, chj, rel_tol](const std::vector<SymTensor<JetScalar<T>>>& fam) {
    return tau_tilde_family(sp, chj, fam, 1, rel_tol);
  };
}

// The chart-corrected derivative of eta at the jet (A_1, ..., A_{s+1}) in
// direction v, evaluated on argument vectors (v_0, ..., v_{s-1}, v_s); the
// direction slots in second to last, matching the argument layout of
// tau_tilde_family.  With use_moving_frame false the frame-correction factor
// M_t is dropped and only the family derivative remains.
template <class T>
T f_psi(const SymplecticSpace& sp, const JetFamilyMap<T>& eta,
        const PsiChart<T>& chart, const std::vector<SymTensor<T>>& fam,
        const std::vector<T>& v, const std::vector<std::vector<T>>& args,
        bool use_moving_frame = true, double rel_tol = kDefaultRelTol) {
  using J = JetScalar<T>;
  detail::check_tau_family(sp, fam, 3);
  require(args.size() == fam.size(), "f_psi: needs one argument vector per tensor");
  require(int(v.size()) == fam[0].source_dim(), "f_psi: direction length != d");

  std::vector<SymTensor<J>> famj;
  famj.reserve(fam.size());
  for (const auto& a : fam)
    famj.push_back(a.template map<J>([](const T& x) { return J(x); }));
  std::vector<J> vj;
  for (const T& x : v) vj.push_back(J(x));

  auto shifted = detail::shift_family(famj, vj, 0);
  MultiTensor<J> etat = eta(shifted);
  require(etat.order() == int(shifted.size()) + 1 && etat.target_dim() == 1,
          "f_psi: eta produced the wrong shape");

  std::vector<std::vector<J>> argsj;
  for (const auto& a : args) {
    std::vector<J> aj;
    for (const T& x : a) aj.push_back(J(x));
    argsj.push_back(aj);
  }
  if (use_moving_frame) {
    PsiChart<J> chj = chart_cast<J>(chart);
    Matrix<J> mt =
        psi_map(chj, shifted[0].as_matrix(), rel_tol) *
        generic_inverse(psi_map(chj, famj[0].as_matrix(), rel_tol), rel_tol);
    for (auto& a : argsj) a = mt.apply(a);
  }
  return etat.eval(argsj)[0].extract(0).constant_part();
}

struct StratumMembership {
  bool member = false;
  // Least order whose condition fails; 1 means A_1 itself misses K_c.
  std::optional<int> failing_level;
};

namespace detail {

template <class T>
bool tensor_vanishes(const MultiTensor<T>& t, double scale, double rel_tol) {
  if constexpr (ScalarTraits<T>::exact)
    return t.is_zero();
  else
    return t.max_abs_double() <= rel_tol * std::max(1.0, scale);
}

}  // namespace detail

// Membership of the order-r jet (A_1, ..., A_r) in the stratum of kernel
// dimension c: A_1 lies in K_c and every tilde-tau up to order r vanishes on
// tuples from ker(A_1*omega).
template <class T>
StratumMembership stratum_member(const SymplecticSpace& sp,
                                 const PsiChart<T>& chart,
                                 const std::vector<SymTensor<T>>& fam, int c,
                                 int r, double rel_tol = kDefaultRelTol) {
  require(r >= 1, "stratum_member: r < 1");
  require(int(fam.size()) >= r, "stratum_member: jet order below r");
  std::vector<SymTensor<T>> head(fam.begin(), fam.begin() + r);
  detail::check_tau_family(sp, head, r);

  Matrix<T> a1 = head[0].as_matrix();
  if (!kc_membership(sp, a1, c, rel_tol)) return {false, 1};
  if (c == 0) return {true, {}};
  Matrix<T> ker = kernel_of_form(pullback_form(sp, a1), rel_tol);
  for (int s = 2; s <= r; ++s) {
    std::vector<SymTensor<T>> sub(head.begin(), head.begin() + s);
    MultiTensor<T> tt = tau_tilde(sp, chart, sub, rel_tol);
    MultiTensor<T> restr = mult_pullback(tt, ker);
    if (!detail::tensor_vanishes(restr, tt.max_abs_double(), rel_tol))
      return {false, s};
  }
  return {true, {}};
}

// Convenience form charting at the jet's own basepoint.
template <class T>
StratumMembership stratum_member(const SymplecticSpace& sp,
                                 const std::vector<SymTensor<T>>& fam, int c,
                                 int r, double rel_tol = kDefaultRelTol) {
  require(!fam.empty(), "stratum_member: empty jet");
  Matrix<T> a1 = fam[0].as_matrix();
  if (!kc_membership(sp, a1, c, rel_tol)) return {false, 1};
  return stratum_member(sp, make_psi_chart(sp, a1, c, rel_tol), fam, c, r, rel_tol);
}

// Codimension of the order-r stratum with kernel dimension c and target
// dimension w: the K_c count plus one full tensor-space dimension per order.
inline std::int64_t stratum_codim(int c, int r, int w) {
  require(c >= 0 && r >= 1 && w >= 1, "stratum_codim: bad arguments");
  std::int64_t out = std::int64_t(c) * (c - 1) / 2;
  for (int s = 2; s <= r; ++s) out += t_dim(s, c, w);
  return out;
}

struct TransversalityReport {
  int rank = 0;
  std::int64_t codim = 0;
  bool full = false;
};

// Jacobian rank of the local stratum equations along the d coordinate
// directions of a jet family (A_1, ..., A_{r+1}).  Direction j moves the jet
// to (A_i + t A_{i+1}(e_j, .)); the equations are the strict lower triangle
// of G(Z_t) together with, for each order s <= r, the entries of tilde-tau
// pulled back onto the moving kernel frame (the first c columns of the chart
// map at Z_t).  Full means the rank meets the stratum codimension, capped by
// the number of available directions.
template <class T>
TransversalityReport transversality_from_jets(
    const SymplecticSpace& sp, const PsiChart<T>& chart,
    const std::vector<SymTensor<T>>& fam, int c, int r,
    double rel_tol = kDefaultRelTol) {
  using J = JetScalar<T>;
  require(r >= 1, "transversality: r < 1");
  require(int(fam.size()) >= r + 1, "transversality: jet order below r+1");
  require(stratum_member(sp, chart, fam, c, r, rel_tol).member,
          "transversality: jet not in the stratum");
  const int d = fam[0].source_dim();

  PsiChart<J> chj = chart_cast<J>(chart);
  std::vector<SymTensor<J>> famj;
  famj.reserve(size_t(r) + 1);
  for (int i = 0; i <= r; ++i)
    famj.push_back(fam[i].template map<J>([](const T& x) { return J(x); }));

  int nrows = c * (c - 1) / 2;
  for (int s = 2; s <= r; ++s) {
    int tuples = 1;
    for (int m = 0; m <= s; ++m) tuples *= c;
    nrows += tuples;
  }
  Matrix<T> jac(nrows, d);
  for (int j = 0; j < d && c > 0; ++j) {
    auto shifted = detail::shift_family(famj, detail::unit_vector<T>(d, j), 0);
    Matrix<J> zt = shifted[0].as_matrix();
    int row = 0;
    Matrix<J> g = kc_local_equations(chj, zt, rel_tol);
    for (int i = 0; i < c; ++i)
      for (int k = 0; k < i; ++k)
        jac(row++, j) = g(i, k).extract(0).constant_part();
    for (int s = 2; s <= r; ++s) {
      std::vector<SymTensor<J>> sub(shifted.begin(), shifted.begin() + s);
      MultiTensor<J> tt = tau_tilde_family(sp, chj, sub, 1, rel_tol);
      std::vector<std::vector<J>> fcols;
      Matrix<J> frame = psi_map(chj, zt, rel_tol);
      for (int i = 0; i < c; ++i) fcols.push_back(frame.col(i));
      MultiTensor<J> restr = mult_pullback(tt, from_columns(d, fcols));
      for_each_tuple(s + 1, c, [&](const std::vector<int>& tup) {
        jac(row++, j) = restr.entry(tup, 0).extract(0).constant_part();
      });
    }
    check(row == nrows, "transversality: row layout drifted");
  }

  TransversalityReport rep;
  rep.codim = stratum_codim(c, r, sp.dim());
  rep.rank = rank(jac, rel_tol);
  rep.full = rep.rank == std::min<std::int64_t>(rep.codim, d);
  return rep;
}

}  // namespace coiso
