#pragma once

#include <vector>

#include "coiso/jetscalar.hpp"
#include "coiso/matrix.hpp"
#include "coiso/symplectic.hpp"

namespace coiso {

// Matrix inverse usable from code that is generic over the scalar ring:
// Gaussian elimination for plain scalars, the nilpotent-series inverse for
// matrices of jets.
template <class T>
Matrix<T> generic_inverse(const Matrix<T>& m, double rel_tol = kDefaultRelTol) {
  return inverse(m, rel_tol);
}

template <class T>
Matrix<JetScalar<T>> generic_inverse(const Matrix<JetScalar<T>>& m,
                                     double rel_tol = kDefaultRelTol) {
  return jet_matrix_inverse(m, rel_tol);
}

template <class U, class T>
Matrix<U> matrix_cast(const Matrix<T>& m) {
  Matrix<U> out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = U(m(i, j));
  return out;
}

// Local frame data around a basepoint A with dim ker(A*omega) = c.  The
// columns of p list a kernel basis of A*omega first, completed by coordinate
// vectors; in this frame the pulled-back form at A has all entries in the
// first c rows and columns equal to zero and an invertible lower-right block
// b11.  Charts stay valid at any Z whose lower-right block is invertible.
template <class T>
struct PsiChart {
  Matrix<T> omega;  // ambient form, 2n x 2n
  Matrix<T> base;   // basepoint A, 2n x d
  Matrix<T> p;      // frame, d x d, kernel columns first
  Matrix<T> b11;    // lower-right block of p^T (A*omega) p, (d-c) x (d-c)
  int c = 0;

  int d() const { return p.rows(); }
};

template <class U, class T>
PsiChart<U> chart_cast(const PsiChart<T>& ch) {
  return PsiChart<U>{matrix_cast<U>(ch.omega), matrix_cast<U>(ch.base),
                     matrix_cast<U>(ch.p), matrix_cast<U>(ch.b11), ch.c};
}

// Blocks of S(Z) = p^T (Z*omega) p: s00 is c x c, s10 is (d-c) x c, s11 is
// (d-c) x (d-c).  S(Z) is antisymmetric, so the upper-right block is -s10^T
// and is not stored.
template <class T>
struct SBlocks {
  Matrix<T> s00, s10, s11;
};

template <class T>
SBlocks<T> psi_s_blocks(const PsiChart<T>& ch, const Matrix<T>& z) {
  const int d = ch.d(), c = ch.c;
  require(z.rows() == ch.omega.rows() && z.cols() == d,
          "psi_s_blocks: Z has the wrong shape");
  Matrix<T> s = ch.p.transpose() * (pullback_form_with(ch.omega, z) * ch.p);
  SBlocks<T> out{Matrix<T>(c, c), Matrix<T>(d - c, c), Matrix<T>(d - c, d - c)};
  for (int i = 0; i < c; ++i)
    for (int j = 0; j < c; ++j) out.s00(i, j) = s(i, j);
  for (int i = 0; i < d - c; ++i)
    for (int j = 0; j < c; ++j) out.s10(i, j) = s(c + i, j);
  for (int i = 0; i < d - c; ++i)
    for (int j = 0; j < d - c; ++j) out.s11(i, j) = s(c + i, c + j);
  return out;
}

namespace detail {

template <class T>
bool block_vanishes(const Matrix<T>& m, const Matrix<T>& scale_ref, double rel_tol) {
  if constexpr (ScalarTraits<T>::exact) {
    (void)scale_ref;
    (void)rel_tol;
    return m.is_zero();
  } else {
    double scale = 1;
    for (int i = 0; i < scale_ref.rows(); ++i)
      for (int j = 0; j < scale_ref.cols(); ++j)
        scale = std::max(scale, abs_value(scale_ref(i, j)));
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j)
        if (abs_value(m(i, j)) > rel_tol * scale) return false;
    return true;
  }
}

}  // namespace detail

template <class T>
PsiChart<T> make_psi_chart(const Matrix<T>& omega, const Matrix<T>& a, int c,
                           double rel_tol = kDefaultRelTol) {
  const int d = a.cols();
  require(omega.rows() == omega.cols() && omega.rows() == a.rows(),
          "psi chart: form and basepoint shapes disagree");
  require(c >= 0 && c <= d, "psi chart: c out of range");
  require(rank(a, rel_tol) == d, "psi chart: basepoint not injective");
  Matrix<T> g = pullback_form_with(omega, a);
  Matrix<T> ker = kernel_of_form(g, rel_tol);
  require(ker.cols() == c, "psi chart: basepoint kernel dimension != c");

  std::vector<std::vector<T>> cols;
  for (int j = 0; j < c; ++j) cols.push_back(ker.col(j));
  for (int j = 0; j < d && int(cols.size()) < d; ++j) {
    std::vector<T> e(d, T(0));
    e[j] = T(1);
    cols.push_back(e);
    if (rank(from_columns(d, cols), rel_tol) < int(cols.size())) cols.pop_back();
  }
  check(int(cols.size()) == d, "psi chart: frame completion failed");

  PsiChart<T> ch{omega, a, from_columns(d, cols), Matrix<T>(d - c, d - c), c};
  SBlocks<T> b = psi_s_blocks(ch, a);
  check(detail::block_vanishes(b.s00, g, rel_tol) &&
            detail::block_vanishes(b.s10, g, rel_tol),
        "psi chart: form does not vanish against the kernel frame");
  check(rank(b.s11, rel_tol) == d - c,
        "psi chart: form degenerate on the chosen complement");
  ch.b11 = b.s11;
  return ch;
}

template <class T>
PsiChart<T> make_psi_chart(const SymplecticSpace& sp, const Matrix<T>& a, int c,
                           double rel_tol = kDefaultRelTol) {
  return make_psi_chart(standard_form_matrix<T>(sp.n), a, c, rel_tol);
}

// Z lies in the chart domain when the lower-right block of S(Z) is still
// invertible.
template <class T>
bool in_chart_domain(const PsiChart<T>& ch, const Matrix<T>& z,
                     double rel_tol = kDefaultRelTol) {
  return rank(psi_s_blocks(ch, z).s11, rel_tol) == ch.d() - ch.c;
}

// The frame matrix Psi_Z = p * [[I, 0], [D(Z), I]] with D(Z) =
// -s11(Z)^{-1} s10(Z).  Always invertible; its first c columns span a moving
// copy of the kernel frame, and when Z lies in K_c they span ker(Z*omega)
// exactly.
template <class T>
Matrix<T> psi_map(const PsiChart<T>& ch, const Matrix<T>& z,
                  double rel_tol = kDefaultRelTol) {
  const int d = ch.d(), c = ch.c;
  SBlocks<T> b = psi_s_blocks(ch, z);
  Matrix<T> dz;
  try {
    dz = generic_inverse(b.s11, rel_tol) * b.s10;
  } catch (const domain_error&) {
    throw domain_error("psi_map: Z outside the chart domain");
  }
  Matrix<T> l = Matrix<T>::identity(d);
  for (int i = 0; i < d - c; ++i)
    for (int j = 0; j < c; ++j) l(c + i, j) = T(0) - dz(i, j);
  return ch.p * l;
}

template <class T>
std::vector<T> psi_apply(const PsiChart<T>& ch, const Matrix<T>& z,
                         const std::vector<T>& v, double rel_tol = kDefaultRelTol) {
  return psi_map(ch, z, rel_tol).apply(v);
}

// Local defining equations of K_c on the chart domain: the antisymmetric
// c x c matrix G(Z) = s00 + s10^T s11^{-1} s10, the Schur complement of
// s11 in S(Z).  For Z in the domain, G(Z) = 0 together with injectivity of
// Z is equivalent to Z in K_c, and S(Z) Psi-frame columns satisfy
// S(Z) [I; D(Z)] = [G(Z); 0].
template <class T>
Matrix<T> kc_local_equations(const PsiChart<T>& ch, const Matrix<T>& z,
                             double rel_tol = kDefaultRelTol) {
  SBlocks<T> b = psi_s_blocks(ch, z);
  try {
    return b.s00 + b.s10.transpose() * (generic_inverse(b.s11, rel_tol) * b.s10);
  } catch (const domain_error&) {
    throw domain_error("kc_local_equations: Z outside the chart domain");
  }
}

}  // namespace coiso
