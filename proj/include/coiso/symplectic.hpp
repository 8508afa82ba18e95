#pragma once

#include <vector>

#include "coiso/matrix.hpp"

namespace coiso {

// R^{2n} with the standard symplectic form pairing coordinate i with n+i:
// omega(e_i, e_{n+i}) = +1 for 0 <= i < n.
struct SymplecticSpace {
  int n = 0;
  int dim() const { return 2 * n; }
};

template <class T>
Matrix<T> standard_form_matrix(int n) {
  Matrix<T> J(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    J(i, n + i) = T(1);
    J(n + i, i) = T(-1);
  }
  return J;
}

template <class T>
T omega_eval(const SymplecticSpace& sp, const std::vector<T>& w1,
             const std::vector<T>& w2) {
  require(int(w1.size()) == sp.dim() && int(w2.size()) == sp.dim(),
          "omega_eval: vector length != 2n");
  T acc(0);
  for (int i = 0; i < sp.n; ++i)
    acc = acc + w1[i] * w2[sp.n + i] - w1[sp.n + i] * w2[i];
  return acc;
}

// Matrix of the pulled-back form A*omega on the source: entry (i, j) equals
// omega(A e_i, A e_j).  Always antisymmetric.
template <class T>
Matrix<T> pullback_form_with(const Matrix<T>& omega, const Matrix<T>& a) {
  require(omega.rows() == omega.cols() && omega.rows() == a.rows(),
          "pullback_form: shape mismatch");
  return a.transpose() * (omega * a);
}

template <class T>
Matrix<T> pullback_form(const SymplecticSpace& sp, const Matrix<T>& a) {
  require(a.rows() == sp.dim(), "pullback_form: map does not land in the space");
  return pullback_form_with(standard_form_matrix<T>(sp.n), a);
}

// Kernel basis (columns) of an antisymmetric form matrix.  Skew forms have
// even rank, so nullity and matrix size share parity; violation means the
// input was not skew or float rank collapsed.
template <class T>
Matrix<T> kernel_of_form(const Matrix<T>& f, double rel_tol = kDefaultRelTol) {
  require(f.rows() == f.cols(), "kernel_of_form: matrix not square");
  Matrix<T> basis = nullspace(f, rel_tol);
  check((f.cols() - basis.cols()) % 2 == 0, "kernel_of_form: odd rank for a skew form");
  return basis;
}

// A lies in K_c: injective with dim ker(A*omega) = c.
template <class T>
bool kc_membership(const SymplecticSpace& sp, const Matrix<T>& a, int c,
                   double rel_tol = kDefaultRelTol) {
  require(a.rows() == sp.dim(), "kc_membership: map does not land in the space");
  require(c >= 0 && c <= a.cols(), "kc_membership: c out of range");
  if (rank(a, rel_tol) != a.cols()) return false;
  Matrix<T> f = pullback_form(sp, a);
  return kernel_of_form(f, rel_tol).cols() == c;
}

// Tangent space of K_c at A, described by the defining linear conditions on
// B in Hom(V, W): omega(A u, B u') + omega(B u, A u') = 0 for u, u' in
// ker(A*omega).  One row per unordered kernel-basis pair; columns index B
// flattened row-major (entry B(p, q) at column p * d + q).
template <class T>
struct KcTangent {
  Matrix<T> constraints;
  Matrix<T> kernel;  // kernel basis of A*omega used to build the rows
  int codim = 0;
};

template <class T>
KcTangent<T> kc_tangent_space(const SymplecticSpace& sp, const Matrix<T>& a,
                              double rel_tol = kDefaultRelTol) {
  const int d = a.cols(), w = sp.dim();
  require(a.rows() == w, "kc_tangent_space: map does not land in the space");
  require(rank(a, rel_tol) == d, "kc_tangent_space: A not injective");
  Matrix<T> f = pullback_form(sp, a);
  Matrix<T> ker = kernel_of_form(f, rel_tol);
  const int c = ker.cols();
  require(c >= 1, "kc_tangent_space: A*omega nondegenerate, A not in any K_c with c >= 1");

  Matrix<T> jm = standard_form_matrix<T>(sp.n);
  std::vector<std::vector<T>> jau(c);  // J A u_a for each kernel basis vector
  for (int aidx = 0; aidx < c; ++aidx) jau[aidx] = jm.apply(a.apply(ker.col(aidx)));

  KcTangent<T> out;
  out.kernel = ker;
  out.constraints = Matrix<T>(c * (c - 1) / 2, w * d);
  int row = 0;
  for (int aa = 0; aa < c; ++aa)
    for (int bb = aa + 1; bb < c; ++bb) {
      std::vector<T> ua = ker.col(aa), ub = ker.col(bb);
      for (int p = 0; p < w; ++p)
        for (int q = 0; q < d; ++q)
          out.constraints(row, p * d + q) = jau[bb][p] * ua[q] - jau[aa][p] * ub[q];
      ++row;
    }
  out.codim = rank(out.constraints, rel_tol);
  check(out.codim == c * (c - 1) / 2, "kc_tangent_space: constraint rank != c(c-1)/2");
  return out;
}

}  // namespace coiso
