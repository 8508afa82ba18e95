#include <catch2/catch_amalgamated.hpp>

#include "coiso/psi_chart.hpp"
#include "test_support.hpp"

using namespace coiso;
using coiso_test::fixed_matrix;
using coiso_test::small_rat;

namespace {

Matrix<Rat> columns_from(int rows, std::initializer_list<std::vector<Rat>> cols) {
  return from_columns(rows, std::vector<std::vector<Rat>>(cols));
}

std::vector<Rat> unit(int d, int j) {
  std::vector<Rat> e(d, Rat(0));
  e[j] = Rat(1);
  return e;
}

// Injective Z with ker(Z*omega) = span of the first two columns of q, built
// by composing a standard-position kernel-two map with q^{-1}.  Base point of
// the charts below at q = identity.
Matrix<Rat> kernel_two_map(const SymplecticSpace& sp, const Matrix<Rat>& q) {
  Matrix<Rat> z0 = columns_from(
      sp.dim(), {unit(6, 1), unit(6, 2), unit(6, 0), unit(6, 3)});
  return z0 * inverse(q);
}

}  // namespace

TEST_CASE("lagrangian basepoint gives a constant chart") {
  SymplecticSpace sp{2};
  Matrix<Rat> a = columns_from(4, {unit(4, 0), unit(4, 1)});
  PsiChart<Rat> ch = make_psi_chart(sp, a, 2);

  CHECK(ch.c == 2);
  CHECK(ch.b11.rows() == 0);
  CHECK(ch.p == Matrix<Rat>::identity(2));

  for (int rep = 0; rep < 5; ++rep) {
    Matrix<Rat> z = fixed_matrix(4, 2, 11 + uint64_t(rep));
    CHECK(psi_map(ch, z) == ch.p);
    CHECK(in_chart_domain(ch, z));
  }
  std::vector<Rat> v{Rat(2), Rat(-3)};
  CHECK(psi_apply(ch, a, v) == ch.p.apply(v));
}

TEST_CASE("hypersurface-model basepoint aligns the kernel frame") {
  SymplecticSpace sp{2};
  Matrix<Rat> a = columns_from(4, {unit(4, 0), unit(4, 2), unit(4, 1)});
  PsiChart<Rat> ch = make_psi_chart(sp, a, 1);

  CHECK(ch.p == columns_from(3, {unit(3, 2), unit(3, 0), unit(3, 1)}));
  // D(A) = 0 at the basepoint, so the chart map is the frame itself.
  CHECK(psi_map(ch, a) == ch.p);
  std::vector<Rat> k0 = psi_map(ch, a).col(0);
  CHECK(pullback_form(sp, a).apply(k0) == std::vector<Rat>(3, Rat(0)));
}

TEST_CASE("frozen frame and determinant for a kernel-two basepoint") {
  SymplecticSpace sp{3};
  // Columns e0+e1, e3-e4, 3e1+2e2, e2+3e5: the pulled-back form has rank 2
  // with kernel spanned by (1,0,0,0) and (0,2,0,1), and the greedy
  // completion picks e1, e2.
  std::vector<Rat> a0(6, Rat(0)), a1(6, Rat(0)), a2(6, Rat(0)), a3(6, Rat(0));
  a0[0] = Rat(1); a0[1] = Rat(1);
  a1[3] = Rat(1); a1[4] = Rat(-1);
  a2[1] = Rat(3); a2[2] = Rat(2);
  a3[2] = Rat(1); a3[5] = Rat(3);
  Matrix<Rat> a = columns_from(6, {a0, a1, a2, a3});
  PsiChart<Rat> ch = make_psi_chart(sp, a, 2);

  std::vector<Rat> k1(4, Rat(0));
  k1[1] = Rat(2); k1[3] = Rat(1);
  CHECK(ch.p == columns_from(4, {unit(4, 0), k1, unit(4, 1), unit(4, 2)}));

  // b11 entries are omega-pairings of the completion columns of A, giving
  // det b11 = omega(a_1, a_2)^2 = 9.
  Matrix<Rat> expected(2, 2);
  expected(0, 1) = omega_eval(sp, a.col(1), a.col(2));
  expected(1, 0) = Rat(0) - expected(0, 1);
  CHECK(ch.b11 == expected);
  CHECK(det(ch.b11) == Rat(9));

  for (int i = 0; i < 2; ++i)
    CHECK(pullback_form(sp, a).apply(psi_map(ch, a).col(i)) ==
          std::vector<Rat>(4, Rat(0)));
}

TEST_CASE("prescribed-kernel points align exactly across the chart") {
  SymplecticSpace sp{3};
  Matrix<Rat> base = kernel_two_map(sp, Matrix<Rat>::identity(4));
  PsiChart<Rat> ch = make_psi_chart(sp, base, 2);
  Matrix<Rat> b11_expected(2, 2);
  b11_expected(0, 1) = Rat(1);
  b11_expected(1, 0) = Rat(-1);
  CHECK(ch.b11 == b11_expected);

  uint64_t st = 2026;
  int done = 0;
  while (done < 20) {
    Matrix<Rat> q = Matrix<Rat>::identity(4);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) q(i, j) = q(i, j) + Rat(1, 4) * small_rat(st);
    if (rank(q) < 4) continue;
    Matrix<Rat> z = kernel_two_map(sp, q);
    if (!in_chart_domain(ch, z)) continue;
    REQUIRE(kc_membership(sp, z, 2));

    Matrix<Rat> psi = psi_map(ch, z);
    CHECK(det(psi) != Rat(0));
    Matrix<Rat> f = pullback_form(sp, z);
    for (int i = 0; i < 2; ++i)
      CHECK(f.apply(psi.col(i)) == std::vector<Rat>(4, Rat(0)));

    // The aligned frame spans exactly the prescribed kernel.
    std::vector<std::vector<Rat>> span{q.col(0), q.col(1), psi.col(0), psi.col(1)};
    CHECK(rank(from_columns(4, span)) == 2);

    CHECK(kc_local_equations(ch, z).is_zero());
    ++done;
  }
}

TEST_CASE("local equations detect leaving the stratum") {
  SymplecticSpace sp{3};
  Matrix<Rat> base = kernel_two_map(sp, Matrix<Rat>::identity(4));
  PsiChart<Rat> ch = make_psi_chart(sp, base, 2);

  uint64_t st = 404;
  int done = 0;
  while (done < 12) {
    Matrix<Rat> z = base;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 4; ++j) z(i, j) = z(i, j) + Rat(1, 4) * small_rat(st);
    if (!in_chart_domain(ch, z) || rank(z) < 4) continue;
    // In the chart domain, G(Z) = 0 is exactly membership in K_2.
    CHECK(kc_local_equations(ch, z).is_zero() == kc_membership(sp, z, 2));
    CHECK(det(psi_map(ch, z)) != Rat(0));
    Matrix<Rat> g = kc_local_equations(ch, z);
    CHECK(g + g.transpose() == Matrix<Rat>(2, 2));
    ++done;
  }
}

TEST_CASE("chart construction rejects bad input") {
  SymplecticSpace sp{2};
  Matrix<Rat> a = columns_from(4, {unit(4, 0), unit(4, 2), unit(4, 1)});
  CHECK_THROWS_AS(make_psi_chart(sp, a, 2), domain_error);

  Matrix<Rat> flat = columns_from(4, {unit(4, 0), unit(4, 0), unit(4, 1)});
  CHECK_THROWS_AS(make_psi_chart(sp, flat, 1), domain_error);
}

TEST_CASE("points outside the chart domain are reported distinctly") {
  SymplecticSpace sp{2};
  Matrix<Rat> a = columns_from(4, {unit(4, 0), unit(4, 2), unit(4, 1)});
  PsiChart<Rat> ch = make_psi_chart(sp, a, 1);

  // Columns e0, e1, e2 pair to zero on the completion coordinates, so the
  // lower-right block of S(Z) degenerates.
  Matrix<Rat> z = columns_from(4, {unit(4, 0), unit(4, 1), unit(4, 2)});
  CHECK_FALSE(in_chart_domain(ch, z));
  CHECK_THROWS_WITH(psi_map(ch, z), "psi_map: Z outside the chart domain");
  CHECK_THROWS_AS(kc_local_equations(ch, z), domain_error);
}

TEST_CASE("chart arithmetic lifts to the jet ring") {
  SymplecticSpace sp{3};
  using J = JetScalar<Rat>;
  Matrix<Rat> base = kernel_two_map(sp, Matrix<Rat>::identity(4));
  PsiChart<Rat> ch = make_psi_chart(sp, base, 2);
  PsiChart<J> chj = chart_cast<J>(ch);

  uint64_t st = 7;
  Matrix<Rat> z = base;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 4; ++j) z(i, j) = z(i, j) + Rat(1, 5) * small_rat(st);
  REQUIRE(in_chart_domain(ch, z));

  // Constant lifts commute with the chart map and with inversion.
  Matrix<J> zj = matrix_cast<J>(z);
  CHECK(psi_map(chj, zj) == matrix_cast<J>(psi_map(ch, z)));
  CHECK(generic_inverse(matrix_cast<J>(psi_map(ch, z))) ==
        matrix_cast<J>(generic_inverse(psi_map(ch, z))));
}
