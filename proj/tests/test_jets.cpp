#include <catch2/catch_amalgamated.hpp>

#include "coiso/jetscalar.hpp"
#include "test_support.hpp"

using coiso::JetScalar;
using coiso::Matrix;
using coiso::Rat;

using JQ = JetScalar<Rat>;

TEST_CASE("first-order jet arithmetic", "[jets]") {
  JQ a = JQ(Rat(2)) + JQ::var_term(0, Rat(3));           // 2 + 3 t0
  JQ b = JQ(Rat(5)) + JQ::var_term(0, Rat(-1));          // 5 - t0

  SECTION("products truncate at t^2 = 0") {
    JQ p = a * b;  // 10 + 13 t0 (the -3 t0^2 term dies)
    REQUIRE(p.constant_part() == Rat(10));
    REQUIRE(p.coeff(1) == Rat(13));
    JQ t = JQ::var_term(0, Rat(1));
    REQUIRE((t * t).is_zero());
  }
  SECTION("distinct variables multiply into mixed terms") {
    JQ t0 = JQ::var_term(0, Rat(1)), t1 = JQ::var_term(1, Rat(1));
    JQ p = (JQ(Rat(1)) + t0) * (JQ(Rat(1)) + t1);
    REQUIRE(p.constant_part() == Rat(1));
    REQUIRE(p.coeff(0b01) == Rat(1));
    REQUIRE(p.coeff(0b10) == Rat(1));
    REQUIRE(p.coeff(0b11) == Rat(1));
    REQUIRE((t0 * t0).is_zero());
    REQUIRE_FALSE((t0 * t1).is_zero());
  }
  SECTION("extract peels one derivative and stays in the ring") {
    JQ t0 = JQ::var_term(0, Rat(1)), t1 = JQ::var_term(1, Rat(1));
    JQ x = JQ(Rat(7)) + JQ(Rat(2)) * t0 + JQ(Rat(3)) * t1 + JQ(Rat(5)) * (t0 * t1);
    JQ dx0 = x.extract(0);  // 2 + 5 t1
    REQUIRE(dx0.constant_part() == Rat(2));
    REQUIRE(dx0.coeff(0b10) == Rat(5));
    REQUIRE(dx0.extract(1).constant_part() == Rat(5));
    REQUIRE(x.extract(1).extract(0).constant_part() == Rat(5));
  }
}

TEST_CASE("jet inversion", "[jets]") {
  SECTION("(1 + t)^(-1) = 1 - t") {
    JQ x = JQ(Rat(1)) + JQ::var_term(0, Rat(1));
    JQ xi = x.inv();
    REQUIRE(xi.constant_part() == Rat(1));
    REQUIRE(xi.coeff(1) == Rat(-1));
    REQUIRE(x * xi == JQ(Rat(1)));
  }
  SECTION("inverse is two-sided across several variables") {
    JQ x = JQ(Rat(3)) + JQ::var_term(0, Rat(2)) + JQ::var_term(1, Rat(-1)) +
           JQ::var_term(2, Rat(5));
    REQUIRE(x * x.inv() == JQ(Rat(1)));
    REQUIRE(x.inv() * x == JQ(Rat(1)));
  }
  SECTION("division checks for a unit") {
    JQ t = JQ::var_term(0, Rat(1));
    REQUIRE_THROWS_AS(t.inv(), coiso::domain_error);
  }
}

TEST_CASE("jet matrix inverse", "[jets]") {
  Matrix<JQ> m(2, 2);
  m(0, 0) = JQ(Rat(2)) + JQ::var_term(0, Rat(1));
  m(0, 1) = JQ::var_term(1, Rat(3));
  m(1, 0) = JQ(Rat(1));
  m(1, 1) = JQ(Rat(1)) + JQ::var_term(0, Rat(-2));

  Matrix<JQ> mi = coiso::jet_matrix_inverse(m);
  Matrix<JQ> pl = m * mi, pr = mi * m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      REQUIRE(pl(i, j) == (i == j ? JQ(Rat(1)) : JQ(Rat(0))));
      REQUIRE(pr(i, j) == (i == j ? JQ(Rat(1)) : JQ(Rat(0))));
    }

  SECTION("singular constant part is rejected") {
    Matrix<JQ> s(2, 2);
    s(0, 0) = JQ::var_term(0, Rat(1));  // invertible only at jet level, not at 0
    s(1, 1) = JQ(Rat(1));
    REQUIRE_THROWS_AS(coiso::jet_matrix_inverse(s), coiso::domain_error);
  }
}
