#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "coiso/embeddings.hpp"
#include "test_support.hpp"

using namespace coiso;

namespace {

PolyTerm term(std::vector<int> mono, long num, long den = 1) {
  return PolyTerm{std::move(mono), Rat(num, den)};
}

// Nested three-point central differences of the chart map.
std::vector<double> fd_plain(const EmbeddingSpec& emb, std::vector<double> x,
                             const std::vector<int>& tuple, double h) {
  if (tuple.empty()) return map_point(emb, x);
  std::vector<int> rest(tuple.begin() + 1, tuple.end());
  std::vector<double> xp = x, xm = x;
  xp[tuple[0]] += h;
  xm[tuple[0]] -= h;
  std::vector<double> fp = fd_plain(emb, xp, rest, h);
  std::vector<double> fm = fd_plain(emb, xm, rest, h);
  for (size_t i = 0; i < fp.size(); ++i) fp[i] = (fp[i] - fm[i]) / (2 * h);
  return fp;
}

// Nested five-point central differences. The wider stencil keeps the
// round-off floor below 1e-8 even for third-order mixed partials.
std::vector<double> fd_wide(const EmbeddingSpec& emb, std::vector<double> x,
                            const std::vector<int>& tuple, double h) {
  if (tuple.empty()) return map_point(emb, x);
  std::vector<int> rest(tuple.begin() + 1, tuple.end());
  auto shifted = [&](double step) {
    std::vector<double> xs = x;
    xs[tuple[0]] += step;
    return fd_wide(emb, xs, rest, h);
  };
  std::vector<double> f1p = shifted(h), f1m = shifted(-h);
  std::vector<double> f2p = shifted(2 * h), f2m = shifted(-2 * h);
  for (size_t i = 0; i < f1p.size(); ++i)
    f1p[i] = (8 * (f1p[i] - f1m[i]) - (f2p[i] - f2m[i])) / (12 * h);
  return f1p;
}

void check_jets_against_fd(const EmbeddingSpec& emb, const std::vector<double>& x) {
  JetPoint<double> j = jet_eval(emb, x, 3);
  for (int k = 1; k <= 3; ++k) {
    const SymTensor<double>& a = j.a[k - 1];
    for (int s = 0; s < a.slots(); ++s) {
      const std::vector<int>& tuple = a.index().tuple(s);
      std::vector<double> fd = fd_wide(emb, x, tuple, 2e-3);
      for (int c = 0; c < 2 * emb.n; ++c) {
        INFO("order " << k << " slot " << s << " comp " << c);
        CHECK(std::fabs(a.entry(s, c) - fd[c]) <=
              1e-6 * std::max(1.0, std::fabs(a.entry(s, c))));
      }
    }
  }
}

// Least-squares residual of b against the column span of w.
double span_residual(const Matrix<double>& w, const std::vector<double>& b) {
  Matrix<double> gram = w.transpose() * w;
  std::vector<double> rhs = w.transpose().apply(b);
  std::vector<double> coef = inverse(gram).apply(rhs);
  std::vector<double> fit = w.apply(coef);
  double r = 0, scale = 0;
  for (size_t i = 0; i < b.size(); ++i) {
    r = std::max(r, std::fabs(b[i] - fit[i]));
    scale = std::max(scale, std::fabs(b[i]));
  }
  return r / std::max(1.0, scale);
}

EmbeddingSpec generic_quadratic_graph() {
  // x |-> (x_1, x_2, g_1, g_2) with fixed dense quadratics g_i.
  PolyMap g(2);
  g[0] = {term({0, 0}, 1, 2), term({0, 1}, 3), term({1, 1}, -2), term({0}, 1)};
  g[1] = {term({0, 0}, -1), term({0, 1}, 1, 3), term({1, 1}, 2), term({1}, -1)};
  return make_graph_embedding(2, 2, g);
}

}  // namespace

TEST_CASE("linear chart maps have one-term jets") {
  // f(x) = (x_1, 2 x_2, x_1 - x_2, 3 x_1) in R^4.
  PolyMap pm(4);
  pm[0] = {term({0}, 1)};
  pm[1] = {term({1}, 2)};
  pm[2] = {term({0}, 1), term({1}, -1)};
  pm[3] = {term({0}, 3)};
  EmbeddingSpec emb = make_polynomial_embedding(2, 2, pm);
  std::vector<Rat> x{Rat(1, 3), Rat(-2)};
  JetPoint<Rat> j = jet_eval(emb, x, 3);
  CHECK(j.y == std::vector<Rat>{Rat(1, 3), Rat(-4), Rat(7, 3), Rat(1)});
  Matrix<Rat> m(4, 2);
  m(0, 0) = Rat(1);
  m(1, 1) = Rat(2);
  m(2, 0) = Rat(1);
  m(2, 1) = Rat(-1);
  m(3, 0) = Rat(3);
  CHECK(j.a[0].as_matrix() == m);
  CHECK(j.a[1].is_zero());
  CHECK(j.a[2].is_zero());
}

TEST_CASE("stored second derivatives carry the multiplicity factorial") {
  // f(x) = (x, x^2): the second derivative of x^2 is the constant 2.
  PolyMap pm(2);
  pm[0] = {term({0}, 1)};
  pm[1] = {term({0, 0}, 1)};
  EmbeddingSpec emb = make_polynomial_embedding(1, 1, pm);
  std::vector<Rat> x{Rat(5, 7)};
  JetPoint<Rat> j = jet_eval(emb, x, 2);
  CHECK(j.a[1].eval_basis({0, 0}) == std::vector<Rat>{Rat(0), Rat(2)});
  CHECK(j.a[0].eval_basis({0}) == std::vector<Rat>{Rat(1), Rat(10, 7)});

  JetPoint<double> jd = jet_eval(emb, std::vector<double>{5.0 / 7.0}, 2);
  for (int k = 1; k <= 2; ++k)
    for (int s = 0; s < jd.a[k - 1].slots(); ++s) {
      std::vector<double> fd =
          fd_plain(emb, {5.0 / 7.0}, jd.a[k - 1].index().tuple(s), 1e-5);
      for (int c = 0; c < 2; ++c)
        CHECK(std::fabs(jd.a[k - 1].entry(s, c) - fd[c]) <=
              1e-6 * std::max(1.0, std::fabs(fd[c])));
    }
}

TEST_CASE("polynomial jets agree with finite differences") {
  EmbeddingSpec emb = generic_quadratic_graph();
  check_jets_against_fd(emb, {0.3, -0.4});
}

TEST_CASE("trigonometric jets agree with finite differences") {
  EmbeddingSpec torus = make_lagrangian_torus({Rat(1, 2), Rat(1, 2)});
  check_jets_against_fd(torus, {0.7, 2.1});
  EmbeddingSpec sphere = make_ellipsoid_product({{Rat(1), Rat(1)}});
  check_jets_against_fd(sphere, {0.37, 1.2, 4.9});
}

TEST_CASE("ellipsoid tangent columns annihilate the defining gradients") {
  EmbeddingSpec emb = make_ellipsoid_product({{Rat(1), Rat(2)}, {Rat(3)}});
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<double> x = sample_chart_point(emb, rng);
    JetPoint<double> j = jet_eval(emb, x, 1);
    Matrix<double> a1 = j.a[0].as_matrix();
    size_t off = 0;
    for (const auto& a : emb.factors) {
      std::vector<double> grad(2 * emb.n, 0.0);
      for (size_t i = 0; i < a.size(); ++i) {
        grad[off + i] = 2 * j.y[off + i] / a[i].to_double();
        grad[emb.n + off + i] = 2 * j.y[emb.n + off + i] / a[i].to_double();
      }
      for (int col = 0; col < emb.d; ++col) {
        double dot = 0;
        for (int row = 0; row < 2 * emb.n; ++row) dot += grad[row] * a1(row, col);
        CHECK(std::fabs(dot) <= 1e-10);
      }
      off += a.size();
    }
  }
}

TEST_CASE("classification statuses across the catalog") {
  std::mt19937_64 rng(11);

  EmbeddingSpec torus = make_lagrangian_torus({Rat(1, 2), Rat(1, 2)});
  for (int rep = 0; rep < 10; ++rep) {
    auto cls = classify_point(torus, sample_chart_point(torus, rng));
    CHECK(cls.c == 2);
    CHECK(cls.status == PointStatus::kCoisotropic);
  }

  EmbeddingSpec sphere = make_ellipsoid_product({{Rat(1), Rat(1)}});
  for (int rep = 0; rep < 10; ++rep) {
    auto cls = classify_point(sphere, sample_chart_point(sphere, rng));
    CHECK(cls.c == 1);
    CHECK(cls.status == PointStatus::kCoisotropic);
  }

  EmbeddingSpec graph = generic_quadratic_graph();
  int nowhere = 0;
  for (int rep = 0; rep < 100; ++rep) {
    auto cls = classify_point(graph, sample_chart_point(graph, rng));
    if (cls.c == 0 && cls.status == PointStatus::kNonCoisotropic) ++nowhere;
  }
  CHECK(nowhere >= 95);

  auto exact = classify_point(graph, std::vector<Rat>{Rat(1, 3), Rat(-1, 2)});
  CHECK(exact.c == 0);
  CHECK(exact.status == PointStatus::kNonCoisotropic);
}

TEST_CASE("kernel dimension keeps the chart parity and the coisotropy bound") {
  std::mt19937_64 rng(13);
  std::vector<EmbeddingSpec> catalog{
      generic_quadratic_graph(),
      make_lagrangian_torus({Rat(1, 2), Rat(1, 2)}),
      make_ellipsoid_product({{Rat(1), Rat(2)}, {Rat(3)}}),
      make_torus6(std::sqrt(2.0), std::sqrt(3.0)),
  };
  for (const EmbeddingSpec& emb : catalog) {
    for (int rep = 0; rep < 100; ++rep) {
      auto cls = classify_point(emb, sample_chart_point(emb, rng));
      CHECK(cls.c % 2 == emb.d % 2);
      CHECK(cls.c <= 2 * emb.n - emb.d);
    }
  }
}

TEST_CASE("torus chart reproduces the published characteristic span") {
  const double eps = std::sqrt(2.0), del = std::sqrt(3.0);
  EmbeddingSpec emb = make_torus6(eps, del);
  Matrix<double> w(6, 2);
  w(0, 0) = del;
  w(2, 0) = -del;
  w(1, 0) = 1;
  w(3, 0) = 1 + eps;
  w(5, 1) = 1;
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 100; ++rep) {
    auto cd = characteristic_distribution(emb, sample_chart_point(emb, rng));
    REQUIRE(cd.basis.cols() == 2);
    CHECK(cd.coisotropic);
    for (int col = 0; col < 2; ++col)
      CHECK(span_residual(w, cd.basis.col(col)) <= 1e-12);
  }
}

TEST_CASE("lagrangian points have a full characteristic distribution") {
  EmbeddingSpec torus = make_lagrangian_torus({Rat(1, 2), Rat(1, 3)});
  std::mt19937_64 rng(19);
  std::vector<double> x = sample_chart_point(torus, rng);
  auto cd = characteristic_distribution(torus, x);
  CHECK(cd.coisotropic);
  REQUIRE(cd.basis.cols() == 2);
  Matrix<double> a1 = jet_eval(torus, x, 1).a[0].as_matrix();
  for (int col = 0; col < 2; ++col)
    CHECK(span_residual(a1, cd.basis.col(col)) <= 1e-10);
}

TEST_CASE("product characteristic flows stay inside their factors") {
  EmbeddingSpec emb = make_ellipsoid_product({{Rat(1), Rat(2)}, {Rat(3)}});
  std::mt19937_64 rng(23);
  for (int rep = 0; rep < 10; ++rep) {
    auto cd = characteristic_distribution(emb, sample_chart_point(emb, rng));
    CHECK(cd.coisotropic);
    REQUIRE(cd.basis.cols() == 2);
    // Rows of each factor block: (x, y) pairs of its ambient coordinates.
    std::vector<std::vector<int>> blocks{{0, 1, 3, 4}, {2, 5}};
    for (const auto& rows : blocks) {
      Matrix<double> sub(int(rows.size()), 2);
      for (size_t r = 0; r < rows.size(); ++r)
        for (int col = 0; col < 2; ++col) sub(int(r), col) = cd.basis(rows[r], col);
      CHECK(rank(sub, 1e-9) == 1);
    }
  }
}

TEST_CASE("stability holds for the published forms and fails for degenerate ones") {
  EmbeddingSpec emb = make_torus6(std::sqrt(2.0), std::sqrt(3.0));
  std::vector<double> dy1(6, 0.0), dy3(6, 0.0);
  dy1[1] = 1;
  dy3[5] = 1;
  StabilityReport rep = stability_check(emb, {constant_form(dy1), constant_form(dy3)}, 100, 5);
  CHECK(rep.kernel_condition);
  CHECK(rep.volume_condition);

  std::vector<double> dy1_twice(6, 0.0);
  dy1_twice[1] = 2;
  StabilityReport dep =
      stability_check(emb, {constant_form(dy1), constant_form(dy1_twice)}, 20, 5);
  CHECK(dep.kernel_condition);
  CHECK_FALSE(dep.volume_condition);

  CHECK_THROWS_AS(stability_check(emb, {constant_form(dy1)}, 10, 5), domain_error);
}

TEST_CASE("the sphere is stable for the radial primitive") {
  EmbeddingSpec sphere = make_ellipsoid_product({{Rat(1), Rat(1)}});
  StabilityReport rep = stability_check(sphere, {liouville_form()}, 100, 29);
  CHECK(rep.kernel_condition);
  CHECK(rep.volume_condition);
}

TEST_CASE("lagrangian verdicts") {
  EmbeddingSpec inside_one =
      make_lagrangian_torus({Rat(1, 2), Rat(1, 2)}, {{Rat(1), Rat(1)}});
  LagrangianReport rep = lagrangian_check(inside_one, 100, 31);
  CHECK(rep.lagrangian);
  REQUIRE(rep.contained.has_value());
  CHECK(*rep.contained);

  EmbeddingSpec product = make_lagrangian_torus(
      {Rat(1, 2), Rat(1, 2), Rat(1, 2), Rat(1)}, {{Rat(1), Rat(1)}, {Rat(1), Rat(2)}});
  LagrangianReport prep = lagrangian_check(product, 50, 37);
  CHECK(prep.lagrangian);
  REQUIRE(prep.contained.has_value());
  CHECK(*prep.contained);

  // Section of a non-closed 1-form: g = (0, x_1) pulls the form back to
  // dx_2 ^ dx_1.
  PolyMap bad(2);
  bad[0] = {};
  bad[1] = {term({0}, 1)};
  CHECK_FALSE(lagrangian_check(make_graph_embedding(2, 2, bad), 20, 41).lagrangian);

  // Closed control: g = (x_2, x_1) is the differential of x_1 x_2.
  PolyMap good(2);
  good[0] = {term({1}, 1)};
  good[1] = {term({0}, 1)};
  CHECK(lagrangian_check(make_graph_embedding(2, 2, good), 20, 43).lagrangian);

  CHECK_THROWS_AS(lagrangian_check(make_ellipsoid_product({{Rat(1), Rat(1)}}), 5, 1),
                  domain_error);
}

TEST_CASE("chart and order errors are reported") {
  EmbeddingSpec sphere = make_ellipsoid_product({{Rat(1), Rat(1)}});
  CHECK_THROWS_AS(jet_eval(sphere, std::vector<double>{1.5, 0.0, 0.0}, 2), domain_error);
  CHECK_THROWS_AS(jet_eval(sphere, std::vector<double>{0.3, 0.0, 0.0}, 8), domain_error);
  CHECK_THROWS_AS(jet_eval(sphere, std::vector<double>{0.3, 0.0, 0.0}, 0), domain_error);
  CHECK_THROWS_AS(jet_eval(sphere, std::vector<Rat>{Rat(1, 3), Rat(0), Rat(0)}, 2),
                  domain_error);
  EmbeddingSpec t6 = make_torus6(std::sqrt(2.0), std::sqrt(3.0));
  CHECK_THROWS_AS(classify_point(t6, std::vector<Rat>{Rat(0), Rat(0), Rat(0), Rat(0)}),
                  domain_error);
}

TEST_CASE("torus points are coisotropic everywhere") {
  EmbeddingSpec emb = make_torus6(std::sqrt(2.0), std::sqrt(3.0));
  std::mt19937_64 rng(47);
  for (int rep = 0; rep < 25; ++rep) {
    auto cls = classify_point(emb, sample_chart_point(emb, rng));
    CHECK(cls.c == 2);
    CHECK(cls.status == PointStatus::kCoisotropic);
  }
}
