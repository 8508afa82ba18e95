#pragma once

#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <type_traits>
#include <vector>

#include "coiso/symplectic.hpp"
#include "coiso/tensors.hpp"
#include "coiso/truncpoly.hpp"

namespace coiso {

inline constexpr int kMaxJetOrder = 7;

// Residual threshold for the float-mode orthogonality and wedge assertions.
inline constexpr double kGeomTol = 1e-10;

enum class EmbKind {
  kPolynomial,       // components are polynomials in the chart coordinates
  kGraph,            // x |-> (x, g(x)) with polynomial g
  kLagrangianTorus,  // product of circles x_i^2 + y_i^2 = b_i
  kEllipsoidProduct, // product of ellipsoid boundaries sum (x_i^2+y_i^2)/a_i = 1
  kTorus6,           // the linear 4-torus in the irrational-form R^6 quotient
};

struct PolyTerm {
  std::vector<int> mono;  // sorted variable list, x_0^2 x_3 is {0, 0, 3}
  Rat coeff;
};
using PolyMap = std::vector<std::vector<PolyTerm>>;  // term lists per component

// A parametrized embedding chart into R^{2n} with the block coordinate
// convention (x_1, ..., x_n, y_1, ..., y_n): omega pairs slot i with n + i.
// The torus entry instead carries the interleaved coordinates
// (x_1, y_1, x_2, y_2, x_3, y_3) of its overriding constant form.
struct EmbeddingSpec {
  EmbKind kind = EmbKind::kPolynomial;
  int d = 0;  // chart dimension
  int n = 0;  // ambient half-dimension
  PolyMap poly;                           // polynomial components, or the graph's g
  std::vector<Rat> radii;                 // lagrangian-torus squared radii b_i
  std::vector<std::vector<Rat>> inside;   // ellipsoid factors expected to contain the torus
  std::vector<std::vector<Rat>> factors;  // ellipsoid-product capacities a^(j)
  double eps = 0, del = 0;                // irrational form parameters
};

namespace detail {

inline void check_poly_vars(const PolyMap& pm, int d) {
  for (const auto& comp : pm)
    for (const PolyTerm& t : comp)
      for (size_t i = 0; i < t.mono.size(); ++i) {
        require(t.mono[i] >= 0 && t.mono[i] < d, "polynomial term: variable out of range");
        require(i == 0 || t.mono[i - 1] <= t.mono[i], "polynomial term: monomial not sorted");
      }
}

}  // namespace detail

inline EmbeddingSpec make_polynomial_embedding(int d, int n, PolyMap poly) {
  require(d >= 1 && n >= 1, "polynomial embedding: bad dimensions");
  require(int(poly.size()) == 2 * n, "polynomial embedding: need one component per ambient coordinate");
  detail::check_poly_vars(poly, d);
  EmbeddingSpec e;
  e.kind = EmbKind::kPolynomial;
  e.d = d;
  e.n = n;
  e.poly = std::move(poly);
  return e;
}

inline EmbeddingSpec make_graph_embedding(int d, int n, PolyMap g) {
  require(d >= 1 && 2 * n > d, "graph embedding: bad dimensions");
  require(int(g.size()) == 2 * n - d, "graph embedding: need one component per appended coordinate");
  detail::check_poly_vars(g, d);
  EmbeddingSpec e;
  e.kind = EmbKind::kGraph;
  e.d = d;
  e.n = n;
  e.poly = std::move(g);
  return e;
}

inline EmbeddingSpec make_lagrangian_torus(std::vector<Rat> b,
                                           std::vector<std::vector<Rat>> inside = {}) {
  require(!b.empty(), "lagrangian torus: empty radius tuple");
  for (const Rat& bi : b) require(bi > Rat(0), "lagrangian torus: radii must be positive");
  size_t covered = 0;
  for (const auto& a : inside) {
    require(!a.empty(), "lagrangian torus: empty ellipsoid factor");
    for (const Rat& ai : a) require(ai > Rat(0), "lagrangian torus: capacities must be positive");
    covered += a.size();
  }
  require(inside.empty() || covered == b.size(),
          "lagrangian torus: ellipsoid factors do not cover the radius tuple");
  EmbeddingSpec e;
  e.kind = EmbKind::kLagrangianTorus;
  e.d = int(b.size());
  e.n = int(b.size());
  e.radii = std::move(b);
  e.inside = std::move(inside);
  return e;
}

inline EmbeddingSpec make_ellipsoid_product(std::vector<std::vector<Rat>> factors) {
  require(!factors.empty(), "ellipsoid product: no factors");
  int n = 0, d = 0;
  for (const auto& a : factors) {
    require(!a.empty(), "ellipsoid product: empty factor");
    for (const Rat& ai : a) require(ai > Rat(0), "ellipsoid product: capacities must be positive");
    n += int(a.size());
    d += 2 * int(a.size()) - 1;
  }
  EmbeddingSpec e;
  e.kind = EmbKind::kEllipsoidProduct;
  e.d = d;
  e.n = n;
  e.factors = std::move(factors);
  return e;
}

inline EmbeddingSpec make_torus6(double eps, double del) {
  EmbeddingSpec e;
  e.kind = EmbKind::kTorus6;
  e.d = 4;
  e.n = 3;
  e.eps = eps;
  e.del = del;
  return e;
}

// True when the chart map has exact rational jets.  The torus entry's map is
// exact even though its ambient form is not.
inline bool exact_map(EmbKind k) {
  return k == EmbKind::kPolynomial || k == EmbKind::kGraph || k == EmbKind::kTorus6;
}

template <class T>
Matrix<T> ambient_form(const EmbeddingSpec& emb) {
  if (emb.kind == EmbKind::kTorus6) {
    if constexpr (std::is_same_v<T, double>) {
      Matrix<T> f(6, 6);
      f(0, 1) = 1;
      f(1, 0) = -1;
      f(2, 3) = 1;
      f(3, 2) = -1;
      f(4, 5) = 1;
      f(5, 4) = -1;
      f(1, 2) = emb.eps;
      f(2, 1) = -emb.eps;
      f(1, 3) = emb.del;
      f(3, 1) = -emb.del;
      return f;
    } else {
      require(false, "ambient form: the irrational override needs the float backend");
    }
  }
  return standard_form_matrix<T>(emb.n);
}

// The r-jet of the chart map at x: the image point and the symmetric
// derivative tensors A_1, ..., A_r with A_k(e_{i_1}, ..., e_{i_k}) the mixed
// partial of the map, so stored entries carry the multiplicity factorials of
// their index tuples.
template <class T>
struct JetPoint {
  std::vector<T> x, y;
  std::vector<SymTensor<T>> a;  // a[k-1] has order k
};

namespace detail {

template <class T>
std::vector<TruncPoly<T>> poly_components(const PolyMap& pm, const std::vector<T>& x,
                                          int nv, int deg) {
  std::vector<TruncPoly<T>> vars;
  for (int i = 0; i < nv; ++i)
    vars.push_back(TruncPoly<T>::constant(nv, deg, x[i]) + TruncPoly<T>::var(nv, deg, i));
  std::vector<TruncPoly<T>> out;
  for (const auto& comp : pm) {
    TruncPoly<T> acc(nv, deg);
    for (const PolyTerm& t : comp) {
      TruncPoly<T> term = TruncPoly<T>::constant(nv, deg, from_rat<T>(t.coeff));
      for (int v : t.mono) term = term * vars[v];
      acc = acc + term;
    }
    out.push_back(acc);
  }
  return out;
}

// Components of the chart map as truncated expansions around x.
template <class T>
std::vector<TruncPoly<T>> jet_components(const EmbeddingSpec& emb, const std::vector<T>& x,
                                         int deg) {
  const int d = emb.d, n = emb.n;
  require(int(x.size()) == d, "jet_eval: point length != chart dimension");
  auto var_at = [&](int i) {
    return TruncPoly<T>::constant(d, deg, x[i]) + TruncPoly<T>::var(d, deg, i);
  };

  switch (emb.kind) {
    case EmbKind::kPolynomial:
      return poly_components(emb.poly, x, d, deg);
    case EmbKind::kGraph: {
      std::vector<TruncPoly<T>> out;
      for (int i = 0; i < d; ++i) out.push_back(var_at(i));
      for (auto& g : poly_components(emb.poly, x, d, deg)) out.push_back(g);
      return out;
    }
    case EmbKind::kTorus6: {
      std::vector<TruncPoly<T>> out(6, TruncPoly<T>(d, deg));
      out[0] = var_at(0);
      out[1] = var_at(1);
      out[2] = T(-1) * var_at(0);
      out[3] = var_at(2);
      out[5] = var_at(3);
      return out;
    }
    case EmbKind::kLagrangianTorus: {
      if constexpr (std::is_same_v<T, double>) {
        std::vector<TruncPoly<T>> out(2 * n, TruncPoly<T>(d, deg));
        for (int i = 0; i < n; ++i) {
          const double r = std::sqrt(emb.radii[i].to_double());
          out[i] = r * cos_trunc(var_at(i));
          out[n + i] = r * sin_trunc(var_at(i));
        }
        return out;
      }
      require(false, "jet_eval: trigonometric chart needs the float backend");
      return {};
    }
    case EmbKind::kEllipsoidProduct: {
      if constexpr (std::is_same_v<T, double>) {
        std::vector<TruncPoly<T>> out(2 * n, TruncPoly<T>(d, deg));
        int voff = 0;  // first chart variable of the factor
        int zoff = 0;  // first ambient pair of the factor
        for (const auto& a : emb.factors) {
          const int m = int(a.size());
          // Action coordinates: m - 1 free, the last balancing the capacity sum.
          std::vector<TruncPoly<T>> u;
          TruncPoly<T> rest = TruncPoly<T>::constant(d, deg, 1.0);
          for (int i = 0; i < m - 1; ++i) {
            u.push_back(var_at(voff + i));
            rest = rest - (1.0 / a[i].to_double()) * u.back();
          }
          u.push_back(a[m - 1].to_double() * rest);
          for (int i = 0; i < m; ++i) {
            require(u[i].constant_term() > 0,
                    "jet_eval: point outside the parametrization chart");
            TruncPoly<T> rad = sqrt_trunc(u[i]);
            TruncPoly<T> ang = var_at(voff + (m - 1) + i);
            out[zoff + i] = rad * cos_trunc(ang);
            out[n + zoff + i] = rad * sin_trunc(ang);
          }
          voff += 2 * m - 1;
          zoff += m;
        }
        return out;
      }
      require(false, "jet_eval: trigonometric chart needs the float backend");
      return {};
    }
  }
  require(false, "jet_eval: unknown embedding kind");
  return {};
}

inline std::int64_t multiplicity_factorial(const std::vector<int>& sorted) {
  std::int64_t r = 1;
  int run = 1;
  for (size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] == sorted[i - 1])
      ++run;
    else
      run = 1;
    r *= run;
  }
  return r;
}

}  // namespace detail

template <class T>
JetPoint<T> jet_eval(const EmbeddingSpec& emb, const std::vector<T>& x, int r) {
  require(r >= 1 && r <= kMaxJetOrder, "jet_eval: order out of range");
  if constexpr (!std::is_same_v<T, double>)
    require(exact_map(emb.kind), "jet_eval: trigonometric chart needs the float backend");
  std::vector<TruncPoly<T>> comps = detail::jet_components(emb, x, r);
  JetPoint<T> out;
  out.x = x;
  for (const auto& c : comps) out.y.push_back(c.constant_term());
  for (int k = 1; k <= r; ++k) {
    SymTensor<T> a(k, emb.d, 2 * emb.n);
    for (int s = 0; s < a.slots(); ++s) {
      const std::vector<int>& mono = a.index().tuple(s);
      const T mult = from_rat<T>(Rat(detail::multiplicity_factorial(mono)));
      for (int c = 0; c < 2 * emb.n; ++c) a.entry(s, c) = mult * comps[c].coeff(mono);
    }
    out.a.push_back(a);
  }
  return out;
}

// The image point alone, a degree-zero expansion.
template <class T>
std::vector<T> map_point(const EmbeddingSpec& emb, const std::vector<T>& x) {
  std::vector<T> y;
  for (const auto& c : detail::jet_components(emb, x, 0)) y.push_back(c.constant_term());
  return y;
}

enum class PointStatus {
  kCoisotropic,     // the image tangent space contains its omega-orthogonal
  kNonCoisotropic,  // it does not; the kernel falls short of the codimension
  kIntermediate,    // unreachable for immersions: the kernel dimension caps at
                    // 2n - d with equality exactly in the coisotropic case
};

template <class T>
struct PointClassification {
  std::vector<T> x;
  int c = 0;  // kernel dimension of the pulled-back form at x
  PointStatus status = PointStatus::kNonCoisotropic;
  Matrix<T> kernel;  // chart-coordinate basis of that kernel
};

namespace detail {

template <class T>
struct FormAtPoint {
  Matrix<T> a1, g, kernel;
};

template <class T>
FormAtPoint<T> form_at_point(const EmbeddingSpec& emb, const std::vector<T>& x,
                             const char* who, double rel_tol) {
  JetPoint<T> j = jet_eval(emb, x, 1);
  FormAtPoint<T> out;
  out.a1 = j.a[0].as_matrix();
  require(rank(out.a1, rel_tol) == emb.d,
          std::string(who) + ": not an immersion at the point");
  out.g = pullback_form_with(ambient_form<T>(emb), out.a1);
  out.kernel = kernel_of_form(out.g, rel_tol);
  return out;
}

inline double mat_max_abs(const Matrix<double>& m) {
  double r = 0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r = std::max(r, std::fabs(m(i, j)));
  return r;
}

}  // namespace detail

template <class T>
PointClassification<T> classify_point(const EmbeddingSpec& emb, const std::vector<T>& x,
                                      double rel_tol = kDefaultRelTol) {
  detail::FormAtPoint<T> f = detail::form_at_point(emb, x, "classify_point", rel_tol);
  PointClassification<T> out;
  out.x = x;
  out.c = f.kernel.cols();
  out.kernel = f.kernel;
  check(out.c <= 2 * emb.n - emb.d, "classify_point: kernel exceeds the coisotropy bound");
  out.status = (out.c == 2 * emb.n - emb.d) ? PointStatus::kCoisotropic
                                            : PointStatus::kNonCoisotropic;
  return out;
}

template <class T>
struct CharDist {
  Matrix<T> basis;  // ambient vectors spanning the tangent-orthogonal intersection
  bool coisotropic = false;
};

template <class T>
CharDist<T> characteristic_distribution(const EmbeddingSpec& emb, const std::vector<T>& x,
                                        double rel_tol = kDefaultRelTol) {
  detail::FormAtPoint<T> f =
      detail::form_at_point(emb, x, "characteristic_distribution", rel_tol);
  CharDist<T> out;
  out.basis = f.a1 * f.kernel;
  out.coisotropic = f.kernel.cols() == 2 * emb.n - emb.d;
  Matrix<T> resid = f.g * f.kernel;  // omega-pairing against every tangent column
  if constexpr (ScalarTraits<T>::exact) {
    check(resid.is_zero(), "characteristic_distribution: basis not omega-orthogonal");
  } else {
    check(detail::mat_max_abs(resid) <=
              kGeomTol * (1.0 + detail::mat_max_abs(f.g)),
          "characteristic_distribution: basis not omega-orthogonal");
  }
  return out;
}

// Constant-coefficient ambient 1-form, or the primitive
// (1/2) sum (x_i dy_i - y_i dx_i) of the standard form.
struct StabilityForm {
  bool liouville = false;
  std::vector<double> constant;
};

inline StabilityForm constant_form(std::vector<double> coeffs) {
  StabilityForm f;
  f.constant = std::move(coeffs);
  return f;
}

inline StabilityForm liouville_form() {
  StabilityForm f;
  f.liouville = true;
  return f;
}

struct StabilityReport {
  bool kernel_condition = true;
  bool volume_condition = true;
  int samples = 0;
  std::uint64_t seed = 0;
};

namespace detail {

// Exterior algebra on chart covectors, coefficients indexed by variable
// bitmask.  Small charts only; the table has 2^d entries.
struct ExtForm {
  int d = 0;
  std::vector<double> c;
  explicit ExtForm(int d) : d(d), c(size_t(1) << d, 0.0) {
    require(d <= 16, "ExtForm: chart dimension too large");
  }
};

inline ExtForm ext_one(int d) {
  ExtForm f(d);
  f.c[0] = 1.0;
  return f;
}

inline ExtForm ext_covector(const std::vector<double>& a) {
  ExtForm f(int(a.size()));
  for (size_t i = 0; i < a.size(); ++i) f.c[size_t(1) << i] = a[i];
  return f;
}

inline ExtForm ext_two_form(const Matrix<double>& g) {
  ExtForm f(g.rows());
  for (int i = 0; i < g.rows(); ++i)
    for (int j = i + 1; j < g.cols(); ++j)
      f.c[(size_t(1) << i) | (size_t(1) << j)] = g(i, j);
  return f;
}

inline int merge_sign(std::uint32_t p, std::uint32_t q) {
  // Parity of the pairs (i in p, j in q) with i > j.
  int cross = 0;
  for (std::uint32_t rest = p; rest != 0; rest &= rest - 1) {
    const std::uint32_t low = rest & ~(rest - 1);
    cross += __builtin_popcount(q & (low - 1));
  }
  return (cross % 2 == 0) ? 1 : -1;
}

inline ExtForm ext_wedge(const ExtForm& a, const ExtForm& b) {
  ExtForm out(a.d);
  for (std::uint32_t p = 0; p < a.c.size(); ++p) {
    if (a.c[p] == 0.0) continue;
    for (std::uint32_t q = 0; q < b.c.size(); ++q) {
      if (b.c[q] == 0.0 || (p & q) != 0) continue;
      out.c[p | q] += merge_sign(p, q) * a.c[p] * b.c[q];
    }
  }
  return out;
}

inline std::vector<double> alpha_at(const StabilityForm& f, const std::vector<double>& y,
                                    int n) {
  if (!f.liouville) {
    require(int(f.constant.size()) == 2 * n, "stability form: covector length != 2n");
    return f.constant;
  }
  std::vector<double> a(2 * n);
  for (int i = 0; i < n; ++i) {
    a[i] = -0.5 * y[n + i];
    a[n + i] = 0.5 * y[i];
  }
  return a;
}

}  // namespace detail

inline std::vector<double> sample_chart_point(const EmbeddingSpec& emb,
                                              std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> x;
  switch (emb.kind) {
    case EmbKind::kPolynomial:
    case EmbKind::kGraph:
      for (int i = 0; i < emb.d; ++i) x.push_back(2.0 * unit(rng) - 1.0);
      return x;
    case EmbKind::kLagrangianTorus:
      for (int i = 0; i < emb.d; ++i) x.push_back(2.0 * std::numbers::pi * unit(rng));
      return x;
    case EmbKind::kTorus6:
      for (int i = 0; i < emb.d; ++i) x.push_back(unit(rng));
      return x;
    case EmbKind::kEllipsoidProduct:
      for (const auto& a : emb.factors) {
        const int m = int(a.size());
        std::vector<double> g(m);
        double tot = 0;
        for (int i = 0; i < m; ++i) {
          const double u = std::min(std::max(unit(rng), 1e-12), 1.0 - 1e-12);
          g[i] = -std::log(1.0 - u);
          tot += g[i];
        }
        // Positive point of the capacity simplex; the last action is implied.
        for (int i = 0; i < m - 1; ++i) x.push_back(a[i].to_double() * g[i] / tot);
        for (int i = 0; i < m; ++i) x.push_back(2.0 * std::numbers::pi * unit(rng));
      }
      return x;
  }
  require(false, "sample_chart_point: unknown embedding kind");
  return {};
}

inline std::vector<Rat> sample_chart_point_q(const EmbeddingSpec& emb,
                                             std::mt19937_64& rng) {
  require(exact_map(emb.kind), "sample_chart_point_q: chart is not rational");
  std::uniform_int_distribution<int> num(-8, 8), den(1, 4);
  std::vector<Rat> x;
  for (int i = 0; i < emb.d; ++i) x.push_back(Rat(num(rng), den(rng)));
  return x;
}

inline StabilityReport stability_check(const EmbeddingSpec& emb,
                                       const std::vector<StabilityForm>& alphas,
                                       int samples = 100, std::uint64_t seed = 1,
                                       double rel_tol = kDefaultRelTol) {
  const int k = int(alphas.size());
  require(k == 2 * emb.n - emb.d, "stability_check: number of forms != codimension");
  for (const StabilityForm& f : alphas)
    require(!f.liouville || emb.kind != EmbKind::kTorus6,
            "stability_check: no standard primitive for the overridden form");
  std::mt19937_64 rng(seed);
  StabilityReport rep;
  rep.samples = samples;
  rep.seed = seed;
  const Matrix<double> omega_std = standard_form_matrix<double>(emb.n);
  for (int s = 0; s < samples; ++s) {
    std::vector<double> x = sample_chart_point(emb, rng);
    detail::FormAtPoint<double> f =
        detail::form_at_point(emb, x, "stability_check", rel_tol);
    require(f.kernel.cols() == k,
            "stability_check: sample point not coisotropic of the declared codimension");
    std::vector<double> y = map_point(emb, x);

    detail::ExtForm wedge = detail::ext_one(emb.d);
    for (const StabilityForm& form : alphas) {
      std::vector<double> amb = detail::alpha_at(form, y, emb.n);
      wedge = detail::ext_wedge(wedge, detail::ext_covector(f.a1.transpose().apply(amb)));
      if (form.liouville) {
        // d(alpha) is the standard form; constant forms are closed outright.
        Matrix<double> dch = f.a1.transpose() * omega_std * f.a1;
        if (detail::mat_max_abs(dch * f.kernel) >
            kGeomTol * (1.0 + detail::mat_max_abs(dch)))
          rep.kernel_condition = false;
      }
    }
    for (int i = 0; i < (emb.d - k) / 2; ++i)
      wedge = detail::ext_wedge(wedge, detail::ext_two_form(f.g));
    if (std::fabs(wedge.c[(size_t(1) << emb.d) - 1]) <= kGeomTol)
      rep.volume_condition = false;
  }
  return rep;
}

struct LagrangianReport {
  bool lagrangian = true;
  std::optional<bool> contained;  // set when the torus names ellipsoid factors
  int samples = 0;
  std::uint64_t seed = 0;
};

inline LagrangianReport lagrangian_check(const EmbeddingSpec& emb, int samples = 100,
                                         std::uint64_t seed = 1) {
  require(emb.d == emb.n, "lagrangian_check: chart dimension != ambient half-dimension");
  std::mt19937_64 rng(seed);
  LagrangianReport rep;
  rep.samples = samples;
  rep.seed = seed;
  if (exact_map(emb.kind)) {
    for (int s = 0; s < samples; ++s) {
      std::vector<Rat> x = sample_chart_point_q(emb, rng);
      JetPoint<Rat> j = jet_eval(emb, x, 1);
      if (!pullback_form_with(ambient_form<Rat>(emb), j.a[0].as_matrix()).is_zero())
        rep.lagrangian = false;
    }
    return rep;
  }
  bool sums_match = !emb.inside.empty();
  for (size_t f = 0, off = 0; f < emb.inside.size(); ++f) {
    Rat sum(0);
    for (size_t i = 0; i < emb.inside[f].size(); ++i)
      sum = sum + emb.radii[off + i] / emb.inside[f][i];
    if (!(sum == Rat(1))) sums_match = false;
    off += emb.inside[f].size();
  }
  if (!emb.inside.empty()) rep.contained = sums_match;
  for (int s = 0; s < samples; ++s) {
    std::vector<double> x = sample_chart_point(emb, rng);
    JetPoint<double> j = jet_eval(emb, x, 1);
    Matrix<double> g = pullback_form_with(ambient_form<double>(emb), j.a[0].as_matrix());
    if (detail::mat_max_abs(g) > 1e-12) rep.lagrangian = false;
    if (sums_match) {
      // The capacity identity certifies containment; the defining equations
      // must then evaluate to one on every sample.
      for (size_t f = 0, off = 0; f < emb.inside.size(); ++f) {
        double val = 0;
        for (size_t i = 0; i < emb.inside[f].size(); ++i) {
          const double xi = j.y[off + i], yi = j.y[emb.n + off + i];
          val += (xi * xi + yi * yi) / emb.inside[f][i].to_double();
        }
        check(std::fabs(val - 1.0) <= 1e-12 * emb.inside[f].size(),
              "lagrangian_check: containment identity violated at a sample");
        off += emb.inside[f].size();
      }
    }
  }
  return rep;
}

}  // namespace coiso
