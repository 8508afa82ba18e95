#pragma once

#include <algorithm>
#include <map>
#include <unordered_map>
#include <vector>

#include "coiso/matrix.hpp"
#include "coiso/rational.hpp"
#include "coiso/tensors.hpp"

namespace coiso {

// Permutation of {0, ..., m-1} stored by images.  The group product is
// mul(a, b) = "a then b" (x -> b(a(x))); with the argument action
// (sigma . T)(v_0, ..., v_s) = T(v_{sigma^{-1}(0)}, ..., v_{sigma^{-1}(s)})
// this satisfies act(mul(a, b), T) = act(a, act(b, T)), making tensor spaces
// left modules over the group algebra below.
struct Permutation {
  std::vector<int> img;

  static Permutation identity(int m) {
    Permutation p;
    p.img.resize(m);
    for (int i = 0; i < m; ++i) p.img[i] = i;
    return p;
  }

  static Permutation transposition(int m, int i, int j) {
    Permutation p = identity(m);
    std::swap(p.img[i], p.img[j]);
    return p;
  }

  int size() const { return int(img.size()); }
  int operator()(int x) const { return img[x]; }

  Permutation inverse() const {
    Permutation p;
    p.img.resize(img.size());
    for (int i = 0; i < size(); ++i) p.img[img[i]] = i;
    return p;
  }

  friend Permutation mul(const Permutation& a, const Permutation& b) {
    Permutation p;
    p.img.resize(a.img.size());
    for (int i = 0; i < int(a.img.size()); ++i) p.img[i] = b.img[a.img[i]];
    return p;
  }

  friend bool operator==(const Permutation& a, const Permutation& b) {
    return a.img == b.img;
  }
};

// (sigma . T): entry at tuple I is T at the tuple J with J_k = I[sigma^{-1}(k)].
template <class T>
MultiTensor<T> permute_action(const Permutation& sigma, const MultiTensor<T>& t) {
  require(sigma.size() == t.order(), "permute_action: size mismatch");
  const int m = t.order(), w = t.target_dim();
  Permutation inv = sigma.inverse();
  MultiTensor<T> out(m, t.source_dim(), w);
  std::vector<int> j(m);
  for_each_tuple(m, t.source_dim(), [&](const std::vector<int>& i) {
    for (int k = 0; k < m; ++k) j[k] = i[inv(k)];
    const size_t fo = out.flat(i), fi = t.flat(j);
    for (int c = 0; c < w; ++c) out.raw(fo * w + c) = t.raw(fi * w + c);
  });
  return out;
}

// All of S_m in lexicographic order with constant-time index lookup.
class PermGroup {
 public:
  explicit PermGroup(int m) : m_(m) {
    require(m >= 1 && m <= 8, "PermGroup: unsupported degree");
    Permutation p = Permutation::identity(m);
    do {
      index_[encode(p.img)] = int(elems_.size());
      elems_.push_back(p);
    } while (std::next_permutation(p.img.begin(), p.img.end()));
  }

  int degree() const { return m_; }
  int order() const { return int(elems_.size()); }
  const Permutation& at(int i) const { return elems_[i]; }

  int index_of(const Permutation& p) const {
    auto it = index_.find(encode(p.img));
    require(it != index_.end(), "PermGroup: foreign permutation");
    return it->second;
  }

 private:
  static std::uint64_t encode(const std::vector<int>& v) {
    std::uint64_t k = 1;
    for (int x : v) k = (k << 3) | std::uint64_t(x);
    return k;
  }

  int m_;
  std::vector<Permutation> elems_;
  std::unordered_map<std::uint64_t, int> index_;
};

// Element of the rational group algebra of S_m, coefficients indexed in the
// group's lexicographic order.  The inner product is the coefficientwise dot
// product, which is invariant for this product convention.
class GroupAlgebraElement {
 public:
  GroupAlgebraElement() = default;
  explicit GroupAlgebraElement(const PermGroup* g) : g_(g), c_(g->order(), Rat(0)) {}

  static GroupAlgebraElement unit(const PermGroup* g) {
    GroupAlgebraElement e(g);
    e.c_[g->index_of(Permutation::identity(g->degree()))] = Rat(1);
    return e;
  }

  static GroupAlgebraElement delta(const PermGroup* g, const Permutation& p) {
    GroupAlgebraElement e(g);
    e.c_[g->index_of(p)] = Rat(1);
    return e;
  }

  const PermGroup* group() const { return g_; }
  Rat& operator[](int i) { return c_[i]; }
  const Rat& operator[](int i) const { return c_[i]; }

  bool is_zero() const {
    for (const Rat& x : c_)
      if (!x.is_zero()) return false;
    return true;
  }

  friend GroupAlgebraElement operator+(const GroupAlgebraElement& a,
                                       const GroupAlgebraElement& b) {
    GroupAlgebraElement r = a;
    for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] += b.c_[i];
    return r;
  }

  friend GroupAlgebraElement operator-(const GroupAlgebraElement& a,
                                       const GroupAlgebraElement& b) {
    GroupAlgebraElement r = a;
    for (size_t i = 0; i < r.c_.size(); ++i) r.c_[i] -= b.c_[i];
    return r;
  }

  friend GroupAlgebraElement operator*(const Rat& s, const GroupAlgebraElement& a) {
    GroupAlgebraElement r = a;
    for (auto& x : r.c_) x *= s;
    return r;
  }

  friend bool operator==(const GroupAlgebraElement& a, const GroupAlgebraElement& b) {
    return a.c_ == b.c_;
  }

  friend Rat inner(const GroupAlgebraElement& a, const GroupAlgebraElement& b) {
    Rat acc(0);
    for (size_t i = 0; i < a.c_.size(); ++i) acc += a.c_[i] * b.c_[i];
    return acc;
  }

  // Coefficient reversal sigma -> sigma^{-1}; the adjoint of right
  // multiplication with respect to the inner product.
  GroupAlgebraElement star() const {
    GroupAlgebraElement r(g_);
    for (int i = 0; i < g_->order(); ++i)
      r.c_[g_->index_of(g_->at(i).inverse())] = c_[i];
    return r;
  }

 private:
  const PermGroup* g_ = nullptr;
  std::vector<Rat> c_;
};

// Convolution product extending mul on group elements.
inline GroupAlgebraElement group_multiply(const GroupAlgebraElement& a,
                                          const GroupAlgebraElement& b) {
  const PermGroup* g = a.group();
  require(g == b.group(), "group_multiply: different groups");
  GroupAlgebraElement r(g);
  for (int i = 0; i < g->order(); ++i) {
    if (a[i].is_zero()) continue;
    for (int j = 0; j < g->order(); ++j) {
      if (b[j].is_zero()) continue;
      r[g->index_of(mul(g->at(i), g->at(j)))] += a[i] * b[j];
    }
  }
  return r;
}

// Module action of an algebra element on an order-m tensor.
template <class T>
MultiTensor<T> algebra_action(const GroupAlgebraElement& x, const MultiTensor<T>& t) {
  const PermGroup* g = x.group();
  require(g->degree() == t.order(), "algebra_action: degree mismatch");
  MultiTensor<T> acc(t.order(), t.source_dim(), t.target_dim());
  for (int i = 0; i < g->order(); ++i) {
    if (x[i].is_zero()) continue;
    acc = acc + from_rat<T>(x[i]) * permute_action(g->at(i), t);
  }
  return acc;
}

// Generators whose joint annihilator inside order-(s+1) tensors is T_s:
// middle transpositions symmetrize v_1..v_{s-1}, the end transposition
// antisymmetrizes v_0, v_s, and the 3-cycle on (0, 1, s) yields the cyclic
// identity.
struct TsGenerators {
  std::vector<Permutation> middle;  // t_i = (i, i+1), 1 <= i <= s-2
  Permutation ends;                 // t_s = (0, s)
  Permutation ucycle;               // u: 0 -> 1, 1 -> s, s -> 0
};

inline TsGenerators ts_generators(int s) {
  require(s >= 2, "ts_generators: s < 2");
  const int m = s + 1;
  TsGenerators g;
  for (int i = 1; i <= s - 2; ++i) g.middle.push_back(Permutation::transposition(m, i, i + 1));
  g.ends = Permutation::transposition(m, 0, s);
  Permutation u = Permutation::identity(m);
  u.img[0] = 1;
  u.img[1] = s;
  u.img[s] = 0;
  g.ucycle = u;
  return g;
}

// The ideal generators 1 - t_i, 1 + t_s, 1 + u + u^2 as algebra elements.
inline std::vector<GroupAlgebraElement> ideal_generators(const PermGroup* g, int s) {
  require(g->degree() == s + 1, "ideal_generators: group degree != s+1");
  TsGenerators gen = ts_generators(s);
  std::vector<GroupAlgebraElement> out;
  GroupAlgebraElement one = GroupAlgebraElement::unit(g);
  for (const Permutation& t : gen.middle)
    out.push_back(one - GroupAlgebraElement::delta(g, t));
  out.push_back(one + GroupAlgebraElement::delta(g, gen.ends));
  Permutation u2 = mul(gen.ucycle, gen.ucycle);
  out.push_back(one + GroupAlgebraElement::delta(g, gen.ucycle) +
                GroupAlgebraElement::delta(g, u2));
  return out;
}

struct IdempotentPair {
  const PermGroup* group = nullptr;
  GroupAlgebraElement e;      // component of 1 in the ideal I
  GroupAlgebraElement eperp;  // component of 1 in I^perp; Pi acts by eperp
  int dim_iperp = 0;
  std::vector<GroupAlgebraElement> iperp_basis;
};

namespace detail {

// Union-find over group elements with a sign relative to the parent,
// tracking y_a = sign * y_b relations; inconsistent cycles force the class
// to zero.
struct SignedUF {
  std::vector<int> parent, sgn;
  std::vector<bool> dead;
  explicit SignedUF(int n) : parent(n), sgn(n, 1), dead(n, false) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  std::pair<int, int> find(int x) {
    if (parent[x] == x) return {x, 1};
    auto [r, s] = find(parent[x]);
    parent[x] = r;
    sgn[x] *= s;
    return {r, sgn[x]};
  }
  void unite(int a, int b, int rel) {  // y_a = rel * y_b
    auto [ra, sa] = find(a);
    auto [rb, sb] = find(b);
    if (ra == rb) {
      if (sa != rel * sb) dead[ra] = true;
      return;
    }
    // y_ra = sa^{-1} y_a = sa * y_a (signs are +-1); y_a = rel y_b
    parent[ra] = rb;
    sgn[ra] = sa * rel * sb;
    dead[rb] = dead[rb] || dead[ra];
  }
};

}  // namespace detail

// Splits 1 = e + eperp against the left ideal I generated by the T_s
// conditions.  The generators are fixed by coefficient reversal, so
// I^perp = { y : y * g = 0 for each generator }, which unfolds into sign
// relations along left cosets plus a three-term sum over each <u>-coset.
// eperp is then the orthogonal projection of 1 onto I^perp via the Gram
// system of an I^perp basis.  Cached per s.
inline const IdempotentPair& idempotent_pair(int s) {
  require(s >= 2 && s <= 5, "idempotent_pair: s outside [2, 5]");
  static std::map<int, IdempotentPair> cache;
  auto it = cache.find(s);
  if (it != cache.end()) return it->second;

  static std::map<int, PermGroup> groups;
  PermGroup& g = groups.try_emplace(s + 1, s + 1).first->second;
  const int n = g.order();
  TsGenerators gen = ts_generators(s);

  // y * (1 - t) = 0  <=>  y_pi = y_{t o pi};  y * (1 + t_s) = 0  <=>
  // y_pi = -y_{t_s o pi}.  (Right multiplication by an involution delta_t
  // permutes coefficients by left composition in this product convention.)
  detail::SignedUF uf(n);
  for (int i = 0; i < n; ++i) {
    const Permutation& pi = g.at(i);
    for (const Permutation& t : gen.middle) uf.unite(i, g.index_of(mul(pi, t)), 1);
    uf.unite(i, g.index_of(mul(pi, gen.ends)), -1);
  }
  // propagate dead flags to the final roots
  for (int i = 0; i < n; ++i) {
    auto [r, sgn] = uf.find(i);
    (void)sgn;
    if (uf.dead[i]) uf.dead[r] = true;
  }

  std::map<int, int> var_of_root;
  for (int i = 0; i < n; ++i) {
    auto [r, sgn] = uf.find(i);
    (void)sgn;
    if (!uf.dead[r] && !var_of_root.count(r)) {
      const int v = int(var_of_root.size());
      var_of_root[r] = v;
    }
  }
  const int nvars = int(var_of_root.size());

  // y * (1 + u + u^2) = 0: per pi, y_pi + y_{u o pi} + y_{u^2 o pi} = 0.
  Permutation u2 = mul(gen.ucycle, gen.ucycle);
  Matrix<Rat> cond(n, nvars);
  for (int i = 0; i < n; ++i) {
    const Permutation& pi = g.at(i);
    const int js[3] = {i, g.index_of(mul(pi, gen.ucycle)), g.index_of(mul(pi, u2))};
    for (int j : js) {
      auto [r, sgn] = uf.find(j);
      if (uf.dead[r]) continue;
      cond(i, var_of_root[r]) += Rat(sgn);
    }
  }
  Matrix<Rat> free_basis = nullspace(cond);

  IdempotentPair pair;
  pair.group = &g;
  for (int b = 0; b < free_basis.cols(); ++b) {
    GroupAlgebraElement y(&g);
    for (int i = 0; i < n; ++i) {
      auto [r, sgn] = uf.find(i);
      if (uf.dead[r]) continue;
      y[i] = Rat(sgn) * free_basis(var_of_root[r], b);
    }
    pair.iperp_basis.push_back(y);
  }
  pair.dim_iperp = int(pair.iperp_basis.size());

  // Project 1 onto I^perp: Gram system over the basis.
  const int m = pair.dim_iperp;
  Matrix<Rat> gram(m, m);
  std::vector<Rat> rhs(m);
  GroupAlgebraElement one = GroupAlgebraElement::unit(&g);
  for (int i = 0; i < m; ++i) {
    rhs[i] = inner(pair.iperp_basis[i], one);
    for (int j = 0; j < m; ++j) gram(i, j) = inner(pair.iperp_basis[i], pair.iperp_basis[j]);
  }
  auto coef = solve(gram, rhs);
  check(coef.has_value(), "idempotent_pair: Gram system inconsistent");
  pair.eperp = GroupAlgebraElement(&g);
  for (int i = 0; i < m; ++i) pair.eperp = pair.eperp + (*coef)[i] * pair.iperp_basis[i];
  pair.e = one - pair.eperp;

  // eperp must annihilate every ideal generator on the right.
  for (const GroupAlgebraElement& gi : ideal_generators(&g, s))
    check(group_multiply(pair.eperp, gi).is_zero(),
          "idempotent_pair: eperp fails a generator condition");

  return cache.emplace(s, std::move(pair)).first->second;
}

// Projection of an order-(s+1) tensor onto T_s: Pi(T) = eperp . T.
template <class T>
MultiTensor<T> project_T(int s, const MultiTensor<T>& t) {
  require(t.order() == s + 1, "project_T: tensor order != s+1");
  return algebra_action(idempotent_pair(s).eperp, t);
}

enum class TBasisMethod { kConstraints, kIdempotent };

namespace detail {

// Nullspace of the generator conditions on order-(s+1) tensors R^d -> R^w,
// computed directly on the full coefficient space.
inline std::vector<MultiTensor<Rat>> t_basis_constraints(int s, int d, int w) {
  const int m = s + 1;
  size_t nt = 1;
  for (int i = 0; i < m; ++i) nt *= size_t(d);
  const int ncols = int(nt) * w;
  TsGenerators gen = ts_generators(s);
  // each condition: sum_k sign_k * T[J_k] = 0 at every tuple, J_k read
  // through the inverse permutation as in permute_action
  std::vector<std::vector<std::pair<Permutation, int>>> conds;
  for (const Permutation& t : gen.middle)
    conds.push_back({{Permutation::identity(m), 1}, {t.inverse(), -1}});
  conds.push_back({{Permutation::identity(m), 1}, {gen.ends.inverse(), 1}});
  conds.push_back({{Permutation::identity(m), 1},
                   {gen.ucycle.inverse(), 1},
                   {mul(gen.ucycle, gen.ucycle).inverse(), 1}});

  Matrix<Rat> sys(int(conds.size() * nt) * w, ncols);
  int row = 0;
  std::vector<int> j(m);
  for (const auto& cond : conds) {
    for_each_tuple(m, d, [&](const std::vector<int>& tup) {
      for (int c = 0; c < w; ++c) {
        for (const auto& [pinv, sign] : cond) {
          for (int k = 0; k < m; ++k) j[k] = tup[pinv(k)];
          size_t f = 0;
          for (int x : j) f = f * d + x;
          sys(row, int(f) * w + c) += Rat(sign);
        }
        ++row;
      }
    });
  }
  Matrix<Rat> null = nullspace(sys);
  std::vector<MultiTensor<Rat>> basis;
  for (int b = 0; b < null.cols(); ++b) {
    MultiTensor<Rat> t(m, d, w);
    for (size_t i = 0; i < nt; ++i)
      for (int c = 0; c < w; ++c) t.raw(i * w + c) = null(int(i) * w + c, b);
    basis.push_back(t);
  }
  return basis;
}

}  // namespace detail

// Basis of T_s(R^d, R^w) inside order-(s+1) tensors, either as the joint
// nullspace of the generator conditions or as the image of Pi.  The
// conditions permute arguments only, so for larger spaces the constraint
// method solves the scalar-valued problem once and spreads the basis over
// the w target coordinates.
inline std::vector<MultiTensor<Rat>> t_space_basis(
    int s, int d, int w, TBasisMethod method = TBasisMethod::kConstraints) {
  require(s >= 2, "t_space_basis: s < 2");
  require(d >= 1 && w >= 1, "t_space_basis: bad dimensions");
  double size = double(w);
  for (int i = 0; i <= s; ++i) size *= d;
  require(size <= 1e6, "t_space_basis: tensor space too large");

  const int m = s + 1;
  size_t nt = 1;
  for (int i = 0; i < m; ++i) nt *= size_t(d);
  const int ncols = int(nt) * w;

  std::vector<MultiTensor<Rat>> basis;
  if (method == TBasisMethod::kConstraints) {
    if (ncols <= 400 || w == 1) return detail::t_basis_constraints(s, d, w);
    std::vector<MultiTensor<Rat>> scalar = detail::t_basis_constraints(s, d, 1);
    for (const MultiTensor<Rat>& b : scalar)
      for (int c = 0; c < w; ++c) {
        MultiTensor<Rat> t(m, d, w);
        for (size_t i = 0; i < nt; ++i) t.raw(i * w + c) = b.raw(i);
        basis.push_back(t);
      }
    return basis;
  }

  require(ncols <= 400, "t_space_basis: idempotent method limited to small spaces");
  const IdempotentPair& ip = idempotent_pair(s);
  // Columns = Pi(delta) over all delta tensors; pivot columns of the
  // column space give the basis.
  Matrix<Rat> cols(ncols, ncols);
  for (size_t i = 0; i < nt; ++i) {
    for (int c = 0; c < w; ++c) {
      MultiTensor<Rat> delta(m, d, w);
      delta.raw(i * w + c) = Rat(1);
      MultiTensor<Rat> pi = algebra_action(ip.eperp, delta);
      const int col = int(i) * w + c;
      for (size_t r = 0; r < nt; ++r)
        for (int cc = 0; cc < w; ++cc) cols(int(r) * w + cc, col) = pi.raw(r * w + cc);
    }
  }
  RrefResult<Rat> rr = rref(cols);
  for (int p : rr.pivots) {
    MultiTensor<Rat> t(m, d, w);
    for (size_t i = 0; i < nt; ++i)
      for (int c = 0; c < w; ++c) t.raw(i * w + c) = cols(int(i) * w + c, p);
    basis.push_back(t);
  }
  return basis;
}

// dim T_s(R^c, R^w), cached.  c = 0 gives 0 (no nonzero multilinear maps).
inline int t_dim(int s, int c, int w) {
  require(s >= 2, "t_dim: s < 2");
  require(c >= 0 && w >= 1, "t_dim: bad dimensions");
  if (c == 0) return 0;
  static std::map<std::tuple<int, int, int>, int> cache;
  auto key = std::make_tuple(s, c, w);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  const int dim = int(t_space_basis(s, c, w).size());
  cache[key] = dim;
  return dim;
}

}  // namespace coiso
