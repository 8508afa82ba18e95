#pragma once

#include <string>
#include <vector>

#include "coiso/embeddings.hpp"
#include "coiso/error.hpp"
#include "coiso/matrix.hpp"
#include "coiso/rational.hpp"
#include "coiso/tensors.hpp"
#include "json.hpp"

namespace coiso {

using nlohmann::json;

// Rationals travel as "p/q" strings (plain integers also accepted); floats
// as JSON numbers.  Float readers accept rational strings and convert.
inline Rat rat_from_string(const std::string& s) {
  try {
    mpq_class q(s);
    require(q.get_den() != 0, "scalar: zero denominator");
    return Rat(q);
  } catch (const std::invalid_argument&) {
    require(false, "scalar: not a rational: " + s);
    return Rat(0);
  }
}

template <class T>
T scalar_from_json(const json& j);

template <>
inline Rat scalar_from_json<Rat>(const json& j) {
  if (j.is_string()) return rat_from_string(j.get<std::string>());
  if (j.is_number_integer()) return Rat(j.get<long>());
  require(false, "scalar: rational backend needs \"p/q\" strings or integers");
  return Rat(0);
}

template <>
inline double scalar_from_json<double>(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return rat_from_string(j.get<std::string>()).to_double();
  require(false, "scalar: expected a number");
  return 0.0;
}

inline json scalar_to_json(const Rat& x) { return x.str(); }
inline json scalar_to_json(double x) { return x; }

template <class T>
std::vector<T> vector_from_json(const json& j) {
  require(j.is_array(), "vector: expected an array");
  std::vector<T> v;
  v.reserve(j.size());
  for (const auto& e : j) v.push_back(scalar_from_json<T>(e));
  return v;
}

template <class T>
json vector_to_json(const std::vector<T>& v) {
  json a = json::array();
  for (const T& x : v) a.push_back(scalar_to_json(x));
  return a;
}

template <class T>
json matrix_to_json(const Matrix<T>& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(scalar_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(rows)}};
}

template <class T>
Matrix<T> matrix_from_json(const json& j) {
  require(j.is_object() && j.contains("rows") && j.contains("cols") && j.contains("entries"),
          "matrix: expected {rows, cols, entries}");
  const int rows = j.at("rows").get<int>(), cols = j.at("cols").get<int>();
  require(rows >= 0 && cols >= 0, "matrix: negative shape");
  const json& e = j.at("entries");
  require(e.is_array() && int(e.size()) == rows, "matrix: row count mismatch");
  Matrix<T> m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    require(e[i].is_array() && int(e[i].size()) == cols, "matrix: column count mismatch");
    for (int c = 0; c < cols; ++c) m(i, c) = scalar_from_json<T>(e[i][c]);
  }
  return m;
}

namespace detail {

inline std::string tuple_key(const std::vector<int>& tuple) {
  std::string s;
  for (size_t i = 0; i < tuple.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(tuple[i]);
  }
  return s;
}

inline std::vector<int> tuple_from_key(const std::string& key, int k, int d) {
  std::vector<int> t;
  size_t pos = 0;
  while (pos < key.size()) {
    size_t next = key.find(',', pos);
    if (next == std::string::npos) next = key.size();
    try {
      t.push_back(std::stoi(key.substr(pos, next - pos)));
    } catch (const std::exception&) {
      require(false, "tensor: bad index tuple: " + key);
    }
    pos = next + 1;
  }
  require(int(t.size()) == k, "tensor: tuple length != k in key: " + key);
  for (int i : t) require(i >= 0 && i < d, "tensor: index out of range in key: " + key);
  return t;
}

}  // namespace detail

// Symmetric tensors are keyed by index tuples; only nonzero slots need to
// appear, and unsorted keys are accepted.
template <class T>
json symtensor_to_json(const SymTensor<T>& t) {
  json entries = json::object();
  for (int s = 0; s < t.slots(); ++s) {
    bool nonzero = false;
    for (int c = 0; c < t.target_dim() && !nonzero; ++c)
      nonzero = !ScalarTraits<T>::is_zero(t.entry(s, c));
    if (!nonzero) continue;
    json vals = json::array();
    for (int c = 0; c < t.target_dim(); ++c) vals.push_back(scalar_to_json(t.entry(s, c)));
    entries[detail::tuple_key(t.index().tuple(s))] = std::move(vals);
  }
  return json{{"k", t.order()}, {"d", t.source_dim()}, {"w", t.target_dim()},
              {"entries", std::move(entries)}};
}

template <class T>
SymTensor<T> symtensor_from_json(const json& j) {
  require(j.is_object() && j.contains("k") && j.contains("d") && j.contains("w"),
          "tensor: expected {k, d, w, entries}");
  const int k = j.at("k").get<int>(), d = j.at("d").get<int>(), w = j.at("w").get<int>();
  require(k >= 0 && d >= 1 && w >= 1, "tensor: bad shape");
  SymTensor<T> t(k, d, w);
  if (!j.contains("entries")) return t;
  const json& e = j.at("entries");
  require(e.is_object(), "tensor: entries must be an object");
  for (auto it = e.begin(); it != e.end(); ++it) {
    const int slot = t.index().slot(detail::tuple_from_key(it.key(), k, d));
    const json& vals = it.value();
    require(vals.is_array() && int(vals.size()) == w, "tensor: value length != w");
    for (int c = 0; c < w; ++c) t.entry(slot, c) = scalar_from_json<T>(vals[c]);
  }
  return t;
}

// Dense row-major layout, argument indices first, target coordinate last.
template <class T>
json multitensor_to_json(const MultiTensor<T>& t) {
  json flat = json::array();
  for (size_t i = 0; i < t.total_size(); ++i) flat.push_back(scalar_to_json(t.raw(i)));
  return json{{"order", t.order()},
              {"d", t.source_dim()},
              {"w", t.target_dim()},
              {"layout", "row-major"},
              {"entries", std::move(flat)}};
}

template <class T>
MultiTensor<T> multitensor_from_json(const json& j) {
  require(j.is_object() && j.contains("order") && j.contains("d") && j.contains("w") &&
              j.contains("entries"),
          "tensor: expected {order, d, w, entries}");
  const int m = j.at("order").get<int>(), d = j.at("d").get<int>(), w = j.at("w").get<int>();
  require(m >= 0 && d >= 1 && w >= 1, "tensor: bad shape");
  if (j.contains("layout"))
    require(j.at("layout").get<std::string>() == "row-major", "tensor: unknown layout");
  MultiTensor<T> t(m, d, w);
  const json& e = j.at("entries");
  require(e.is_array() && e.size() == t.total_size(), "tensor: entry count mismatch");
  for (size_t i = 0; i < t.total_size(); ++i) t.raw(i) = scalar_from_json<T>(e[i]);
  return t;
}

inline std::vector<std::vector<PolyTerm>> polymap_from_json(const json& j) {
  require(j.is_array(), "embedding: components must be an array");
  std::vector<std::vector<PolyTerm>> pm;
  for (const json& comp : j) {
    require(comp.is_array(), "embedding: each component is a term array");
    std::vector<PolyTerm> terms;
    for (const json& tj : comp) {
      require(tj.is_object() && tj.contains("mono") && tj.contains("coeff"),
              "embedding: term needs {mono, coeff}");
      PolyTerm t;
      for (const json& v : tj.at("mono")) t.mono.push_back(v.get<int>());
      t.coeff = scalar_from_json<Rat>(tj.at("coeff"));
      terms.push_back(std::move(t));
    }
    pm.push_back(std::move(terms));
  }
  return pm;
}

inline json polymap_to_json(const std::vector<std::vector<PolyTerm>>& pm) {
  json comps = json::array();
  for (const auto& terms : pm) {
    json comp = json::array();
    for (const PolyTerm& t : terms)
      comp.push_back(json{{"mono", t.mono}, {"coeff", scalar_to_json(t.coeff)}});
    comps.push_back(std::move(comp));
  }
  return comps;
}

inline EmbeddingSpec embedding_from_json(const json& j) {
  require(j.is_object() && j.contains("kind"), "embedding: expected {kind, ...}");
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "polynomial" || kind == "graph") {
    require(j.contains("d") && j.contains("n") && j.contains("components"),
            "embedding: " + kind + " needs {d, n, components}");
    const int d = j.at("d").get<int>(), n = j.at("n").get<int>();
    auto pm = polymap_from_json(j.at("components"));
    return kind == "polynomial" ? make_polynomial_embedding(d, n, pm)
                                : make_graph_embedding(d, n, pm);
  }
  if (kind == "lagrangian-torus") {
    require(j.contains("radii"), "embedding: lagrangian-torus needs {radii}");
    std::vector<std::vector<Rat>> inside;
    if (j.contains("inside"))
      for (const json& f : j.at("inside")) inside.push_back(vector_from_json<Rat>(f));
    return make_lagrangian_torus(vector_from_json<Rat>(j.at("radii")), inside);
  }
  if (kind == "ellipsoid-product") {
    require(j.contains("factors"), "embedding: ellipsoid-product needs {factors}");
    std::vector<std::vector<Rat>> factors;
    for (const json& f : j.at("factors")) factors.push_back(vector_from_json<Rat>(f));
    return make_ellipsoid_product(factors);
  }
  if (kind == "torus6") {
    require(j.contains("eps") && j.contains("del"), "embedding: torus6 needs {eps, del}");
    return make_torus6(j.at("eps").get<double>(), j.at("del").get<double>());
  }
  require(false, "embedding: unknown kind: " + kind);
  return EmbeddingSpec{};
}

inline json embedding_to_json(const EmbeddingSpec& e) {
  switch (e.kind) {
    case EmbKind::kPolynomial:
    case EmbKind::kGraph:
      return json{{"kind", e.kind == EmbKind::kPolynomial ? "polynomial" : "graph"},
                  {"d", e.d},
                  {"n", e.n},
                  {"components", polymap_to_json(e.poly)}};
    case EmbKind::kLagrangianTorus: {
      json out{{"kind", "lagrangian-torus"}, {"radii", vector_to_json(e.radii)}};
      if (!e.inside.empty()) {
        json caps = json::array();
        for (const auto& f : e.inside) caps.push_back(vector_to_json(f));
        out["inside"] = std::move(caps);
      }
      return out;
    }
    case EmbKind::kEllipsoidProduct: {
      json caps = json::array();
      for (const auto& f : e.factors) caps.push_back(vector_to_json(f));
      return json{{"kind", "ellipsoid-product"}, {"factors", std::move(caps)}};
    }
    case EmbKind::kTorus6:
      return json{{"kind", "torus6"}, {"eps", e.eps}, {"del", e.del}};
  }
  require(false, "embedding: unknown kind tag");
  return json{};
}

}  // namespace coiso
