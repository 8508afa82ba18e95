#include "cli_run.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "coiso/bounds.hpp"
#include "coiso/embeddings.hpp"
#include "coiso/psi_chart.hpp"
#include "coiso/strata.hpp"
#include "coiso/symgroup.hpp"
#include "coiso/tau.hpp"
#include "json_io.hpp"

namespace coiso {
namespace {

struct CommonOpts {
  std::uint64_t seed = 1;
  std::string backend = "rational";
  double tol = kDefaultRelTol;
  bool as_json = false;
};

void emit(std::ostream& out, const std::string& command, const CommonOpts& o,
          const json& result, const std::string& text) {
  if (o.as_json)
    out << json{{"command", command},
                {"seed", o.seed},
                {"backend", o.backend},
                {"result", result}}
               .dump(2)
        << "\n";
  else
    out << text << "\n";
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  require(bool(in), "cannot open input file: " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    require(false, std::string("input is not valid JSON: ") + e.what());
    return json{};
  }
}

template <class F>
void with_backend(const std::string& backend, F&& f) {
  if (backend == "float")
    f.template operator()<double>();
  else
    f.template operator()<Rat>();
}

double double_from_string(const std::string& s) {
  if (s.find('/') != std::string::npos) return rat_from_string(s).to_double();
  try {
    size_t used = 0;
    double v = std::stod(s, &used);
    while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) ++used;
    require(used == s.size(), "point: not a number: " + s);
    return v;
  } catch (const std::invalid_argument&) {
    require(false, "point: not a number: " + s);
  } catch (const std::out_of_range&) {
    require(false, "point: out of range: " + s);
  }
  return 0;
}

template <class T>
std::vector<T> parse_point(const std::string& csv) {
  std::vector<T> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const size_t a = item.find_first_not_of(" \t");
    const size_t b = item.find_last_not_of(" \t");
    require(a != std::string::npos, "point: empty coordinate");
    item = item.substr(a, b - a + 1);
    if constexpr (ScalarTraits<T>::exact)
      out.push_back(rat_from_string(item));
    else
      out.push_back(double_from_string(item));
  }
  require(!out.empty(), "point: empty coordinate list");
  return out;
}

const char* status_name(PointStatus s) {
  switch (s) {
    case PointStatus::kCoisotropic: return "coisotropic";
    case PointStatus::kNonCoisotropic: return "non-coisotropic";
    case PointStatus::kIntermediate: return "intermediate";
  }
  return "unknown";
}

template <class T>
std::vector<SymTensor<T>> tensors_from_json(const json& arr) {
  require(arr.is_array(), "expected an array of tensors");
  std::vector<SymTensor<T>> out;
  for (const json& tj : arr) out.push_back(symtensor_from_json<T>(tj));
  return out;
}

// ---- tau ----------------------------------------------------------------

void cmd_tau_build(std::ostream& out, const CommonOpts& o, const std::string& in_path,
                   const std::string& variant) {
  json in = read_json_file(in_path);
  require(in.contains("n") && in.contains("tensors"), "tau build: input needs {n, tensors}");
  SymplecticSpace sp{in.at("n").get<int>()};
  const TauVariant var =
      variant == "perm" ? TauVariant::kPermSum : TauVariant::kPartitionSum;
  with_backend(o.backend, [&]<class T>() {
    MultiTensor<T> t = tau_build(sp, tensors_from_json<T>(in.at("tensors")), var);
    json r = multitensor_to_json(t);
    emit(out, "tau build", o, r, r.dump(2));
  });
}

void cmd_tau_check(std::ostream& out, const CommonOpts& o, const std::string& in_path) {
  with_backend(o.backend, [&]<class T>() {
    MultiTensor<T> t = multitensor_from_json<T>(read_json_file(in_path));
    TauProperties p = tau_property_check(t, o.tol);
    json r{{"antisym_ends", p.antisym_ends},
           {"sym_middle", p.sym_middle},
           {"cyclic", p.cyclic},
           {"all", p.all()}};
    emit(out, "tau check", o, r, r.dump());
  });
}

void cmd_tau_solve(std::ostream& out, const CommonOpts& o, const std::string& in_path) {
  json in = read_json_file(in_path);
  require(in.contains("n") && in.contains("lower") && in.contains("target"),
          "tau solve: input needs {n, lower, target}");
  SymplecticSpace sp{in.at("n").get<int>()};
  with_backend(o.backend, [&]<class T>() {
    SymTensor<T> a = tau_solve_for_As(sp, tensors_from_json<T>(in.at("lower")),
                                      multitensor_from_json<T>(in.at("target")), o.tol);
    json r = symtensor_to_json(a);
    emit(out, "tau solve", o, r, r.dump(2));
  });
}

// ---- tspace / project ---------------------------------------------------

void cmd_tspace_dim(std::ostream& out, const CommonOpts& o, int s, int c, int w) {
  const int dim = t_dim(s, c, w);
  emit(out, "tspace dim", o, json{{"dim", dim}}, std::to_string(dim));
}

void cmd_tspace_basis(std::ostream& out, const CommonOpts& o, int s, int c, int w,
                      const std::string& method) {
  const TBasisMethod m =
      method == "idempotent" ? TBasisMethod::kIdempotent : TBasisMethod::kConstraints;
  std::vector<MultiTensor<Rat>> basis = t_space_basis(s, c, w, m);
  json arr = json::array();
  for (const auto& b : basis) arr.push_back(multitensor_to_json(b));
  json r{{"dim", int(basis.size())}, {"basis", std::move(arr)}};
  emit(out, "tspace basis", o, r, r.dump(2));
}

void cmd_project(std::ostream& out, const CommonOpts& o, const std::string& in_path,
                 int s_flag) {
  with_backend(o.backend, [&]<class T>() {
    MultiTensor<T> t = multitensor_from_json<T>(read_json_file(in_path));
    const int s = s_flag > 0 ? s_flag : t.order() - 1;
    MultiTensor<T> p = project_T(s, t);
    json r = multitensor_to_json(p);
    emit(out, "project", o, r, r.dump(2));
  });
}

// ---- stratum ------------------------------------------------------------

struct JetFields {
  int n = 0, c = 0, r = 0;
  json jet;
};

JetFields jet_fields(const std::string& in_path) {
  json in = read_json_file(in_path);
  require(in.contains("n") && in.contains("c") && in.contains("r") && in.contains("jet"),
          "stratum: input needs {n, c, r, jet}");
  return {in.at("n").get<int>(), in.at("c").get<int>(), in.at("r").get<int>(),
          in.at("jet")};
}

void cmd_stratum_member(std::ostream& out, const CommonOpts& o, const std::string& in_path) {
  JetFields f = jet_fields(in_path);
  SymplecticSpace sp{f.n};
  with_backend(o.backend, [&]<class T>() {
    std::vector<SymTensor<T>> jet = tensors_from_json<T>(f.jet);
    require(!jet.empty(), "stratum member: empty jet");
    Matrix<T> a1 = jet[0].as_matrix();
    StratumMembership m;
    if (!kc_membership(sp, a1, f.c, o.tol)) {
      m.member = false;
      m.failing_level = 1;
    } else {
      PsiChart<T> chart = make_psi_chart(sp, a1, f.c, o.tol);
      m = stratum_member(sp, chart, jet, f.c, f.r, o.tol);
    }
    json r{{"member", m.member},
           {"failing_level", m.failing_level ? json(*m.failing_level) : json()}};
    emit(out, "stratum member", o, r, r.dump());
  });
}

void cmd_stratum_codim(std::ostream& out, const CommonOpts& o, int c, int r, int w) {
  const std::int64_t k = stratum_codim(c, r, w);
  emit(out, "stratum codim", o, json{{"codim", k}}, std::to_string(k));
}

void cmd_stratum_trans(std::ostream& out, const CommonOpts& o, const std::string& in_path) {
  JetFields f = jet_fields(in_path);
  SymplecticSpace sp{f.n};
  with_backend(o.backend, [&]<class T>() {
    std::vector<SymTensor<T>> jet = tensors_from_json<T>(f.jet);
    require(!jet.empty(), "stratum transversality: empty jet");
    PsiChart<T> chart = make_psi_chart(sp, jet[0].as_matrix(), f.c, o.tol);
    TransversalityReport rep = transversality_from_jets(sp, chart, jet, f.c, f.r, o.tol);
    json r{{"rank", rep.rank}, {"codim", rep.codim}, {"full", rep.full}};
    emit(out, "stratum transversality", o, r, r.dump());
  });
}

// ---- embeddings ---------------------------------------------------------

void cmd_classify(std::ostream& out, const CommonOpts& o, const std::string& emb_path,
                  const std::string& point_csv) {
  EmbeddingSpec emb = embedding_from_json(read_json_file(emb_path));
  with_backend(o.backend, [&]<class T>() {
    auto cls = classify_point(emb, parse_point<T>(point_csv), o.tol);
    json r{{"c", cls.c},
           {"status", status_name(cls.status)},
           {"kernel", matrix_to_json(cls.kernel)}};
    std::ostringstream text;
    text << "c=" << cls.c << " " << status_name(cls.status);
    emit(out, "classify", o, r, text.str());
  });
}

void cmd_chardist(std::ostream& out, const CommonOpts& o, const std::string& emb_path,
                  const std::string& point_csv) {
  EmbeddingSpec emb = embedding_from_json(read_json_file(emb_path));
  with_backend(o.backend, [&]<class T>() {
    auto cd = characteristic_distribution(emb, parse_point<T>(point_csv), o.tol);
    json r{{"coisotropic", cd.coisotropic}, {"basis", matrix_to_json(cd.basis)}};
    emit(out, "chardist", o, r, r.dump(2));
  });
}

void cmd_stability(std::ostream& out, CommonOpts o, const std::string& emb_path,
                   const std::string& forms_path, bool liouville, int samples) {
  EmbeddingSpec emb = embedding_from_json(read_json_file(emb_path));
  std::vector<StabilityForm> alphas;
  if (liouville) alphas.push_back(liouville_form());
  if (!forms_path.empty()) {
    json fj = read_json_file(forms_path);
    require(fj.contains("alphas"), "stability: forms file needs {alphas}");
    for (const json& a : fj.at("alphas"))
      alphas.push_back(constant_form(vector_from_json<double>(a)));
  }
  require(!alphas.empty(), "stability: pass --forms and/or --liouville");
  o.backend = "float";  // sampling is a float computation regardless of the flag
  StabilityReport rep = stability_check(emb, alphas, samples, o.seed, o.tol);
  json r{{"kernel_condition", rep.kernel_condition},
         {"volume_condition", rep.volume_condition},
         {"samples", rep.samples}};
  std::ostringstream text;
  text << "kernel_condition=" << (rep.kernel_condition ? "true" : "false")
       << " volume_condition=" << (rep.volume_condition ? "true" : "false");
  emit(out, "stability", o, r, text.str());
}

void cmd_lagcheck(std::ostream& out, CommonOpts o, const std::string& emb_path,
                  int samples) {
  EmbeddingSpec emb = embedding_from_json(read_json_file(emb_path));
  o.backend = exact_map(emb.kind) ? "rational" : "float";
  LagrangianReport rep = lagrangian_check(emb, samples, o.seed);
  json r{{"lagrangian", rep.lagrangian},
         {"contained", rep.contained ? json(*rep.contained) : json()},
         {"samples", rep.samples}};
  std::ostringstream text;
  text << "lagrangian=" << (rep.lagrangian ? "true" : "false");
  if (rep.contained) text << " contained=" << (*rep.contained ? "true" : "false");
  emit(out, "lagcheck", o, r, text.str());
}

// ---- bounds -------------------------------------------------------------

void cmd_minr(std::ostream& out, const CommonOpts& o, int d, int n, bool simplified,
              int target_dim) {
  int r = 0;
  if (simplified)
    r = min_r_simplified(d, n);
  else if (target_dim > 0)
    r = min_r_with_target(d, n, target_dim);
  else
    r = min_r(d, n);
  emit(out, "minr", o, json{{"r", r}, {"simplified", simplified}}, std::to_string(r));
}

void cmd_tdim_table(std::ostream& out, const CommonOpts& o, int cmax, int wmax, int smax) {
  TdimTable t = tdim_table(cmax, wmax, smax);
  if (o.as_json) {
    json dims = json::array();
    for (int s = 2; s <= smax; ++s) {
      json per_c = json::array();
      for (int c = 1; c <= cmax; ++c) {
        json row = json::array();
        for (int w = 1; w <= wmax; ++w) row.push_back(t.at(s, c, w));
        per_c.push_back(std::move(row));
      }
      dims.push_back(std::move(per_c));
    }
    emit(out, "tdim-table", o,
         json{{"s_min", 2}, {"s_max", smax}, {"c_max", cmax}, {"w_max", wmax},
              {"dims", std::move(dims)}},
         "");
    return;
  }
  out << std::setw(4) << "s" << std::setw(4) << "c";
  for (int w = 1; w <= wmax; ++w) out << std::setw(8) << ("w=" + std::to_string(w));
  out << "\n";
  for (int s = 2; s <= smax; ++s)
    for (int c = 1; c <= cmax; ++c) {
      out << std::setw(4) << s << std::setw(4) << c;
      for (int w = 1; w <= wmax; ++w) out << std::setw(8) << t.at(s, c, w);
      out << "\n";
    }
}

// ---- selftest -----------------------------------------------------------

Rat selftest_rat(std::mt19937_64& rng) {
  return Rat(long(rng() % 9) - 4, long(rng() % 3) + 1);
}

void cmd_selftest(std::ostream& out, const CommonOpts& o, int& exit_code) {
  std::mt19937_64 rng(o.seed);
  int failures = 0;
  auto run = [&](const char* name, auto&& fn) {
    try {
      fn();
      out << "ok " << name << "\n";
    } catch (const std::exception& e) {
      ++failures;
      out << "FAIL " << name << ": " << e.what() << "\n";
    }
  };
  auto rand_sym = [&](int k, int d, int w) {
    SymTensor<Rat> t(k, d, w);
    for (int s = 0; s < t.slots(); ++s)
      for (int c = 0; c < w; ++c) t.entry(s, c) = selftest_rat(rng);
    return t;
  };

  SymplecticSpace sp{2};
  run("tau variants agree and land in the property space", [&] {
    for (int rep = 0; rep < 3; ++rep) {
      std::vector<SymTensor<Rat>> fam;
      for (int k = 1; k <= 3; ++k) fam.push_back(rand_sym(k, 2, 4));
      MultiTensor<Rat> a = tau_build(sp, fam, TauVariant::kPartitionSum);
      MultiTensor<Rat> b = tau_build(sp, fam, TauVariant::kPermSum);
      check(a == b, "partition and permutation assemblies differ");
      check(tau_property_check(a).all(), "assembled tensor misses a symmetry");
    }
  });
  run("tau directional derivative inserts the argument", [&] {
    std::vector<SymTensor<Rat>> fam;
    for (int k = 1; k <= 3; ++k) fam.push_back(rand_sym(k, 2, 4));
    std::vector<Rat> v{selftest_rat(rng), selftest_rat(rng)};
    check(tau_derivative_identity_check(sp, fam, v),
          "derivative does not match the inserted argument");
  });
  run("projector is idempotent", [&] {
    MultiTensor<Rat> t(3, 2, 2);
    for (size_t i = 0; i < t.total_size(); ++i) t.raw(i) = selftest_rat(rng);
    MultiTensor<Rat> p = project_T(2, t);
    check(project_T(2, p) == p, "projecting twice moved the tensor");
  });
  run("t-space dimensions match their pinned values", [&] {
    check(t_dim(2, 2, 1) == 2, "dim T_2(R^2, R) != 2");
    check(t_dim(2, 3, 1) == 8, "dim T_2(R^3, R) != 8");
    check(t_dim(2, 2, 4) == 8, "dim T_2(R^2, R^4) != 8");
    check(t_dim(2, 1, 3) == 0 && t_dim(3, 1, 2) == 0, "one-dimensional source not rigid");
  });
  run("chart accepts a lagrangian anchor", [&] {
    Matrix<Rat> a(4, 2);
    a(0, 0) = Rat(1);
    a(1, 1) = Rat(1);
    check(kc_membership(sp, a, 2), "coordinate lagrangian not in the stratum");
    PsiChart<Rat> chart = make_psi_chart(sp, a, 2);
    check(in_chart_domain(chart, a), "anchor escapes its own chart");
  });
  run("flat jets are members and solved perturbations fail at level two", [&] {
    Matrix<Rat> a(4, 2);
    a(0, 0) = Rat(1);
    a(1, 1) = Rat(1);
    SymTensor<Rat> a1 = SymTensor<Rat>::from_matrix(a);
    PsiChart<Rat> chart = make_psi_chart(sp, a, 2);
    std::vector<SymTensor<Rat>> flat{a1, SymTensor<Rat>(2, 2, 4)};
    check(stratum_member(sp, chart, flat, 2, 2).member, "flat jet rejected");
    SymTensor<Rat> a2 = tau_solve_for_As(sp, {a1}, t_space_basis(2, 2, 1)[0]);
    std::vector<SymTensor<Rat>> bent{a1, a2};
    StratumMembership m = stratum_member(sp, chart, bent, 2, 2);
    check(!m.member && m.failing_level == 2, "perturbed jet not rejected at level two");
  });
  run("catalog points classify as expected", [&] {
    EmbeddingSpec t6 = make_torus6(std::sqrt(2.0), std::sqrt(3.0));
    std::mt19937_64 srng(o.seed);
    for (int rep = 0; rep < 3; ++rep) {
      auto cls = classify_point(t6, sample_chart_point(t6, srng));
      check(cls.c == 2 && cls.status == PointStatus::kCoisotropic,
            "irrational torus point not coisotropic of corank 2");
    }
    EmbeddingSpec sphere = make_ellipsoid_product({{Rat(1), Rat(1)}});
    for (int rep = 0; rep < 3; ++rep) {
      auto cls = classify_point(sphere, sample_chart_point(sphere, srng));
      check(cls.c == 1, "sphere point not of corank 1");
    }
  });
  run("irrational torus is stable for its constant forms", [&] {
    EmbeddingSpec t6 = make_torus6(std::sqrt(2.0), std::sqrt(3.0));
    std::vector<double> dy1(6, 0.0), dy3(6, 0.0);
    dy1[1] = 1;
    dy3[5] = 1;
    StabilityReport rep =
        stability_check(t6, {constant_form(dy1), constant_form(dy3)}, 10, o.seed);
    check(rep.kernel_condition && rep.volume_condition, "stability conditions fail");
  });
  run("order selection matches the pinned cases", [&] {
    check(min_r(2, 2) == 1, "min_r(2, 2) != 1");
    check(min_r(4, 3) == 2, "min_r(4, 3) != 2");
    check(min_r_simplified(4, 3) == 2, "min_r_simplified(4, 3) != 2");
    for (int n = 2; n <= 3; ++n)
      for (int d = 1; d <= 2 * n - 2; ++d)
        check(min_r(d, n) <= min_r_simplified(d, n), "closed form undershoots");
  });

  if (failures > 0) {
    out << failures << " check(s) failed\n";
    exit_code = 2;
  } else {
    out << "all checks passed\n";
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multilinear coisotropy toolkit"};
  app.require_subcommand(1);
  int exit_code = 0;

  CommonOpts o;
  std::string in_path, emb_path, point_csv, forms_path;
  std::string variant = "partition", method = "constraints";
  int s = 0, c = 0, w = 0, r = 0, d = 0, n = 0;
  int samples = 100, cmax = 0, wmax = 0, smax = 0, target_dim = 0, s_flag = 0;
  bool simplified = false, liouville = false;

  // Shared flags live on the main app; subcommands reach them through
  // fallthrough, and the config file (main-app scope) can set them all.
  app.add_option("--seed", o.seed, "Seed for sampled sweeps");
  app.add_option("--backend", o.backend, "Scalar backend")
      ->check(CLI::IsMember({"rational", "float"}));
  app.add_option("--tol", o.tol, "Relative pivot and comparison tolerance");
  app.add_flag("--json", o.as_json, "Emit a JSON envelope instead of plain text");
  app.add_option("--samples", samples, "Sample count for sampled sweeps");
  app.set_config("--config", "", "key=value file; command-line flags override it");

  CLI::App* tau = app.add_subcommand("tau", "Assemble, test, or solve the bracket tensor");
  tau->require_subcommand(1);
  CLI::App* tau_build_cmd = tau->add_subcommand("build", "Assemble from a jet family");
  {
    tau_build_cmd->add_option("--in", in_path, "JSON input {n, tensors}")->required();
    tau_build_cmd->add_option("--variant", variant, "partition or perm")
        ->check(CLI::IsMember({"partition", "perm"}));
    tau_build_cmd->callback([&] { cmd_tau_build(out, o, in_path, variant); });
  }
  CLI::App* tau_check_cmd = tau->add_subcommand("check", "Test the symmetry properties");
  {
    tau_check_cmd->add_option("--in", in_path, "MultiTensor JSON")->required();
    tau_check_cmd->callback([&] { cmd_tau_check(out, o, in_path); });
  }
  CLI::App* tau_solve_cmd = tau->add_subcommand("solve", "Solve for the top family member");
  {
    tau_solve_cmd->add_option("--in", in_path, "JSON input {n, lower, target}")->required();
    tau_solve_cmd->callback([&] { cmd_tau_solve(out, o, in_path); });
  }

  CLI::App* tspace = app.add_subcommand("tspace", "Property-space dimensions and bases");
  tspace->require_subcommand(1);
  CLI::App* tspace_dim_cmd = tspace->add_subcommand("dim", "Dimension of the space");
  {
    tspace_dim_cmd->add_option("--s", s, "Order")->required();
    tspace_dim_cmd->add_option("--c", c, "Source dimension")->required();
    tspace_dim_cmd->add_option("--w", w, "Target dimension")->required();
    tspace_dim_cmd->callback([&] { cmd_tspace_dim(out, o, s, c, w); });
  }
  CLI::App* tspace_basis_cmd = tspace->add_subcommand("basis", "Basis of the space");
  {
    tspace_basis_cmd->add_option("--s", s, "Order")->required();
    tspace_basis_cmd->add_option("--c", c, "Source dimension")->required();
    tspace_basis_cmd->add_option("--w", w, "Target dimension")->required();
    tspace_basis_cmd->add_option("--method", method, "constraints or idempotent")
        ->check(CLI::IsMember({"constraints", "idempotent"}));
    tspace_basis_cmd->callback([&] { cmd_tspace_basis(out, o, s, c, w, method); });
  }

  CLI::App* project_cmd = app.add_subcommand("project", "Group-average onto the property space");
  {
    project_cmd->add_option("--in", in_path, "MultiTensor JSON")->required();
    project_cmd->add_option("--s", s_flag, "Order (defaults to tensor order minus one)");
    project_cmd->callback([&] { cmd_project(out, o, in_path, s_flag); });
  }

  CLI::App* stratum = app.add_subcommand("stratum", "Jet stratum membership and geometry");
  stratum->require_subcommand(1);
  CLI::App* member_cmd = stratum->add_subcommand("member", "Membership of a jet");
  {
    member_cmd->add_option("--in", in_path, "JSON input {n, c, r, jet}")->required();
    member_cmd->callback([&] { cmd_stratum_member(out, o, in_path); });
  }
  CLI::App* codim_cmd = stratum->add_subcommand("codim", "Stratum codimension");
  {
    codim_cmd->add_option("--c", c, "Kernel dimension")->required();
    codim_cmd->add_option("--r", r, "Jet order")->required();
    codim_cmd->add_option("--w", w, "Ambient dimension")->required();
    codim_cmd->callback([&] { cmd_stratum_codim(out, o, c, r, w); });
  }
  CLI::App* trans_cmd = stratum->add_subcommand("transversality", "Jacobian rank report");
  {
    trans_cmd->add_option("--in", in_path, "JSON input {n, c, r, jet}")->required();
    trans_cmd->callback([&] { cmd_stratum_trans(out, o, in_path); });
  }

  CLI::App* classify_cmd = app.add_subcommand("classify", "Pointwise coisotropy class");
  {
    classify_cmd->add_option("--emb", emb_path, "Embedding JSON file")->required();
    classify_cmd->add_option("--point", point_csv, "Chart point, comma-separated")->required();
    classify_cmd->callback([&] { cmd_classify(out, o, emb_path, point_csv); });
  }
  CLI::App* chardist_cmd = app.add_subcommand("chardist", "Characteristic distribution basis");
  {
    chardist_cmd->add_option("--emb", emb_path, "Embedding JSON file")->required();
    chardist_cmd->add_option("--point", point_csv, "Chart point, comma-separated")->required();
    chardist_cmd->callback([&] { cmd_chardist(out, o, emb_path, point_csv); });
  }
  CLI::App* stability_cmd = app.add_subcommand("stability", "Sampled stability conditions");
  {
    stability_cmd->add_option("--emb", emb_path, "Embedding JSON file")->required();
    stability_cmd->add_option("--forms", forms_path, "JSON file {alphas: [[...], ...]}");
    stability_cmd->add_flag("--liouville", liouville, "Prepend the radial primitive");
    stability_cmd->callback(
        [&] { cmd_stability(out, o, emb_path, forms_path, liouville, samples); });
  }
  CLI::App* lagcheck_cmd = app.add_subcommand("lagcheck", "Lagrangian and containment test");
  {
    lagcheck_cmd->add_option("--emb", emb_path, "Embedding JSON file")->required();
    lagcheck_cmd->callback([&] { cmd_lagcheck(out, o, emb_path, samples); });
  }

  CLI::App* minr_cmd = app.add_subcommand("minr", "Least admissible jet order");
  {
    minr_cmd->add_option("--d", d, "Submanifold dimension")->required();
    minr_cmd->add_option("--n", n, "Ambient half-dimension")->required();
    minr_cmd->add_flag("--simplified", simplified, "Closed-form sufficient order");
    minr_cmd->add_option("--target-dim", target_dim,
                         "Override the target dimension in the constraint count");
    minr_cmd->callback([&] { cmd_minr(out, o, d, n, simplified, target_dim); });
  }
  CLI::App* tdim_cmd = app.add_subcommand("tdim-table", "Table of property-space dimensions");
  {
    tdim_cmd->add_option("--cmax", cmax, "Largest source dimension")->required();
    tdim_cmd->add_option("--wmax", wmax, "Largest target dimension")->required();
    tdim_cmd->add_option("--smax", smax, "Largest order")->required();
    tdim_cmd->callback([&] { cmd_tdim_table(out, o, cmax, wmax, smax); });
  }
  CLI::App* selftest_cmd = app.add_subcommand("selftest", "Run the invariant suite");
  {
    selftest_cmd->callback([&] { cmd_selftest(out, o, exit_code); });
  }

  std::function<void(CLI::App*)> enable_fallthrough = [&](CLI::App* a) {
    for (CLI::App* sc : a->get_subcommands([](const CLI::App*) { return true; })) {
      sc->fallthrough();
      enable_fallthrough(sc);
    }
  };
  enable_fallthrough(&app);

  std::vector<const char*> argv;
  argv.push_back("coiso");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    const bool no_subcommand = app.get_subcommands().empty();
    err << e.what() << "\n";
    if (no_subcommand) {
      err << app.help();
      return 64;
    }
    return 1;
  } catch (const domain_error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const check_error& e) {
    err << "identity violation: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}

}  // namespace coiso
