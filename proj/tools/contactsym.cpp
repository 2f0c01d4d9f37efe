#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "contactsym/contactsym.hpp"
#include "contactsym/json_io.hpp"
#include "contactsym/selftest.hpp"

using namespace contactsym;

namespace {

enum Exit { kOk = 0, kFailure = 1, kUsage = 2, kDomain = 3 };

std::string format = "text";

// Text rendering: one "key: value" line per leaf, nested keys joined by dots.
// Polynomial objects collapse to their infix form.
void render_text(const json& j, const std::string& prefix, std::ostream& os) {
  auto leaf = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  if (j.is_object() && j.contains("terms") && j.contains("n")) {
    os << prefix << ": " << poly_from_json(j).str() << "\n";
    return;
  }
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) render_text(v, prefix.empty() ? k : prefix + "." + k, os);
    return;
  }
  if (j.is_array()) {
    bool flat = true;
    for (const auto& v : j) flat = flat && !v.is_object();
    if (flat) {
      os << prefix << ": " << j.dump() << "\n";
      return;
    }
    for (std::size_t i = 0; i < j.size(); ++i) render_text(j[i], prefix + "[" + std::to_string(i) + "]", os);
    return;
  }
  os << prefix << ": " << leaf(j) << "\n";
}

void emit(const json& report) {
  if (format == "json") std::cout << report.dump(2) << "\n";
  else render_text(report, "", std::cout);
}

Rational parse_rational(const std::string& s) { return Rational::parse(s); }

// "l1:l1',l2:l2',..."
std::vector<std::pair<int, int>> parse_blocks(const std::string& s) {
  std::vector<std::pair<int, int>> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ParseError("block '" + item + "' is not of the form l:l'");
    try {
      std::size_t p1 = 0, p2 = 0;
      const int a = std::stoi(item.substr(0, colon), &p1), b = std::stoi(item.substr(colon + 1), &p2);
      if (p1 != colon || p2 != item.size() - colon - 1) throw std::invalid_argument(item);
      out.emplace_back(a, b);
    } catch (const std::logic_error&) {
      throw ParseError("block '" + item + "' is not of the form l:l'");
    }
  }
  if (out.empty()) throw ParseError("no blocks given");
  return out;
}

json blocks_json(const std::vector<std::pair<int, int>>& blocks) {
  json a = json::array();
  for (const auto& [l, lp] : blocks) a.push_back({l, lp});
  return a;
}

std::string blocks_str(const std::vector<std::pair<int, int>>& blocks) {
  std::string s;
  for (const auto& [l, lp] : blocks) s += (s.empty() ? "" : ",") + std::to_string(l) + ":" + std::to_string(lp);
  return s;
}

json read_json_file(const std::string& path) {
  std::string text;
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  } else {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact symbol calculus on contact manifolds: Casimir spectra, invariants, classifiers"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));

  int n = 1, k = 0, kp = 0, m = 0, l = 0, lp = 0, max_deg = 4, xdeg = -1, order = 2, coeff_deg = -1;
  std::string delta_s = "0", deltap_s = "0", nu_s = "0", algebra_s = "affine", input, form_s = "dual", blocks_s;
  std::string level_s = "fast", fault;
  std::uint64_t seed = 42;
  int exit_code = kOk;

  auto* vc = app.add_subcommand("verify-casimir", "Compare the assembled Casimir with its diagonal form");
  vc->add_option("--n", n, "Half dimension n (manifold dimension 2n+1)");
  vc->add_option("--k", k, "Fiber degree")->required();
  vc->add_option("--delta", delta_s, "Weight as num/den")->required();
  vc->add_option("--max-base-degree", max_deg, "Base degree bound of the monomial family");
  vc->add_option("--form", form_s, "Casimir assembly")->check(CLI::IsMember({"dual", "regrouped"}));
  vc->add_option("--seed", seed, "Seed for the high-degree spot checks");

  auto* inv = app.add_subcommand("invariants", "Dimension of the invariant symbols S^{km}_{l;nu}");
  inv->add_option("--n", n);
  inv->add_option("--k", k)->required();
  inv->add_option("--m", m)->required();
  inv->add_option("--l", l)->required();
  inv->add_option("--nu", nu_s, "Weight as num/den")->required();
  inv->add_option("--algebra", algebra_s, "affine or contact");
  inv->add_option("--xdeg", xdeg, "Base degree bound of the ansatz (default l + min(k,m) + 1)");

  auto* dec = app.add_subcommand("decompose", "Split a symbol of R^k_delta into Casimir eigencomponents");
  dec->add_option("--n", n);
  dec->add_option("--k", k)->required();
  dec->add_option("--delta", delta_s)->required();
  dec->add_option("--input", input, "Polynomial JSON file, - for stdin")->required();

  auto* cls = app.add_subcommand("classify-same-weight", "Invariant operators R^l_delta -> R^k_delta");
  cls->add_option("--n", n);
  cls->add_option("--l", l)->required();
  cls->add_option("--k", k)->required();
  cls->add_option("--delta", delta_s)->required();
  cls->add_option("--order-bound", order, "Total order bound of the ansatz");
  cls->add_option("--coeff-degree", coeff_deg, "Coefficient degree bound (default order + l + 1)");

  auto* dio = app.add_subcommand("diophantine", "Weight relations between symbol spaces");
  dio->require_subcommand(1);
  auto* pairs = dio->add_subcommand("pairs", "Admissible block pairs (l, l')");
  auto* disc = dio->add_subcommand("discriminant", "The relation as a quadratic in delta'");
  auto* k3 = dio->add_subcommand("kappa3", "Weights forced by three building blocks");
  auto* k4 = dio->add_subcommand("kappa4", "Consistency of four or more building blocks");
  for (auto* s : {pairs, disc, k3, k4}) {
    s->add_option("--n", n);
    s->add_option("--k", k)->required();
    s->add_option("--kp", kp)->required();
  }
  for (auto* s : {pairs, disc, k4}) s->add_option("--delta", delta_s)->required(s != k4);
  for (auto* s : {pairs, k4}) s->add_option("--deltap", deltap_s)->required(s == pairs);
  disc->add_option("--l", l)->required();
  disc->add_option("--lp", lp)->required();
  for (auto* s : {k3, k4}) s->add_option("--blocks", blocks_s, "Blocks as l1:l1',l2:l2',...")->required();

  auto* st = app.add_subcommand("selftest", "Run the property suites");
  st->add_option("--level", level_s)->check(CLI::IsMember({"fast", "full"}));
  st->add_option("--seed", seed);
  st->add_option("--inject-fault", fault)->group("");

  auto* eb = app.add_subcommand("export-basis", "Generator table of sp_{2n+2}");
  eb->add_option("--n", n);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (vc->parsed()) {
      const Rational delta = parse_rational(delta_s);
      if (max_deg < 0) throw DomainError("--max-base-degree must be >= 0");
      const int p = critical_index(k, delta, n);
      if (p >= 0)
        std::cerr << "warning: delta = " << delta << " lies in C_" << k << " (p = " << p
                  << "); decomposition-dependent checks are skipped\n";
      const auto form = form_s == "regrouped" ? CasimirForm::regrouped : CasimirForm::dual_sum;
      const auto r = verify_diagonal_form(n, k, delta, static_cast<unsigned>(max_deg),
                                          static_cast<unsigned>(max_deg) + 3, 8, seed, form);
      json rep = {{"command", "verify-casimir"},
                  {"params",
                   {{"n", n}, {"k", k}, {"delta", delta.str()}, {"max-base-degree", max_deg},
                    {"form", form_s}, {"seed", seed}}}};
      rep["result"] = to_json(r);
      rep["result"]["critical"] = p >= 0;
      rep["result"]["casimir_zero_on_family"] = r.verified && r.closed_form.is_zero();
      rep["pass"] = r.verified;
      emit(rep);
      exit_code = r.verified ? kOk : kFailure;
    } else if (inv->parsed()) {
      const Rational nu = parse_rational(nu_s);
      const InvariantAlgebra a = parse_algebra(algebra_s);
      InvariantQuery q{n, k, m, l, nu, a, xdeg};
      const auto res = invariant_space_dim(q);
      const auto expect = count_S1(n, k, m, l, nu, a == InvariantAlgebra::full_sp);
      json basis = json::array();
      for (const auto& b : res.basis) basis.push_back(to_json(b.poly()));
      json rep = {{"command", "invariants"},
                  {"params",
                   {{"n", n}, {"k", k}, {"m", m}, {"l", l}, {"nu", nu.str()},
                    {"algebra", algebra_name(a)}, {"xdeg", res.x_degree_bound}}},
                  {"result",
                   {{"dimension", res.dimension}, {"count_S1", expect}, {"match", res.dimension == expect},
                    {"unknowns", res.unknowns}, {"basis", basis}}},
                  {"pass", res.dimension == expect}};
      emit(rep);
      exit_code = res.dimension == expect ? kOk : kFailure;
    } else if (dec->parsed()) {
      const Rational delta = parse_rational(delta_s);
      const ModuleDesc mod = ModuleDesc::R(n, k, delta);
      require_noncritical(k, delta, n);
      const json in = read_json_file(input);
      Poly p = poly_from_json(in.contains("poly") ? in.at("poly") : in);
      if (p.table().n() != n) throw ParseError("input polynomial has n = " + std::to_string(p.table().n()));
      const SymbolElem s(mod, p);
      const Decomposition d = decompose(s);
      const DiffOp cas = assemble_casimir(n, k, delta);
      bool eigen_ok = true;
      for (const auto& c : d.components)
        eigen_ok = eigen_ok && cas.apply(c.XlT.poly()) == eigenvalue(n, k, c.l, delta) * c.XlT.poly();
      const bool recon = d.reconstruction() == s.poly();
      json rep = {{"command", "decompose"},
                  {"params", {{"n", n}, {"k", k}, {"delta", delta.str()}, {"input", input}}}};
      rep["result"] = to_json(d, n);
      rep["result"]["reconstructed_ok"] = recon;
      rep["result"]["eigenvectors_ok"] = eigen_ok;
      rep["pass"] = recon && eigen_ok;
      emit(rep);
      exit_code = recon && eigen_ok ? kOk : kFailure;
    } else if (cls->parsed()) {
      const Rational delta = parse_rational(delta_s);
      const auto r = classify_same_weight(n, l, k, delta, order, coeff_deg);
      json basis = json::array();
      for (const auto& op : r.basis) basis.push_back(op.diffop.str());
      const bool ok = r.dimension == r.predicted && r.predicted_spans && r.basis_intertwines;
      json rep = {{"command", "classify-same-weight"},
                  {"params",
                   {{"n", n}, {"l", l}, {"k", k}, {"delta", delta.str()}, {"order-bound", order},
                    {"coeff-degree", r.coeff_degree_bound}}},
                  {"result",
                   {{"dimension", r.dimension}, {"predicted", r.predicted}, {"unknowns", r.unknowns},
                    {"predicted_spans", r.predicted_spans}, {"basis_intertwines", r.basis_intertwines},
                    {"basis", basis}}},
                  {"pass", ok}};
      emit(rep);
      exit_code = ok ? kOk : kFailure;
    } else if (pairs->parsed()) {
      const Rational d = parse_rational(delta_s), dp = parse_rational(deltap_s);
      const auto r = admissible_pairs(n, k, kp, d, dp);
      json kappa = {{"kappa", r.pairs.size()}};
      if (r.pairs.size() >= 3) {
        const std::vector<std::pair<int, int>> three(r.pairs.begin(), r.pairs.begin() + 3);
        const auto b2 = block_diffs(three, 2), b3 = block_diffs(three, 3);
        if (b2.D * b3.Dp - b3.D * b2.Dp != 0) {
          const auto k3r = kappa3_delta(n, k, kp, three);
          kappa["kappa3"] = {{"delta", k3r.delta.str()}, {"deltap", k3r.deltap.str()}, {"matches", k3r.matches}};
        }
      }
      if (r.pairs.size() >= 4) {
        const auto k4r = kappa4_consistency(DioInstance{n, k, kp, d, dp, r.pairs});
        kappa["kappa4"] = {{"lambda_consistent", k4r.lambda_consistent}, {"system_consistent", k4r.system_consistent}};
      }
      json rep = {{"command", "diophantine pairs"},
                  {"params", {{"n", n}, {"k", k}, {"kp", kp}, {"delta", d.str()}, {"deltap", dp.str()}}},
                  {"instance", {{"n", n}, {"k", k}, {"kp", kp}, {"delta", d.str()}, {"deltap", dp.str()}}},
                  {"pairs", blocks_json(r.pairs)},
                  {"injective", r.injective},
                  {"single_valued", r.single_valued},
                  {"kappa_analysis", kappa},
                  {"pass", r.injective && r.single_valued}};
      emit(rep);
      exit_code = r.injective && r.single_valued ? kOk : kFailure;
    } else if (disc->parsed()) {
      const Rational d = parse_rational(delta_s);
      if (l < 0 || l > k || lp < 0 || lp > kp) throw DomainError("need 0 <= l <= k and 0 <= lp <= kp");
      const auto r = discriminant_analysis(n, k, kp, l, lp, d);
      json rep = {{"command", "diophantine discriminant"},
                  {"params", {{"n", n}, {"k", k}, {"kp", kp}, {"l", l}, {"lp", lp}, {"delta", d.str()}}},
                  {"result",
                   {{"A", r.A.str()}, {"B", r.B.str()}, {"C", r.C.str()}, {"discriminant", r.discriminant.str()},
                    {"sign", r.sign}, {"discriminant_in_delta", to_json(r.discriminant_in_delta)},
                    {"linear", r.linear}, {"roots", r.roots ? to_json(*r.roots) : json(nullptr)},
                    {"admissible", r.admissible}}}};
      emit(rep);
    } else if (k3->parsed()) {
      const auto blocks = parse_blocks(blocks_s);
      const auto r = kappa3_delta(n, k, kp, blocks);
      const DioInstance inst{n, k, kp, r.delta, r.deltap, blocks};
      const bool back = relation_Rprime(inst, 2).is_zero() && relation_Rprime(inst, 3).is_zero();
      json rep = {{"command", "diophantine kappa3"},
                  {"params", {{"n", n}, {"k", k}, {"kp", kp}, {"blocks", blocks_str(blocks)}}},
                  {"result",
                   {{"delta", r.delta.str()}, {"deltap", r.deltap.str()}, {"delta_linear", r.delta_linear.str()},
                    {"deltap_linear", r.deltap_linear.str()}, {"matches", r.matches},
                    {"substitution_ok", back}}},
                  {"pass", r.matches && back}};
      emit(rep);
      exit_code = r.matches && back ? kOk : kFailure;
    } else if (k4->parsed()) {
      const auto blocks = parse_blocks(blocks_s);
      const DioInstance inst{n, k, kp, parse_rational(delta_s), parse_rational(deltap_s), blocks};
      const auto r = kappa4_consistency(inst);
      json dep = r.dependence ? json::array({r.dependence->first.str(), r.dependence->second.str()}) : json(nullptr);
      json rep = {{"command", "diophantine kappa4"},
                  {"params", {{"n", n}, {"k", k}, {"kp", kp}, {"blocks", blocks_str(blocks)}}},
                  {"result",
                   {{"relations", r.relations}, {"coefficient_rank", r.coefficient_rank}, {"dependence", dep},
                    {"lambda_consistent", r.lambda_consistent}, {"system_consistent", r.system_consistent},
                    {"incompatible", r.incompatible}}}};
      emit(rep);
    } else if (st->parsed()) {
      SelftestOptions o;
      o.level = level_s == "full" ? SelftestLevel::full : SelftestLevel::fast;
      o.seed = seed;
      o.inject_fault = fault;
      const auto rep = run_selftest(o);
      json checks = json::array();
      for (const auto& c : rep.checks)
        checks.push_back({{"name", c.name}, {"passed", c.passed}, {"cases", c.cases},
                          {"counterexample", c.counterexample.empty() ? json(nullptr) : json(c.counterexample)}});
      json out = {{"command", "selftest"}, {"params", {{"level", level_s}, {"seed", seed}}}, {"checks", checks},
                  {"pass", rep.passed()}};
      if (const auto* f = rep.first_failure()) out["first_failure"] = {{"check", f->name}, {"counterexample", f->counterexample}};
      emit(out);
      exit_code = rep.passed() ? kOk : kFailure;
    } else if (eb->parsed()) {
      emit(sp_basis_json(n));
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const CriticalWeightError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomain;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomain;
  } catch (const StructuralError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return exit_code;
}
