#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "contactsym/linalg.hpp"
#include "contactsym/symbol_actions.hpp"

namespace contactsym {

struct InvariantGenerator {
  std::string name;  // u1..u5, L1
  SymbolElem elem;
};

/// Product of two S-module elements; degrees and weights add.
inline SymbolElem symbol_product(const SymbolElem& a, const SymbolElem& b) {
  const ModuleDesc& x = a.module();
  const ModuleDesc& y = b.module();
  if (x.kind != ModuleDesc::Kind::S || y.kind != ModuleDesc::Kind::S || x.n != y.n)
    throw StructuralError("symbol_product expects S modules with equal n");
  return SymbolElem(ModuleDesc::S(x.n, x.k + y.k, x.m + y.m, x.l + y.l, x.nu + y.nu), a.poly() * b.poly());
}

inline SymbolElem symbol_one(int n) {
  const ModuleDesc mod = ModuleDesc::S(n, 0, 0, 0, Rational(0));
  return SymbolElem(mod, Poly::constant(mod.table(), 1));
}

inline const std::vector<std::string>& generator_names() {
  static const std::vector<std::string> names{"u1", "u2", "u3", "u4", "u5", "L1"};
  return names;
}

/// Local polynomial forms; |Omega|^{+-I} factors are carried as weights.
inline InvariantGenerator generator(const std::string& name, int n) {
  const Rational I(1, n + 1);
  const ModuleDesc probe = ModuleDesc::S(n, 0, 0, 0, Rational(0));
  const VarTable t = probe.table();
  auto var = [&](Block b, std::size_t j) { return Poly::variable(t, t.var(b, j)); };
  const std::size_t w = t.width();
  if (name == "u1" || name == "u2") {
    const Block b = name == "u1" ? Block::xi : Block::eta;
    Poly p(t);
    for (std::size_t j = 0; j < w; ++j) p += var(Block::Y, j) * var(b, j);
    return {name, SymbolElem(ModuleDesc::S(n, name == "u1" ? 1 : 0, name == "u2" ? 1 : 0, 1, Rational(0)), p)};
  }
  if (name == "u3") {
    Poly p(t);
    for (int k = 1; k <= n; ++k)
      p += Poly::variable(t, t.p(k)) * Poly::variable(t, t.q(k, Block::Y)) -
           Poly::variable(t, t.q(k)) * Poly::variable(t, t.p(k, Block::Y));
    p -= Poly::variable(t, t.t(Block::Y));
    return {name, SymbolElem(ModuleDesc::S(n, 0, 0, 1, -I), Rational(1, 2) * p)};
  }
  if (name == "u4") return {name, SymbolElem(ModuleDesc::S(n, 1, 0, 0, I), Rational(-2) * Poly::variable(t, t.t(Block::xi)))};
  if (name == "u5") return {name, SymbolElem(ModuleDesc::S(n, 0, 1, 0, I), Rational(-2) * Poly::variable(t, t.t(Block::eta)))};
  if (name == "L1") {
    Poly p(t);
    for (int k = 1; k <= n; ++k)
      p += Poly::variable(t, t.p(k, Block::xi)) * Poly::variable(t, t.q(k, Block::eta)) -
           Poly::variable(t, t.q(k, Block::xi)) * Poly::variable(t, t.p(k, Block::eta));
    p += Poly::variable(t, t.t(Block::eta)) * euler_contraction(t, Block::xi, true) -
         Poly::variable(t, t.t(Block::xi)) * euler_contraction(t, Block::eta, true);
    return {name, SymbolElem(ModuleDesc::S(n, 1, 1, 0, I), p)};
  }
  throw DomainError("unknown invariant generator '" + name + "'");
}

/// Split of a classical generator into its constant-coefficient part, written
/// through the Weyl invariants <Y_s,xi_s>, <Y_s,eta_s>, Pi(xi_s,eta_s) and the
/// t-components, plus the x-linear correction.
struct WeylForm {
  Poly constant_part;
  Poly correction;
};

inline WeylForm weyl_form(const std::string& name, int n) {
  const VarTable t = ModuleDesc::S(n, 0, 0, 0, Rational(0)).table();
  auto v = [&](std::size_t i) { return Poly::variable(t, i); };
  Poly y_xi(t), y_eta(t), pi(t);
  for (int k = 1; k <= n; ++k) {
    y_xi += v(t.p(k, Block::Y)) * v(t.p(k, Block::xi)) + v(t.q(k, Block::Y)) * v(t.q(k, Block::xi));
    y_eta += v(t.p(k, Block::Y)) * v(t.p(k, Block::eta)) + v(t.q(k, Block::Y)) * v(t.q(k, Block::eta));
    pi += v(t.p(k, Block::xi)) * v(t.q(k, Block::eta)) - v(t.q(k, Block::xi)) * v(t.p(k, Block::eta));
  }
  const Poly xt = v(t.t(Block::xi)), et = v(t.t(Block::eta)), yt = v(t.t(Block::Y));
  Poly zero(t);
  if (name == "u1") return {y_xi + yt * xt, zero};
  if (name == "u2") return {y_eta + yt * et, zero};
  if (name == "u4") return {Rational(-2) * xt, zero};
  if (name == "u5") return {Rational(-2) * et, zero};
  if (name == "u3") {
    Poly corr(t);
    for (int k = 1; k <= n; ++k) corr += v(t.p(k)) * v(t.q(k, Block::Y)) - v(t.q(k)) * v(t.p(k, Block::Y));
    return {Rational(-1, 2) * yt, Rational(1, 2) * corr};
  }
  if (name == "L1")
    return {pi, et * euler_contraction(t, Block::xi, true) - xt * euler_contraction(t, Block::eta, true)};
  throw DomainError("unknown invariant generator '" + name + "'");
}

enum class InvariantAlgebra { affine_contact, full_sp };

inline std::string algebra_name(InvariantAlgebra a) {
  return a == InvariantAlgebra::affine_contact ? "affine_contact" : "full_sp";
}

/// Accepts affine_contact / affine and full_sp / contact.
inline InvariantAlgebra parse_algebra(const std::string& s) {
  if (s == "affine_contact" || s == "affine") return InvariantAlgebra::affine_contact;
  if (s == "full_sp" || s == "contact") return InvariantAlgebra::full_sp;
  throw ParseError("unknown algebra '" + s + "' (expected affine or contact)");
}

/// Labels of the generating fields: X_1, X_{p_i}, X_{q_i}, X_t and sp_{2n};
/// full_sp adds X_{tp_i}, X_{tq_i}, X_{t2}.
inline std::vector<std::string> generating_labels(int n, InvariantAlgebra a) {
  std::vector<std::string> out{"1", "t"};
  for (int i = 1; i <= n; ++i) {
    out.push_back("p" + std::to_string(i));
    out.push_back("q" + std::to_string(i));
    for (int j = 1; j <= n; ++j) {
      out.push_back("p" + std::to_string(j) + "q" + std::to_string(i));
      if (i <= j) {
        out.push_back("p" + std::to_string(i) + "p" + std::to_string(j));
        out.push_back("q" + std::to_string(i) + "q" + std::to_string(j));
      }
    }
  }
  if (a == InvariantAlgebra::full_sp) {
    out.push_back("t2");
    for (int i = 1; i <= n; ++i) {
      out.push_back("tp" + std::to_string(i));
      out.push_back("tq" + std::to_string(i));
    }
  }
  return out;
}

struct InvariantQuery {
  int n = 1, k = 0, m = 0, l = 0;
  Rational nu;
  InvariantAlgebra algebra = InvariantAlgebra::affine_contact;
  int x_degree_bound = -1;  // -1: l + min(k, m) + 1

  int effective_bound() const { return x_degree_bound < 0 ? l + std::min(k, m) + 1 : x_degree_bound; }
};

struct InvariantResult {
  InvariantQuery query;
  int x_degree_bound = 0;
  std::size_t unknowns = 0;  // monomials surviving the diagonal reductions
  std::size_t dimension = 0;
  std::vector<SymbolElem> basis;
};

/// Exact kernel of {L_X Q = 0} over polynomials of fiber degrees (k,m,l),
/// weight nu and base degree <= bound.
inline InvariantResult invariant_space_dim(const InvariantQuery& q) {
  if (q.x_degree_bound < -1) throw DomainError("x_degree_bound must be >= 0");
  InvariantResult res;
  res.query = q;
  res.x_degree_bound = q.effective_bound();
  const ModuleDesc mod = ModuleDesc::S(q.n, q.k, q.m, q.l, q.nu);
  const VarTable t = mod.table();
  auto basis = sp_basis(q.n);
  std::vector<DiffOp> ops;
  for (const auto& label : generating_labels(q.n, q.algebra))
    ops.push_back(lie_action_as_diffop(basis->by_label(label).field, mod));

  // Diagonal reductions: Euler-type operators keep only weight-zero
  // monomials, constant translations drop their variable.
  std::vector<std::vector<Rational>> euler;
  std::set<std::size_t> frozen;
  std::vector<const DiffOp*> remaining;
  for (const auto& op : ops) {
    if (auto w = op.euler_weights()) {
      euler.push_back(*w);
      continue;
    }
    if (op.terms().size() == 1) {
      const auto& [alpha, c] = *op.terms().begin();
      if (alpha.total == 1 && c.size() == 1 && c.terms().begin()->first.is_zero()) {
        for (std::size_t i = 0; i < t.size(); ++i)
          if (alpha[i] == 1) frozen.insert(i);
        continue;
      }
    }
    remaining.push_back(&op);
  }
  std::vector<std::size_t> coeff_vars;
  for (std::size_t i : block_vars(t, Block::base))
    if (!frozen.count(i)) coeff_vars.push_back(i);

  std::vector<Exponent> fibers{Exponent{}};
  const std::array<std::pair<Block, int>, 3> degs{{{Block::xi, q.k}, {Block::eta, q.m}, {Block::Y, q.l}}};
  for (const auto& [b, d] : degs) {
    std::vector<Exponent> next;
    for (const auto& f : fibers)
      for (const auto& e : exponents_of_degree(block_vars(t, b), static_cast<unsigned>(d))) next.push_back(f + e);
    fibers = std::move(next);
  }
  std::vector<Exponent> unknowns;
  for (int d = 0; d <= res.x_degree_bound; ++d)
    for (const auto& x : exponents_of_degree(coeff_vars, static_cast<unsigned>(d)))
      for (const auto& f : fibers) {
        const Exponent e = x + f;
        bool zero_weight = true;
        for (const auto& w : euler) {
          Rational s = w[0];
          for (std::size_t i = 0; i < t.size(); ++i)
            if (e[i] != 0 && !w[i + 1].is_zero()) s += w[i + 1] * Rational(static_cast<long>(e[i]));
          if (!s.is_zero()) {
            zero_weight = false;
            break;
          }
        }
        if (zero_weight) unknowns.push_back(e);
      }
  std::sort(unknowns.begin(), unknowns.end(), GrlexDescending{});
  res.unknowns = unknowns.size();

  std::map<std::pair<std::size_t, Exponent>, SparseRow,
           bool (*)(const std::pair<std::size_t, Exponent>&, const std::pair<std::size_t, Exponent>&)>
      rows{[](const std::pair<std::size_t, Exponent>& a, const std::pair<std::size_t, Exponent>& b) {
        if (a.first != b.first) return a.first < b.first;
        return GrlexDescending{}(a.second, b.second);
      }};
  for (std::size_t u = 0; u < unknowns.size(); ++u)
    for (std::size_t r = 0; r < remaining.size(); ++r) {
      const Poly img = remaining[r]->apply_monomial(unknowns[u]);
      for (const auto& [x, c] : img.terms()) rows[{r, x}].emplace_back(u, c);
    }
  EchelonBuilder eb(unknowns.size());
  for (const auto& [key, row] : rows) eb.add_row(row);
  for (const auto& vec : eb.kernel()) {
    Poly p(t);
    for (std::size_t u = 0; u < unknowns.size(); ++u)
      if (!vec[u].is_zero()) p.add_term(unknowns[u], vec[u]);
    res.basis.emplace_back(mod, std::move(p));
  }
  res.dimension = res.basis.size();
  return res;
}

/// Exponents (a,b,c,d,e,f) of u1^a u2^b u3^c u4^d u5^e L1^f in S^{km}_{l;nu}:
/// a+d+f = k, b+e+f = m, a+b+c = l, d+e+f-c = (n+1) nu; contact_only adds d = e = 0.
inline std::vector<std::array<int, 6>> s1_solutions(int n, int k, int m, int l, const Rational& nu,
                                                    bool contact_only) {
  std::vector<std::array<int, 6>> out;
  const Rational s = Rational(n + 1) * nu;
  if (!s.is_integer() || k < 0 || m < 0 || l < 0) return out;
  for (int f = 0; f <= std::min(k, m); ++f)
    for (int d = 0; d <= k - f; ++d)
      for (int e = 0; e <= m - f; ++e) {
        if (contact_only && (d != 0 || e != 0)) continue;
        const int a = k - d - f, b = m - e - f, c = l - a - b;
        if (c < 0) continue;
        if (Rational(d + e + f - c) == s) out.push_back({a, b, c, d, e, f});
      }
  return out;
}

inline std::size_t count_S1(int n, int k, int m, int l, const Rational& nu, bool contact_only = false) {
  return s1_solutions(n, k, m, l, nu, contact_only).size();
}

/// One product per (S1) solution; throws if the products are dependent.
inline std::vector<SymbolElem> monomial_basis_classical(int n, int k, int m, int l, const Rational& nu,
                                                        bool contact_only = false) {
  std::vector<SymbolElem> gens;
  for (const auto& name : generator_names()) gens.push_back(generator(name, n).elem);
  std::vector<SymbolElem> out;
  for (const auto& ex : s1_solutions(n, k, m, l, nu, contact_only)) {
    SymbolElem p = symbol_one(n);
    for (std::size_t g = 0; g < 6; ++g)
      for (int i = 0; i < ex[g]; ++i) p = symbol_product(p, gens[g]);
    out.push_back(std::move(p));
  }
  if (!out.empty()) {
    std::map<Exponent, std::size_t, GrlexDescending> cols;
    std::vector<SparseRow> rows;
    for (const auto& s : out) {
      SparseRow r;
      for (const auto& [x, c] : s.poly().terms()) r.emplace_back(cols.try_emplace(x, cols.size()).first->second, c);
      rows.push_back(std::move(r));
    }
    EchelonBuilder eb(cols.size());
    for (const auto& r : rows) eb.add_row(r);
    if (eb.rank() != out.size()) throw StructuralError("classical invariant products are dependent");
  }
  return out;
}

/// Coordinates of each target element in the span of `basis`, or nullopt if
/// some target lies outside it.
inline std::optional<std::vector<Vector>> express_in(const std::vector<SymbolElem>& basis,
                                                     const std::vector<SymbolElem>& targets) {
  std::map<Exponent, std::size_t, GrlexDescending> rows;
  auto row_of = [&](const Exponent& x) { return rows.try_emplace(x, rows.size()).first->second; };
  for (const auto& b : basis)
    for (const auto& [x, c] : b.poly().terms()) row_of(x);
  for (const auto& b : targets)
    for (const auto& [x, c] : b.poly().terms()) row_of(x);
  Matrix m(rows.size(), basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j)
    for (const auto& [x, c] : basis[j].poly().terms()) m(rows.at(x), j) = c;
  std::vector<Vector> out;
  for (const auto& tg : targets) {
    Vector rhs(rows.size(), Rational(0));
    for (const auto& [x, c] : tg.poly().terms()) rhs[rows.at(x)] = c;
    auto sol = solve_linear(m, rhs);
    if (!sol) return std::nullopt;
    out.push_back(std::move(*sol));
  }
  return out;
}

}  // namespace contactsym
