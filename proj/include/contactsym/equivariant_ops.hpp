#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "contactsym/linalg.hpp"
#include "contactsym/symbol_actions.hpp"

namespace contactsym {

/// A differential operator between two R modules.
struct ModuleOp {
  ModuleDesc source;
  ModuleDesc target;
  DiffOp diffop;
  std::string label;

  SymbolElem apply(const SymbolElem& s) const {
    if (s.module() != source)
      throw StructuralError("operator " + label + " expects " + source.str() + ", got " + s.module().str());
    return SymbolElem(target, diffop.apply(s.poly()));
  }
};

/// a o b; refuses mismatched intermediate modules.
inline ModuleOp compose(const ModuleOp& a, const ModuleOp& b) {
  if (b.target != a.source)
    throw StructuralError("cannot compose " + a.label + " after " + b.label + ": " + b.target.str() +
                          " != " + a.source.str());
  return {b.source, a.target, op_compose(a.diffop, b.diffop), a.label + " o " + b.label};
}

/// i_alpha = 1/2 (sum_j (p_j d_{xi_{q_j}} - q_j d_{xi_{p_j}}) - d_{xi_t}) : R^k_delta -> R^{k-1}_delta.
inline ModuleOp i_alpha_op(const ModuleDesc& source) {
  if (source.kind != ModuleDesc::Kind::R) throw StructuralError("i_alpha acts on R modules");
  if (source.k == 0) throw DomainError("i_alpha on fiber degree 0 has no target module");
  const VarTable t = source.table();
  DiffOp d(t);
  for (int j = 1; j <= source.n; ++j) {
    d.add_term(Exponent::unit(t.q(j, Block::xi)), Rational(1, 2) * Poly::variable(t, t.p(j)));
    d.add_term(Exponent::unit(t.p(j, Block::xi)), Rational(-1, 2) * Poly::variable(t, t.q(j)));
  }
  d.add_term(Exponent::unit(t.t(Block::xi)), Poly::constant(t, Rational(-1, 2)));
  return {source, source.shifted(-1), std::move(d), "i_alpha"};
}

/// Coefficient a = 2(n+1) lambda - k of the generalized Hamiltonian on a
/// module of bundle weight lambda (on R^k_delta this is 2(n+1) delta + k).
inline Rational gen_hamiltonian_scalar(const ModuleDesc& source) {
  return Rational(2 * (source.n + 1)) * source.weight() - Rational(source.k);
}

/// X(S) = sum_j (xi_{q_j} d_{p_j} - xi_{p_j} d_{q_j}) S + xi_t E_s S - <E_s, xi_s> d_t S + a xi_t S.
inline ModuleOp gen_hamiltonian_op(const ModuleDesc& source) {
  if (source.kind != ModuleDesc::Kind::R) throw StructuralError("X acts on R modules");
  const VarTable t = source.table();
  const Poly xt = Poly::variable(t, t.t(Block::xi));
  DiffOp d(t);
  for (int j = 1; j <= source.n; ++j) {
    d.add_term(Exponent::unit(t.p(j)), Poly::variable(t, t.q(j, Block::xi)));
    d.add_term(Exponent::unit(t.q(j)), -Poly::variable(t, t.p(j, Block::xi)));
    d.add_term(Exponent::unit(t.p(j)), xt * Poly::variable(t, t.p(j)));
    d.add_term(Exponent::unit(t.q(j)), xt * Poly::variable(t, t.q(j)));
  }
  d.add_term(Exponent::unit(t.t()), -euler_contraction(t, Block::xi, true));
  d.add_term(Exponent{}, gen_hamiltonian_scalar(source) * xt);
  return {source, source.shifted(1), std::move(d), "X"};
}

inline SymbolElem i_alpha(const SymbolElem& s) {
  if (s.module().k == 0) return SymbolElem(s.module(), Poly(s.module().table()));
  return i_alpha_op(s.module()).apply(s);
}

inline SymbolElem gen_hamiltonian(const SymbolElem& s) { return gen_hamiltonian_op(s.module()).apply(s); }

/// X^l : R^k_delta -> R^{k+l}_delta, tracking the weight of every factor.
inline ModuleOp x_power_op(const ModuleDesc& source, int l) {
  ModuleOp r{source, source, DiffOp::identity(source.table()), "id"};
  for (int i = 0; i < l; ++i) r = compose(gen_hamiltonian_op(r.target), r);
  if (l > 0) r.label = "X^" + std::to_string(l);
  return r;
}

/// i_alpha^l : R^k_delta -> R^{k-l}_delta.
inline ModuleOp i_alpha_power_op(const ModuleDesc& source, int l) {
  if (l > source.k) throw DomainError("i_alpha power exceeds the fiber degree");
  ModuleOp r{source, source, DiffOp::identity(source.table()), "id"};
  for (int i = 0; i < l; ++i) r = compose(i_alpha_op(r.target), r);
  if (l > 0) r.label = "i_alpha^" + std::to_string(l);
  return r;
}

inline SymbolElem x_power(const SymbolElem& s, int l) {
  SymbolElem r = s;
  for (int i = 0; i < l; ++i) r = gen_hamiltonian(r);
  return r;
}

inline SymbolElem i_alpha_power(const SymbolElem& s, int l) {
  SymbolElem r = s;
  for (int i = 0; i < l; ++i) r = i_alpha(r);
  return r;
}

/// r(l, k) = -(l/2)(2(n+1) delta + 2k + l - 1).
inline Rational commutation_r(int l, int k, const Rational& delta, int n) {
  if (l < 0) throw DomainError("commutation_r requires l >= 0");
  return Rational(-l, 2) * (Rational(2 * (n + 1)) * delta + Rational(2 * k + l - 1));
}

/// C_k = {-p/(2(n+1)) : p = 0..2k-2}.
inline std::vector<Rational> critical_set(int k, int n) {
  if (k < 0) throw DomainError("critical_set requires k >= 0");
  std::vector<Rational> out;
  for (int p = 0; p <= 2 * k - 2; ++p) out.emplace_back(-p, 2 * (n + 1));
  return out;
}

/// The p with delta = -p/(2(n+1)) in C_k, or -1.
inline int critical_index(int k, const Rational& delta, int n) {
  const auto cs = critical_set(k, n);
  for (std::size_t p = 0; p < cs.size(); ++p)
    if (cs[p] == delta) return static_cast<int>(p);
  return -1;
}

inline void require_noncritical(int k, const Rational& delta, int n) {
  const int p = critical_index(k, delta, n);
  if (p >= 0)
    throw CriticalWeightError("weight " + delta.str() + " lies in C_" + std::to_string(k) + " (p = " +
                                  std::to_string(p) + ")",
                              p);
}

struct DecompositionComponent {
  int l;
  SymbolElem T;    // in R^{k-l}_delta, annihilated by i_alpha
  SymbolElem XlT;  // X^l T in R^k_delta
};

struct Decomposition {
  int k;
  Rational delta;
  std::vector<DecompositionComponent> components;  // l = 0..k

  Poly reconstruction() const {
    Poly r = components.front().XlT.poly();
    for (std::size_t i = 1; i < components.size(); ++i) r += components[i].XlT.poly();
    return r;
  }
};

/// Splits S in R^k_delta as sum_l X^l T_l with i_alpha T_l = 0, peeling from
/// l = k down: T_l = i_alpha^l(residual) / prod_{i=1..l} r(i, k-l).
inline Decomposition decompose(const SymbolElem& s) {
  const ModuleDesc& mod = s.module();
  if (mod.kind != ModuleDesc::Kind::R) throw StructuralError("decompose acts on R modules");
  require_noncritical(mod.k, mod.delta, mod.n);
  Decomposition dec{mod.k, mod.delta, {}};
  std::vector<DecompositionComponent> comps;
  SymbolElem residual = s;
  for (int l = mod.k; l >= 0; --l) {
    Rational rho(1);
    for (int i = 1; i <= l; ++i) rho *= commutation_r(i, mod.k - l, mod.delta, mod.n);
    SymbolElem il = i_alpha_power(residual, l);
    SymbolElem t(mod.shifted(-l), (Rational(1) / rho) * il.poly());
    SymbolElem xlt = x_power(t, l);
    residual = SymbolElem(mod, residual.poly() - xlt.poly());
    comps.push_back({l, std::move(t), std::move(xlt)});
  }
  std::reverse(comps.begin(), comps.end());
  dec.components = std::move(comps);
  if (!residual.is_zero()) throw StructuralError("decomposition left a nonzero residual");
  return dec;
}

// ---------------------------------------------------------------------------
// Same-weight classifier

struct SameWeightResult {
  int n = 0, l = 0, k = 0;
  Rational delta;
  int order_bound = 0, coeff_degree_bound = 0;
  std::size_t unknowns = 0;      // ansatz size after the exact diagonal reductions
  std::size_t dimension = 0;     // kernel dimension
  std::size_t predicted = 0;     // |{m : max(0,k-l) <= m <= min(k,M)}|
  std::vector<ModuleOp> basis;   // kernel basis, R^l_delta -> R^k_delta
  std::vector<ModuleOp> predicted_basis;  // X^m o i_alpha^{l+m-k}
  bool basis_intertwines = false;  // recheck of every kernel element
  bool predicted_spans = false;    // predicted family spans the kernel
};

namespace detail {

/// Concatenated coefficient vector of an operator evaluated on a list of
/// test polynomials; `index` maps (test id, output monomial) to a column.
struct EvalIndex {
  std::map<std::pair<std::size_t, Exponent>, std::size_t,
           bool (*)(const std::pair<std::size_t, Exponent>&, const std::pair<std::size_t, Exponent>&)>
      cols{[](const std::pair<std::size_t, Exponent>& a, const std::pair<std::size_t, Exponent>& b) {
        if (a.first != b.first) return a.first < b.first;
        return GrlexDescending{}(a.second, b.second);
      }};
  std::size_t col(std::size_t test, const Exponent& x) {
    auto [it, inserted] = cols.try_emplace({test, x}, cols.size());
    return it->second;
  }
};

inline std::vector<Poly> test_family(const VarTable& t, unsigned max_base_degree, unsigned fiber_degree) {
  std::vector<Poly> out;
  const auto bv = block_vars(t, Block::base), fv = block_vars(t, Block::xi);
  const auto fibers = exponents_of_degree(fv, fiber_degree);
  for (unsigned a = 0; a <= max_base_degree; ++a)
    for (const auto& x : exponents_of_degree(bv, a))
      for (const auto& y : fibers) out.push_back(Poly::monomial(t, x + y));
  return out;
}

inline SparseRow evaluate(const DiffOp& d, const std::vector<Poly>& tests, EvalIndex& idx) {
  SparseRow row;
  for (std::size_t i = 0; i < tests.size(); ++i) {
    const Poly image = d.apply(tests[i]);
    for (const auto& [x, c] : image.terms()) row.emplace_back(idx.col(i, x), c);
  }
  return row;
}

}  // namespace detail

/// Kernel of the intertwining system L^target_X o T = T o L^source_X over all
/// sp_{2n+2} generators, for T : R^l_delta -> R^k_delta in the ansatz
/// sum c(x) xi^mu d_x^gamma d_xi^beta with |beta| = l, |mu| = k,
/// |gamma| <= M, deg c <= D (every operator on the degree-l module has a
/// unique representative of this form).
inline SameWeightResult classify_same_weight(int n, int l, int k, const Rational& delta, int order_bound,
                                             int coeff_degree_bound = -1) {
  if (l < 0 || k < 0 || order_bound < 0) throw DomainError("classify_same_weight: negative bound");
  const int M = order_bound;
  const int D = coeff_degree_bound < 0 ? M + l + 1 : coeff_degree_bound;
  SameWeightResult res;
  res.n = n;
  res.l = l;
  res.k = k;
  res.delta = delta;
  res.order_bound = M;
  res.coeff_degree_bound = D;
  const ModuleDesc src = ModuleDesc::R(n, l, delta), tgt = ModuleDesc::R(n, k, delta);
  const VarTable t = src.table();
  auto basis = sp_basis(n);

  std::vector<DiffOp> lsrc, ltgt;
  for (const auto& g : basis->generators()) {
    lsrc.push_back(lie_action_as_diffop(g.field, src));
    ltgt.push_back(lie_action_as_diffop(g.field, tgt));
  }

  // Diagonal reductions. Euler-type generators force each ansatz term to have
  // zero weight; constant-coefficient translations c d_v force coefficients
  // independent of v.
  std::vector<std::vector<Rational>> euler_src, euler_tgt;
  std::set<std::size_t> frozen;  // base variables absent from coefficients
  std::vector<std::size_t> remaining;
  for (std::size_t a = 0; a < basis->size(); ++a) {
    auto ws = lsrc[a].euler_weights(), wt = ltgt[a].euler_weights();
    if (ws && wt) {
      euler_src.push_back(*ws);
      euler_tgt.push_back(*wt);
      continue;
    }
    if (lsrc[a] == ltgt[a] && lsrc[a].terms().size() == 1) {
      const auto& [alpha, c] = *lsrc[a].terms().begin();
      if (alpha.total == 1 && c.size() == 1 && c.terms().begin()->first.is_zero()) {
        for (std::size_t i = 0; i < t.size(); ++i)
          if (alpha[i] == 1) frozen.insert(i);
        continue;
      }
    }
    remaining.push_back(a);
  }

  std::vector<std::size_t> coeff_vars;
  for (std::size_t i : block_vars(t, Block::base))
    if (!frozen.count(i)) coeff_vars.push_back(i);
  const auto bv = block_vars(t, Block::base), fv = block_vars(t, Block::xi);
  const auto betas = exponents_of_degree(fv, static_cast<unsigned>(l));
  const auto mus = exponents_of_degree(fv, static_cast<unsigned>(k));
  std::vector<Exponent> gammas, coeffs;
  for (int g = 0; g <= M; ++g)
    for (const auto& x : exponents_of_degree(bv, static_cast<unsigned>(g))) gammas.push_back(x);
  for (int e = 0; e <= D; ++e)
    for (const auto& x : exponents_of_degree(coeff_vars, static_cast<unsigned>(e))) coeffs.push_back(x);

  auto weight_zero = [&](const Exponent& coef, const Exponent& deriv) {
    for (std::size_t a = 0; a < euler_src.size(); ++a) {
      Rational w = euler_tgt[a][0] - euler_src[a][0];
      for (std::size_t i = 0; i < t.size(); ++i) {
        const int e = static_cast<int>(coef[i]) - static_cast<int>(deriv[i]);
        if (e != 0 && !euler_src[a][i + 1].is_zero()) w += euler_src[a][i + 1] * Rational(e);
      }
      if (!w.is_zero()) return false;
    }
    return true;
  };

  struct Term {
    Exponent coef;   // x^e xi^mu
    Exponent deriv;  // gamma + beta
  };
  std::vector<Term> terms;  // graded-lex order on (gamma, beta, mu, e)
  for (const auto& gamma : gammas)
    for (const auto& beta : betas)
      for (const auto& mu : mus)
        for (const auto& e : coeffs) {
          Term tm{e + mu, gamma + beta};
          if (weight_zero(tm.coef, tm.deriv)) terms.push_back(tm);
        }
  res.unknowns = terms.size();

  auto term_op = [&](const Term& tm) {
    DiffOp d(t);
    d.add_term(tm.deriv, Poly::monomial(t, tm.coef));
    return d;
  };

  // Intertwining defect of each unknown, evaluated on x^a xi^b with
  // |a| <= M + 1, |b| = l: the defect has base order <= M + 1, so this family
  // determines it.
  const auto tests = detail::test_family(t, static_cast<unsigned>(M + 1), static_cast<unsigned>(l));
  std::vector<std::vector<Poly>> lsrc_tests(remaining.size());
  for (std::size_t r = 0; r < remaining.size(); ++r)
    for (const auto& s : tests) lsrc_tests[r].push_back(lsrc[remaining[r]].apply(s));

  std::map<std::tuple<std::size_t, std::size_t, Exponent>, SparseRow,
           bool (*)(const std::tuple<std::size_t, std::size_t, Exponent>&,
                    const std::tuple<std::size_t, std::size_t, Exponent>&)>
      rows{[](const std::tuple<std::size_t, std::size_t, Exponent>& a,
              const std::tuple<std::size_t, std::size_t, Exponent>& b) {
        if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
        if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) < std::get<1>(b);
        return GrlexDescending{}(std::get<2>(a), std::get<2>(b));
      }};
  for (std::size_t u = 0; u < terms.size(); ++u) {
    const DiffOp tu = term_op(terms[u]);
    for (std::size_t r = 0; r < remaining.size(); ++r) {
      const DiffOp& lt = ltgt[remaining[r]];
      for (std::size_t s = 0; s < tests.size(); ++s) {
        Poly defect = lt.apply(tu.apply(tests[s])) - tu.apply(lsrc_tests[r][s]);
        for (const auto& [x, c] : defect.terms()) rows[{r, s, x}].emplace_back(u, c);
      }
    }
  }
  EchelonBuilder eb(terms.size());
  for (const auto& [key, row] : rows) eb.add_row(row);
  const auto kernel = eb.kernel();
  res.dimension = kernel.size();
  for (std::size_t i = 0; i < kernel.size(); ++i) {
    DiffOp d(t);
    for (std::size_t u = 0; u < terms.size(); ++u)
      if (!kernel[i][u].is_zero()) d.add_term(terms[u].deriv, kernel[i][u] * Poly::monomial(t, terms[u].coef));
    res.basis.push_back({src, tgt, std::move(d), "T" + std::to_string(i)});
  }

  // predicted family X^m o i_alpha^{l+m-k}
  for (int m = std::max(0, k - l); m <= std::min(k, M); ++m) {
    ModuleOp op = compose(x_power_op(ModuleDesc::R(n, k - m, delta), m), i_alpha_power_op(src, l + m - k));
    op.label = "X^" + std::to_string(m) + " o i_alpha^" + std::to_string(l + m - k);
    res.predicted_basis.push_back(std::move(op));
  }
  res.predicted = res.predicted_basis.size();

  // Recheck on a larger family with every generator.
  const auto recheck = detail::test_family(t, static_cast<unsigned>(M + 2), static_cast<unsigned>(l));
  res.basis_intertwines = true;
  for (const auto& op : res.basis)
    for (std::size_t a = 0; a < basis->size() && res.basis_intertwines; ++a)
      for (const auto& s : recheck)
        if (ltgt[a].apply(op.diffop.apply(s)) != op.diffop.apply(lsrc[a].apply(s))) {
          res.basis_intertwines = false;
          break;
        }

  // Span comparison by evaluation on |a| <= M (operators of base order <= M).
  const auto span_tests = detail::test_family(t, static_cast<unsigned>(M), static_cast<unsigned>(l));
  detail::EvalIndex idx;
  std::vector<SparseRow> kern_rows, pred_rows;
  for (const auto& op : res.basis) kern_rows.push_back(detail::evaluate(op.diffop, span_tests, idx));
  for (const auto& op : res.predicted_basis) pred_rows.push_back(detail::evaluate(op.diffop, span_tests, idx));
  EchelonBuilder kr(idx.cols.size()), pr(idx.cols.size()), all(idx.cols.size());
  for (const auto& r : kern_rows) {
    kr.add_row(r);
    all.add_row(r);
  }
  for (const auto& r : pred_rows) {
    pr.add_row(r);
    all.add_row(r);
  }
  res.predicted_spans = kr.rank() == res.dimension && pr.rank() == res.predicted && all.rank() == kr.rank() &&
                        pr.rank() == kr.rank();
  return res;
}

}  // namespace contactsym
