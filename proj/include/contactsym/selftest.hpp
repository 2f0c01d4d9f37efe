#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "contactsym/casimir.hpp"
#include "contactsym/diophantine.hpp"
#include "contactsym/invariant_fields.hpp"

namespace contactsym {

enum class SelftestLevel { fast, full };

struct SelftestOptions {
  SelftestLevel level = SelftestLevel::fast;
  std::uint64_t seed = 42;
  std::string inject_fault;  // "" or "reeb-sign"
};

struct CheckResult {
  std::string name;
  bool passed = true;
  std::size_t cases = 0;
  std::string counterexample;  // first failure, empty on success
};

struct SelftestReport {
  SelftestOptions options;
  std::vector<CheckResult> checks;

  bool passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
  const CheckResult* first_failure() const {
    for (const auto& c : checks)
      if (!c.passed) return &c;
    return nullptr;
  }
};

namespace selftest {

class Check {
 public:
  explicit Check(std::string name) { r_.name = std::move(name); }
  /// Records one case; keeps the first failure message.
  bool expect(bool ok, const std::function<std::string()>& what) {
    ++r_.cases;
    if (!ok && r_.passed) {
      r_.passed = false;
      r_.counterexample = what();
    }
    return ok;
  }
  bool failed() const { return !r_.passed; }
  CheckResult done() { return std::move(r_); }

 private:
  CheckResult r_;
};

inline std::vector<Poly> base_monomials(const VarTable& t, unsigned max_degree) {
  std::vector<Poly> out;
  for (unsigned d = 0; d <= max_degree; ++d)
    for (const auto& x : exponents_of_degree(block_vars(t, Block::base), d)) out.push_back(Poly::monomial(t, x));
  return out;
}

inline CheckResult hamiltonian_morphism(const SelftestOptions& o) {
  Check c("hamiltonian_morphism");
  const bool flip = o.inject_fault == "reeb-sign";
  const std::vector<int> ns = o.level == SelftestLevel::full ? std::vector<int>{1, 2} : std::vector<int>{1};
  for (int n : ns) {
    const VField reeb = flip ? -reeb_field(n) : reeb_field(n);
    const auto monos = base_monomials(VarTable(n), 2);
    for (const auto& h : monos)
      for (const auto& g : monos) {
        const VField lhs = contact_hamiltonian(detail::lagrange_bracket_with(h, g, n, reeb), n);
        const VField rhs = vfield_bracket(contact_hamiltonian(h, n), contact_hamiltonian(g, n));
        if (!c.expect(lhs == rhs, [&] { return "X_{h,g} != [X_h,X_g] for h=" + h.str() + ", g=" + g.str(); }))
          return c.done();
      }
  }
  return c.done();
}

inline CheckResult divergence_and_contact_form(const SelftestOptions& o) {
  Check c("divergence_and_contact_form");
  const std::vector<int> ns = o.level == SelftestLevel::full ? std::vector<int>{1, 2} : std::vector<int>{1};
  for (int n : ns)
    for (const auto& h : base_monomials(VarTable(n), 3)) {
      const VField x = contact_hamiltonian(h, n);
      c.expect(divergence(x) == Rational(n + 1) * reeb_field(n).apply(h),
               [&] { return "div X_h != (n+1) E(h) for h=" + h.str(); });
      c.expect(contact_form_eval(x) == h, [&] { return "alpha(X_h) != h for h=" + h.str(); });
    }
  return c.done();
}

inline CheckResult killing_duality(const SelftestOptions& o) {
  Check c("killing_duality");
  const std::vector<int> ns = o.level == SelftestLevel::full ? std::vector<int>{1, 2} : std::vector<int>{1};
  for (int n : ns) {
    auto b = sp_basis(n);
    std::vector<Matrix> ad, ad_dual;
    for (std::size_t a = 0; a < b->size(); ++a) {
      ad.push_back(b->ad(b->unit(a)));
      ad_dual.push_back(b->ad(b->dual_vector(a)));
    }
    for (std::size_t a = 0; a < b->size(); ++a)
      for (std::size_t d = 0; d < b->size(); ++d) {
        const Rational tr = (ad[a] * ad_dual[d]).trace();
        c.expect(tr == Rational(a == d ? 1 : 0), [&] {
          return "tr(ad e_" + (*b)[a].label + " ad e^" + (*b)[d].label + ") = " + tr.str();
        });
      }
  }
  return c.done();
}

inline const std::vector<Rational>& standard_deltas() {
  static const std::vector<Rational> d{Rational(1, 3), Rational(-5, 7), Rational(2)};
  return d;
}

inline CheckResult casimir_diagonal_form(const SelftestOptions& o) {
  Check c("casimir_diagonal_form");
  const bool full = o.level == SelftestLevel::full;
  const unsigned D = full ? 4 : 2;
  const int kmax = full ? 3 : 2;
  for (int k = 0; k <= kmax; ++k)
    for (const auto& delta : standard_deltas()) {
      for (CasimirForm form : {CasimirForm::dual_sum, CasimirForm::regrouped}) {
        const auto r = verify_diagonal_form(1, k, delta, D, D + 2, 4, o.seed, form);
        if (!c.expect(r.verified, [&] {
              return std::string(form == CasimirForm::dual_sum ? "dual_sum" : "regrouped") +
                     " Casimir differs from the closed form at k=" + std::to_string(k) + ", delta=" + delta.str() +
                     " on " + r.counterexample->str();
            }))
          return c.done();
      }
    }
  return c.done();
}

inline CheckResult commutation_law(const SelftestOptions& o) {
  Check c("commutation_law");
  const int n = 1;
  const int top = o.level == SelftestLevel::full ? 3 : 2;
  for (const auto& delta : standard_deltas())
    for (int k = 1; k <= top; ++k)
      for (int l = 1; l <= top; ++l) {
        const ModuleDesc src = ModuleDesc::R(n, k, delta);
        const ModuleOp lhs = compose(i_alpha_op(src.shifted(l)), x_power_op(src, l));
        const ModuleOp rhs1 = compose(x_power_op(src.shifted(-1), l), i_alpha_op(src));
        const ModuleOp rhs2 = x_power_op(src, l - 1);
        const Rational r = commutation_r(l, k, delta, n);
        for (const auto& s : detail::test_family(src.table(), static_cast<unsigned>(top), static_cast<unsigned>(k)))
          if (!c.expect(lhs.diffop.apply(s) == rhs1.diffop.apply(s) + r * rhs2.diffop.apply(s), [&] {
                return "i_alpha X^l != X^l i_alpha + r X^{l-1} at k=" + std::to_string(k) +
                       ", l=" + std::to_string(l) + " on " + s.str();
              }))
            return c.done();
      }
  return c.done();
}

inline CheckResult decomposition(const SelftestOptions& o) {
  Check c("decomposition");
  Rng rng(o.seed);
  const int n = 1, k = 3;
  const Rational delta(1, 3);
  const ModuleDesc mod = ModuleDesc::R(n, k, delta);
  const VarTable t = mod.table();
  const DiffOp cas = assemble_casimir(n, k, delta);
  const int trials = o.level == SelftestLevel::full ? 100 : 10;
  for (int i = 0; i < trials; ++i) {
    const Poly s = random_symbol(rng, t, block_vars(t, Block::base), 3, block_vars(t, Block::xi), k, 5);
    const Decomposition dec = decompose(SymbolElem(mod, s));
    c.expect(dec.reconstruction() == s, [&] { return "reconstruction differs for " + s.str(); });
    for (const auto& comp : dec.components) {
      c.expect(i_alpha(comp.T).is_zero(), [&] { return "i_alpha T_l != 0 for " + s.str(); });
      c.expect(cas.apply(comp.XlT.poly()) == eigenvalue(n, k, comp.l, delta) * comp.XlT.poly(),
               [&] { return "component l=" + std::to_string(comp.l) + " is not an eigenvector for " + s.str(); });
    }
    if (c.failed()) break;
  }
  return c.done();
}

inline CheckResult eigenvalue_distinctness(const SelftestOptions& o) {
  Check c("eigenvalue_distinctness");
  Rng rng(o.seed);
  const int trials = o.level == SelftestLevel::full ? 200 : 50;
  for (int i = 0; i < trials; ++i) {
    const int n = 1 + static_cast<int>(rng.range(0, 1));
    const int k = static_cast<int>(rng.range(0, 4));
    const Rational delta = rng.rational(20, 9);
    if (critical_index(k, delta, n) >= 0) continue;
    const auto ev = eigenvalues(n, k, delta);
    for (std::size_t a = 0; a < ev.size(); ++a)
      for (std::size_t b = a + 1; b < ev.size(); ++b)
        c.expect(ev[a] != ev[b], [&] {
          return "eps^{k,l} coincide for l=" + std::to_string(a) + "," + std::to_string(b) +
                 " at k=" + std::to_string(k) + ", delta=" + delta.str();
        });
  }
  return c.done();
}

inline CheckResult generator_invariance(const SelftestOptions&) {
  Check c("generator_invariance");
  const int n = 1;
  auto basis = sp_basis(n);
  for (const auto& name : generator_names()) {
    const InvariantGenerator g = generator(name, n);
    for (const auto& label : generating_labels(n, InvariantAlgebra::affine_contact)) {
      const SymbolElem img = lie_action_symbol(basis->by_label(label).field, g.elem);
      c.expect(img.is_zero(), [&] { return "L_X " + name + " != 0 for X_" + label; });
    }
  }
  for (const auto& name : {"u4", "u5"}) {
    const SymbolElem img = lie_action_symbol(basis->by_label("t2").field, generator(name, n).elem);
    c.expect(!img.is_zero(), [&] { return std::string("L_{X_t2} ") + name + " vanishes"; });
  }
  return c.done();
}

inline CheckResult invariant_dimensions(const SelftestOptions& o) {
  Check c("invariant_dimensions");
  const int n = 1, N = n + 1;
  const int top = o.level == SelftestLevel::full ? 4 : 2;
  for (int total = 0; total <= top; ++total)
    for (int k = 0; k <= total; ++k)
      for (int m = 0; k + m <= total; ++m) {
        const int l = total - k - m;
        // (n+1) nu = d + e + f - c ranges over -l .. k + m
        for (int nn = -l; nn <= k + m; ++nn) {
          const Rational nu(nn, N);
          for (InvariantAlgebra a : {InvariantAlgebra::affine_contact, InvariantAlgebra::full_sp}) {
            InvariantQuery q{n, k, m, l, nu, a};
            const auto res = invariant_space_dim(q);
            const auto expect = count_S1(n, k, m, l, nu, a == InvariantAlgebra::full_sp);
            if (!c.expect(res.dimension == expect, [&] {
                  return algebra_name(a) + " dim " + std::to_string(res.dimension) + " != " +
                         std::to_string(expect) + " at (k,m,l,nu)=(" + std::to_string(k) + "," +
                         std::to_string(m) + "," + std::to_string(l) + "," + nu.str() + ")";
                }))
              return c.done();
          }
        }
      }
  return c.done();
}

inline CheckResult same_weight(const SelftestOptions& o) {
  Check c("same_weight_classification");
  std::vector<std::pair<int, int>> cases{{1, 1}, {2, 0}, {0, 1}};
  if (o.level == SelftestLevel::full) cases.insert(cases.end(), {{2, 1}, {1, 2}, {2, 2}});
  for (const auto& [l, k] : cases) {
    const auto r = classify_same_weight(1, l, k, Rational(1, 3), 2);
    c.expect(r.dimension == r.predicted && r.predicted_spans && r.basis_intertwines, [&] {
      return "(l,k)=(" + std::to_string(l) + "," + std::to_string(k) + "): dim " + std::to_string(r.dimension) +
             ", predicted " + std::to_string(r.predicted);
    });
  }
  return c.done();
}

inline CheckResult diophantine(const SelftestOptions& o) {
  Check c("diophantine");
  Rng rng(o.seed);
  const int trials = o.level == SelftestLevel::full ? 1000 : 200;
  for (int i = 0; i < trials; ++i) {
    const int n = 1 + static_cast<int>(rng.range(0, 1));
    const int k = static_cast<int>(rng.range(0, 4)), kp = static_cast<int>(rng.range(0, 4));
    const int l = static_cast<int>(rng.range(0, k)), lp = static_cast<int>(rng.range(0, kp));
    const Rational d = rng.rational(10, 5), dp = rng.rational(10, 5);
    const bool zero = relation_R(n, k, kp, l, lp, d, dp).is_zero();
    const bool equal = eigenvalue(n, k, l, d) == eigenvalue(n, kp, lp, dp);
    c.expect(zero == equal, [&] { return "relation residual disagrees with eigenvalue equality"; });
    if (critical_index(k, d, n) < 0 && critical_index(kp, dp, n) < 0) {
      const auto pr = admissible_pairs(n, k, kp, d, dp);
      c.expect(pr.injective && pr.single_valued, [&] { return "l -> l' not injective at delta=" + d.str(); });
    }
  }
  for (int i = 0, done = 0; done < 20 && i < 1000; ++i) {
    const int n = 1, k = static_cast<int>(rng.range(1, 4)), kp = static_cast<int>(rng.range(1, 4));
    std::vector<std::pair<int, int>> blocks;
    for (int b = 0; b < 3; ++b)
      blocks.emplace_back(static_cast<int>(rng.range(0, k)), static_cast<int>(rng.range(0, kp)));
    const auto b2 = block_diffs(blocks, 2), b3 = block_diffs(blocks, 3);
    if (b2.D * b3.Dp - b3.D * b2.Dp == 0) continue;
    ++done;
    const auto r = kappa3_delta(n, k, kp, blocks);
    c.expect(r.matches, [&] { return "kappa3 closed form differs from the linear solve"; });
  }
  return c.done();
}

inline CheckResult proof_constants_check(const SelftestOptions&) {
  Check c("proof_constants");
  for (int k : {1, 2}) {
    const auto pc = proof_constants(1, k, Rational(1, 3));
    const bool ok1 = pc.c1 && *pc.c1 == Rational(1, 3);
    const bool ok2 = k < 2 || (pc.c2 && pc.c2->is_zero());
    c.expect(ok1 && ok2, [&] {
      return "recovered c1 = " + (pc.c1 ? pc.c1->str() : std::string("?")) +
             ", c2 = " + (pc.c2 ? pc.c2->str() : std::string("?")) + " at k=" + std::to_string(k);
    });
  }
  return c.done();
}

}  // namespace selftest

inline SelftestReport run_selftest(const SelftestOptions& o) {
  if (!o.inject_fault.empty() && o.inject_fault != "reeb-sign")
    throw ParseError("unknown fault '" + o.inject_fault + "'");
  SelftestReport rep{o, {}};
  using F = CheckResult (*)(const SelftestOptions&);
  const F checks[] = {selftest::hamiltonian_morphism,  selftest::divergence_and_contact_form,
                      selftest::killing_duality,       selftest::casimir_diagonal_form,
                      selftest::commutation_law,       selftest::decomposition,
                      selftest::eigenvalue_distinctness, selftest::generator_invariance,
                      selftest::invariant_dimensions,  selftest::same_weight,
                      selftest::diophantine,           selftest::proof_constants_check};
  for (F f : checks) rep.checks.push_back(f(o));
  return rep;
}

}  // namespace contactsym
