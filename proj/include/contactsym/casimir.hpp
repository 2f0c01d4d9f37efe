#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "contactsym/equivariant_ops.hpp"
#include "contactsym/linalg.hpp"
#include "contactsym/random.hpp"

namespace contactsym {

enum class CasimirForm { dual_sum, regrouped };

/// c(k, delta) = (n+1)^2 delta^2 - (n+1)^2 delta + k(n+1) delta + (k^2 - k)/2.
inline Rational c_value(int n, int k, const Rational& delta) {
  const Rational N(n + 1);
  return N * N * delta * delta - N * N * delta + Rational(k) * N * delta + Rational(k * k - k, 2);
}

/// eps^{k,l}_delta = (c(k,delta) + r(l, k-l)) / (n+2).
inline Rational eigenvalue(int n, int k, int l, const Rational& delta) {
  if (l < 0 || l > k) throw DomainError("eigenvalue: l must lie in 0..k");
  return (c_value(n, k, delta) + commutation_r(l, k - l, delta, n)) / Rational(n + 2);
}

inline std::vector<Rational> eigenvalues(int n, int k, const Rational& delta) {
  std::vector<Rational> out;
  for (int l = 0; l <= k; ++l) out.push_back(eigenvalue(n, k, l, delta));
  return out;
}

namespace detail {

struct LieOps {
  std::shared_ptr<const SpBasis> basis;
  std::vector<DiffOp> L;
  const DiffOp& operator()(const std::string& label) const { return L[basis->index(label)]; }
};

inline LieOps lie_ops(const ModuleDesc& mod) {
  LieOps ops{sp_basis(mod.n), {}};
  for (const auto& g : ops.basis->generators()) ops.L.push_back(lie_action_as_diffop(g.field, mod));
  return ops;
}

}  // namespace detail

/// The eight grouped terms T_1..T_8 of the regrouped Casimir, on R^k_delta.
inline std::vector<DiffOp> casimir_terms(int n, int k, const Rational& delta) {
  const ModuleDesc mod = ModuleDesc::R(n, k, delta);
  const auto L = detail::lie_ops(mod);
  const VarTable t = mod.table();
  const Rational m(n + 2);
  std::vector<DiffOp> T(8, DiffOp(t));
  T[0] = Rational(-1) / (Rational(4) * m) * op_compose(L("t2"), L("1"));
  T[1] = Rational(1) / (Rational(4) * m) * op_compose(L("t"), L("t"));
  for (int i = 1; i <= n; ++i) {
    const std::string si = std::to_string(i);
    T[2] += Rational(1) / (Rational(2) * m) *
            (op_compose(L("tq" + si), L("p" + si)) - op_compose(L("tp" + si), L("q" + si)));
    T[3] += Rational(-1) / (Rational(4) * m) * op_compose(L("p" + si + "p" + si), L("q" + si + "q" + si));
    for (int j = i + 1; j <= n; ++j) {
      const std::string sj = std::to_string(j);
      T[4] += Rational(-1) / (Rational(2) * m) * op_compose(L("p" + si + "p" + sj), L("q" + si + "q" + sj));
    }
    // L_{p_i q_j} o L_{p_j q_i}; labels are "p{j}q{i}"
    for (int j = 1; j <= n; ++j) {
      const std::string sj = std::to_string(j);
      T[5] += Rational(1) / (Rational(4) * m) * op_compose(L("p" + si + "q" + sj), L("p" + sj + "q" + si));
    }
    T[7] += Rational(n + 1) / (Rational(4) * m) * L("p" + si + "q" + si);
  }
  T[6] = Rational(n + 1) / (Rational(2) * m) * L("t");
  return T;
}

/// Casimir of sp_{2n+2} on R^k_delta, either as sum_a L_{e_a} o L_{e^a} over
/// the dual bases or as the regrouped sum T_1 + ... + T_8.
inline DiffOp assemble_casimir(int n, int k, const Rational& delta, CasimirForm form = CasimirForm::dual_sum) {
  const ModuleDesc mod = ModuleDesc::R(n, k, delta);
  DiffOp c(mod.table());
  if (form == CasimirForm::regrouped) {
    for (const auto& term : casimir_terms(n, k, delta)) c += term;
    return c;
  }
  const auto L = detail::lie_ops(mod);
  for (std::size_t a = 0; a < L.basis->size(); ++a)
    for (const auto& [b, coeff] : L.basis->dual(a)) c += coeff * op_compose(L.L[a], L.L[b]);
  return c;
}

/// (1/(n+2)) (c(k,delta) id + X o i_alpha), with X acting on R^{k-1}_delta.
inline DiffOp casimir_closed_form(int n, int k, const Rational& delta) {
  const ModuleDesc mod = ModuleDesc::R(n, k, delta);
  DiffOp d = DiffOp::scalar(mod.table(), c_value(n, k, delta));
  if (k > 0) d += compose(gen_hamiltonian_op(mod.shifted(-1)), i_alpha_op(mod)).diffop;
  return Rational(1, n + 2) * d;
}

/// First monomial x^a xi^b (|a| <= max_base_degree, |b| = k) on which the two
/// operators differ, if any.
inline std::optional<Poly> first_disagreement(const DiffOp& a, const DiffOp& b, const ModuleDesc& mod,
                                              unsigned max_base_degree) {
  for (const auto& s : detail::test_family(mod.table(), max_base_degree, static_cast<unsigned>(mod.k)))
    if (a.apply(s) != b.apply(s)) return s;
  return std::nullopt;
}

struct CasimirResult {
  int n = 1, k = 0;
  Rational delta;
  DiffOp assembled{VarTable(1)};
  DiffOp closed_form{VarTable(1)};
  Rational c;
  std::vector<Rational> eigenvalues;
  unsigned max_base_degree = 4;
  unsigned spot_degree = 7;
  std::size_t monomials_checked = 0;
  bool verified = false;
  std::optional<Poly> counterexample;
};

/// Compares the assembled Casimir with the closed form on every x^a xi^b with
/// |a| <= max_base_degree, then on `spot_count` random monomials of base degree
/// `spot_degree`.
inline CasimirResult verify_diagonal_form(int n, int k, const Rational& delta, unsigned max_base_degree = 4,
                                          unsigned spot_degree = 7, unsigned spot_count = 8,
                                          std::uint64_t seed = 7,
                                          CasimirForm form = CasimirForm::dual_sum) {
  CasimirResult r;
  r.n = n;
  r.k = k;
  r.delta = delta;
  r.assembled = assemble_casimir(n, k, delta, form);
  r.closed_form = casimir_closed_form(n, k, delta);
  r.c = c_value(n, k, delta);
  r.eigenvalues = eigenvalues(n, k, delta);
  r.max_base_degree = max_base_degree;
  r.spot_degree = spot_degree;
  const ModuleDesc mod = ModuleDesc::R(n, k, delta);
  const VarTable t = mod.table();
  std::vector<Poly> family = detail::test_family(t, max_base_degree, static_cast<unsigned>(k));
  Rng rng(seed);
  const auto high = exponents_of_degree(block_vars(t, Block::base), spot_degree);
  const auto fibers = exponents_of_degree(block_vars(t, Block::xi), static_cast<unsigned>(k));
  for (unsigned i = 0; i < spot_count && !high.empty(); ++i)
    family.push_back(Poly::monomial(t, rng.pick(high) + rng.pick(fibers)));
  for (const auto& s : family) {
    ++r.monomials_checked;
    if (r.assembled.apply(s) != r.closed_form.apply(s)) {
      r.counterexample = s;
      return r;
    }
  }
  r.verified = true;
  return r;
}

/// Matrix of the Casimir on span{x^a xi^b : |a| <= D, |b| = k}.
struct CasimirMatrix {
  std::vector<Poly> basis;
  Matrix matrix;                       // in-span part, column j = image of basis[j]
  std::vector<std::size_t> overflow;   // columns whose image leaves the span
  std::vector<Vector> invariant_basis;  // largest C-stable subspace, in basis coordinates
  Matrix restricted;                   // C on invariant_basis
  std::vector<Rational> char_poly;     // of `restricted`, low to high
  std::vector<std::pair<Rational, int>> roots;  // rational roots with multiplicity
  bool roots_complete = false;         // char_poly splits over the roots found
  bool diagonalizable = false;         // product of (A - root) over distinct roots vanishes
};

namespace detail {

/// Rational roots of a polynomial, tested against a candidate list.
inline std::pair<std::vector<std::pair<Rational, int>>, bool> split_over(std::vector<Rational> p,
                                                                        const std::vector<Rational>& candidates) {
  std::vector<std::pair<Rational, int>> roots;
  for (const auto& c : candidates) {
    bool seen = false;
    for (const auto& [r, m] : roots) seen = seen || r == c;
    if (seen) continue;
    int mult = 0;
    while (p.size() > 1) {
      auto q = divide_by_root(p, c);
      if (!q) break;
      p = std::move(*q);
      ++mult;
    }
    if (mult > 0) roots.emplace_back(c, mult);
  }
  return {roots, p.size() == 1};
}

}  // namespace detail

inline CasimirMatrix casimir_matrix(int n, int k, const Rational& delta, unsigned D) {
  const ModuleDesc mod = ModuleDesc::R(n, k, delta);
  const DiffOp c = assemble_casimir(n, k, delta);
  CasimirMatrix out;
  out.basis = detail::test_family(mod.table(), D, static_cast<unsigned>(k));
  const std::size_t dim = out.basis.size();
  std::map<Exponent, std::size_t, GrlexDescending> pos;
  for (std::size_t j = 0; j < dim; ++j) pos.emplace(out.basis[j].terms().begin()->first, j);
  out.matrix = Matrix(dim, dim);
  // overflow coordinates, indexed by monomials outside the span
  std::map<Exponent, std::size_t, GrlexDescending> extra;
  std::vector<SparseRow> overflow_cols(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    const Poly img = c.apply(out.basis[j]);
    for (const auto& [x, v] : img.terms()) {
      auto it = pos.find(x);
      if (it != pos.end()) {
        out.matrix(it->second, j) = v;
      } else {
        auto [e, ins] = extra.try_emplace(x, extra.size());
        overflow_cols[j].emplace_back(e->second, v);
      }
    }
    if (!overflow_cols[j].empty()) out.overflow.push_back(j);
  }

  // Largest C-stable subspace: V <- {v in V : Cv in V} until it stabilizes.
  std::vector<Vector> V;
  for (std::size_t j = 0; j < dim; ++j) {
    Vector e(dim, Rational(0));
    e[j] = Rational(1);
    V.push_back(std::move(e));
  }
  const std::size_t ext = extra.size();
  for (;;) {
    const std::size_t d = V.size();
    if (d == 0) break;
    // unknowns (y, z): M B y - B z = 0 (in-span), O B y = 0 (overflow)
    Matrix sys(dim + ext, 2 * d);
    for (std::size_t a = 0; a < d; ++a) {
      const Vector mb = out.matrix * V[a];
      for (std::size_t i = 0; i < dim; ++i) {
        sys(i, a) = mb[i];
        sys(i, d + a) = -V[a][i];
      }
      for (std::size_t j = 0; j < dim; ++j)
        if (!V[a][j].is_zero())
          for (const auto& [e, v] : overflow_cols[j]) sys(dim + e, a) += V[a][j] * v;
    }
    std::vector<Vector> ys;
    for (const auto& sol : exact_nullspace(sys)) ys.emplace_back(sol.begin(), sol.begin() + d);
    EchelonBuilder eb(d);
    std::vector<Vector> keep;
    for (const auto& y : ys)
      if (eb.add_dense_row(y)) keep.push_back(y);
    std::vector<Vector> next;
    for (const auto& y : keep) {
      Vector v(dim, Rational(0));
      for (std::size_t a = 0; a < d; ++a)
        if (!y[a].is_zero())
          for (std::size_t i = 0; i < dim; ++i) v[i] += y[a] * V[a][i];
      next.push_back(std::move(v));
    }
    const bool stable = next.size() == d;
    V = std::move(next);
    if (stable) break;
  }
  out.invariant_basis = V;

  // C restricted: solve B A = M B column by column.
  const std::size_t d = V.size();
  out.restricted = Matrix(d, d);
  if (d > 0) {
    Matrix B(dim, d);
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t i = 0; i < dim; ++i) B(i, a) = V[a][i];
    for (std::size_t a = 0; a < d; ++a) {
      auto col = solve_linear(B, out.matrix * V[a]);
      if (!col) throw StructuralError("casimir_matrix: invariant subspace is not stable");
      for (std::size_t i = 0; i < d; ++i) out.restricted(i, a) = (*col)[i];
    }
  }
  out.char_poly = characteristic_polynomial(out.restricted);
  auto [roots, complete] = detail::split_over(out.char_poly, eigenvalues(n, k, delta));
  out.roots = roots;
  out.roots_complete = complete;
  if (complete) {
    Matrix prod = Matrix::identity(d);
    for (const auto& [r, m] : out.roots) prod = prod * (out.restricted - r * Matrix::identity(d));
    out.diagonalizable = prod.is_zero();
  }
  return out;
}

/// Scalar lambda with T P = lambda P, or nullopt when P is not an eigenvector.
inline std::optional<Rational> eigen_ratio(const DiffOp& T, const Poly& P) {
  if (P.is_zero()) throw DomainError("eigen_ratio of the zero polynomial");
  const Poly img = T.apply(P);
  const auto& [x, c] = *P.terms().begin();
  const Rational lam = img.coeff(x) / c;
  if (img != lam * P) return std::nullopt;
  return lam;
}

/// P^k = (p_1 xi_t + xi_{q_1})^k in R^k_delta.
inline Poly proof_test_symbol(int n, int k) {
  const VarTable t(n, {Block::xi});
  const Poly base = Poly::variable(t, t.p(1)) * Poly::variable(t, t.t(Block::xi)) +
                    Poly::variable(t, t.q(1, Block::xi));
  return pow(base, static_cast<unsigned>(k));
}

/// Contribution of each T_i to the Casimir on P^k.
inline std::vector<Rational> term_contributions(int n, int k, const Rational& delta) {
  const Poly P = proof_test_symbol(n, k);
  std::vector<Rational> out;
  const auto T = casimir_terms(n, k, delta);
  for (std::size_t i = 0; i < T.size(); ++i) {
    auto lam = eigen_ratio(T[i], P);
    if (!lam) throw StructuralError("T_" + std::to_string(i + 1) + " does not preserve the line of P^k");
    out.push_back(*lam);
  }
  return out;
}

/// Coefficients c_m in C = sum_m c_m X^m o i_alpha^m, recovered from the
/// eigenvalues of the assembled Casimir on P^k, X P^{k-1} and X^2 P^{k-2}.
struct ProofConstants {
  Rational c0;
  std::optional<Rational> c1, c2;
};

inline ProofConstants proof_constants(int n, int k, const Rational& delta) {
  require_noncritical(k, delta, n);
  auto c0_of = [&](int kk) {
    auto lam = eigen_ratio(assemble_casimir(n, kk, delta), proof_test_symbol(n, kk));
    if (!lam) throw StructuralError("P^k is not a Casimir eigenvector");
    return *lam;
  };
  ProofConstants pc{c0_of(k), std::nullopt, std::nullopt};
  if (k >= 1) {
    const Rational r1 = commutation_r(1, k - 1, delta, n);
    pc.c1 = (c0_of(k - 1) - pc.c0) / r1;
  }
  if (k >= 2) {
    const Rational r1k1 = commutation_r(1, k - 1, delta, n), r1k2 = commutation_r(1, k - 2, delta, n),
                   r2k2 = commutation_r(2, k - 2, delta, n);
    pc.c2 = (r1k1 * (c0_of(k - 2) - pc.c0) - r2k2 * (c0_of(k - 1) - pc.c0)) / (r1k1 * r1k2 * r2k2);
  }
  return pc;
}

}  // namespace contactsym
