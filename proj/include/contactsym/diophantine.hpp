#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "contactsym/casimir.hpp"
#include "contactsym/linalg.hpp"

namespace contactsym {

/// Residual of the quadratic relation between (k, l, delta) and (k', l', delta'):
/// 2N^2(d+d'-1)(d-d') + (k+k'-1)(k-k') + 2N(kd-k'd') - 2N(ld-l'd') - 2(lk-l'k') + (l+l'+1)(l-l'),
/// N = n+1. It equals 2(n+2)(eps^{k,l}_d - eps^{k',l'}_{d'}).
inline Rational relation_R(int n, int k, int kp, int l, int lp, const Rational& d, const Rational& dp) {
  const Rational N(n + 1), K(k), KP(kp), L(l), LP(lp);
  return Rational(2) * N * N * (d + dp - Rational(1)) * (d - dp) + (K + KP - Rational(1)) * (K - KP) +
         Rational(2) * N * (K * d - KP * dp) - Rational(2) * N * (L * d - LP * dp) -
         Rational(2) * (L * K - LP * KP) + (L + LP + Rational(1)) * (L - LP);
}

struct DioInstance {
  int n = 1, k = 0, kp = 0;
  Rational delta, deltap;
  std::vector<std::pair<int, int>> blocks;  // (l_i, l'_i)

  void validate() const {
    if (n < 1) throw DomainError("n must be >= 1");
    if (k < 0 || kp < 0) throw DomainError("fiber degrees must be >= 0");
    for (const auto& [l, lp] : blocks)
      if (l < 0 || l > k || lp < 0 || lp > kp) throw DomainError("block index outside 0..k x 0..k'");
  }
};

/// Delta_j, Delta'_j, Sigma_j, Sigma'_j, lambda_j for block j >= 2 (1-based).
struct BlockDiffs {
  int D, Dp, S, Sp;
  int lambda;
};

inline BlockDiffs block_diffs(const std::vector<std::pair<int, int>>& blocks, std::size_t j) {
  if (j < 2 || j > blocks.size()) throw DomainError("block index j must lie in 2..kappa");
  const auto [l1, lp1] = blocks[0];
  const auto [lj, lpj] = blocks[j - 1];
  BlockDiffs b{l1 - lj, lp1 - lpj, l1 + lj, lp1 + lpj, 0};
  b.lambda = b.D - b.Dp + b.D * b.S - b.Dp * b.Sp;
  return b;
}

/// Coefficients of the linear relation for block j: a d + b d' = rhs with
/// a = 2N Delta_j, b = -2N Delta'_j, rhs = lambda_j - 2 Delta_j k + 2 Delta'_j k'.
struct LinearRelation {
  Rational a, b, rhs;
};

inline LinearRelation rprime_coefficients(const DioInstance& inst, std::size_t j) {
  const BlockDiffs bd = block_diffs(inst.blocks, j);
  const Rational N(inst.n + 1);
  return {Rational(2) * N * Rational(bd.D), Rational(-2) * N * Rational(bd.Dp),
          Rational(bd.lambda) - Rational(2 * bd.D * inst.k) + Rational(2 * bd.Dp * inst.kp)};
}

/// lambda_j - (2N Delta_j d - 2N Delta'_j d' + 2 Delta_j k - 2 Delta'_j k'), which is
/// R_1 - R_j.
inline Rational relation_Rprime(const DioInstance& inst, std::size_t j) {
  inst.validate();
  const LinearRelation r = rprime_coefficients(inst, j);
  return r.rhs - r.a * inst.delta - r.b * inst.deltap;
}

struct PairsReport {
  std::vector<std::pair<int, int>> pairs;
  bool single_valued = true;  // each l has at most one l'
  bool injective = true;      // distinct l give distinct l'
};

inline PairsReport admissible_pairs(int n, int k, int kp, const Rational& d, const Rational& dp) {
  require_noncritical(k, d, n);
  require_noncritical(kp, dp, n);
  PairsReport rep;
  std::set<int> images;
  for (int l = 0; l <= k; ++l) {
    int hits = 0;
    for (int lp = 0; lp <= kp; ++lp)
      if (relation_R(n, k, kp, l, lp, d, dp).is_zero()) {
        rep.pairs.emplace_back(l, lp);
        ++hits;
        if (!images.insert(lp).second) rep.injective = false;
      }
    if (hits > 1) rep.single_valued = false;
  }
  return rep;
}

/// The relation for (k,l; k',l') as A d'^2 + B d' + C = 0 at fixed d, with
/// its discriminant, also written as a quadratic in d.
struct DiscriminantReport {
  Rational A, B, C;
  Rational discriminant;
  int sign = 0;
  std::vector<Rational> discriminant_in_delta;  // low to high
  bool linear = false;
  std::optional<std::vector<Rational>> roots;   // rational roots, ascending
  bool admissible = false;                      // a real root d' exists
};

inline DiscriminantReport discriminant_analysis(int n, int k, int kp, int l, int lp, const Rational& d) {
  const Rational N(n + 1), K(k), KP(kp), L(l), LP(lp);
  DiscriminantReport r;
  r.A = Rational(-2) * N * N;
  r.B = Rational(2) * N * N - Rational(2) * N * KP + Rational(2) * N * LP;
  const Rational c0 =
      (K + KP - Rational(1)) * (K - KP) - Rational(2) * (L * K - LP * KP) + (L + LP + Rational(1)) * (L - LP);
  const Rational c1 = Rational(-2) * N * N + Rational(2) * N * K - Rational(2) * N * L;
  const Rational c2 = Rational(2) * N * N;
  r.C = c2 * d * d + c1 * d + c0;
  // D = B^2 - 4AC = B^2 + 8N^2 C
  r.discriminant = r.B * r.B - Rational(4) * r.A * r.C;
  r.sign = r.discriminant.sign();
  r.discriminant_in_delta = {r.B * r.B - Rational(4) * r.A * c0, Rational(-4) * r.A * c1, Rational(-4) * r.A * c2};
  if (r.A.is_zero()) {
    r.linear = true;
    if (!r.B.is_zero()) r.roots = std::vector<Rational>{-r.C / r.B};
    r.admissible = !r.B.is_zero() || r.C.is_zero();
    return r;
  }
  r.admissible = r.sign >= 0;
  Rational s;
  if (rational_sqrt(r.discriminant, s)) {
    std::vector<Rational> roots{(-r.B - s) / (Rational(2) * r.A), (-r.B + s) / (Rational(2) * r.A)};
    if (roots[1] < roots[0]) std::swap(roots[0], roots[1]);
    if (roots[0] == roots[1]) roots.pop_back();
    r.roots = roots;
  }
  return r;
}

/// Three blocks with independent (Delta_j, Delta'_j): the closed forms
///   d  = -(2k-1)/(2N)  + L,
///   d' = -(2k'-1)/(2N) + L',
/// and the direct solve of the two linear relations.
struct Kappa3Report {
  Rational delta, deltap;                  // closed forms
  Rational delta_linear, deltap_linear;    // 2x2 solve
  bool matches = false;
};

inline Kappa3Report kappa3_delta(int n, int k, int kp, const std::vector<std::pair<int, int>>& blocks) {
  if (blocks.size() != 3) throw DomainError("kappa3 needs exactly three blocks");
  DioInstance inst{n, k, kp, Rational(0), Rational(0), blocks};
  inst.validate();
  const BlockDiffs b2 = block_diffs(blocks, 2), b3 = block_diffs(blocks, 3);
  const long det = static_cast<long>(b2.D) * b3.Dp - static_cast<long>(b3.D) * b2.Dp;
  if (det == 0) throw DomainError("kappa3: (Delta_j, Delta'_j) are dependent; the linear system is singular");
  const Rational N(n + 1);
  Kappa3Report r;
  const Rational L(b2.D * b3.Dp * b2.S - b3.D * b2.Dp * b3.S + b2.Dp * b3.Dp * (b3.Sp - b2.Sp),
                   1);
  r.delta = -Rational(2 * k - 1) / (Rational(2) * N) + L / (Rational(2) * N * Rational(det));
  const long detp = static_cast<long>(b2.Dp) * b3.D - static_cast<long>(b3.Dp) * b2.D;
  const Rational Lp(b2.Dp * b3.D * b2.Sp - b3.Dp * b2.D * b3.Sp + b2.D * b3.D * (b3.S - b2.S), 1);
  r.deltap = -Rational(2 * kp - 1) / (Rational(2) * N) + Lp / (Rational(2) * N * Rational(detp));

  const LinearRelation e2 = rprime_coefficients(inst, 2), e3 = rprime_coefficients(inst, 3);
  const Matrix m{{e2.a, e2.b}, {e3.a, e3.b}};
  auto sol = solve_linear(m, Vector{e2.rhs, e3.rhs});
  if (!sol) throw StructuralError("kappa3: linear relations have no solution");
  r.delta_linear = (*sol)[0];
  r.deltap_linear = (*sol)[1];
  r.matches = r.delta == r.delta_linear && r.deltap == r.deltap_linear;
  return r;
}

/// Dependence of the coefficient rows l_j = (2N Delta_j, -2N Delta'_j, 2 Delta_j, -2 Delta'_j)
/// for j >= 2, and whether the right-hand sides lambda_j obey the same relations.
struct Kappa4Report {
  std::size_t relations = 0;         // kappa - 1
  std::size_t coefficient_rank = 0;
  std::optional<std::pair<Rational, Rational>> dependence;  // l_4 = c_2 l_2 + c_3 l_3
  bool lambda_consistent = false;    // lambda_4 = c_2 lambda_2 + c_3 lambda_3
  bool system_consistent = false;    // all relations jointly solvable
  bool incompatible = false;
};

inline Kappa4Report kappa4_consistency(const DioInstance& inst) {
  inst.validate();
  if (inst.blocks.size() < 4) throw DomainError("kappa4 analysis needs at least four blocks");
  const Rational N(inst.n + 1);
  Kappa4Report r;
  r.relations = inst.blocks.size() - 1;
  std::vector<Vector> rows, aug;
  std::vector<Rational> lambdas;
  for (std::size_t j = 2; j <= inst.blocks.size(); ++j) {
    const BlockDiffs b = block_diffs(inst.blocks, j);
    rows.push_back({Rational(2) * N * Rational(b.D), Rational(-2) * N * Rational(b.Dp), Rational(2 * b.D),
                    Rational(-2 * b.Dp)});
    lambdas.push_back(Rational(b.lambda));
    Vector a = rows.back();
    a.push_back(lambdas.back());
    aug.push_back(std::move(a));
  }
  r.coefficient_rank = vectors_rank(rows, 4);
  // rows treat (d, d', k, k') as unknowns
  r.system_consistent = vectors_rank(aug, 5) == r.coefficient_rank;
  r.incompatible = !r.system_consistent;
  Matrix m(4, 2);
  for (std::size_t i = 0; i < 4; ++i) {
    m(i, 0) = rows[0][i];
    m(i, 1) = rows[1][i];
  }
  if (auto c = solve_linear(m, rows[2])) {
    r.dependence = std::make_pair((*c)[0], (*c)[1]);
    r.lambda_consistent = lambdas[2] == (*c)[0] * lambdas[0] + (*c)[1] * lambdas[1];
  }
  return r;
}

/// {a/b : |a| <= num_bound, 1 <= b <= den_bound}, distinct, ascending.
inline std::vector<Rational> rational_grid(int num_bound, int den_bound) {
  std::set<Rational> s;
  for (int b = 1; b <= den_bound; ++b)
    for (int a = -num_bound; a <= num_bound; ++a) s.insert(Rational(a, b));
  return {s.begin(), s.end()};
}

}  // namespace contactsym
