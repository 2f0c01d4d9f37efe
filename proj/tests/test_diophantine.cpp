#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "contactsym/diophantine.hpp"

using namespace contactsym;

namespace {

bool noncritical(int k, const Rational& d, int n) {
  const auto cs = critical_set(k, n);
  return std::find(cs.begin(), cs.end(), d) == cs.end();
}

Rational random_noncritical(Rng& rng, int k, int n) {
  for (;;) {
    Rational d = rng.rational(10, 5);
    if (noncritical(k, d, n)) return d;
  }
}

// pairs by direct comparison of eigenvalues
std::vector<std::pair<int, int>> brute_pairs(int n, int k, int kp, const Rational& d, const Rational& dp) {
  std::vector<std::pair<int, int>> out;
  for (int l = 0; l <= k; ++l)
    for (int lp = 0; lp <= kp; ++lp)
      if (eigenvalue(n, k, l, d) == eigenvalue(n, kp, lp, dp)) out.emplace_back(l, lp);
  return out;
}

// Cramer on  2N D_j d - 2N D'_j d' = lambda_j - 2 D_j k + 2 D'_j k',  j = 2, 3
std::pair<Rational, Rational> cramer(int n, int k, int kp, const std::vector<std::pair<int, int>>& b) {
  const Rational N(n + 1);
  Rational a[2][2], r[2];
  for (int j = 0; j < 2; ++j) {
    const int D = b[0].first - b[j + 1].first, Dp = b[0].second - b[j + 1].second;
    const int S = b[0].first + b[j + 1].first, Sp = b[0].second + b[j + 1].second;
    const int lambda = D - Dp + D * S - Dp * Sp;
    a[j][0] = Rational(2) * N * Rational(D);
    a[j][1] = Rational(-2) * N * Rational(Dp);
    r[j] = Rational(lambda - 2 * D * k + 2 * Dp * kp);
  }
  const Rational det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
  return {(r[0] * a[1][1] - a[0][1] * r[1]) / det, (a[0][0] * r[1] - r[0] * a[1][0]) / det};
}

}  // namespace

TEST(RelationR, Examples) {
  EXPECT_TRUE(relation_R(1, 2, 2, 1, 1, Rational(3, 7), Rational(3, 7)).is_zero());
  EXPECT_TRUE(relation_R(2, 0, 0, 0, 0, Rational(-4), Rational(-4)).is_zero());
  // n=1, k=1, k'=0, l=1, l'=0, d=1: -8 d'^2 + 8 d'
  for (int x = -3; x <= 3; ++x) {
    const Rational dp(x);
    EXPECT_EQ(relation_R(1, 1, 0, 1, 0, Rational(1), dp), Rational(-8) * dp * dp + Rational(8) * dp);
  }
}

TEST(RelationR, ScaledEigenvalueDifference) {
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const int n = static_cast<int>(rng.range(1, 3));
    const int k = static_cast<int>(rng.range(0, 4)), kp = static_cast<int>(rng.range(0, 4));
    const int l = static_cast<int>(rng.range(0, k)), lp = static_cast<int>(rng.range(0, kp));
    const Rational d = rng.rational(10, 5), dp = rng.rational(10, 5);
    const Rational diff = eigenvalue(n, k, l, d) - eigenvalue(n, kp, lp, dp);
    ASSERT_EQ(relation_R(n, k, kp, l, lp, d, dp), Rational(2 * (n + 2)) * diff);
  }
}

TEST(AdmissiblePairs, Examples) {
  auto a = admissible_pairs(1, 1, 1, Rational(1, 3), Rational(1, 3));
  EXPECT_EQ(a.pairs, (std::vector<std::pair<int, int>>{{0, 0}, {1, 1}}));
  EXPECT_TRUE(a.injective);
  auto b = admissible_pairs(1, 1, 0, Rational(1), Rational(0));
  EXPECT_EQ(b.pairs, (std::vector<std::pair<int, int>>{{1, 0}}));
  EXPECT_THROW(admissible_pairs(1, 1, 1, Rational(0), Rational(1)), CriticalWeightError);
}

TEST(AdmissiblePairs, MatchesBruteForceAndSymmetric) {
  Rng rng(5);
  int nonempty = 0;
  for (int i = 0; i < 100; ++i) {
    const int n = static_cast<int>(rng.range(1, 2));
    const int k = static_cast<int>(rng.range(0, 4)), kp = static_cast<int>(rng.range(0, 4));
    const Rational d = random_noncritical(rng, k, n);
    // half of the instances reuse an eigenvalue so that pairs exist
    Rational dp = random_noncritical(rng, kp, n);
    if (i % 2 == 0) {
      for (int lp = 0; lp <= kp; ++lp) {
        auto disc = discriminant_analysis(n, k, kp, 0, lp, d);
        if (!disc.roots) continue;
        for (const auto& r : *disc.roots)
          if (noncritical(kp, r, n)) dp = r;
      }
    }
    const auto rep = admissible_pairs(n, k, kp, d, dp);
    EXPECT_EQ(rep.pairs, brute_pairs(n, k, kp, d, dp));
    EXPECT_TRUE(rep.injective);
    EXPECT_TRUE(rep.single_valued);
    auto back = admissible_pairs(n, kp, k, dp, d).pairs;
    for (auto& [x, y] : back) std::swap(x, y);
    std::sort(back.begin(), back.end());
    EXPECT_EQ(rep.pairs, back);
    nonempty += rep.pairs.empty() ? 0 : 1;
  }
  EXPECT_GT(nonempty, 20);
}

TEST(Discriminant, ExampleRoots) {
  auto r = discriminant_analysis(1, 1, 0, 1, 0, Rational(1));
  EXPECT_FALSE(r.linear);
  ASSERT_TRUE(r.roots.has_value());
  EXPECT_EQ(*r.roots, (std::vector<Rational>{Rational(0), Rational(1)}));
  EXPECT_TRUE(r.admissible);
  for (const auto& root : *r.roots) EXPECT_EQ(c_value(1, 0, root), c_value(1, 1, Rational(1)) + commutation_r(1, 0, Rational(1), 1));
}

TEST(Discriminant, LeadingCoefficientAndIdentityRoot) {
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const int n = static_cast<int>(rng.range(1, 3));
    const int k = static_cast<int>(rng.range(0, 4)), kp = static_cast<int>(rng.range(0, 4));
    const int l = static_cast<int>(rng.range(0, k)), lp = static_cast<int>(rng.range(0, kp));
    const Rational d = rng.rational(10, 5);
    auto r = discriminant_analysis(n, k, kp, l, lp, d);
    ASSERT_EQ(r.discriminant_in_delta.size(), 3u);
    EXPECT_EQ(r.discriminant_in_delta[2], Rational(16 * (n + 1) * (n + 1) * (n + 1) * (n + 1)));
    EXPECT_EQ(r.discriminant_in_delta[0] + r.discriminant_in_delta[1] * d + r.discriminant_in_delta[2] * d * d,
              r.discriminant);
    // every rational root solves the relation
    if (r.roots) {
      for (const auto& root : *r.roots) EXPECT_TRUE(relation_R(n, k, kp, l, lp, d, root).is_zero());
    }
    auto same = discriminant_analysis(n, k, k, l, l, d);
    ASSERT_TRUE(same.roots.has_value());
    EXPECT_NE(std::find(same.roots->begin(), same.roots->end(), d), same.roots->end());
  }
}

TEST(RelationRprime, Examples) {
  const auto b = block_diffs({{2, 1}, {0, 0}}, 2);
  EXPECT_EQ(b.D, 2);
  EXPECT_EQ(b.Dp, 1);
  EXPECT_EQ(b.S, 2);
  EXPECT_EQ(b.Sp, 1);
  EXPECT_EQ(b.lambda, 4);
  DioInstance same{1, 3, 2, Rational(2, 7), Rational(-1, 3), {{2, 1}, {2, 1}}};
  EXPECT_TRUE(relation_Rprime(same, 2).is_zero());
  EXPECT_THROW(relation_Rprime(same, 3), DomainError);
  EXPECT_THROW(relation_Rprime(same, 1), DomainError);
}

TEST(RelationRprime, DifferenceOfRelations) {
  Rng rng(9);
  for (int i = 0; i < 300; ++i) {
    DioInstance inst;
    inst.n = static_cast<int>(rng.range(1, 3));
    inst.k = static_cast<int>(rng.range(0, 4));
    inst.kp = static_cast<int>(rng.range(0, 4));
    inst.delta = rng.rational(10, 5);
    inst.deltap = rng.rational(10, 5);
    for (int b = 0; b < 3; ++b)
      inst.blocks.emplace_back(static_cast<int>(rng.range(0, inst.k)), static_cast<int>(rng.range(0, inst.kp)));
    auto R = [&](std::size_t j) {
      return relation_R(inst.n, inst.k, inst.kp, inst.blocks[j].first, inst.blocks[j].second, inst.delta,
                        inst.deltap);
    };
    for (std::size_t j = 2; j <= 3; ++j) ASSERT_EQ(relation_Rprime(inst, j), R(0) - R(j - 1));
  }
}

TEST(Kappa3, MatchesCramerAndSubstitutesBack) {
  Rng rng(21);
  int done = 0;
  while (done < 100) {
    const int n = static_cast<int>(rng.range(1, 3));
    const int k = static_cast<int>(rng.range(1, 5)), kp = static_cast<int>(rng.range(1, 5));
    std::vector<std::pair<int, int>> blocks;
    for (int b = 0; b < 3; ++b)
      blocks.emplace_back(static_cast<int>(rng.range(0, k)), static_cast<int>(rng.range(0, kp)));
    const int d2 = blocks[0].first - blocks[1].first, d3 = blocks[0].first - blocks[2].first;
    const int e2 = blocks[0].second - blocks[1].second, e3 = blocks[0].second - blocks[2].second;
    if (d2 * e3 - d3 * e2 == 0) {
      EXPECT_THROW(kappa3_delta(n, k, kp, blocks), DomainError);
      continue;
    }
    ++done;
    const auto r = kappa3_delta(n, k, kp, blocks);
    const auto [d, dp] = cramer(n, k, kp, blocks);
    EXPECT_EQ(r.delta, d);
    EXPECT_EQ(r.deltap, dp);
    EXPECT_TRUE(r.matches);
    DioInstance inst{n, k, kp, r.delta, r.deltap, blocks};
    EXPECT_TRUE(relation_Rprime(inst, 2).is_zero());
    EXPECT_TRUE(relation_Rprime(inst, 3).is_zero());
  }
}

TEST(Kappa4, Examples) {
  DioInstance dup{1, 3, 3, Rational(1, 3), Rational(1, 5), {{3, 2}, {1, 0}, {0, 2}, {1, 0}}};
  auto a = kappa4_consistency(dup);
  ASSERT_TRUE(a.dependence.has_value());
  EXPECT_EQ(a.dependence->first, Rational(1));
  EXPECT_EQ(a.dependence->second, Rational(0));
  EXPECT_TRUE(a.lambda_consistent);

  // l_4 = 2 l_2 while lambda_4 = -6, 2 lambda_2 = -4
  DioInstance mis{1, 3, 3, Rational(0), Rational(0), {{0, 0}, {1, 0}, {0, 1}, {2, 0}}};
  auto b = kappa4_consistency(mis);
  ASSERT_TRUE(b.dependence.has_value());
  EXPECT_EQ(b.dependence->first, Rational(2));
  EXPECT_EQ(b.dependence->second, Rational(0));
  const auto l2 = block_diffs(mis.blocks, 2).lambda, l3 = block_diffs(mis.blocks, 3).lambda,
             l4 = block_diffs(mis.blocks, 4).lambda;
  EXPECT_NE(l4, 2 * l2 + 0 * l3);
  EXPECT_FALSE(b.lambda_consistent);
  EXPECT_TRUE(b.incompatible);

  DioInstance five{1, 4, 4, Rational(0), Rational(0), {{4, 4}, {3, 4}, {4, 3}, {2, 1}, {0, 3}}};
  auto c = kappa4_consistency(five);
  EXPECT_EQ(c.relations, 4u);
  EXPECT_EQ(c.coefficient_rank, 2u);
  EXPECT_TRUE(c.incompatible);
  EXPECT_THROW(kappa4_consistency(DioInstance{1, 2, 2, Rational(0), Rational(0), {{1, 1}, {0, 0}, {2, 2}}}),
               DomainError);
}

TEST(RationalGrid, Defaults) {
  const auto g = rational_grid(10, 5);
  EXPECT_TRUE(std::is_sorted(g.begin(), g.end()));
  EXPECT_EQ(std::set<Rational>(g.begin(), g.end()).size(), g.size());
  EXPECT_EQ(g.front(), Rational(-10));
  EXPECT_EQ(g.back(), Rational(10));
}
