#include <gtest/gtest.h>

#include "common.hpp"
#include "oracles.hpp"

using namespace relfix;

namespace {

struct Case {
  FunctorExpr F;
  int depth;
  int kt_iterations;
};

std::vector<Case> cases() { return {{fixture::lazy_nat(), 6, 6}, {fixture::streams(), 4, 4}, {fixture::reflexive(), 3, 3}}; }

}  // namespace

TEST(Engines, PsiOfTotalOnReflexiveLevelOne) {
  auto c = build_chain(fixture::reflexive(), 3);
  auto next = psi_step(c, total_family(c));
  ASSERT_EQ(c.levels[1].size(), 2u);
  EXPECT_EQ(next[1].pairs(), (std::vector<std::pair<ElemId, ElemId>>{{0, 0}, {1, 1}}));
  EXPECT_TRUE(next[0] == total_rel(c.levels[0]));
}

TEST(Engines, ThreeMethodsAgreeOnDiagonal) {
  for (const auto& k : cases()) {
    auto c = build_chain(k.F, k.depth);
    auto m = compare_methods(c);
    EXPECT_TRUE(m.agreement);
    EXPECT_TRUE(m.unfolding);
    EXPECT_TRUE(m.two_starts_agree);
    EXPECT_TRUE(m.uniformity.uniform);
    EXPECT_TRUE(m.kt.fixpoint.neg == m.kt.fixpoint.pos);
    EXPECT_TRUE(m.kleene == diag_family(c));
    EXPECT_TRUE(m.banach.fixpoint == diag_family(c));
    EXPECT_TRUE(m.glued == diag_rel(c.top()));
  }
}

TEST(Engines, KnasterTarskiIterationCounts) {
  for (const auto& k : cases()) {
    auto c = build_chain(k.F, k.depth);
    auto kt = solve_knaster_tarski(c);
    EXPECT_EQ(kt.iterations, k.kt_iterations) << to_string(k.F);
    EXPECT_TRUE(kt.ascending);
    EXPECT_LE(kt.iterations, iteration_cap(c));
  }
}

TEST(Engines, BanachStabilizesLevelNByIterationN) {
  for (const auto& k : cases()) {
    auto c = build_chain(k.F, k.depth);
    auto b = solve_banach(c);
    ASSERT_EQ(b.stabilization.size(), static_cast<std::size_t>(k.depth + 1));
    for (int n = 0; n <= k.depth; ++n) EXPECT_LE(b.stabilization[n], n + 1);
    for (std::size_t t = 0; t < b.iterates.size(); ++t)
      for (int n = 0; n <= k.depth; ++n)
        if (static_cast<int>(t) >= b.stabilization[n]) EXPECT_TRUE(b.iterates[t][n] == b.fixpoint[n]);
  }
}

TEST(Engines, BanachFromDifferentStarts) {
  auto c = build_chain(fixture::streams(), 4);
  auto a = solve_banach(c);
  auto b = solve_banach(c, bottom_family(c));
  auto d = solve_banach(c, diag_family(c));
  EXPECT_TRUE(a.fixpoint == b.fixpoint);
  EXPECT_TRUE(a.fixpoint == d.fixpoint);
  EXPECT_EQ(d.iterations, 0);
  EXPECT_EQ(d.iterates.size(), 1u);
}

TEST(Engines, ConstantFunctorFamily) {
  auto c2 = chain_poset(2);
  auto S = rel_from_pairs(c2, {{0, 0}, {0, 1}});
  auto c = build_chain(f_const(c2, S), 2);
  auto k = solve_kleene(c);
  ASSERT_EQ(k.size(), 3u);
  EXPECT_TRUE(k[0] == total_rel(c.levels[0]));
  EXPECT_TRUE(k[1] == S);
  EXPECT_TRUE(k[2] == S);
  auto m = compare_methods(c);
  EXPECT_TRUE(m.agreement);
}

TEST(Engines, FabricatedNonUniformRelation) {
  auto c = build_chain(fixture::lazy_nat(), 3);
  const auto& X = c.top();
  ElemId x = -1;
  for (ElemId a = 0; a < static_cast<ElemId>(X.size()) && x < 0; ++a)
    if (c.pis[1](a) != a && c.pis[1](a) != 0) x = a;
  ASSERT_GE(x, 0);
  auto R = rel_from_pairs(X, {{0, 0}, {x, x}});
  auto u = check_uniform(c, R);
  EXPECT_FALSE(u.uniform);
  EXPECT_GE(u.level, 0);
  EXPECT_TRUE(check_uniform(c, diag_rel(X)).uniform);
  EXPECT_TRUE(check_uniform(c, total_rel(X)).uniform);
}

TEST(Engines, UniformityMatchesDefinition) {
  auto c = build_chain(fixture::lazy_nat(), 1);
  for (const auto& R : all_admissible_rels(c.top())) {
    bool want = true;
    for (const auto& pi : c.pis) want = want && R.subset_of(inverse_image(pi, R));
    EXPECT_EQ(check_uniform(c, R).uniform, want);
  }
}

TEST(Engines, PairIterationStaysOrdered) {
  auto c = build_chain(fixture::reflexive(), 3);
  RelPair x{total_family(c), bottom_family(c)};
  for (int i = 0; i < iteration_cap(c); ++i) {
    RelPair y = psi_pair_step(c, x);
    EXPECT_TRUE(relpair_leq(x, y));
    x = y;
  }
}
