#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace relfix;

namespace {

FunctorExpr D() { return f_var(); }

std::vector<FunctorExpr> canonical_functors() {
  return {f_sum(f_one(), D()), f_lift(f_prod(f_const(chain_poset(2)), D())), f_lift(f_fun(D(), D()))};
}

}  // namespace

TEST(Functor, ToString) {
  EXPECT_EQ(to_string(f_sum(f_one(), D())), "sum(one, D)");
  EXPECT_EQ(to_string(f_lift(f_fun(D(), D()))), "lift(fun(D, D))");
}

TEST(Functor, Polarities) {
  EXPECT_TRUE(is_covariant(f_sum(f_one(), D())));
  EXPECT_FALSE(is_covariant(f_fun(D(), D())));
  EXPECT_TRUE(is_covariant(f_fun(f_one(), D())));
  EXPECT_TRUE(is_covariant(f_fun(f_fun(D(), f_one()), D())));
  auto pol = var_polarities(f_fun(D(), D()));
  ASSERT_EQ(pol.size(), 2u);
  EXPECT_NE(pol[0], pol[1]);
  for (const auto& F : canonical_functors()) EXPECT_TRUE(polarities_consistent(F));
}

TEST(Functor, ObjectSizes) {
  auto c2 = chain_poset(2), c3 = chain_poset(3);
  EXPECT_EQ(eval_obj(f_fun(D(), D()), c2, c2).size(), 3u);
  EXPECT_EQ(eval_obj(f_fun(D(), D()), c3, c2).size(), oracle::monotone_tables(c3, c2).size());
  EXPECT_EQ(eval_obj(f_sum(f_one(), D()), c3, c3).size(), 5u);
  EXPECT_EQ(eval_obj(f_lift(f_prod(f_const(c2), D())), c3, c3).size(), 7u);
}

TEST(Functor, ConstRelationMustBeAdmissible) {
  auto c2 = chain_poset(2);
  try {
    f_const(c2, rel_from_pairs(c2, {{1, 1}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InadmissibleConstRelation);
  }
  EXPECT_NO_THROW(f_const(c2, rel_from_pairs(c2, {{0, 0}, {0, 1}})));
}

TEST(Functor, FunctionSpaceDiagonalIsDiagonal) {
  for (const auto& X : pointed_posets_up_to(3)) {
    auto r = eval_rel(f_fun(D(), D()), diag_rel(X), diag_rel(X));
    EXPECT_TRUE(r == diag_rel(r.carrier()));
  }
}

TEST(Functor, FunctionSpaceRelationMatchesLogicalOracle) {
  auto ps = pointed_posets_up_to(3);
  for (const auto& X : ps)
    for (const auto& Y : ps) {
      auto F = f_fun(D(), D());
      auto obj = eval_obj(F, X, Y);
      const auto& fs = std::get<shape::FunctionSpace>(obj.shape().node);
      for (const auto& R : all_admissible_rels(X))
        for (const auto& S : all_admissible_rels(Y)) {
          auto got = eval_rel_on(F, R, S, obj);
          for (std::size_t g = 0; g < obj.size(); ++g)
            for (std::size_t h = 0; h < obj.size(); ++h) {
              bool want = true;
              for (auto [x, y] : R.pairs()) want = want && S.contains(fs.tables[g][x], fs.tables[h][y]);
              ASSERT_EQ(got.contains(static_cast<ElemId>(g), static_cast<ElemId>(h)), want);
            }
        }
    }
}

TEST(Functor, RelationalActionPreservesAdmissibility) {
  for (const auto& F : canonical_functors())
    for (const auto& X : pointed_posets_up_to(3))
      for (const auto& R : all_admissible_rels(X)) EXPECT_TRUE(is_admissible(eval_rel(F, R, R)));
}

TEST(Functor, EpActionOnCanonicalFunctors) {
  auto c2 = chain_poset(2), c3 = chain_poset(3);
  auto e = monotone_map(c2, c3, {0, 2});
  auto f = verify_ep_pair(e, projection_of(e));
  for (const auto& F : canonical_functors()) {
    auto g = eval_ep(F, f);
    EXPECT_TRUE(is_ep_pair(g.e, g.p));
    EXPECT_TRUE(g.source() == eval_obj(F, c2, c2));
    EXPECT_TRUE(g.target() == eval_obj(F, c3, c3));
  }
}

TEST(Functor, IdentityAction) {
  for (const auto& F : canonical_functors())
    for (const auto& X : pointed_posets_up_to(3)) {
      auto id = identity_map(X);
      EXPECT_TRUE(eval_map(F, id, id) == identity_map(eval_obj(F, X, X)));
    }
}

TEST(Functor, LawsHoldForCanonicalFunctors) {
  LawBudget b;
  b.max_poset_size = 2;
  b.rel_samples = 2000;
  for (const auto& F : canonical_functors()) {
    auto rep = check_functor_laws(F, b);
    for (const auto& l : rep.laws) EXPECT_TRUE(l.ok) << to_string(F) << " " << l.law << " " << l.witness;
  }
}

TEST(Functor, BrokenActionIsCaught) {
  LawBudget b;
  b.max_poset_size = 2;
  auto rep = check_functor_laws(f_fun(D(), D()), b, swapped_fun_action());
  EXPECT_FALSE(rep.ok());
  ASSERT_NE(rep.first_failure(), nullptr);
  EXPECT_FALSE(rep.first_failure()->witness.empty());
  try {
    require_functor_laws(f_fun(D(), D()), b, swapped_fun_action());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::LawViolation);
  }
}
