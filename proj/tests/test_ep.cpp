#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace relfix;

TEST(Ep, TwoChainIntoThreeChainMapsMiddleToBottom) {
  auto c2 = chain_poset(2), c3 = chain_poset(3);
  auto e = monotone_map(c2, c3, {0, 2});
  auto p = projection_of(e);
  EXPECT_EQ(p.table(), (std::vector<ElemId>{0, 0, 1}));
  EXPECT_TRUE(is_ep_pair(e, p));
}

TEST(Ep, ProjectionAgreesWithDefinitionEverywhere) {
  auto ps = pointed_posets_up_to(4);
  for (const auto& X : ps)
    for (const auto& Y : ps) {
      if (X.size() > Y.size()) continue;
      auto ptabs = oracle::monotone_tables(Y, X);
      for (const auto& e : all_monotone_maps(X, Y)) {
        std::vector<std::vector<ElemId>> want;
        for (const auto& p : ptabs)
          if (oracle::ep_laws(X, Y, e.table(), p)) want.push_back(p);
        ASSERT_LE(want.size(), 1u);
        auto got = all_projections_of(e);
        ASSERT_EQ(got.size(), want.size());
        if (want.empty()) {
          EXPECT_THROW(projection_of(e), Error);
        } else {
          EXPECT_EQ(got[0].table(), want[0]);
          EXPECT_EQ(projection_of(e).table(), want[0]);
        }
      }
    }
}

TEST(Ep, NonInjectiveMapIsNotAnEmbedding) {
  auto c2 = chain_poset(2);
  try {
    projection_of(bottom_map(c2, c2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotAnEmbedding);
  }
}

TEST(Ep, VerifyRejectsBrokenPair) {
  auto c2 = chain_poset(2), c3 = chain_poset(3);
  auto e = monotone_map(c2, c3, {0, 2});
  EXPECT_FALSE(is_ep_pair(e, monotone_map(c3, c2, {0, 1, 1})));
  EXPECT_THROW(verify_ep_pair(e, monotone_map(c3, c2, {0, 1, 1})), Error);
}

TEST(Ep, BottomPairFromThePoint) {
  auto Y = lift(chain_poset(2));
  auto b = bottom_ep(Y);
  EXPECT_EQ(b.e.table(), std::vector<ElemId>{0});
  EXPECT_EQ(b.p.table(), std::vector<ElemId>(Y.size(), 0));
}

TEST(Ep, CompositionIsAPairAndAssociative) {
  auto c2 = chain_poset(2), c3 = chain_poset(3), c4 = chain_poset(4);
  auto f = verify_ep_pair(monotone_map(c2, c3, {0, 1}), projection_of(monotone_map(c2, c3, {0, 1})));
  auto g = verify_ep_pair(monotone_map(c3, c4, {0, 1, 3}), projection_of(monotone_map(c3, c4, {0, 1, 3})));
  auto gf = compose_ep(f, g);
  EXPECT_TRUE(is_ep_pair(gf.e, gf.p));
  EXPECT_EQ(gf.e.table(), (std::vector<ElemId>{0, 1}));
  auto h = bottom_ep(c2);
  EXPECT_TRUE(compose_ep(compose_ep(h, f), g).e == compose_ep(h, gf).e);
  EXPECT_TRUE(compose_ep(identity_ep(c2), f).p == f.p);
  EXPECT_THROW(compose_ep(g, f), Error);
}

TEST(Ep, RetractionIsIdempotentBelowIdentity) {
  auto c2 = chain_poset(2), c3 = chain_poset(3);
  auto e = monotone_map(c2, c3, {0, 2});
  auto r = verify_ep_pair(e, projection_of(e)).retraction();
  EXPECT_TRUE(is_idempotent(r));
  EXPECT_TRUE(pointwise_leq(r, identity_map(c3)));
}
