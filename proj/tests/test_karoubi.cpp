#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "common.hpp"
#include "oracles.hpp"

using namespace relfix;

namespace {

std::vector<std::vector<ElemId>> deflation_oracle(const FinPoset& D) {
  std::vector<std::vector<ElemId>> out;
  for (const auto& t : oracle::monotone_tables(D, D)) {
    bool ok = true;
    for (std::size_t x = 0; x < t.size() && ok; ++x) ok = t[t[x]] == t[x] && D.leq(t[x], static_cast<ElemId>(x));
    if (ok) out.push_back(t);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<ElemId>> tables(const std::vector<Idempotent>& ps) {
  std::vector<std::vector<ElemId>> out;
  for (const auto& p : ps) out.push_back(p.map.table());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(Karoubi, IdempotentsOfThreeChain) {
  auto E = enumerate_canonical_idempotents(chain_poset(3));
  EXPECT_EQ(tables(E), (std::vector<std::vector<ElemId>>{{0, 0, 0}, {0, 0, 2}, {0, 1, 1}, {0, 1, 2}}));
  EXPECT_EQ(enumerate_canonical_idempotents(one_poset()).size(), 1u);
}

TEST(Karoubi, IdempotentsMatchOracle) {
  for (const auto& D : pointed_posets_up_to(4)) EXPECT_EQ(tables(enumerate_canonical_idempotents(D)), deflation_oracle(D));
  for (int n = 1; n <= 5; ++n) EXPECT_EQ(enumerate_canonical_idempotents(chain_poset(n)).size(), std::size_t{1} << (n - 1));
}

TEST(Karoubi, AllIdempotentsAreIdempotent) {
  for (const auto& D : pointed_posets_up_to(4)) {
    std::size_t brute = 0;
    for (const auto& t : oracle::monotone_tables(D, D)) {
      bool ok = true;
      for (std::size_t x = 0; x < t.size(); ++x) ok = ok && t[t[x]] == t[x];
      brute += ok;
    }
    auto all = all_idempotents(D);
    EXPECT_EQ(all.size(), brute);
    for (const auto& p : all) EXPECT_TRUE(is_idempotent(p.map));
  }
}

TEST(Karoubi, OrderConditionsAgree) {
  for (const auto& D : pointed_posets_up_to(5)) {
    auto E = enumerate_canonical_idempotents(D);
    for (const auto& p : E)
      for (const auto& q : E) EXPECT_NO_THROW(idem_leq(p, q));
  }
}

TEST(Karoubi, OrderIsImageInclusion) {
  for (const auto& D : pointed_posets_up_to(4)) {
    auto E = enumerate_canonical_idempotents(D);
    for (const auto& p : E)
      for (const auto& q : E) {
        bool fixed = true;
        for (std::size_t x = 0; x < D.size(); ++x)
          if (p.map(static_cast<ElemId>(x)) == static_cast<ElemId>(x)) fixed = fixed && q.map(static_cast<ElemId>(x)) == static_cast<ElemId>(x);
        EXPECT_EQ(idem_leq(p, q), fixed);
      }
  }
}

TEST(Karoubi, SplittingLaws) {
  for (const auto& D : pointed_posets_up_to(4))
    for (const auto& p : all_idempotents(D)) {
      auto sp = split_idempotent(p);
      EXPECT_TRUE(splitting_laws_hold(sp));
      std::size_t fixed = 0;
      for (std::size_t x = 0; x < D.size(); ++x) fixed += p.map(static_cast<ElemId>(x)) == static_cast<ElemId>(x);
      EXPECT_EQ(sp.im.size(), fixed);
      auto iso = splitting_iso(sp, sp);
      EXPECT_EQ(iso.triangle_solutions, 1u);
      EXPECT_TRUE(iso.i == identity_map(sp.im));
    }
}

TEST(Karoubi, IdentitySplitsTrivially) {
  auto D = chain_poset(3);
  auto sp = split_idempotent(Idempotent{identity_map(D)});
  EXPECT_TRUE(sp.im == D);
  EXPECT_TRUE(sp.r == identity_map(D));
}

TEST(Karoubi, PointednessOfHoms) {
  for (const auto& D : pointed_posets_up_to(3))
    for (const auto& Y : pointed_posets_up_to(3))
      for (const auto& p : all_idempotents(D))
        for (const auto& q : all_idempotents(Y)) EXPECT_TRUE(check_karoubi_pointedness({D, p}, {Y, q}));
}

TEST(Karoubi, HatFunctorLaws) {
  for (auto F : {fixture::lazy_nat(), fixture::streams(), f_lift(f_var())}) {
    auto rep = check_hat_functor_laws(F, 3);
    EXPECT_TRUE(rep.ok()) << to_string(F) << " " << rep.witness;
    EXPECT_GT(rep.composition_cases, 0u);
  }
}

TEST(Karoubi, HatFunctorOnIdentityIsF) {
  auto D = chain_poset(3);
  auto F = fixture::lazy_nat();
  EXPECT_TRUE(hat_functor_obj(F, {D, Idempotent{identity_map(D)}}) == eval_obj(F, D, D));
}

TEST(Karoubi, HatMorphismNeedsCovariance) {
  auto D = chain_poset(2);
  KaroubiObj a{D, Idempotent{identity_map(D)}};
  try {
    hat_functor_mor(fixture::reflexive(), identity_map(D), a, a);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::PreconditionViolation);
  }
}

TEST(Karoubi, CpoAndSliceEquivalence) {
  for (const auto& D : pointed_posets_up_to(4)) {
    auto cpo = ed_cpo_check(D);
    EXPECT_TRUE(cpo.ok());
    auto sl = ed_slice_equivalence(D);
    EXPECT_TRUE(sl.ok()) << sl.witness;
    EXPECT_EQ(sl.idempotents, cpo.elements.size());
  }
}

TEST(Karoubi, EmbeddingsAreEpPairs) {
  auto D = chain_poset(3);
  auto es = all_embeddings_into(D);
  for (const auto& e : es) EXPECT_TRUE(is_ep_pair(e.pair.e, e.pair.p));
  std::set<std::vector<ElemId>> images;
  for (const auto& e : es) images.insert(slice_j(e.pair).table());
  EXPECT_EQ(images.size(), 4u);
}

TEST(Karoubi, ClaimAuditOnTwoChainWithConstantBottom) {
  auto D = chain_poset(2);
  auto fr = karoubi_rel_fiber({D, Idempotent{bottom_map(D, D)}});
  EXPECT_EQ(fr.relations_checked, 8u);
  ASSERT_EQ(fr.fiber.size(), 1u);
  EXPECT_TRUE(fr.fiber[0] == total_rel(D));
  EXPECT_EQ(fr.claim_counterexamples.size(), 7u);
  EXPECT_FALSE(fr.claim_holds());
}

TEST(Karoubi, ClaimHoldsForIdentity) {
  auto D = chain_poset(2);
  auto fr = karoubi_rel_fiber({D, Idempotent{identity_map(D)}});
  EXPECT_TRUE(fr.claim_holds());
  EXPECT_EQ(fr.fiber.size(), 8u);
}
