#include <gtest/gtest.h>

#include <algorithm>

#include "oracles.hpp"

using namespace relfix;

namespace {

FinPoset v_shape() { return validate_poset({3, {{0, 1}, {0, 2}}, 0, "V"}); }

std::vector<FinPoset> sample_posets() {
  auto out = pointed_posets_up_to(4);
  out.push_back(lift(chain_poset(2)));
  out.push_back(product(chain_poset(2), chain_poset(2)));
  return out;
}

}  // namespace

TEST(Poset, ChainHasBottomAtZero) {
  auto c = chain_poset(4);
  ASSERT_EQ(c.size(), 4u);
  for (ElemId a = 0; a < 4; ++a) {
    EXPECT_TRUE(c.leq(0, a));
    for (ElemId b = 0; b < 4; ++b) EXPECT_EQ(c.leq(a, b), a <= b);
  }
}

TEST(Poset, OnePosetIsAPoint) {
  auto o = one_poset();
  EXPECT_EQ(o.size(), 1u);
  EXPECT_TRUE(o.leq(0, 0));
}

TEST(Poset, CycleIsRejected) {
  try {
    validate_poset({3, {{0, 1}, {1, 2}, {2, 1}}, 0, ""});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotAPartialOrder);
  }
}

TEST(Poset, MissingBottomIsRejected) {
  try {
    validate_poset({3, {{0, 1}}, 0, ""});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NoLeastElement);
    EXPECT_EQ(e.witness(), std::vector<long long>{2});
  }
}

TEST(Poset, CanonicalFormIsIdempotent) {
  for (const auto& X : sample_posets()) EXPECT_TRUE(canonicalize(X) == X);
}

TEST(Poset, CanonicalFormKeepsBottomFirst) {
  auto X = validate_poset({4, {{3, 0}, {3, 1}, {3, 2}, {0, 1}}, 3, ""});
  for (ElemId a = 0; a < 4; ++a) EXPECT_TRUE(X.leq(0, a));
}

TEST(Poset, CorpusCountsMatchKnownSequence) {
  // Pointed posets on n elements correspond to posets on n-1 elements: 1, 1, 2, 5, 16.
  EXPECT_EQ(pointed_posets_up_to(3).size(), 4u);
  EXPECT_EQ(pointed_posets_up_to(4).size(), 9u);
  EXPECT_EQ(pointed_posets_up_to(5).size(), 25u);
}

TEST(Poset, CorpusHasNoIsomorphicDuplicates) {
  auto c = pointed_posets_up_to(5);
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i + 1; j < c.size(); ++j) EXPECT_FALSE(isomorphic(c[i], c[j]));
}

TEST(Poset, RelabelingGivesIsomorphicPoset) {
  auto a = validate_poset({4, {{0, 1}, {0, 2}, {1, 3}}, 0, ""});
  auto b = validate_poset({4, {{2, 3}, {2, 0}, {3, 1}}, 2, ""});
  EXPECT_TRUE(isomorphic(a, b));
  EXPECT_FALSE(isomorphic(a, chain_poset(4)));
}

TEST(Poset, MonotoneMapEnumerationMatchesBruteForce) {
  auto ps = pointed_posets_up_to(4);
  for (const auto& X : ps)
    for (const auto& Y : ps) {
      auto got = all_monotone_maps(X, Y);
      auto want = oracle::monotone_tables(X, Y);
      ASSERT_EQ(got.size(), want.size());
      std::vector<std::vector<ElemId>> tables;
      for (const auto& m : got) tables.push_back(m.table());
      std::sort(tables.begin(), tables.end());
      std::sort(want.begin(), want.end());
      EXPECT_EQ(tables, want);
    }
}

TEST(Poset, NonMonotoneTableIsRejected) {
  auto c = chain_poset(2);
  try {
    monotone_map(c, c, {1, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotMonotone);
  }
}

TEST(Poset, HomOfTwoChainIsThreeChain) {
  auto h = hom_poset(chain_poset(2), chain_poset(2));
  EXPECT_EQ(h.size(), 3u);
  EXPECT_TRUE(isomorphic(h, chain_poset(3)));
}

TEST(Poset, HomOfChainsHasBinomialSize) {
  for (int k = 1; k <= 5; ++k)
    EXPECT_EQ(hom_poset(chain_poset(k), chain_poset(k)).size(), oracle::binomial(2 * k - 1, k));
}

TEST(Poset, HomOrderIsPointwise) {
  auto X = v_shape(), Y = chain_poset(3);
  auto h = hom_poset(X, Y);
  const auto& fs = std::get<shape::FunctionSpace>(h.shape().node);
  for (std::size_t a = 0; a < h.size(); ++a)
    for (std::size_t b = 0; b < h.size(); ++b) {
      bool pw = true;
      for (std::size_t x = 0; x < X.size(); ++x) pw = pw && Y.leq(fs.tables[a][x], fs.tables[b][x]);
      EXPECT_EQ(h.leq(static_cast<ElemId>(a), static_cast<ElemId>(b)), pw);
    }
}

TEST(Poset, ConstructionSizes) {
  auto X = v_shape(), Y = chain_poset(2);
  EXPECT_EQ(lift(X).size(), X.size() + 1);
  EXPECT_EQ(product(X, Y).size(), X.size() * Y.size());
  EXPECT_EQ(sum_sep(X, Y).size(), X.size() + Y.size() + 1);
}

TEST(Poset, LiftedBottomIsBelowEverything) {
  auto L = lift(v_shape());
  const auto& s = std::get<shape::Lifted>(L.shape().node);
  EXPECT_EQ(s.inner_of[0], -1);
  for (ElemId a = 0; a < static_cast<ElemId>(L.size()); ++a) EXPECT_TRUE(L.leq(0, a));
  for (ElemId x = 0; x < 3; ++x)
    for (ElemId y = 0; y < 3; ++y) EXPECT_EQ(L.leq(s.elem_of_inner[x], s.elem_of_inner[y]), s.inner.leq(x, y));
}

TEST(Poset, ProductOrderIsComponentwise) {
  auto X = v_shape(), Y = chain_poset(2);
  auto P = product(X, Y);
  const auto& s = std::get<shape::Product>(P.shape().node);
  for (ElemId a = 0; a < 3; ++a)
    for (ElemId b = 0; b < 2; ++b)
      for (ElemId c = 0; c < 3; ++c)
        for (ElemId d = 0; d < 2; ++d) EXPECT_EQ(P.leq(s.at(a, b), s.at(c, d)), X.leq(a, c) && Y.leq(b, d));
}

TEST(Poset, SeparatedSumKeepsSidesApart) {
  auto S = sum_sep(chain_poset(2), chain_poset(2));
  const auto& s = std::get<shape::SeparatedSum>(S.shape().node);
  for (ElemId l = 0; l < 2; ++l)
    for (ElemId r = 0; r < 2; ++r) {
      EXPECT_FALSE(S.leq(s.elem_of_left[l], s.elem_of_right[r]));
      EXPECT_FALSE(S.leq(s.elem_of_right[r], s.elem_of_left[l]));
    }
}

TEST(Poset, ComposeAndIdentity) {
  for (const auto& X : pointed_posets_up_to(3))
    for (const auto& f : all_monotone_maps(X, X)) {
      EXPECT_TRUE(compose(f, identity_map(X)) == f);
      EXPECT_TRUE(compose(identity_map(X), f) == f);
    }
}

TEST(Poset, ChainLimitOfIncreasingSequence) {
  auto c = chain_poset(4);
  EXPECT_EQ(chain_limit(c, {0, 1, 1, 3}), 3);
  try {
    chain_limit(c, {2, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotAChain);
  }
}

TEST(Poset, HasseDotHasCoverEdgesOnly) {
  auto c = chain_poset(4);
  auto dot = hasse_dot(c, "c4");
  EXPECT_NE(dot.find("n0 -> n1;"), std::string::npos);
  EXPECT_EQ(dot.find("n0 -> n2;"), std::string::npos);
  EXPECT_EQ(std::count(dot.begin(), dot.end(), '>'), 3);
}

TEST(Poset, SizeCapIsEnforced) {
  Caps caps;
  caps.max_elements = 20;
  try {
    hom_poset(chain_poset(4), chain_poset(4), caps);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SizeCapExceeded);
  }
}
