#include <gtest/gtest.h>

#include "common.hpp"
#include "oracles.hpp"

using namespace relfix;

namespace {

std::vector<std::size_t> lazy_sizes(int N) {
  std::vector<std::size_t> s;
  for (int n = 0; n <= N; ++n) s.push_back(2 * n + 1);
  return s;
}

std::vector<std::size_t> stream_sizes(int N) {
  std::vector<std::size_t> s;
  for (int n = 0; n <= N; ++n) s.push_back((std::size_t{1} << (n + 1)) - 1);
  return s;
}

std::vector<std::size_t> reflexive_sizes(int N) {
  // X_{n+1} = lift(hom(X_n, X_n)); X_0..X_2 are chains and a k-chain has
  // C(2k-1, k) monotone endomaps.
  std::vector<std::size_t> s{1};
  for (int n = 0; n < N; ++n) s.push_back(oracle::binomial(2 * static_cast<int>(s.back()) - 1, static_cast<int>(s.back())) + 1);
  return s;
}

}  // namespace

TEST(Chain, LevelSizesMatchClosedForms) {
  EXPECT_EQ(build_chain(fixture::lazy_nat(), 6).sizes(), lazy_sizes(6));
  EXPECT_EQ(build_chain(fixture::streams(), 4).sizes(), stream_sizes(4));
  EXPECT_EQ(build_chain(fixture::reflexive(), 3).sizes(), reflexive_sizes(3));
  EXPECT_EQ(reflexive_sizes(3), (std::vector<std::size_t>{1, 2, 4, 36}));
}

TEST(Chain, ReflexiveLowLevelsAreChains) {
  auto c = build_chain(fixture::reflexive(), 3);
  auto total = [](const FinPoset& X) {
    for (ElemId a = 0; a < static_cast<ElemId>(X.size()); ++a)
      for (ElemId b = 0; b < static_cast<ElemId>(X.size()); ++b)
        if (!X.leq(a, b) && !X.leq(b, a)) return false;
    return true;
  };
  for (int n = 0; n <= 2; ++n) EXPECT_TRUE(total(c.levels[n]));
  EXPECT_FALSE(total(c.levels[3]));
}

TEST(Chain, ProjectionChecksPass) {
  for (auto F : {fixture::lazy_nat(), fixture::streams(), fixture::reflexive()}) {
    auto c = build_chain(F, 3);
    auto rep = check_truncation_projections(c);
    for (const auto& ch : rep.checks) EXPECT_TRUE(ch.ok) << ch.name << " " << ch.witness;
    EXPECT_TRUE(rep.ok());
  }
}

TEST(Chain, ProjectionPropertiesDirectly) {
  auto c = build_chain(fixture::streams(), 4);
  const auto& X = c.top();
  EXPECT_TRUE(c.pis[0] == bottom_map(X, X));
  EXPECT_TRUE(c.pis[4] == identity_map(X));
  for (int j = 0; j <= 4; ++j) {
    EXPECT_TRUE(is_idempotent(c.pis[j]));
    EXPECT_TRUE(pointwise_leq(c.pis[j], identity_map(X)));
    if (j > 0) EXPECT_TRUE(pointwise_leq(c.pis[j - 1], c.pis[j]));
    for (int i = 0; i <= j; ++i) EXPECT_TRUE(compose(c.pis[i], c.pis[j]) == c.pis[i]);
  }
}

TEST(Chain, StepsAreEpPairs) {
  auto c = build_chain(fixture::reflexive(), 3);
  for (const auto& s : c.steps) EXPECT_TRUE(is_ep_pair(s.e, s.p));
  for (int j = 0; j <= 3; ++j) EXPECT_TRUE(c.pis[j] == c.cum[j].retraction());
}

TEST(Chain, ReflexiveDepthFourExceedsDefaultCap) {
  try {
    build_chain(fixture::reflexive(), 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SizeCapExceeded);
    ASSERT_FALSE(e.witness().empty());
    EXPECT_EQ(e.witness()[0], 4);
  }
}

TEST(Chain, LazyNatSecondLevelDot) {
  auto c = build_chain(fixture::lazy_nat(), 2);
  auto dot = hasse_dot(c.levels[2], "X_2");
  std::size_t nodes = 0, edges = 0;
  for (std::size_t i = dot.find("label="); i != std::string::npos; i = dot.find("label=", i + 1)) ++nodes;
  for (std::size_t i = dot.find("->"); i != std::string::npos; i = dot.find("->", i + 1)) ++edges;
  EXPECT_EQ(nodes, 5u);
  EXPECT_EQ(edges, 4u);
}

TEST(Chain, FamiliesAndCoherence) {
  auto c = build_chain(fixture::lazy_nat(), 3);
  EXPECT_TRUE(is_coherent(c, diag_family(c)));
  EXPECT_TRUE(is_coherent(c, total_family(c)));
  auto bad = diag_family(c);
  bad.rels[2] = total_rel(c.levels[2]);
  EXPECT_EQ(first_incoherent_level(c, bad), 1);
  try {
    require_coherent(c, bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CoherenceViolation);
  }
}

TEST(Chain, GlueRestrictRoundTrip) {
  auto c = build_chain(fixture::streams(), 3);
  auto fam = diag_family(c);
  auto g = glue_both(c, fam);
  EXPECT_TRUE(g.meet == g.join);
  EXPECT_TRUE(g.meet == diag_rel(c.top()));
  EXPECT_TRUE(restrict_family(c, glue_family(c, fam)) == fam);
}

TEST(Chain, GlueDualityFailsOnIncoherentFamily) {
  auto c = build_chain(fixture::lazy_nat(), 2);
  auto fam = diag_family(c);
  fam.rels[1] = total_rel(c.levels[1]);
  try {
    glue_family(c, fam);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DualMismatch);
  }
}

TEST(Chain, ShapeMismatchIsATypeError) {
  auto c = build_chain(fixture::lazy_nat(), 2);
  RelFamily short_fam;
  short_fam.rels.push_back(total_rel(c.levels[0]));
  EXPECT_THROW(check_family_shape(c, short_fam), Error);
}
