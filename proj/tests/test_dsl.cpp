#include <gtest/gtest.h>

#include "common.hpp"

using namespace relfix;

namespace {

Error parse_error(const std::string& text) {
  try {
    parse_spec(text);
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "no error for: " << text;
  return Error(ErrorKind::InternalInvariantViolation, "none");
}

}  // namespace

TEST(Dsl, LazyNat) {
  auto s = parse_spec("domain D = sum(one, D)\ndepth 6\n");
  EXPECT_EQ(s.domain_name, "D");
  EXPECT_EQ(to_string(s.F), "sum(one, D)");
  ASSERT_TRUE(s.depth.has_value());
  EXPECT_EQ(*s.depth, 6);
  EXPECT_FALSE(s.seed.has_value());
}

TEST(Dsl, Reflexive) {
  auto s = parse_spec("domain D = lift(fun(D, D))\ndepth 3");
  EXPECT_EQ(to_string(s.F), "lift(fun(D, D))");
  EXPECT_EQ(build_chain(s.F, *s.depth).sizes(), (std::vector<std::size_t>{1, 2, 4, 36}));
}

TEST(Dsl, StreamsWithNamedBase) {
  auto s = parse_spec("# bits\nbase B = chain(2);\ndomain X = lift(prod(const(B, diag), X)); depth 4; seed 9");
  EXPECT_EQ(s.domain_name, "X");
  EXPECT_EQ(*s.seed, 9u);
  EXPECT_EQ(build_chain(s.F, 4).sizes(), build_chain(fixture::streams(), 4).sizes());
}

TEST(Dsl, CapsStatement) {
  auto s = parse_spec("domain D = lift(D)\ncaps max-size 500, max-pairs 9000");
  EXPECT_EQ(*s.max_size, 500u);
  EXPECT_EQ(*s.max_pairs, 9000u);
}

TEST(Dsl, NamedRelation) {
  auto s = parse_spec(
      "base P = poset { elems: 3; le: [(0,1),(0,2)]; bot: 0 }\n"
      "rel S = pairs [(0,0),(1,1)] on P\n"
      "domain D = prod(const(P, S), D)");
  ASSERT_EQ(s.rels.count("S"), 1u);
  EXPECT_EQ(s.rels.at("S").count(), 2u);
  EXPECT_TRUE(is_admissible(s.rels.at("S")));
}

TEST(Dsl, LiteralIdsAreTranslated) {
  auto P = parse_poset_literal("poset { elems: 3; le: [(2,0),(2,1)]; bot: 2 }");
  EXPECT_EQ(P.size(), 3u);
  auto s = parse_spec(
      "base P = poset { elems: 3; le: [(2,0),(2,1)]; bot: 2 }\n"
      "rel S = pairs [(2,2)] on P\n"
      "domain D = const(P, S)");
  EXPECT_EQ(s.rels.at("S").pairs(), (std::vector<std::pair<ElemId, ElemId>>{{0, 0}}));
}

TEST(Dsl, FunArityError) {
  auto e = parse_error("domain D = fun(D)");
  EXPECT_EQ(e.kind(), ErrorKind::ParseError);
  EXPECT_EQ(e.witness(), (std::vector<long long>{1, 17}));
  EXPECT_NE(e.detail().find("line 1, col 17"), std::string::npos);
  EXPECT_NE(e.detail().find("','"), std::string::npos);
}

TEST(Dsl, ErrorPositionOnLaterLine) {
  auto e = parse_error("depth 3\n\ndomain D = lift(D");
  EXPECT_EQ(e.kind(), ErrorKind::ParseError);
  ASSERT_EQ(e.witness().size(), 2u);
  EXPECT_EQ(e.witness()[0], 3);
}

TEST(Dsl, ResolveErrors) {
  EXPECT_EQ(parse_error("domain D = prod(E, D)").kind(), ErrorKind::ResolveError);
  EXPECT_EQ(parse_error("domain D = const(Q)").kind(), ErrorKind::ResolveError);
  EXPECT_EQ(parse_error("depth 2").kind(), ErrorKind::ResolveError);
  EXPECT_EQ(parse_error("rel S = diag on P\ndomain D = D").kind(), ErrorKind::ResolveError);
}

TEST(Dsl, InadmissibleConstRelation) {
  auto e = parse_error("base P = chain(2)\ndomain D = prod(const(P, pairs [(1,1)]), D)");
  EXPECT_EQ(e.kind(), ErrorKind::InadmissibleConstRelation);
}

TEST(Dsl, BadPosetLiterals) {
  EXPECT_EQ(parse_error("base P = poset { elems: 2; le: []; bot: 0 }\ndomain D = D").kind(), ErrorKind::NoLeastElement);
  EXPECT_EQ(parse_error("base P = poset { elems: 2; le: [(0,1),(1,0)]; bot: 0 }\ndomain D = D").kind(),
            ErrorKind::NotAPartialOrder);
  EXPECT_EQ(parse_error("base P = poset { elems: 2; le: [(0,5)]; bot: 0 }\ndomain D = D").kind(), ErrorKind::ResolveError);
}

TEST(Dsl, UnknownStatement) {
  auto e = parse_error("domain D = D\nsolve it");
  EXPECT_EQ(e.kind(), ErrorKind::ParseError);
  EXPECT_EQ(e.witness()[0], 2);
}
