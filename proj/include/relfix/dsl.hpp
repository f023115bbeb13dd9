#ifndef RELFIX_DSL_HPP
#define RELFIX_DSL_HPP

#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "relfix/error.hpp"
#include "relfix/functor.hpp"
#include "relfix/poset.hpp"
#include "relfix/relation.hpp"

namespace relfix {

// Grammar (whitespace and '#' comments ignored, ';' between statements optional):
//
//   spec    ::= { stmt [";"] }
//   stmt    ::= "domain" IDENT "=" fexpr
//             | "base" IDENT "=" poset
//             | "rel" IDENT "=" rel "on" IDENT
//             | "depth" INT
//             | "caps" cap { "," cap }
//             | "seed" INT
//   cap     ::= "max-size" INT | "max-pairs" INT
//   fexpr   ::= "one" | IDENT | "lift" "(" fexpr ")"
//             | ("prod" | "sum" | "fun") "(" fexpr "," fexpr ")"
//             | "const" "(" poset [ "," rel ] ")"
//   poset   ::= "one" | "chain" "(" INT ")" | IDENT
//             | "poset" "{" "elems" ":" INT ";" "le" ":" "[" [pairs] "]" ";" "bot" ":" INT [";"] "}"
//   rel     ::= "diag" | "total" | "pairs" "[" [pairs] "]" | IDENT
//   pairs   ::= "(" INT "," INT ")" { "," "(" INT "," INT ")" }
//
// Element ids in literals are the ids as written; they are translated to
// canonical ids of the poset they refer to.

struct SpecFile {
  std::string source;
  std::string domain_name;
  FunctorExpr F;
  std::map<std::string, FinPoset> bases;
  std::map<std::string, BinRel> rels;
  std::optional<int> depth;
  std::optional<std::size_t> max_size;
  std::optional<std::size_t> max_pairs;
  std::optional<std::uint64_t> seed;
};

namespace dsl {

struct Token {
  enum Kind { Ident, Int, Punct, End } kind = End;
  std::string text;
  int line = 1, col = 1;
};

inline std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') ++line, col = 1;
      else ++col;
    }
  };
  while (i < src.size()) {
    char ch = src[i];
    if (std::isspace(static_cast<unsigned char>(ch))) {
      advance(1);
    } else if (ch == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
    } else if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '-')) ++j;
      out.push_back({Token::Ident, src.substr(i, j - i), line, col});
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      out.push_back({Token::Int, src.substr(i, j - i), line, col});
      advance(j - i);
    } else if (std::string("()[]{},=:;").find(ch) != std::string::npos) {
      out.push_back({Token::Punct, std::string(1, ch), line, col});
      advance(1);
    } else {
      throw Error(ErrorKind::ParseError,
                  "line " + std::to_string(line) + ", col " + std::to_string(col) + ": unexpected character '" +
                      std::string(1, ch) + "'",
                  {line, col});
    }
  }
  out.push_back({Token::End, "", line, col});
  return out;
}

/// Poset together with the source-id translation used for its literals.
struct PosetValue {
  FinPoset poset;
  std::vector<ElemId> canonical_of_source;
  ElemId id(const Token& at, long long raw) const;
};

inline std::string where(const Token& t) {
  return "line " + std::to_string(t.line) + ", col " + std::to_string(t.col) + ": ";
}

inline ElemId PosetValue::id(const Token& at, long long raw) const {
  if (raw < 0 || static_cast<std::size_t>(raw) >= poset.size())
    throw Error(ErrorKind::ResolveError, where(at) + "element " + std::to_string(raw) + " is not in the poset",
                {at.line, at.col});
  if (canonical_of_source.empty()) return static_cast<ElemId>(raw);
  return canonical_of_source[static_cast<std::size_t>(raw)];
}

inline PosetValue make_value(const FinPoset& X) {
  PosetValue v{X, {}};
  if (const auto* a = std::get_if<shape::Atomic>(&X.shape().node)) v.canonical_of_source = a->canonical_of_source;
  return v;
}

class Parser {
 public:
  explicit Parser(const std::string& src) : toks_(lex(src)) { spec_.source = src; }

  SpecFile parse_spec() {
    bool have_domain = false;
    while (peek().kind != Token::End) {
      if (accept(";")) continue;
      const Token t = expect_ident("a statement keyword (domain, base, rel, depth, caps, seed)");
      if (t.text == "domain") {
        if (have_domain) fail(t, ErrorKind::ResolveError, "second domain statement");
        const Token name = expect_ident("the domain name");
        spec_.domain_name = name.text;
        expect("=");
        spec_.F = fexpr();
        have_domain = true;
      } else if (t.text == "base") {
        const Token name = expect_ident("a base name");
        expect("=");
        auto v = poset();
        bases_[name.text] = v;
        spec_.bases[name.text] = v.poset;
      } else if (t.text == "rel") {
        const Token name = expect_ident("a relation name");
        expect("=");
        const std::size_t rel_pos = pos_;
        skip_rel();
        expect_keyword("on");
        const Token pname = expect_ident("a base name");
        auto it = bases_.find(pname.text);
        if (it == bases_.end()) fail(pname, ErrorKind::ResolveError, "unknown base '" + pname.text + "'");
        const std::size_t after = pos_;
        pos_ = rel_pos;
        spec_.rels[name.text] = rel(it->second);
        pos_ = after;
      } else if (t.text == "depth") {
        spec_.depth = static_cast<int>(integer());
      } else if (t.text == "caps") {
        do {
          const Token key = expect_ident("max-size or max-pairs");
          if (key.text == "max-size") spec_.max_size = static_cast<std::size_t>(integer());
          else if (key.text == "max-pairs") spec_.max_pairs = static_cast<std::size_t>(integer());
          else fail(key, ErrorKind::ParseError, "expected max-size or max-pairs, found '" + key.text + "'");
        } while (accept(","));
      } else if (t.text == "seed") {
        spec_.seed = static_cast<std::uint64_t>(integer());
      } else {
        fail(t, ErrorKind::ParseError, "expected a statement keyword, found '" + t.text + "'");
      }
    }
    if (!have_domain) fail(peek(), ErrorKind::ResolveError, "spec has no domain statement");
    return spec_;
  }

  PosetValue parse_poset_only() {
    auto v = poset();
    if (peek().kind != Token::End) fail(peek(), ErrorKind::ParseError, "trailing input after poset");
    return v;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(const Token& t, ErrorKind k, const std::string& msg) const {
    throw Error(k, where(t) + msg, {t.line, t.col});
  }

  static std::string shown(const Token& t) { return t.kind == Token::End ? "end of input" : "'" + t.text + "'"; }

  bool accept(const std::string& p) {
    if (peek().kind == Token::Punct && peek().text == p) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(const std::string& p) {
    if (!accept(p)) fail(peek(), ErrorKind::ParseError, "expected '" + p + "', found " + shown(peek()));
  }
  Token expect_ident(const std::string& what) {
    if (peek().kind != Token::Ident) fail(peek(), ErrorKind::ParseError, "expected " + what + ", found " + shown(peek()));
    return next();
  }
  void expect_keyword(const std::string& kw) {
    if (peek().kind != Token::Ident || peek().text != kw)
      fail(peek(), ErrorKind::ParseError, "expected '" + kw + "', found " + shown(peek()));
    ++pos_;
  }
  long long integer() {
    if (peek().kind != Token::Int) fail(peek(), ErrorKind::ParseError, "expected an integer, found " + shown(peek()));
    const Token t = next();
    try {
      return std::stoll(t.text);
    } catch (...) {
      fail(t, ErrorKind::ParseError, "integer out of range");
    }
  }

  std::vector<std::pair<Token, std::pair<long long, long long>>> pair_list(const std::string& close) {
    std::vector<std::pair<Token, std::pair<long long, long long>>> out;
    if (accept(close)) return out;
    do {
      const Token at = peek();
      expect("(");
      long long a = integer();
      expect(",");
      long long b = integer();
      expect(")");
      out.push_back({at, {a, b}});
    } while (accept(","));
    expect(close);
    return out;
  }

  PosetValue poset() {
    const Token t = expect_ident("a poset (one, chain(n), poset{...} or a base name)");
    if (t.text == "one") return make_value(one_poset());
    if (t.text == "chain") {
      expect("(");
      long long n = integer();
      expect(")");
      if (n < 1) fail(t, ErrorKind::ParseError, "chain length must be positive");
      if (static_cast<std::size_t>(n) > 100000) fail(t, ErrorKind::ParseError, "chain length too large");
      return make_value(chain_poset(static_cast<int>(n)));
    }
    if (t.text == "poset") {
      expect("{");
      expect_keyword("elems");
      expect(":");
      long long n = integer();
      expect(";");
      expect_keyword("le");
      expect(":");
      expect("[");
      auto le = pair_list("]");
      expect(";");
      expect_keyword("bot");
      expect(":");
      long long bot = integer();
      accept(";");
      expect("}");
      if (n < 1 || n > 100000) fail(t, ErrorKind::ParseError, "element count out of range");
      RawPoset raw{static_cast<int>(n), {}, static_cast<int>(bot), "poset"};
      for (auto& [tok, pr] : le) {
        if (pr.first >= n || pr.second >= n)
          fail(tok, ErrorKind::ResolveError, "order pair mentions an element outside 0.." + std::to_string(n - 1));
        raw.le.emplace_back(static_cast<int>(pr.first), static_cast<int>(pr.second));
      }
      try {
        FinPoset X = validate_poset(raw);
        return make_value(X);
      } catch (const Error& e) {
        throw Error(e.kind(), where(t) + e.detail(), e.witness());
      }
    }
    auto it = bases_.find(t.text);
    if (it == bases_.end()) fail(t, ErrorKind::ResolveError, "unknown base '" + t.text + "'");
    return it->second;
  }

  void skip_rel() {
    const Token t = expect_ident("a relation (diag, total, pairs[...] or a name)");
    if (t.text == "pairs") {
      expect("[");
      (void)pair_list("]");
    }
  }

  BinRel rel(const PosetValue& on) {
    const Token t = expect_ident("a relation (diag, total, pairs[...] or a name)");
    if (t.text == "diag") return diag_rel(on.poset);
    if (t.text == "total") return total_rel(on.poset);
    if (t.text == "pairs") {
      expect("[");
      auto ps = pair_list("]");
      BinRel r(on.poset);
      for (auto& [tok, pr] : ps) r.insert(on.id(tok, pr.first), on.id(tok, pr.second));
      return r;
    }
    auto it = spec_.rels.find(t.text);
    if (it == spec_.rels.end()) fail(t, ErrorKind::ResolveError, "unknown relation '" + t.text + "'");
    if (!(it->second.carrier() == on.poset))
      fail(t, ErrorKind::ResolveError, "relation '" + t.text + "' lives on a different poset");
    return it->second;
  }

  FunctorExpr fexpr() {
    const Token t = expect_ident("a functor expression");
    if (t.text == spec_.domain_name) return f_var();
    if (t.text == "one") return f_one();
    if (t.text == "lift") {
      expect("(");
      auto a = fexpr();
      expect(")");
      return f_lift(a);
    }
    if (t.text == "prod" || t.text == "sum" || t.text == "fun") {
      expect("(");
      auto a = fexpr();
      expect(",");
      auto b = fexpr();
      expect(")");
      if (t.text == "prod") return f_prod(a, b);
      if (t.text == "sum") return f_sum(a, b);
      return f_fun(a, b);
    }
    if (t.text == "const") {
      expect("(");
      auto p = poset();
      BinRel r = diag_rel(p.poset);
      Token rt = peek();
      if (accept(",")) {
        rt = peek();
        r = rel(p);
      }
      expect(")");
      if (!is_admissible(r)) fail(rt, ErrorKind::InadmissibleConstRelation, "constant relation must contain (bot, bot)");
      return f_const(p.poset, r);
    }
    fail(t, ErrorKind::ResolveError, "unknown functor name '" + t.text + "'");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  SpecFile spec_;
  std::map<std::string, PosetValue> bases_;
};

}  // namespace dsl

inline SpecFile parse_spec(const std::string& text) { return dsl::Parser(text).parse_spec(); }

inline FinPoset parse_poset_literal(const std::string& text) { return dsl::Parser(text).parse_poset_only().poset; }

}  // namespace relfix

#endif  // RELFIX_DSL_HPP
