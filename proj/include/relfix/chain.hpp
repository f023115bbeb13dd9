#ifndef RELFIX_CHAIN_HPP
#define RELFIX_CHAIN_HPP

#include <string>
#include <vector>

#include "relfix/ep.hpp"
#include "relfix/error.hpp"
#include "relfix/functor.hpp"
#include "relfix/poset.hpp"
#include "relfix/relation.hpp"

namespace relfix {

/// Finite-depth inverse-limit data for D = F(D, D):
/// X_0 = 1, X_{n+1} = F(X_n, X_n), step_0 the bottom pair,
/// step_{n+1} = F^e(step_n), cum_j : X_j -> X_N and pi_j = cum_j.e . cum_j.p.
struct DomainChain {
  FunctorExpr F;
  int depth = 0;
  std::vector<FinPoset> levels;
  std::vector<EpPair> steps;  // steps[n] : X_n -> X_{n+1}, n < N
  std::vector<EpPair> cum;    // cum[j] : X_j -> X_N
  std::vector<MonotoneMap> pis;
  /// proj[n][j]: pi_j computed on X_n, j <= n.
  std::vector<std::vector<MonotoneMap>> proj;

  const FinPoset& top() const { return levels.back(); }
  std::vector<std::size_t> sizes() const {
    std::vector<std::size_t> s;
    for (const auto& X : levels) s.push_back(X.size());
    return s;
  }
};

inline DomainChain build_chain(const FunctorExpr& F, int depth, const Caps& caps = {}) {
  if (depth < 0) throw Error(ErrorKind::PreconditionViolation, "depth must be non-negative", {depth});
  DomainChain c;
  c.F = F;
  c.depth = depth;
  c.levels.push_back(one_poset());
  for (int n = 0; n < depth; ++n) {
    try {
      c.levels.push_back(eval_obj(F, c.levels[n], c.levels[n], caps));
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::SizeCapExceeded) throw;
      std::vector<long long> w{n + 1};
      for (auto v : err.witness()) w.push_back(v);
      throw Error(ErrorKind::SizeCapExceeded,
                  "level " + std::to_string(n + 1) + " exceeds the size cap: " + err.detail(), w);
    }
  }
  for (int n = 0; n < depth; ++n) {
    if (n == 0) c.steps.push_back(bottom_ep(c.levels[1]));
    else c.steps.push_back(eval_ep_between(F, c.steps[n - 1], c.levels[n], c.levels[n + 1]));
  }
  c.cum.assign(depth + 1, identity_ep(c.top()));
  for (int j = depth - 1; j >= 0; --j) c.cum[j] = compose_ep(c.steps[j], c.cum[j + 1]);
  for (int j = 0; j <= depth; ++j) c.pis.push_back(c.cum[j].retraction());

  c.proj.resize(depth + 1);
  for (int n = 0; n <= depth; ++n) {
    // cumulative pairs X_j -> X_n
    std::vector<EpPair> to_n(n + 1, identity_ep(c.levels[n]));
    for (int j = n - 1; j >= 0; --j) to_n[j] = compose_ep(c.steps[j], to_n[j + 1]);
    for (int j = 0; j <= n; ++j) c.proj[n].push_back(to_n[j].retraction());
  }
  return c;
}

struct ProjectionCheck {
  std::string name;
  bool ok = true;
  std::string witness;
};

struct ProjectionReport {
  std::vector<ProjectionCheck> checks;
  bool ok() const {
    for (const auto& c : checks)
      if (!c.ok) return false;
    return true;
  }
};

/// Verifies the truncation projections: pi_0 is constant bottom, every pi_j
/// is idempotent and below the identity, the sequence increases, pi_N = id,
/// and pi_{j+1} on X_{n+1} equals F(pi_j, pi_j) computed from X_n.
inline ProjectionReport check_truncation_projections(const DomainChain& c) {
  ProjectionReport rep;
  const int N = c.depth;
  auto add = [&](std::string name, bool ok, std::string w) { rep.checks.push_back({std::move(name), ok, std::move(w)}); };

  add("pi_0 constant bottom", c.pis[0] == bottom_map(c.top(), c.top()), "");
  {
    bool ok = true;
    std::string w;
    for (int j = 0; j <= N && ok; ++j)
      if (!is_idempotent(c.pis[j])) ok = false, w = "j=" + std::to_string(j);
    add("idempotent", ok, w);
  }
  {
    bool ok = true;
    std::string w;
    for (int j = 0; j <= N && ok; ++j)
      if (!pointwise_leq(c.pis[j], identity_map(c.top()))) ok = false, w = "j=" + std::to_string(j);
    add("below identity", ok, w);
  }
  {
    bool ok = true;
    std::string w;
    for (int j = 0; j + 1 <= N && ok; ++j)
      if (!pointwise_leq(c.pis[j], c.pis[j + 1])) ok = false, w = "j=" + std::to_string(j);
    add("increasing", ok, w);
  }
  add("pi_N identity", c.pis[N] == identity_map(c.top()), "");
  {
    bool ok = true;
    std::string w;
    for (int n = 0; n < N && ok; ++n)
      for (int j = 0; j <= n && ok; ++j) {
        auto rhs = eval_map_between(c.F, c.proj[n][j], c.proj[n][j], c.levels[n + 1], c.levels[n + 1]);
        if (!(c.proj[n + 1][j + 1] == rhs)) ok = false, w = "n=" + std::to_string(n) + " j=" + std::to_string(j);
      }
    add("recurrence", ok, w);
  }
  {
    bool ok = true;
    std::string w;
    for (int n = 0; n < N && ok; ++n)
      if (!(eval_obj(c.F, c.levels[n], c.levels[n]) == c.levels[n + 1])) ok = false, w = "n=" + std::to_string(n);
    add("level identification", ok, w);
  }
  return rep;
}

/// Throws LawViolation with the failed check.
inline std::vector<MonotoneMap> truncation_projections(const DomainChain& c) {
  auto rep = check_truncation_projections(c);
  for (const auto& ch : rep.checks)
    if (!ch.ok) throw Error(ErrorKind::LawViolation, "truncation projections: " + ch.name + " " + ch.witness);
  return c.pis;
}

// ---------------------------------------------------------------------------
// Relation families

/// R_n on X_n for n = 0..N.
struct RelFamily {
  std::vector<BinRel> rels;

  std::size_t size() const { return rels.size(); }
  const BinRel& operator[](std::size_t n) const { return rels[n]; }
  BinRel& operator[](std::size_t n) { return rels[n]; }
  bool operator==(const RelFamily& o) const { return rels == o.rels; }
  bool operator!=(const RelFamily& o) const { return !(*this == o); }
};

inline RelFamily total_family(const DomainChain& c) {
  RelFamily f;
  for (const auto& X : c.levels) f.rels.push_back(total_rel(X));
  return f;
}

inline RelFamily bottom_family(const DomainChain& c) {
  RelFamily f;
  for (const auto& X : c.levels) f.rels.push_back(bottom_rel(X));
  return f;
}

inline RelFamily diag_family(const DomainChain& c) {
  RelFamily f;
  for (const auto& X : c.levels) f.rels.push_back(diag_rel(X));
  return f;
}

/// The levels of a relation on X_N: R_n = cum_n.e* R.
inline RelFamily restrict_family(const DomainChain& c, const BinRel& R) {
  RelFamily f;
  for (int n = 0; n <= c.depth; ++n) f.rels.push_back(inverse_image(c.cum[n].e, R));
  return f;
}

inline void check_family_shape(const DomainChain& c, const RelFamily& fam) {
  if (fam.size() != c.levels.size())
    throw Error(ErrorKind::TypeMismatch, "family has " + std::to_string(fam.size()) + " levels, chain has " +
                                             std::to_string(c.levels.size()));
  for (std::size_t n = 0; n < fam.size(); ++n)
    if (!(fam[n].carrier() == c.levels[n]))
      throw Error(ErrorKind::TypeMismatch, "family level carrier mismatch", {static_cast<long long>(n)});
}

/// First level n with R_n != step_n.e* R_{n+1}, or -1.
inline int first_incoherent_level(const DomainChain& c, const RelFamily& fam) {
  check_family_shape(c, fam);
  for (int n = 0; n < c.depth; ++n)
    if (inverse_image(c.steps[n].e, fam[n + 1]) != fam[n]) return n;
  return -1;
}

inline bool is_coherent(const DomainChain& c, const RelFamily& fam) { return first_incoherent_level(c, fam) < 0; }

inline void require_coherent(const DomainChain& c, const RelFamily& fam) {
  int n = first_incoherent_level(c, fam);
  if (n >= 0)
    throw Error(ErrorKind::CoherenceViolation, "level " + std::to_string(n) + " is not the inverse image of the next",
                {n});
}

struct GlueResult {
  BinRel meet;  // intersection of cum_n.p* R_n
  BinRel join;  // union of cum_n.e_! R_n
};

inline GlueResult glue_both(const DomainChain& c, const RelFamily& fam) {
  check_family_shape(c, fam);
  GlueResult g{total_rel(c.top()), empty_rel(c.top())};
  for (int n = 0; n <= c.depth; ++n) {
    g.meet.bits() &= inverse_image(c.cum[n].p, fam[n]).bits();
    g.join.bits() |= direct_image(c.cum[n].e, fam[n]).bits();
  }
  return g;
}

/// The relation on X_N presented by a coherent family. Computes both the
/// intersection of inverse images along projections and the union of direct
/// images along embeddings; they must agree.
inline BinRel glue_family(const DomainChain& c, const RelFamily& fam) {
  auto g = glue_both(c, fam);
  if (g.meet != g.join) {
    Bits diff = g.meet.bits() ^ g.join.bits();
    auto i = diff.find_first();
    const auto k = static_cast<long long>(c.top().size());
    throw Error(ErrorKind::DualMismatch,
                std::string("pair is in the ") + (g.meet.bits().test(i) ? "intersection" : "union") + " only",
                {static_cast<long long>(i) / k, static_cast<long long>(i) % k});
  }
  return g.meet;
}

}  // namespace relfix

#endif  // RELFIX_CHAIN_HPP
