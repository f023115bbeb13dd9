#ifndef RELFIX_COFE_HPP
#define RELFIX_COFE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "relfix/chain.hpp"
#include "relfix/engines.hpp"
#include "relfix/error.hpp"

namespace relfix {

/// Levels m <= n agree. Used for families that are not uniform.
inline bool levels_agree(const RelFamily& a, const RelFamily& b, int n) {
  const int top = std::min<int>(n, static_cast<int>(std::min(a.size(), b.size())) - 1);
  for (int m = 0; m <= top; ++m)
    if (a[m] != b[m]) return false;
  return true;
}

struct NEqualVerdicts {
  bool inverse_images = false;  // pi_n* R = pi_n* S
  bool morphisms = false;       // pi_n : R -> S and pi_n : S -> R
  bool levelwise = false;       // R_m = S_m for m <= n
};

/// The three characterizations on already glued relations.
inline NEqualVerdicts n_equal_verdicts(const DomainChain& c, const BinRel& R, const BinRel& S, const RelFamily& fr,
                                       const RelFamily& fs, int n) {
  n = std::clamp(n, 0, c.depth);
  const MonotoneMap& pi = c.pis[n];
  NEqualVerdicts v;
  v.inverse_images = inverse_image(pi, R) == inverse_image(pi, S);
  v.morphisms = is_rel_morphism(pi, R, S) && is_rel_morphism(pi, S, R);
  v.levelwise = levels_agree(fr, fs, n);
  return v;
}

inline bool n_equal_glued(const DomainChain& c, const BinRel& R, const BinRel& S, const RelFamily& fr,
                          const RelFamily& fs, int n) {
  auto v = n_equal_verdicts(c, R, S, fr, fs, n);
  if (v.inverse_images != v.morphisms || v.inverse_images != v.levelwise)
    throw Error(ErrorKind::CharacterizationMismatch,
                "n-equality characterizations disagree at n=" + std::to_string(n),
                {n, v.inverse_images, v.morphisms, v.levelwise});
  return v.inverse_images;
}

/// R and S are n-equal. Both families must be uniform; n above the depth
/// is clamped to the depth.
inline bool n_equal(const DomainChain& c, const RelFamily& R, const RelFamily& S, int n) {
  if (n < 0) throw Error(ErrorKind::PreconditionViolation, "n must be non-negative", {n});
  BinRel gr = glue_family(c, R);
  BinRel gs = glue_family(c, S);
  if (!check_uniform(c, gr).uniform || !check_uniform(c, gs).uniform)
    throw Error(ErrorKind::PreconditionViolation, "n_equal needs uniform families");
  return n_equal_glued(c, gr, gs, R, S, n);
}

struct OfeDistance {
  /// Greatest n <= N with n-equality.
  int n = 0;
  /// Equal at every level up to the depth; the value is then 0.
  bool truncated = false;
  double value = 1.0;
  std::string text;
};

inline OfeDistance ofe_distance(const DomainChain& c, const RelFamily& R, const RelFamily& S) {
  OfeDistance d;
  int n = 0;
  while (n + 1 <= c.depth && n_equal(c, R, S, n + 1)) ++n;
  d.n = n;
  if (n == c.depth && n_equal(c, R, S, c.depth)) {
    d.truncated = true;
    d.value = 0.0;
    d.text = "0 (at truncation depth " + std::to_string(c.depth) + ")";
  } else {
    d.value = std::ldexp(1.0, -n);
    d.text = "2^-" + std::to_string(n);
  }
  return d;
}

/// Level 0 is total; level n+1 is level n carried to X_{n+1} by inverse
/// image along the step projection.
inline RelFamily later_shift(const DomainChain& c, const RelFamily& fam) {
  if (fam.size() < 1) throw Error(ErrorKind::PreconditionViolation, "later_shift needs at least one level");
  check_family_shape(c, fam);
  RelFamily out;
  out.rels.push_back(total_rel(c.levels[0]));
  for (int n = 0; n < c.depth; ++n) out.rels.push_back(inverse_image(c.steps[n].p, fam[n]));
  return out;
}

// ---------------------------------------------------------------------------
// Cauchy sequences and limits

struct CauchySeq {
  std::vector<RelFamily> terms;
  /// modulus[n]: terms from this index on are pairwise n-equal.
  std::vector<int> modulus;
};

struct CofeLimit {
  RelFamily family;
  BinRel glued;
  /// S_i = pi_i* (glued term m(i)), i <= N.
  std::vector<BinRel> approximants;
  bool decreasing = true;
};

inline CofeLimit cofe_limit(const DomainChain& c, const CauchySeq& seq) {
  const int N = c.depth;
  const int T = static_cast<int>(seq.terms.size());
  if (T == 0) throw Error(ErrorKind::NotCauchy, "empty sequence");
  if (static_cast<int>(seq.modulus.size()) != N + 1)
    throw Error(ErrorKind::NotCauchy, "modulus must have one entry per level", {static_cast<long long>(seq.modulus.size())});
  for (int n = 0; n <= N; ++n) {
    if (seq.modulus[n] < 0 || seq.modulus[n] >= T) throw Error(ErrorKind::NotCauchy, "modulus beyond the sequence", {n, seq.modulus[n]});
    if (n > 0 && seq.modulus[n] < seq.modulus[n - 1]) throw Error(ErrorKind::NotCauchy, "modulus is not monotone", {n});
  }
  std::vector<BinRel> glued;
  for (const auto& t : seq.terms) glued.push_back(glue_family(c, t));
  for (int n = 0; n <= N; ++n)
    for (int i = seq.modulus[n]; i < T; ++i)
      for (int j = i + 1; j < T; ++j)
        if (!n_equal_glued(c, glued[i], glued[j], seq.terms[i], seq.terms[j], n))
          throw Error(ErrorKind::NotCauchy, "terms past the modulus are not n-equal", {n, i, j});

  CofeLimit out;
  for (int n = 0; n <= N; ++n) out.family.rels.push_back(seq.terms[seq.modulus[n]][n]);
  BinRel meet = total_rel(c.top());
  for (int i = 0; i <= N; ++i) {
    out.approximants.push_back(inverse_image(c.pis[i], glued[seq.modulus[i]]));
    meet.bits() &= out.approximants.back().bits();
  }
  for (int i = 0; i <= N; ++i)
    for (int j = i; j <= N; ++j) {
      const BinRel& Si = out.approximants[i];
      const BinRel& Sj = out.approximants[j];
      if (!Sj.subset_of(Si) || inverse_image(c.pis[i], Sj) != Si) out.decreasing = false;
    }
  out.glued = glue_family(c, out.family);
  if (out.glued != meet)
    throw Error(ErrorKind::InternalInvariantViolation, "limit family does not glue to the intersection of approximants");
  for (int n = 0; n <= N; ++n)
    for (int i = seq.modulus[n]; i < T; ++i)
      if (!n_equal_glued(c, out.glued, glued[i], out.family, seq.terms[i], n))
        throw Error(ErrorKind::NotCauchy, "limit is not n-equal to the tail", {n, i});
  return out;
}

// ---------------------------------------------------------------------------
// Uniform relations

/// Pairs of X_n arranged as a tree: the depth of (x, y) is the least i with
/// pi_i fixing both, and its parent is its image under pi_{depth-1}. The
/// uniform admissible relations on X_n are exactly the subtrees that
/// contain the root (bot, bot).
struct PairForest {
  int level = 0;
  std::size_t k = 0;
  std::vector<std::size_t> order;   // pair indices, parents first
  std::vector<long long> parent;    // by pair index; -1 for the root
  std::vector<int> depth;           // by pair index
};

inline PairForest pair_forest(const DomainChain& c, int level) {
  PairForest pf;
  pf.level = level;
  const auto& X = c.levels[level];
  pf.k = X.size();
  const std::size_t M = pf.k * pf.k;
  pf.parent.assign(M, -1);
  pf.depth.assign(M, 0);
  const auto& pr = c.proj[level];
  for (std::size_t i = 0; i < M; ++i) {
    auto x = static_cast<ElemId>(i / pf.k), y = static_cast<ElemId>(i % pf.k);
    int d = 0;
    while (pr[d](x) != x || pr[d](y) != y) ++d;
    pf.depth[i] = d;
    if (d > 0) pf.parent[i] = static_cast<long long>(pr[d - 1](x)) * static_cast<long long>(pf.k) + pr[d - 1](y);
  }
  pf.order.resize(M);
  for (std::size_t i = 0; i < M; ++i) pf.order[i] = i;
  std::stable_sort(pf.order.begin(), pf.order.end(), [&](std::size_t a, std::size_t b) { return pf.depth[a] < pf.depth[b]; });
  return pf;
}

/// Number of uniform admissible relations on X_level; saturates at 2^64-1.
inline std::uint64_t count_uniform_relations(const DomainChain& c, int level) {
  auto pf = pair_forest(c, level);
  const std::size_t M = pf.k * pf.k;
  std::vector<long double> ways(M, 1.0L);
  for (auto it = pf.order.rbegin(); it != pf.order.rend(); ++it)
    if (pf.parent[*it] >= 0) ways[pf.parent[*it]] *= 1.0L + ways[*it];
  long double total = ways[0];
  if (total >= 18446744073709551615.0L) return UINT64_MAX;
  return static_cast<std::uint64_t>(total + 0.5L);
}

/// Visits every uniform admissible relation on X_level.
template <class Visit>
void for_each_uniform_relation(const DomainChain& c, int level, Visit&& visit) {
  auto pf = pair_forest(c, level);
  BinRel r(c.levels[level]);
  r.insert(0, 0);
  const std::size_t M = pf.order.size();
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == M) {
      visit(static_cast<const BinRel&>(r));
      return;
    }
    const std::size_t node = pf.order[i];
    if (pf.parent[node] < 0 || !r.bits().test(static_cast<std::size_t>(pf.parent[node]))) {
      rec(i + 1);
      return;
    }
    rec(i + 1);
    r.bits().set(node);
    rec(i + 1);
    r.bits().reset(node);
  };
  rec(1);
}

/// Uniform relation on X_N: keeps the pairs of `base` with depth <= n and
/// adds random deeper subtree nodes.
template <class Rng>
BinRel random_uniform_extension(const PairForest& pf, const BinRel& base, int n, Rng& rng) {
  BinRel r(base.carrier());
  for (std::size_t node : pf.order) {
    if (pf.parent[node] < 0) {
      r.bits().set(node);
      continue;
    }
    if (!r.bits().test(static_cast<std::size_t>(pf.parent[node]))) continue;
    if (pf.depth[node] <= n) {
      if (base.bits().test(node)) r.bits().set(node);
    } else if (rng() & 1U) {
      r.bits().set(node);
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Contractiveness

using FamilyOperator = std::function<RelFamily(const RelFamily&)>;

struct ContractiveOptions {
  /// Exhaustive over all uniform families when there are at most this many.
  std::uint64_t exhaustive_limit = 1000000;
  /// For covariant functors, check the extremes of each n-class instead of
  /// falling back to sampling.
  bool allow_interval = true;
  std::size_t samples = 2000;
  std::uint64_t seed = 1;
  std::size_t max_counterexamples = 5;
};

struct ContractiveCounterexample {
  int n = 0;
  std::string detail;
};

struct ContractiveReport {
  /// "exhaustive", "interval" or "sampled".
  std::string mode;
  std::uint64_t uniform_families = 0;
  std::uint64_t checks = 0;
  std::vector<ContractiveCounterexample> counterexamples;
  bool ok() const { return counterexamples.empty(); }
};

namespace detail {
inline std::string rel_list(const BinRel& r) {
  std::string s = "{";
  bool first = true;
  for (auto [a, b] : r.pairs()) {
    s += (first ? "" : ",") + std::string("(") + std::to_string(a) + "," + std::to_string(b) + ")";
    first = false;
  }
  return s + "}";
}
}  // namespace detail

/// n-equal uniform families must have (n+1)-equal images, for n < N.
inline ContractiveReport check_contractive(const DomainChain& c, const ContractiveOptions& opt = {},
                                           FamilyOperator op = {}) {
  if (!op) op = [&c](const RelFamily& f) { return psi_step(c, f); };
  const int N = c.depth;
  ContractiveReport rep;
  rep.uniform_families = count_uniform_relations(c, N);

  auto record = [&](int n, const std::string& what) {
    if (rep.counterexamples.size() < opt.max_counterexamples) rep.counterexamples.push_back({n, what});
  };

  if (N == 0) {
    rep.mode = "exhaustive";
    return rep;
  }

  if (rep.uniform_families <= opt.exhaustive_limit) {
    rep.mode = "exhaustive";
    struct Entry {
      RelFamily fam, img;
      BinRel glued, img_glued;
    };
    std::vector<Entry> all;
    for_each_uniform_relation(c, N, [&](const BinRel& R) {
      Entry e;
      e.glued = R;
      e.fam = restrict_family(c, R);
      e.img = op(e.fam);
      e.img_glued = glue_family(c, e.img);
      all.push_back(std::move(e));
    });
    for (int n = 0; n < N; ++n) {
      std::map<std::vector<bool>, std::size_t> rep_of;
      for (std::size_t i = 0; i < all.size(); ++i) {
        const auto& bits = all[i].fam[n].bits();
        std::vector<bool> key(bits.size());
        for (std::size_t b = 0; b < bits.size(); ++b) key[b] = bits.test(b);
        auto [it, fresh] = rep_of.emplace(std::move(key), i);
        if (fresh) continue;
        const Entry& a = all[i];
        const Entry& r = all[it->second];
        ++rep.checks;
        if (!n_equal_glued(c, a.glued, r.glued, a.fam, r.fam, n))
          throw Error(ErrorKind::InternalInvariantViolation, "families with equal level n are not n-equal", {n});
        if (!n_equal_glued(c, a.img_glued, r.img_glued, a.img, r.img, n + 1))
          record(n, "R=" + detail::rel_list(a.glued) + " S=" + detail::rel_list(r.glued));
      }
    }
    return rep;
  }

  if (opt.allow_interval && is_covariant(c.F)) {
    rep.mode = "interval";
    for (int n = 0; n < N; ++n) {
      for_each_uniform_relation(c, n, [&](const BinRel& r) {
        BinRel lo = direct_image(c.cum[n].e, r);
        BinRel hi = inverse_image(c.cum[n].p, r);
        RelFamily flo = restrict_family(c, lo);
        RelFamily fhi = restrict_family(c, hi);
        if (flo[n] != r || fhi[n] != r)
          throw Error(ErrorKind::InternalInvariantViolation, "class extremes do not restrict to the class level", {n});
        ++rep.checks;
        if (!n_equal_glued(c, lo, hi, flo, fhi, n))
          throw Error(ErrorKind::InternalInvariantViolation, "class extremes are not n-equal", {n});
        RelFamily ilo = op(flo);
        RelFamily ihi = op(fhi);
        BinRel glo = glue_family(c, ilo);
        BinRel ghi = glue_family(c, ihi);
        if (!n_equal_glued(c, glo, ghi, ilo, ihi, n + 1))
          record(n, "class level " + std::to_string(n) + " relation " + detail::rel_list(r));
      });
    }
    return rep;
  }

  rep.mode = "sampled";
  std::mt19937_64 rng(opt.seed);
  auto pf = pair_forest(c, N);
  BinRel empty_base(c.top());
  for (std::size_t s = 0; s < opt.samples; ++s) {
    int n = static_cast<int>(rng() % static_cast<std::uint64_t>(N));
    BinRel R = random_uniform_extension(pf, empty_base, -1, rng);
    BinRel S = random_uniform_extension(pf, R, n, rng);
    RelFamily fr = restrict_family(c, R), fs = restrict_family(c, S);
    ++rep.checks;
    if (!n_equal_glued(c, R, S, fr, fs, n))
      throw Error(ErrorKind::InternalInvariantViolation, "sampled pair is not n-equal", {n});
    RelFamily ir = op(fr), is = op(fs);
    if (!n_equal_glued(c, glue_family(c, ir), glue_family(c, is), ir, is, n + 1))
      record(n, "R=" + detail::rel_list(R) + " S=" + detail::rel_list(S));
  }
  return rep;
}

}  // namespace relfix

#endif  // RELFIX_COFE_HPP
