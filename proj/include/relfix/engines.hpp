#ifndef RELFIX_ENGINES_HPP
#define RELFIX_ENGINES_HPP

#include <optional>
#include <string>
#include <vector>

#include "relfix/chain.hpp"
#include "relfix/error.hpp"
#include "relfix/functor.hpp"

namespace relfix {

/// Psi(R)_0 = total on 1, Psi(R)_{n+1} = F(R_n, R_n).
inline RelFamily psi_step(const DomainChain& c, const RelFamily& fam) {
  check_family_shape(c, fam);
  RelFamily out;
  out.rels.push_back(total_rel(c.levels[0]));
  for (int n = 0; n < c.depth; ++n) out.rels.push_back(eval_rel_on(c.F, fam[n], fam[n], c.levels[n + 1]));
  return out;
}

/// Element of L = R^op x R. Ordered by neg decreasing and pos increasing.
struct RelPair {
  RelFamily neg, pos;
  bool operator==(const RelPair& o) const { return neg == o.neg && pos == o.pos; }
  bool operator!=(const RelPair& o) const { return !(*this == o); }
};

inline bool relpair_leq(const RelPair& a, const RelPair& b) {
  for (std::size_t n = 0; n < a.pos.size(); ++n)
    if (!b.neg[n].subset_of(a.neg[n]) || !a.pos[n].subset_of(b.pos[n])) return false;
  return true;
}

/// (neg, pos) -> (F(pos, neg), F(neg, pos)) levelwise.
inline RelPair psi_pair_step(const DomainChain& c, const RelPair& x) {
  check_family_shape(c, x.neg);
  check_family_shape(c, x.pos);
  RelPair out;
  out.neg.rels.push_back(total_rel(c.levels[0]));
  out.pos.rels.push_back(total_rel(c.levels[0]));
  for (int n = 0; n < c.depth; ++n) {
    out.neg.rels.push_back(eval_rel_on(c.F, x.pos[n], x.neg[n], c.levels[n + 1]));
    out.pos.rels.push_back(eval_rel_on(c.F, x.neg[n], x.pos[n], c.levels[n + 1]));
  }
  return out;
}

inline int iteration_cap(const DomainChain& c) { return c.depth + 4; }

struct KtResult {
  RelPair fixpoint;
  /// k with Psi^k(bottom) = Psi^{k+1}(bottom), k minimal.
  int iterations = 0;
  bool ascending = true;
};

/// Least fixed point of psi_pair_step from (total family, {(bot,bot)} family).
inline KtResult solve_knaster_tarski(const DomainChain& c) {
  KtResult r;
  RelPair x{total_family(c), bottom_family(c)};
  for (int k = 0;; ++k) {
    if (k > iteration_cap(c))
      throw Error(ErrorKind::InternalInvariantViolation, "Knaster-Tarski iteration exceeded its cap", {k});
    RelPair y = psi_pair_step(c, x);
    if (y == x) {
      r.iterations = k;
      break;
    }
    if (!relpair_leq(x, y)) r.ascending = false;
    x = std::move(y);
  }
  for (int n = 0; n <= c.depth; ++n)
    if (x.neg[n] != x.pos[n]) {
      Bits diff = x.neg[n].bits() ^ x.pos[n].bits();
      auto i = diff.find_first();
      const auto k = static_cast<long long>(c.levels[n].size());
      throw Error(ErrorKind::NegPosMismatch, "negative and positive fixed points differ",
                  {n, static_cast<long long>(i) / k, static_cast<long long>(i) % k});
    }
  r.fixpoint = std::move(x);
  return r;
}

/// R_0 = total on 1, R_{n+1} = F(R_n, R_n); coherence is asserted.
inline RelFamily solve_kleene(const DomainChain& c) {
  RelFamily f;
  f.rels.push_back(total_rel(c.levels[0]));
  for (int n = 0; n < c.depth; ++n) f.rels.push_back(eval_rel_on(c.F, f[n], f[n], c.levels[n + 1]));
  require_coherent(c, f);
  return f;
}

struct BanachResult {
  RelFamily fixpoint;
  /// stabilization[n]: first iterate index from which level n never changes.
  std::vector<int> stabilization;
  /// Number of applications until the iterate repeated.
  int iterations = 0;
  /// All iterates, starting with the seed family.
  std::vector<RelFamily> iterates;
};

/// Iterates psi_step from `start` (the total family by default).
inline BanachResult solve_banach(const DomainChain& c, std::optional<RelFamily> start = std::nullopt) {
  BanachResult r;
  r.iterates.push_back(start ? *start : total_family(c));
  for (int k = 0;; ++k) {
    if (k > iteration_cap(c))
      throw Error(ErrorKind::NotContractive, "Banach iteration exceeded its cap", {k});
    RelFamily y = psi_step(c, r.iterates.back());
    if (y == r.iterates.back()) {
      r.iterations = k;
      break;
    }
    r.iterates.push_back(std::move(y));
  }
  r.fixpoint = r.iterates.back();
  const int K = static_cast<int>(r.iterates.size());
  std::vector<long long> late;
  for (int n = 0; n <= c.depth; ++n) {
    int s = K - 1;
    while (s > 0 && r.iterates[s - 1][n] == r.fixpoint[n]) --s;
    r.stabilization.push_back(s);
    if (s > n + 1) late.push_back(n);
  }
  if (!late.empty()) throw Error(ErrorKind::NotContractive, "levels stabilized later than n+1 iterations", late);
  // n-Cauchy: iterates i, j >= n agree on levels <= n.
  for (int n = 0; n <= c.depth; ++n)
    for (int i = n; i < K; ++i)
      for (int m = 0; m <= n; ++m)
        if (r.iterates[i][m] != r.fixpoint[m])
          throw Error(ErrorKind::NotContractive, "iterate sequence is not Cauchy with modulus n", {n, i, m});
  return r;
}

struct UniformityResult {
  bool uniform = true;
  int level = -1;  // failing i
  ElemId x = -1, y = -1;
};

/// pi_i : R -> R for every i <= N.
inline UniformityResult check_uniform(const DomainChain& c, const BinRel& R) {
  for (int i = 0; i <= c.depth; ++i)
    for (auto [x, y] : R.pairs())
      if (!R.contains(c.pis[i](x), c.pis[i](y))) return {false, i, x, y};
  return {};
}

inline UniformityResult check_uniform(const DomainChain& c, const RelFamily& fam) {
  return check_uniform(c, glue_family(c, fam));
}

struct MethodsReport {
  KtResult kt;
  RelFamily kleene;
  BanachResult banach;
  BanachResult banach_from_bottom;
  BinRel glued;
  bool agreement = true;
  bool unfolding = true;
  bool two_starts_agree = true;
  UniformityResult uniformity;
};

namespace detail {
inline void require_same(const DomainChain& c, const RelFamily& a, const RelFamily& b, const std::string& what) {
  for (int n = 0; n <= c.depth; ++n)
    if (a[n] != b[n]) {
      Bits diff = a[n].bits() ^ b[n].bits();
      std::vector<long long> w{n};
      const auto k = static_cast<long long>(c.levels[n].size());
      for (auto i = diff.find_first(); i != Bits::npos; i = diff.find_next(i)) {
        w.push_back(static_cast<long long>(i) / k);
        w.push_back(static_cast<long long>(i) % k);
      }
      throw Error(ErrorKind::MethodDisagreement, what + " differ at level " + std::to_string(n), w);
    }
}
}  // namespace detail

/// Runs the three engines, requires identical families and gluings, and
/// checks the unfolding equation and uniformity of the result.
inline MethodsReport compare_methods(const DomainChain& c) {
  MethodsReport rep;
  rep.kt = solve_knaster_tarski(c);
  rep.kleene = solve_kleene(c);
  rep.banach = solve_banach(c);
  rep.banach_from_bottom = solve_banach(c, bottom_family(c));
  detail::require_same(c, rep.kt.fixpoint.pos, rep.kleene, "knaster-tarski and kleene");
  detail::require_same(c, rep.kleene, rep.banach.fixpoint, "kleene and banach");
  detail::require_same(c, rep.banach.fixpoint, rep.banach_from_bottom.fixpoint, "banach from top and from bottom");
  rep.glued = glue_family(c, rep.kleene);
  if (glue_family(c, rep.kt.fixpoint.pos) != rep.glued || glue_family(c, rep.banach.fixpoint) != rep.glued)
    throw Error(ErrorKind::MethodDisagreement, "gluings differ");
  for (int n = 0; n < c.depth; ++n)
    if (eval_rel_on(c.F, rep.kleene[n], rep.kleene[n], c.levels[n + 1]) != rep.kleene[n + 1])
      rep.unfolding = false;
  rep.uniformity = check_uniform(c, rep.glued);
  return rep;
}

}  // namespace relfix

#endif  // RELFIX_ENGINES_HPP
