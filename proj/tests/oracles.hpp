#ifndef RELFIX_TESTS_ORACLES_HPP
#define RELFIX_TESTS_ORACLES_HPP

// Brute-force reference computations. Nothing here calls into the library
// beyond reading orders and tables, so results are independent of the
// algorithms under test.

#include <cstdint>
#include <functional>
#include <set>
#include <utility>
#include <vector>

#include "relfix/relfix.hpp"

namespace oracle {

using relfix::ElemId;
using relfix::FinPoset;
using PairSet = std::set<std::pair<ElemId, ElemId>>;

inline std::vector<std::vector<bool>> order_matrix(const FinPoset& X) {
  std::vector<std::vector<bool>> m(X.size(), std::vector<bool>(X.size()));
  for (std::size_t a = 0; a < X.size(); ++a)
    for (std::size_t b = 0; b < X.size(); ++b) m[a][b] = X.leq(static_cast<ElemId>(a), static_cast<ElemId>(b));
  return m;
}

/// Every function X -> Y by odometer, filtered for monotonicity.
inline std::vector<std::vector<ElemId>> monotone_tables(const FinPoset& X, const FinPoset& Y) {
  const std::size_t n = X.size(), k = Y.size();
  std::vector<std::vector<ElemId>> out;
  std::vector<ElemId> t(n, 0);
  while (true) {
    bool mono = true;
    for (std::size_t a = 0; a < n && mono; ++a)
      for (std::size_t b = 0; b < n && mono; ++b)
        if (X.leq(static_cast<ElemId>(a), static_cast<ElemId>(b)) && !Y.leq(t[a], t[b])) mono = false;
    if (mono) out.push_back(t);
    std::size_t i = 0;
    while (i < n && static_cast<std::size_t>(++t[i]) == k) t[i++] = 0;
    if (i == n) break;
  }
  return out;
}

inline std::uint64_t binomial(int n, int k) {
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

inline PairSet pairs_of(const relfix::BinRel& r) {
  PairSet s;
  for (auto p : r.pairs()) s.insert(p);
  return s;
}

inline PairSet inverse_image(const std::vector<ElemId>& f, const PairSet& S) {
  PairSet out;
  for (std::size_t a = 0; a < f.size(); ++a)
    for (std::size_t b = 0; b < f.size(); ++b)
      if (S.count({f[a], f[b]})) out.insert({static_cast<ElemId>(a), static_cast<ElemId>(b)});
  return out;
}

/// Image of R along f, together with the bottom pair of the codomain.
inline PairSet direct_image(const std::vector<ElemId>& f, const PairSet& R) {
  PairSet out{{0, 0}};
  for (auto [a, b] : R) out.insert({f[a], f[b]});
  return out;
}

/// e/p laws straight from the definition.
inline bool ep_laws(const FinPoset& X, const FinPoset& Y, const std::vector<ElemId>& e, const std::vector<ElemId>& p) {
  for (std::size_t x = 0; x < X.size(); ++x)
    if (p[e[x]] != static_cast<ElemId>(x)) return false;
  for (std::size_t y = 0; y < Y.size(); ++y)
    if (!Y.leq(e[p[y]], static_cast<ElemId>(y))) return false;
  return true;
}

/// Uniform admissible relations on X_level, by testing every admissible
/// relation against every truncation projection.
inline std::uint64_t count_uniform_brute(const relfix::DomainChain& c, int level) {
  const FinPoset& X = c.levels[level];
  const std::size_t k = X.size(), M = k * k;
  std::uint64_t count = 0;
  for (std::uint64_t mask = 0; mask < (1ull << (M - 1)); ++mask) {
    const std::uint64_t bits = (mask << 1) | 1u;
    bool ok = true;
    for (int i = 0; i <= level && ok; ++i) {
      const auto& pi = c.proj[level][i];
      for (std::size_t q = 0; q < M && ok; ++q)
        if (bits >> q & 1u) {
          const std::size_t a = static_cast<std::size_t>(pi(static_cast<ElemId>(q / k)));
          const std::size_t b = static_cast<std::size_t>(pi(static_cast<ElemId>(q % k)));
          if (!(bits >> (a * k + b) & 1u)) ok = false;
        }
    }
    if (ok) ++count;
  }
  return count;
}

}  // namespace oracle

#endif  // RELFIX_TESTS_ORACLES_HPP
