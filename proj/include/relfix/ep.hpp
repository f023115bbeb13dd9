#ifndef RELFIX_EP_HPP
#define RELFIX_EP_HPP

#include <string>
#include <vector>

#include "relfix/error.hpp"
#include "relfix/poset.hpp"

namespace relfix {

/// Embedding-projection pair X -> Y: p . e = id_X and e . p <= id_Y.
struct EpPair {
  MonotoneMap e;  // X -> Y
  MonotoneMap p;  // Y -> X

  const FinPoset& source() const { return e.dom(); }
  const FinPoset& target() const { return e.cod(); }
  /// The retraction e . p on the target.
  MonotoneMap retraction() const { return compose(e, p); }

  bool operator==(const EpPair& o) const { return e == o.e && p == o.p; }
};

namespace detail {

/// Returns a description of the first failed law, or an empty string.
inline std::string ep_law_failure(const MonotoneMap& e, const MonotoneMap& p,
                                  std::vector<long long>* witness) {
  const FinPoset& X = e.dom();
  const FinPoset& Y = e.cod();
  for (std::size_t x = 0; x < X.size(); ++x)
    if (p(e(static_cast<ElemId>(x))) != static_cast<ElemId>(x)) {
      if (witness) *witness = {static_cast<long long>(x)};
      return "p . e = id fails";
    }
  for (std::size_t y = 0; y < Y.size(); ++y)
    if (!Y.leq(e(p(static_cast<ElemId>(y))), static_cast<ElemId>(y))) {
      if (witness) *witness = {static_cast<long long>(y)};
      return "e . p <= id fails";
    }
  return {};
}

}  // namespace detail

/// Checks both laws and packages the pair.
inline EpPair verify_ep_pair(const MonotoneMap& e, const MonotoneMap& p) {
  if (!(e.cod() == p.dom()) || !(p.cod() == e.dom()))
    throw Error(ErrorKind::TypeMismatch, "e and p are not opposite maps");
  std::vector<long long> w;
  std::string failure = detail::ep_law_failure(e, p, &w);
  if (!failure.empty()) throw Error(ErrorKind::NotEp, failure, w);
  return EpPair{e, p};
}

inline bool is_ep_pair(const MonotoneMap& e, const MonotoneMap& p) {
  if (!(e.cod() == p.dom()) || !(p.cod() == e.dom())) return false;
  return detail::ep_law_failure(e, p, nullptr).empty();
}

/// Every monotone p : Y -> X making (e, p) an e/p pair. At most one exists;
/// the search is exhaustive and intended for small posets.
inline std::vector<MonotoneMap> all_projections_of(const MonotoneMap& e) {
  std::vector<MonotoneMap> found;
  const FinPoset& X = e.dom();
  const FinPoset& Y = e.cod();
  for_each_monotone_table(Y, X, [&](const std::vector<ElemId>& t) {
    auto p = MonotoneMap::unchecked(Y, X, t);
    if (detail::ep_law_failure(e, p, nullptr).empty()) found.push_back(p);
    return true;
  });
  return found;
}

/// The unique projection for an embedding. Tries the greatest-preimage
/// formula p(y) = max{x | e(x) <= y} first and falls back to exhaustive
/// search.
inline MonotoneMap projection_of(const MonotoneMap& e) {
  const FinPoset& X = e.dom();
  const FinPoset& Y = e.cod();
  std::vector<ElemId> table(Y.size(), -1);
  bool formula_ok = true;
  for (std::size_t y = 0; y < Y.size() && formula_ok; ++y) {
    Bits below(X.size());
    for (std::size_t x = 0; x < X.size(); ++x)
      if (Y.leq(e(static_cast<ElemId>(x)), static_cast<ElemId>(y))) below.set(x);
    for (auto x = below.find_first(); x != Bits::npos; x = below.find_next(x))
      if (below.is_subset_of(X.down(static_cast<ElemId>(x)))) {
        table[y] = static_cast<ElemId>(x);
        break;
      }
    formula_ok = table[y] >= 0;
  }
  if (formula_ok) {
    auto p = MonotoneMap::unchecked(Y, X, table);
    bool monotone = true;
    for (std::size_t a = 0; a < Y.size() && monotone; ++a)
      for (std::size_t b = 0; b < Y.size() && monotone; ++b)
        if (Y.leq(static_cast<ElemId>(a), static_cast<ElemId>(b)) && !X.leq(table[a], table[b]))
          monotone = false;
    if (monotone && detail::ep_law_failure(e, p, nullptr).empty()) return p;
  }
  auto found = all_projections_of(e);
  if (found.empty()) throw Error(ErrorKind::NotAnEmbedding, "no projection exists for this map");
  if (found.size() > 1)
    throw Error(ErrorKind::InternalInvariantViolation,
                "more than one projection found for an embedding",
                {static_cast<long long>(found.size())});
  return found.front();
}

inline EpPair identity_ep(const FinPoset& X) { return EpPair{identity_map(X), identity_map(X)}; }

/// The pair 1 -> Y with e = bottom and p the unique map to the point.
inline EpPair bottom_ep(const FinPoset& Y) {
  const FinPoset one = one_poset();
  return verify_ep_pair(bottom_map(one, Y), constant_map(Y, one, 0));
}

/// g after f: (g.e . f.e, f.p . g.p), re-verified.
inline EpPair compose_ep(const EpPair& f, const EpPair& g) {
  if (!(f.target() == g.source()))
    throw Error(ErrorKind::TypeMismatch, "compose_ep: target of the first pair is not the source of the second");
  return verify_ep_pair(compose(g.e, f.e), compose(f.p, g.p));
}

}  // namespace relfix

#endif  // RELFIX_EP_HPP
