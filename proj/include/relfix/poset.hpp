#ifndef RELFIX_POSET_HPP
#define RELFIX_POSET_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "relfix/error.hpp"

namespace relfix {

using ElemId = int;
using Bits = boost::dynamic_bitset<std::uint64_t>;

namespace detail {
struct PosetData;
}
struct PosetShape;

/// A finite pointed partial order in canonical form.
///
/// Canonical form: element ids form a linear extension of the order, sorted
/// by (height above bottom, size of down-set, size of up-set) with ties kept
/// in construction order. The bottom is always element 0.
///
/// Values are immutable and share their storage; copies are cheap.
class FinPoset {
 public:
  /// The one-point poset.
  FinPoset();

  std::size_t size() const;
  ElemId bottom() const { return 0; }
  bool leq(ElemId a, ElemId b) const;
  /// {b | a <= b}
  const Bits& up(ElemId a) const;
  /// {b | b <= a}
  const Bits& down(ElemId a) const;
  int height(ElemId a) const;
  const std::string& label() const;
  const PosetShape& shape() const;

  /// Same order matrix (canonical forms identical).
  bool operator==(const FinPoset& other) const;
  bool operator!=(const FinPoset& other) const { return !(*this == other); }
  bool same_object(const FinPoset& other) const { return d_ == other.d_; }

  static FinPoset make(std::vector<Bits> up, PosetShape shape, std::string label);

 private:
  explicit FinPoset(std::shared_ptr<const detail::PosetData> d) : d_(std::move(d)) {}
  std::shared_ptr<const detail::PosetData> d_;
};

/// How the elements of a constructed poset decompose. Tables are indexed by
/// canonical element ids of the poset that owns the shape.
namespace shape {
struct Atomic {
  /// For literal posets: source id -> canonical id. Empty for the one-point
  /// poset and other generated atoms.
  std::vector<ElemId> canonical_of_source;
};
struct Lifted {
  FinPoset inner;
  std::vector<ElemId> inner_of;      // -1 for the fresh bottom
  std::vector<ElemId> elem_of_inner;
};
struct Product {
  FinPoset first, second;
  std::vector<std::pair<ElemId, ElemId>> components;
  std::vector<ElemId> elem_of;  // a * |second| + b
  ElemId at(ElemId a, ElemId b) const {
    return elem_of[static_cast<std::size_t>(a) * second.size() + static_cast<std::size_t>(b)];
  }
};
struct SeparatedSum {
  enum Side : std::uint8_t { Bottom, Left, Right };
  FinPoset left, right;
  std::vector<std::pair<Side, ElemId>> tag;
  std::vector<ElemId> elem_of_left, elem_of_right;
};
struct FunctionSpace {
  FinPoset dom, cod;
  std::vector<std::vector<ElemId>> tables;
  std::map<std::vector<ElemId>, ElemId> index;
};
}  // namespace shape

struct PosetShape {
  std::variant<shape::Atomic, shape::Lifted, shape::Product, shape::SeparatedSum,
               shape::FunctionSpace>
      node;
};

namespace detail {
struct PosetData {
  std::vector<Bits> up;
  std::vector<Bits> down;
  std::vector<int> height;
  std::string label;
  PosetShape shape;
  std::size_t fingerprint = 0;
};

inline std::vector<Bits> transpose(const std::vector<Bits>& up) {
  const std::size_t n = up.size();
  std::vector<Bits> down(n, Bits(n));
  for (std::size_t a = 0; a < n; ++a)
    for (auto b = up[a].find_first(); b != Bits::npos; b = up[a].find_next(b)) down[b].set(a);
  return down;
}

/// raw id -> canonical id. `up` must already be a partial order.
inline std::vector<ElemId> canonical_permutation(const std::vector<Bits>& up) {
  const std::size_t n = up.size();
  const auto down = transpose(up);
  std::vector<ElemId> topo(n);
  std::iota(topo.begin(), topo.end(), 0);
  std::stable_sort(topo.begin(), topo.end(),
                   [&](ElemId a, ElemId b) { return down[a].count() < down[b].count(); });
  std::vector<int> height(n, 0);
  for (ElemId y : topo) {
    int h = 0;
    for (auto x = down[y].find_first(); x != Bits::npos; x = down[y].find_next(x))
      if (static_cast<ElemId>(x) != y) h = std::max(h, height[x] + 1);
    height[y] = h;
  }
  std::vector<ElemId> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](ElemId a, ElemId b) {
    if (height[a] != height[b]) return height[a] < height[b];
    if (down[a].count() != down[b].count()) return down[a].count() < down[b].count();
    return up[a].count() < up[b].count();
  });
  std::vector<ElemId> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[order[i]] = static_cast<ElemId>(i);
  return perm;
}

inline std::vector<Bits> permute_order(const std::vector<Bits>& up, const std::vector<ElemId>& perm) {
  const std::size_t n = up.size();
  std::vector<Bits> out(n, Bits(n));
  for (std::size_t a = 0; a < n; ++a)
    for (auto b = up[a].find_first(); b != Bits::npos; b = up[a].find_next(b))
      out[perm[a]].set(perm[b]);
  return out;
}

template <class T>
std::vector<T> permute_table(const std::vector<T>& raw, const std::vector<ElemId>& perm) {
  std::vector<T> out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) out[perm[i]] = raw[i];
  return out;
}

inline void check_caps(std::size_t n, const Caps& caps, const std::string& what) {
  if (n > caps.max_elements)
    throw Error(ErrorKind::SizeCapExceeded,
                what + " has " + std::to_string(n) + " elements, cap is " +
                    std::to_string(caps.max_elements),
                {static_cast<long long>(n)});
  if (n * n > caps.max_pairs)
    throw Error(ErrorKind::SizeCapExceeded,
                what + " needs " + std::to_string(n * n) + " relation pairs, cap is " +
                    std::to_string(caps.max_pairs),
                {static_cast<long long>(n)});
}
}  // namespace detail

inline FinPoset FinPoset::make(std::vector<Bits> up, PosetShape shape, std::string label) {
  auto d = std::make_shared<detail::PosetData>();
  const std::size_t n = up.size();
  d->down = detail::transpose(up);
  d->height.assign(n, 0);
  for (std::size_t y = 0; y < n; ++y) {
    int h = 0;
    for (auto x = d->down[y].find_first(); x != Bits::npos && x < y; x = d->down[y].find_next(x))
      h = std::max(h, d->height[x] + 1);
    d->height[y] = h;
  }
  std::size_t fp = n * 0x9e3779b97f4a7c15ULL;
  for (const auto& row : up) {
    std::vector<std::uint64_t> blocks;
    boost::to_block_range(row, std::back_inserter(blocks));
    for (auto b : blocks) fp = (fp ^ b) * 0x100000001b3ULL;
  }
  d->fingerprint = fp;
  d->up = std::move(up);
  d->shape = std::move(shape);
  d->label = std::move(label);
  return FinPoset(std::move(d));
}

inline FinPoset::FinPoset() {
  static const FinPoset one = [] {
    std::vector<Bits> up(1, Bits(1));
    up[0].set(0);
    return make(std::move(up), PosetShape{shape::Atomic{}}, "one");
  }();
  d_ = one.d_;
}

inline std::size_t FinPoset::size() const { return d_->up.size(); }
inline bool FinPoset::leq(ElemId a, ElemId b) const { return d_->up[a].test(b); }
inline const Bits& FinPoset::up(ElemId a) const { return d_->up[a]; }
inline const Bits& FinPoset::down(ElemId a) const { return d_->down[a]; }
inline int FinPoset::height(ElemId a) const { return d_->height[a]; }
inline const std::string& FinPoset::label() const { return d_->label; }
inline const PosetShape& FinPoset::shape() const { return d_->shape; }
inline bool FinPoset::operator==(const FinPoset& other) const {
  if (d_ == other.d_) return true;
  return d_->fingerprint == other.d_->fingerprint && d_->up == other.d_->up;
}

/// Unvalidated poset data, as written by a user: element count, generating
/// order pairs (i <= j) and the claimed bottom.
struct RawPoset {
  int elements = 1;
  std::vector<std::pair<int, int>> le;
  int bottom = 0;
  std::string label;
};

/// Verifies reflexivity, antisymmetry and transitivity of an explicit order
/// matrix (rows are up-sets). O(k^3).
inline void check_partial_order(const std::vector<Bits>& up) {
  const std::size_t n = up.size();
  for (std::size_t a = 0; a < n; ++a) {
    if (!up[a].test(a))
      throw Error(ErrorKind::NotAPartialOrder, "reflexivity fails",
                  {static_cast<long long>(a), static_cast<long long>(a)});
    for (auto b = up[a].find_first(); b != Bits::npos; b = up[a].find_next(b)) {
      if (b != a && up[b].test(a))
        throw Error(ErrorKind::NotAPartialOrder, "antisymmetry fails",
                    {static_cast<long long>(std::min<std::size_t>(a, b)),
                     static_cast<long long>(std::max<std::size_t>(a, b))});
      if (!up[b].is_subset_of(up[a])) {
        auto c = (up[b] - up[a]).find_first();
        throw Error(ErrorKind::NotAPartialOrder, "transitivity fails",
                    {static_cast<long long>(a), static_cast<long long>(b), static_cast<long long>(c)});
      }
    }
  }
}

/// Builds the canonical poset from raw data. The generating pairs are closed
/// reflexively and transitively; a cycle is reported as an antisymmetry
/// failure on the smallest offending pair.
inline FinPoset validate_poset(const RawPoset& raw) {
  if (raw.elements < 1)
    throw Error(ErrorKind::NotAPartialOrder, "a pointed poset needs at least one element");
  const auto n = static_cast<std::size_t>(raw.elements);
  std::vector<Bits> up(n, Bits(n));
  for (std::size_t i = 0; i < n; ++i) up[i].set(i);
  for (auto [a, b] : raw.le) {
    if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= n || static_cast<std::size_t>(b) >= n)
      throw Error(ErrorKind::NotAPartialOrder, "order pair mentions an unknown element", {a, b});
    up[a].set(b);
  }
  // Warshall closure on rows.
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (up[i].test(k)) up[i] |= up[k];
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (up[a].test(b) && up[b].test(a))
        throw Error(ErrorKind::NotAPartialOrder, "antisymmetry fails",
                    {static_cast<long long>(a), static_cast<long long>(b)});
  if (raw.bottom < 0 || static_cast<std::size_t>(raw.bottom) >= n)
    throw Error(ErrorKind::NoLeastElement, "claimed bottom is not an element", {raw.bottom});
  if (!up[raw.bottom].all()) {
    auto w = (~up[raw.bottom]).find_first();
    throw Error(ErrorKind::NoLeastElement, "element is not above the claimed bottom",
                {static_cast<long long>(w)});
  }
  check_partial_order(up);
  auto perm = detail::canonical_permutation(up);
  return FinPoset::make(detail::permute_order(up, perm), PosetShape{shape::Atomic{perm}},
                        raw.label);
}

inline FinPoset one_poset() { return FinPoset(); }

/// 0 < 1 < ... < n-1.
inline FinPoset chain_poset(int n) {
  RawPoset raw{n, {}, 0, "chain(" + std::to_string(n) + ")"};
  for (int i = 0; i + 1 < n; ++i) raw.le.emplace_back(i, i + 1);
  return validate_poset(raw);
}

/// Canonicalizes an existing poset by rebuilding its order. Returns a poset
/// with identical order matrix when the input is already canonical.
inline FinPoset canonicalize(const FinPoset& x) {
  std::vector<Bits> up(x.size());
  for (std::size_t a = 0; a < x.size(); ++a) up[a] = x.up(static_cast<ElemId>(a));
  auto perm = detail::canonical_permutation(up);
  return FinPoset::make(detail::permute_order(up, perm), PosetShape{shape::Atomic{perm}},
                        x.label());
}

// ---------------------------------------------------------------------------
// Monotone maps

class MonotoneMap {
 public:
  MonotoneMap() = default;

  /// No monotonicity check; use monotone_map() for untrusted tables.
  static MonotoneMap unchecked(FinPoset dom, FinPoset cod, std::vector<ElemId> table) {
    MonotoneMap m;
    m.dom_ = std::move(dom);
    m.cod_ = std::move(cod);
    m.table_ = std::move(table);
    return m;
  }

  const FinPoset& dom() const { return dom_; }
  const FinPoset& cod() const { return cod_; }
  const std::vector<ElemId>& table() const { return table_; }
  ElemId operator()(ElemId x) const { return table_[x]; }

  bool operator==(const MonotoneMap& o) const {
    return table_ == o.table_ && dom_ == o.dom_ && cod_ == o.cod_;
  }
  bool operator!=(const MonotoneMap& o) const { return !(*this == o); }

 private:
  FinPoset dom_, cod_;
  std::vector<ElemId> table_;
};

inline MonotoneMap monotone_map(const FinPoset& dom, const FinPoset& cod, std::vector<ElemId> table) {
  if (table.size() != dom.size())
    throw Error(ErrorKind::TypeMismatch, "table has " + std::to_string(table.size()) +
                                             " entries for a domain of " + std::to_string(dom.size()));
  for (std::size_t x = 0; x < table.size(); ++x)
    if (table[x] < 0 || static_cast<std::size_t>(table[x]) >= cod.size())
      throw Error(ErrorKind::TypeMismatch, "table entry outside the codomain",
                  {static_cast<long long>(x), table[x]});
  for (std::size_t x = 0; x < dom.size(); ++x) {
    const auto& ups = dom.up(static_cast<ElemId>(x));
    for (auto y = ups.find_first(); y != Bits::npos; y = ups.find_next(y))
      if (!cod.leq(table[x], table[y]))
        throw Error(ErrorKind::NotMonotone, "x <= y but f(x), f(y) are unordered",
                    {static_cast<long long>(x), static_cast<long long>(y)});
  }
  return MonotoneMap::unchecked(dom, cod, std::move(table));
}

inline MonotoneMap identity_map(const FinPoset& x) {
  std::vector<ElemId> t(x.size());
  std::iota(t.begin(), t.end(), 0);
  return MonotoneMap::unchecked(x, x, std::move(t));
}

inline MonotoneMap constant_map(const FinPoset& dom, const FinPoset& cod, ElemId value) {
  return MonotoneMap::unchecked(dom, cod, std::vector<ElemId>(dom.size(), value));
}

inline MonotoneMap bottom_map(const FinPoset& dom, const FinPoset& cod) {
  return constant_map(dom, cod, cod.bottom());
}

/// g . f
inline MonotoneMap compose(const MonotoneMap& g, const MonotoneMap& f) {
  if (!(f.cod() == g.dom()))
    throw Error(ErrorKind::TypeMismatch, "compose: codomain of f is not the domain of g");
  std::vector<ElemId> t(f.dom().size());
  for (std::size_t x = 0; x < t.size(); ++x) t[x] = g(f(static_cast<ElemId>(x)));
  return MonotoneMap::unchecked(f.dom(), g.cod(), std::move(t));
}

/// Pointwise order f <= g.
inline bool pointwise_leq(const MonotoneMap& f, const MonotoneMap& g) {
  if (!(f.dom() == g.dom()) || !(f.cod() == g.cod()))
    throw Error(ErrorKind::TypeMismatch, "pointwise_leq on maps of different types");
  for (std::size_t x = 0; x < f.dom().size(); ++x)
    if (!f.cod().leq(f(static_cast<ElemId>(x)), g(static_cast<ElemId>(x)))) return false;
  return true;
}

inline bool is_idempotent(const MonotoneMap& p) {
  if (!(p.dom() == p.cod())) return false;
  for (std::size_t x = 0; x < p.dom().size(); ++x)
    if (p(p(static_cast<ElemId>(x))) != p(static_cast<ElemId>(x))) return false;
  return true;
}

/// Lower covers of every element (Hasse edges pointing down).
inline std::vector<std::vector<ElemId>> lower_covers(const FinPoset& x) {
  const std::size_t n = x.size();
  std::vector<std::vector<ElemId>> covers(n);
  for (std::size_t b = 0; b < n; ++b) {
    Bits strict = x.down(static_cast<ElemId>(b));
    strict.reset(b);
    Bits reach(n);
    for (auto a = strict.find_first(); a != Bits::npos; a = strict.find_next(a)) {
      Bits below = x.down(static_cast<ElemId>(a));
      below.reset(a);
      reach |= below;
    }
    Bits cov = strict - reach;
    for (auto a = cov.find_first(); a != Bits::npos; a = cov.find_next(a))
      covers[b].push_back(static_cast<ElemId>(a));
  }
  return covers;
}

/// Calls `visit(table)` for every monotone map X -> Y in lexicographic
/// order of tables. `allow(x, y)` can prune candidate images. Enumeration
/// stops early when `visit` returns false.
template <class Visit, class Allow>
void for_each_monotone_table(const FinPoset& X, const FinPoset& Y, Visit&& visit, Allow&& allow) {
  const std::size_t n = X.size();
  const auto covers = lower_covers(X);
  std::vector<ElemId> table(n, 0);
  std::vector<Bits> candidates(n);
  Bits everything(Y.size());
  everything.set();
  bool stop = false;
  // Canonical ids are a linear extension: lower covers of x come first.
  std::function<void(std::size_t)> rec = [&](std::size_t x) {
    if (stop) return;
    if (x == n) {
      if (!visit(static_cast<const std::vector<ElemId>&>(table))) stop = true;
      return;
    }
    Bits cand = everything;
    for (ElemId c : covers[x]) cand &= Y.up(table[c]);
    for (auto y = cand.find_first(); y != Bits::npos && !stop; y = cand.find_next(y)) {
      if (!allow(static_cast<ElemId>(x), static_cast<ElemId>(y))) continue;
      table[x] = static_cast<ElemId>(y);
      rec(x + 1);
    }
  };
  rec(0);
}

template <class Visit>
void for_each_monotone_table(const FinPoset& X, const FinPoset& Y, Visit&& visit) {
  for_each_monotone_table(X, Y, std::forward<Visit>(visit), [](ElemId, ElemId) { return true; });
}

inline std::vector<MonotoneMap> all_monotone_maps(const FinPoset& X, const FinPoset& Y) {
  std::vector<MonotoneMap> out;
  for_each_monotone_table(X, Y, [&](const std::vector<ElemId>& t) {
    out.push_back(MonotoneMap::unchecked(X, Y, t));
    return true;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Object constructions

/// Y^X: all monotone maps ordered pointwise; bottom is the constant-bottom map.
inline FinPoset hom_poset(const FinPoset& X, const FinPoset& Y, const Caps& caps = {}) {
  std::vector<std::vector<ElemId>> tables;
  for_each_monotone_table(X, Y, [&](const std::vector<ElemId>& t) {
    tables.push_back(t);
    if (tables.size() > caps.max_elements)
      throw Error(ErrorKind::SizeCapExceeded,
                  "function space exceeds " + std::to_string(caps.max_elements) + " elements",
                  {static_cast<long long>(tables.size())});
    return true;
  });
  const std::size_t n = tables.size();
  detail::check_caps(n, caps, "function space");
  std::vector<Bits> up(n, Bits(n));
  for (std::size_t f = 0; f < n; ++f)
    for (std::size_t g = 0; g < n; ++g) {
      bool le = true;
      for (std::size_t x = 0; x < X.size() && le; ++x) le = Y.leq(tables[f][x], tables[g][x]);
      if (le) up[f].set(g);
    }
  auto perm = detail::canonical_permutation(up);
  shape::FunctionSpace fs{X, Y, detail::permute_table(tables, perm), {}};
  for (std::size_t i = 0; i < n; ++i) fs.index.emplace(fs.tables[i], static_cast<ElemId>(i));
  return FinPoset::make(detail::permute_order(up, perm), PosetShape{std::move(fs)},
                        "[" + X.label() + " -> " + Y.label() + "]");
}

/// Fresh bottom strictly below a copy of X.
inline FinPoset lift(const FinPoset& X, const Caps& caps = {}) {
  const std::size_t n = X.size() + 1;
  detail::check_caps(n, caps, "lift");
  std::vector<Bits> up(n, Bits(n));
  up[0].set();
  for (std::size_t a = 0; a < X.size(); ++a)
    for (auto b = X.up(static_cast<ElemId>(a)).find_first(); b != Bits::npos;
         b = X.up(static_cast<ElemId>(a)).find_next(b))
      up[a + 1].set(b + 1);
  std::vector<ElemId> inner_of(n, -1);
  for (std::size_t a = 0; a < X.size(); ++a) inner_of[a + 1] = static_cast<ElemId>(a);
  auto perm = detail::canonical_permutation(up);
  shape::Lifted lf{X, detail::permute_table(inner_of, perm), std::vector<ElemId>(X.size())};
  for (std::size_t e = 0; e < n; ++e)
    if (lf.inner_of[e] >= 0) lf.elem_of_inner[lf.inner_of[e]] = static_cast<ElemId>(e);
  return FinPoset::make(detail::permute_order(up, perm), PosetShape{std::move(lf)},
                        "lift(" + X.label() + ")");
}

/// Componentwise order on pairs; bottom (bot, bot).
inline FinPoset product(const FinPoset& X, const FinPoset& Y, const Caps& caps = {}) {
  const std::size_t n = X.size() * Y.size();
  detail::check_caps(n, caps, "product");
  std::vector<Bits> up(n, Bits(n));
  std::vector<std::pair<ElemId, ElemId>> comps(n);
  for (std::size_t a = 0; a < X.size(); ++a)
    for (std::size_t b = 0; b < Y.size(); ++b) comps[a * Y.size() + b] = {static_cast<ElemId>(a), static_cast<ElemId>(b)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (X.leq(comps[i].first, comps[j].first) && Y.leq(comps[i].second, comps[j].second))
        up[i].set(j);
  auto perm = detail::canonical_permutation(up);
  shape::Product pr{X, Y, detail::permute_table(comps, perm), std::vector<ElemId>(n)};
  for (std::size_t e = 0; e < n; ++e)
    pr.elem_of[static_cast<std::size_t>(pr.components[e].first) * Y.size() +
               static_cast<std::size_t>(pr.components[e].second)] = static_cast<ElemId>(e);
  return FinPoset::make(detail::permute_order(up, perm), PosetShape{std::move(pr)},
                        "(" + X.label() + " x " + Y.label() + ")");
}

/// Fresh bottom below disjoint, mutually incomparable copies of X and Y.
inline FinPoset sum_sep(const FinPoset& X, const FinPoset& Y, const Caps& caps = {}) {
  const std::size_t n = 1 + X.size() + Y.size();
  detail::check_caps(n, caps, "separated sum");
  std::vector<Bits> up(n, Bits(n));
  up[0].set();
  using Side = shape::SeparatedSum::Side;
  std::vector<std::pair<Side, ElemId>> tag(n, {Side::Bottom, -1});
  for (std::size_t a = 0; a < X.size(); ++a) {
    tag[1 + a] = {Side::Left, static_cast<ElemId>(a)};
    const auto& u = X.up(static_cast<ElemId>(a));
    for (auto b = u.find_first(); b != Bits::npos; b = u.find_next(b)) up[1 + a].set(1 + b);
  }
  const std::size_t off = 1 + X.size();
  for (std::size_t a = 0; a < Y.size(); ++a) {
    tag[off + a] = {Side::Right, static_cast<ElemId>(a)};
    const auto& u = Y.up(static_cast<ElemId>(a));
    for (auto b = u.find_first(); b != Bits::npos; b = u.find_next(b)) up[off + a].set(off + b);
  }
  auto perm = detail::canonical_permutation(up);
  shape::SeparatedSum ss{X, Y, detail::permute_table(tag, perm), std::vector<ElemId>(X.size()),
                         std::vector<ElemId>(Y.size())};
  for (std::size_t e = 0; e < n; ++e) {
    if (ss.tag[e].first == Side::Left) ss.elem_of_left[ss.tag[e].second] = static_cast<ElemId>(e);
    if (ss.tag[e].first == Side::Right) ss.elem_of_right[ss.tag[e].second] = static_cast<ElemId>(e);
  }
  return FinPoset::make(detail::permute_order(up, perm), PosetShape{std::move(ss)},
                        "(" + X.label() + " + " + Y.label() + ")");
}

// ---------------------------------------------------------------------------
// Limits of increasing chains. On a finite poset every chain is eventually
// constant, so the limit is the last element.

inline ElemId chain_limit(const FinPoset& X, const std::vector<ElemId>& seq) {
  if (seq.empty()) throw Error(ErrorKind::NotAChain, "empty sequence");
  for (std::size_t i = 0; i + 1 < seq.size(); ++i)
    if (!X.leq(seq[i], seq[i + 1]))
      throw Error(ErrorKind::NotAChain, "sequence decreases or is unordered at index",
                  {static_cast<long long>(i)});
  return seq.back();
}

inline MonotoneMap chain_limit(const std::vector<MonotoneMap>& seq) {
  if (seq.empty()) throw Error(ErrorKind::NotAChain, "empty sequence");
  for (std::size_t i = 0; i + 1 < seq.size(); ++i)
    if (!pointwise_leq(seq[i], seq[i + 1]))
      throw Error(ErrorKind::NotAChain, "map sequence is not pointwise increasing at index",
                  {static_cast<long long>(i)});
  return seq.back();
}

// ---------------------------------------------------------------------------
// Display

inline std::string element_name(const FinPoset& X, ElemId e) {
  struct Namer {
    ElemId e;
    std::string operator()(const shape::Atomic&) const { return std::to_string(e); }
    std::string operator()(const shape::Lifted& s) const {
      return s.inner_of[e] < 0 ? "bot" : "up(" + element_name(s.inner, s.inner_of[e]) + ")";
    }
    std::string operator()(const shape::Product& s) const {
      auto [a, b] = s.components[e];
      return "(" + element_name(s.first, a) + "," + element_name(s.second, b) + ")";
    }
    std::string operator()(const shape::SeparatedSum& s) const {
      auto [side, i] = s.tag[e];
      if (side == shape::SeparatedSum::Bottom) return "bot";
      return side == shape::SeparatedSum::Left ? "inl(" + element_name(s.left, i) + ")"
                                               : "inr(" + element_name(s.right, i) + ")";
    }
    std::string operator()(const shape::FunctionSpace& s) const {
      std::string out = "[";
      for (std::size_t i = 0; i < s.tables[e].size(); ++i)
        out += (i ? "," : "") + std::to_string(s.tables[e][i]);
      return out + "]";
    }
  };
  return std::visit(Namer{e}, X.shape().node);
}

/// Graphviz rendering of the Hasse diagram: one node per element, one edge
/// per covering pair, drawn bottom to top.
inline std::string hasse_dot(const FinPoset& X, const std::string& name = "poset") {
  std::ostringstream os;
  os << "digraph \"" << name << "\" {\n  rankdir=BT;\n";
  for (std::size_t e = 0; e < X.size(); ++e)
    os << "  n" << e << " [label=\"" << element_name(X, static_cast<ElemId>(e)) << "\"];\n";
  const auto covers = lower_covers(X);
  for (std::size_t b = 0; b < X.size(); ++b)
    for (ElemId a : covers[b]) os << "  n" << a << " -> n" << b << ";\n";
  os << "}\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Small-poset corpus

namespace detail {
/// Smallest up-matrix encoding over all relabelings of the non-bottom
/// elements. Bottom is element 0 in every canonical poset.
inline std::vector<bool> iso_certificate(const FinPoset& X) {
  const std::size_t n = X.size();
  std::vector<int> perm(n > 0 ? n - 1 : 0);
  std::iota(perm.begin(), perm.end(), 1);
  std::vector<bool> best;
  do {
    std::vector<int> full(n, 0);
    for (std::size_t i = 1; i < n; ++i) full[i] = perm[i - 1];
    std::vector<bool> code(n * n);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) code[a * n + b] = X.leq(full[a], full[b]);
    if (best.empty() || code < best) best = std::move(code);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}
}  // namespace detail

/// Order-isomorphism test by brute force over relabelings; limited to 9
/// elements.
inline bool isomorphic(const FinPoset& a, const FinPoset& b) {
  if (a.size() != b.size()) return false;
  if (a == b) return true;
  if (a.size() > 9)
    throw Error(ErrorKind::SizeCapExceeded, "isomorphism test is limited to 9 elements",
                {static_cast<long long>(a.size())});
  return detail::iso_certificate(a) == detail::iso_certificate(b);
}

/// One representative of every isomorphism class of pointed posets with
/// 1..max_size elements, ordered by size then certificate.
inline std::vector<FinPoset> pointed_posets_up_to(int max_size) {
  if (max_size > 6)
    throw Error(ErrorKind::SizeCapExceeded, "pointed poset corpus is limited to 6 elements", {max_size});
  std::vector<FinPoset> out;
  for (int n = 1; n <= max_size; ++n) {
    const int m = n - 1;
    std::vector<std::pair<int, int>> slots;
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        if (i != j) slots.emplace_back(i, j);
    std::map<std::vector<bool>, FinPoset> classes;
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << slots.size()); ++code) {
      std::vector<std::vector<bool>> lt(m, std::vector<bool>(m, false));
      bool ok = true;
      for (std::size_t s = 0; s < slots.size(); ++s)
        if (code >> s & 1U) lt[slots[s].first][slots[s].second] = true;
      for (int i = 0; i < m && ok; ++i)
        for (int j = 0; j < m && ok; ++j) {
          if (lt[i][j] && lt[j][i]) ok = false;
          for (int k = 0; k < m && ok; ++k)
            if (lt[i][j] && lt[j][k] && !lt[i][k]) ok = false;
        }
      if (!ok) continue;
      RawPoset raw{n, {}, 0, "P" + std::to_string(n)};
      for (int i = 0; i < m; ++i) {
        raw.le.emplace_back(0, i + 1);
        for (int j = 0; j < m; ++j)
          if (lt[i][j]) raw.le.emplace_back(i + 1, j + 1);
      }
      FinPoset X = validate_poset(raw);
      classes.emplace(detail::iso_certificate(X), X);
    }
    int idx = 0;
    for (auto& [cert, X] : classes) {
      (void)cert;
      RawPoset relabel{n, {}, 0, "P" + std::to_string(n) + "_" + std::to_string(idx++)};
      for (std::size_t a = 0; a < X.size(); ++a)
        for (std::size_t b = 0; b < X.size(); ++b)
          if (a != b && X.leq(static_cast<ElemId>(a), static_cast<ElemId>(b)))
            relabel.le.emplace_back(static_cast<int>(a), static_cast<int>(b));
      out.push_back(validate_poset(relabel));
    }
  }
  return out;
}

}  // namespace relfix

#endif  // RELFIX_POSET_HPP
