#ifndef RELFIX_RELATION_HPP
#define RELFIX_RELATION_HPP

#include <string>
#include <utility>
#include <vector>

#include "relfix/error.hpp"
#include "relfix/poset.hpp"

namespace relfix {

/// A binary relation on the elements of one finite pointed poset, stored as
/// a k*k bitset with pair (a, b) at bit a*k + b.
class BinRel {
 public:
  BinRel() : carrier_(), bits_(1) {}
  explicit BinRel(FinPoset carrier)
      : carrier_(std::move(carrier)), bits_(carrier_.size() * carrier_.size()) {}
  BinRel(FinPoset carrier, Bits bits) : carrier_(std::move(carrier)), bits_(std::move(bits)) {}

  const FinPoset& carrier() const { return carrier_; }
  std::size_t k() const { return carrier_.size(); }
  const Bits& bits() const { return bits_; }
  Bits& bits() { return bits_; }

  std::size_t index(ElemId a, ElemId b) const {
    return static_cast<std::size_t>(a) * k() + static_cast<std::size_t>(b);
  }
  bool contains(ElemId a, ElemId b) const { return bits_.test(index(a, b)); }
  void insert(ElemId a, ElemId b) { bits_.set(index(a, b)); }
  void erase(ElemId a, ElemId b) { bits_.reset(index(a, b)); }
  std::size_t count() const { return bits_.count(); }

  /// Pairs in lexicographic order.
  std::vector<std::pair<ElemId, ElemId>> pairs() const {
    std::vector<std::pair<ElemId, ElemId>> out;
    out.reserve(count());
    for (auto i = bits_.find_first(); i != Bits::npos; i = bits_.find_next(i))
      out.emplace_back(static_cast<ElemId>(i / k()), static_cast<ElemId>(i % k()));
    return out;
  }

  bool subset_of(const BinRel& o) const { return bits_.is_subset_of(o.bits_); }
  bool operator==(const BinRel& o) const { return bits_ == o.bits_ && carrier_ == o.carrier_; }
  bool operator!=(const BinRel& o) const { return !(*this == o); }

 private:
  FinPoset carrier_;
  Bits bits_;
};

inline BinRel empty_rel(const FinPoset& X) { return BinRel(X); }

inline BinRel total_rel(const FinPoset& X) {
  BinRel r(X);
  r.bits().set();
  return r;
}

inline BinRel diag_rel(const FinPoset& X) {
  BinRel r(X);
  for (std::size_t a = 0; a < X.size(); ++a) r.insert(static_cast<ElemId>(a), static_cast<ElemId>(a));
  return r;
}

/// {(bot, bot)}, the least admissible relation.
inline BinRel bottom_rel(const FinPoset& X) {
  BinRel r(X);
  r.insert(X.bottom(), X.bottom());
  return r;
}

inline BinRel rel_from_pairs(const FinPoset& X, const std::vector<std::pair<ElemId, ElemId>>& pairs) {
  BinRel r(X);
  for (auto [a, b] : pairs) {
    if (a < 0 || b < 0 || static_cast<std::size_t>(a) >= X.size() ||
        static_cast<std::size_t>(b) >= X.size())
      throw Error(ErrorKind::TypeMismatch, "relation pair outside the carrier", {a, b});
    r.insert(a, b);
  }
  return r;
}

/// Contains (bot, bot). Chain closure is automatic on finite posets.
inline bool is_admissible(const BinRel& R) { return R.contains(R.carrier().bottom(), R.carrier().bottom()); }

namespace detail {
inline void require_carrier(const BinRel& R, const FinPoset& X, const char* what) {
  if (!(R.carrier() == X)) throw Error(ErrorKind::TypeMismatch, std::string(what) + ": carrier mismatch");
}
}  // namespace detail

/// f*S = {(x, x') | (f x, f x') in S}.
inline BinRel inverse_image(const MonotoneMap& f, const BinRel& S) {
  detail::require_carrier(S, f.cod(), "inverse_image");
  const std::size_t n = f.dom().size();
  BinRel out(f.dom());
  for (std::size_t x = 0; x < n; ++x) {
    const std::size_t row = static_cast<std::size_t>(f(static_cast<ElemId>(x))) * S.k();
    for (std::size_t y = 0; y < n; ++y)
      if (S.bits().test(row + static_cast<std::size_t>(f(static_cast<ElemId>(y))))) out.bits().set(x * n + y);
  }
  return out;
}

/// Inverse image that reports an inadmissible result instead of returning
/// it. Admissible S along a map that does not preserve bottom can lose
/// (bot, bot).
inline BinRel inverse_image_checked(const MonotoneMap& f, const BinRel& S) {
  BinRel out = inverse_image(f, S);
  if (is_admissible(S) && !is_admissible(out))
    throw Error(ErrorKind::InadmissibleImage, "inverse image of an admissible relation lost (bot, bot)",
                {f(f.dom().bottom())});
  return out;
}

/// f_!R = {(f x, f x') | (x, x') in R} plus (bot, bot): the least admissible
/// S with R <= f*S.
inline BinRel direct_image(const MonotoneMap& f, const BinRel& R) {
  detail::require_carrier(R, f.dom(), "direct_image");
  BinRel out = bottom_rel(f.cod());
  for (auto i = R.bits().find_first(); i != Bits::npos; i = R.bits().find_next(i))
    out.insert(f(static_cast<ElemId>(i / R.k())), f(static_cast<ElemId>(i % R.k())));
  return out;
}

/// Intersection; the empty family gives the total relation.
inline BinRel intersect(const FinPoset& X, const std::vector<BinRel>& family) {
  BinRel out = total_rel(X);
  for (const auto& R : family) {
    detail::require_carrier(R, X, "intersect");
    out.bits() &= R.bits();
  }
  return out;
}

inline BinRel unite(const FinPoset& X, const std::vector<BinRel>& family) {
  BinRel out = empty_rel(X);
  for (const auto& R : family) {
    detail::require_carrier(R, X, "unite");
    out.bits() |= R.bits();
  }
  return out;
}

/// f : (X, R) -> (Y, S), i.e. R <= f*S.
inline bool is_rel_morphism(const MonotoneMap& f, const BinRel& R, const BinRel& S) {
  detail::require_carrier(R, f.dom(), "is_rel_morphism");
  detail::require_carrier(S, f.cod(), "is_rel_morphism");
  for (auto i = R.bits().find_first(); i != Bits::npos; i = R.bits().find_next(i))
    if (!S.contains(f(static_cast<ElemId>(i / R.k())), f(static_cast<ElemId>(i % R.k())))) return false;
  return true;
}

/// Every admissible relation on X, in increasing bit-pattern order.
template <class Visit>
void for_each_admissible_rel(const FinPoset& X, Visit&& visit) {
  const std::size_t m = X.size() * X.size();
  if (m > 24) throw Error(ErrorKind::SizeCapExceeded, "too many relations to enumerate", {static_cast<long long>(m)});
  const std::size_t free_bits = m - 1;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << free_bits); ++code) {
    BinRel r(X);
    r.bits().set(0);
    for (std::size_t b = 0; b < free_bits; ++b)
      if (code >> b & 1U) r.bits().set(b + 1);
    visit(static_cast<const BinRel&>(r));
  }
}

inline std::vector<BinRel> all_admissible_rels(const FinPoset& X) {
  std::vector<BinRel> out;
  for_each_admissible_rel(X, [&](const BinRel& r) { out.push_back(r); });
  return out;
}

}  // namespace relfix

#endif  // RELFIX_RELATION_HPP
