#ifndef RELFIX_FUNCTOR_HPP
#define RELFIX_FUNCTOR_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "relfix/ep.hpp"
#include "relfix/error.hpp"
#include "relfix/poset.hpp"
#include "relfix/relation.hpp"

namespace relfix {

enum class FKind { One, Const, Var, Lift, Prod, SumSep, Fun };

struct FunctorNode {
  FKind kind = FKind::One;
  FinPoset const_poset;
  BinRel const_rel;
  std::shared_ptr<const FunctorNode> left, right;
  /// +1 or -1 for Var leaves, relative to the root.
  int polarity = +1;
};

/// A mixed-variance functor F(X-, X+) built from combinators. Immutable.
class FunctorExpr {
 public:
  FunctorExpr() : n_(std::make_shared<FunctorNode>()) {}
  explicit FunctorExpr(std::shared_ptr<const FunctorNode> n) : n_(std::move(n)) {}

  FKind kind() const { return n_->kind; }
  const FunctorNode& node() const { return *n_; }
  FunctorExpr left() const { return FunctorExpr(n_->left); }
  FunctorExpr right() const { return FunctorExpr(n_->right); }

 private:
  std::shared_ptr<const FunctorNode> n_;
};

namespace detail {
inline FunctorExpr make_node(FKind k, const FunctorExpr* a = nullptr, const FunctorExpr* b = nullptr) {
  auto n = std::make_shared<FunctorNode>();
  n->kind = k;
  if (a) n->left = std::make_shared<FunctorNode>(a->node());
  if (b) n->right = std::make_shared<FunctorNode>(b->node());
  return FunctorExpr(std::move(n));
}

inline std::shared_ptr<const FunctorNode> flipped(const FunctorNode& n) {
  auto c = std::make_shared<FunctorNode>(n);
  if (n.kind == FKind::Var) c->polarity = -n.polarity;
  if (n.left) c->left = flipped(*n.left);
  if (n.right) c->right = flipped(*n.right);
  return c;
}
}  // namespace detail

inline FunctorExpr f_one() { return detail::make_node(FKind::One); }
inline FunctorExpr f_var() { return detail::make_node(FKind::Var); }

inline FunctorExpr f_const(const FinPoset& P, const BinRel& R) {
  if (!(R.carrier() == P)) throw Error(ErrorKind::TypeMismatch, "constant relation lives on another poset");
  if (!is_admissible(R))
    throw Error(ErrorKind::InadmissibleConstRelation, "constant relation must contain (bot, bot)");
  auto n = std::make_shared<FunctorNode>();
  n->kind = FKind::Const;
  n->const_poset = P;
  n->const_rel = R;
  return FunctorExpr(std::move(n));
}

/// Constant functor with the default relation: the diagonal.
inline FunctorExpr f_const(const FinPoset& P) { return f_const(P, diag_rel(P)); }

inline FunctorExpr f_lift(const FunctorExpr& a) { return detail::make_node(FKind::Lift, &a); }
inline FunctorExpr f_prod(const FunctorExpr& a, const FunctorExpr& b) { return detail::make_node(FKind::Prod, &a, &b); }
inline FunctorExpr f_sum(const FunctorExpr& a, const FunctorExpr& b) { return detail::make_node(FKind::SumSep, &a, &b); }

/// Function space; the left child becomes contravariant.
inline FunctorExpr f_fun(const FunctorExpr& a, const FunctorExpr& b) {
  auto n = std::make_shared<FunctorNode>();
  n->kind = FKind::Fun;
  n->left = detail::flipped(a.node());
  n->right = std::make_shared<FunctorNode>(b.node());
  return FunctorExpr(std::move(n));
}

/// Polarity of every Var leaf, left to right.
inline std::vector<int> var_polarities(const FunctorExpr& F) {
  std::vector<int> out;
  std::function<void(const FunctorNode&)> go = [&](const FunctorNode& n) {
    if (n.kind == FKind::Var) out.push_back(n.polarity);
    if (n.left) go(*n.left);
    if (n.right) go(*n.right);
  };
  go(F.node());
  return out;
}

/// Recomputes polarities from the flipping rule and compares.
inline bool polarities_consistent(const FunctorExpr& F) {
  std::function<bool(const FunctorNode&, int)> go = [&](const FunctorNode& n, int pol) {
    switch (n.kind) {
      case FKind::Var: return n.polarity == pol;
      case FKind::Fun: return go(*n.left, -pol) && go(*n.right, pol);
      case FKind::Lift: return go(*n.left, pol);
      case FKind::Prod:
      case FKind::SumSep: return go(*n.left, pol) && go(*n.right, pol);
      default: return true;
    }
  };
  return go(F.node(), +1);
}

/// No Var occurs in contravariant position.
inline bool is_covariant(const FunctorExpr& F) {
  for (int p : var_polarities(F))
    if (p < 0) return false;
  return true;
}

inline std::string to_string(const FunctorExpr& F) {
  const FunctorNode& n = F.node();
  switch (n.kind) {
    case FKind::One: return "one";
    case FKind::Var: return "D";
    case FKind::Const: return "const(" + n.const_poset.label() + ")";
    case FKind::Lift: return "lift(" + to_string(F.left()) + ")";
    case FKind::Prod: return "prod(" + to_string(F.left()) + ", " + to_string(F.right()) + ")";
    case FKind::SumSep: return "sum(" + to_string(F.left()) + ", " + to_string(F.right()) + ")";
    case FKind::Fun: return "fun(" + to_string(F.left()) + ", " + to_string(F.right()) + ")";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Object action

/// F(Xneg, Xpos). Fun(A, B) evaluates A with its arguments swapped.
inline FinPoset eval_obj(const FunctorExpr& F, const FinPoset& Xneg, const FinPoset& Xpos, const Caps& caps = {}) {
  const FunctorNode& n = F.node();
  switch (n.kind) {
    case FKind::One: return one_poset();
    case FKind::Const: return n.const_poset;
    case FKind::Var: return Xpos;
    case FKind::Lift: return lift(eval_obj(F.left(), Xneg, Xpos, caps), caps);
    case FKind::Prod:
      return product(eval_obj(F.left(), Xneg, Xpos, caps), eval_obj(F.right(), Xneg, Xpos, caps), caps);
    case FKind::SumSep:
      return sum_sep(eval_obj(F.left(), Xneg, Xpos, caps), eval_obj(F.right(), Xneg, Xpos, caps), caps);
    case FKind::Fun:
      return hom_poset(eval_obj(F.left(), Xpos, Xneg, caps), eval_obj(F.right(), Xneg, Xpos, caps), caps);
  }
  throw Error(ErrorKind::InternalInvariantViolation, "unknown functor node");
}

// ---------------------------------------------------------------------------
// Morphism action

/// F(fneg, fpos) : src -> dst where fneg : N' -> N, fpos : P -> P',
/// src = F(N, P) and dst = F(N', P') are already evaluated.
inline MonotoneMap eval_map_between(const FunctorExpr& F, const MonotoneMap& fneg, const MonotoneMap& fpos,
                                    const FinPoset& src, const FinPoset& dst) {
  const FunctorNode& n = F.node();
  std::vector<ElemId> t(src.size());
  switch (n.kind) {
    case FKind::One:
    case FKind::Const:
      if (!(src == dst)) throw Error(ErrorKind::TypeMismatch, "constant functor on different objects");
      return identity_map(src);
    case FKind::Var:
      if (!(fpos.dom() == src) || !(fpos.cod() == dst))
        throw Error(ErrorKind::TypeMismatch, "covariant argument map has the wrong type");
      return MonotoneMap::unchecked(src, dst, fpos.table());
    case FKind::Lift: {
      const auto& s = std::get<shape::Lifted>(src.shape().node);
      const auto& d = std::get<shape::Lifted>(dst.shape().node);
      auto inner = eval_map_between(F.left(), fneg, fpos, s.inner, d.inner);
      for (std::size_t e = 0; e < src.size(); ++e)
        t[e] = s.inner_of[e] < 0 ? dst.bottom() : d.elem_of_inner[inner(s.inner_of[e])];
      break;
    }
    case FKind::Prod: {
      const auto& s = std::get<shape::Product>(src.shape().node);
      const auto& d = std::get<shape::Product>(dst.shape().node);
      auto a = eval_map_between(F.left(), fneg, fpos, s.first, d.first);
      auto b = eval_map_between(F.right(), fneg, fpos, s.second, d.second);
      for (std::size_t e = 0; e < src.size(); ++e)
        t[e] = d.at(a(s.components[e].first), b(s.components[e].second));
      break;
    }
    case FKind::SumSep: {
      const auto& s = std::get<shape::SeparatedSum>(src.shape().node);
      const auto& d = std::get<shape::SeparatedSum>(dst.shape().node);
      auto a = eval_map_between(F.left(), fneg, fpos, s.left, d.left);
      auto b = eval_map_between(F.right(), fneg, fpos, s.right, d.right);
      for (std::size_t e = 0; e < src.size(); ++e) {
        auto [side, i] = s.tag[e];
        if (side == shape::SeparatedSum::Bottom) t[e] = dst.bottom();
        else if (side == shape::SeparatedSum::Left) t[e] = d.elem_of_left[a(i)];
        else t[e] = d.elem_of_right[b(i)];
      }
      break;
    }
    case FKind::Fun: {
      const auto& s = std::get<shape::FunctionSpace>(src.shape().node);
      const auto& d = std::get<shape::FunctionSpace>(dst.shape().node);
      // h |-> B(fneg, fpos) . h . A(fpos, fneg)
      auto amap = eval_map_between(F.left(), fpos, fneg, d.dom, s.dom);
      auto bmap = eval_map_between(F.right(), fneg, fpos, s.cod, d.cod);
      std::vector<ElemId> h2(d.dom.size());
      for (std::size_t e = 0; e < src.size(); ++e) {
        const auto& h = s.tables[e];
        for (std::size_t x = 0; x < h2.size(); ++x) h2[x] = bmap(h[amap(static_cast<ElemId>(x))]);
        auto it = d.index.find(h2);
        if (it == d.index.end())
          throw Error(ErrorKind::InternalInvariantViolation, "composite is not a monotone map of the target space");
        t[e] = it->second;
      }
      break;
    }
  }
  return MonotoneMap::unchecked(src, dst, std::move(t));
}

/// F(fneg, fpos) : F(N, P) -> F(N', P') for fneg : N' -> N, fpos : P -> P'.
inline MonotoneMap eval_map(const FunctorExpr& F, const MonotoneMap& fneg, const MonotoneMap& fpos,
                            const Caps& caps = {}) {
  FinPoset src = eval_obj(F, fneg.cod(), fpos.dom(), caps);
  FinPoset dst = eval_obj(F, fneg.dom(), fpos.cod(), caps);
  return eval_map_between(F, fneg, fpos, src, dst);
}

/// F^e(f) = (F(f.p, f.e), F(f.e, f.p)) between already evaluated objects.
inline EpPair eval_ep_between(const FunctorExpr& F, const EpPair& f, const FinPoset& src, const FinPoset& dst) {
  auto e = eval_map_between(F, f.p, f.e, src, dst);
  auto p = eval_map_between(F, f.e, f.p, dst, src);
  std::vector<long long> w;
  std::string failure = detail::ep_law_failure(e, p, &w);
  if (!failure.empty())
    throw Error(ErrorKind::InternalInvariantViolation, "functor image of an e/p pair is not an e/p pair: " + failure, w);
  return EpPair{e, p};
}

inline EpPair eval_ep(const FunctorExpr& F, const EpPair& f, const Caps& caps = {}) {
  FinPoset src = eval_obj(F, f.source(), f.source(), caps);
  FinPoset dst = eval_obj(F, f.target(), f.target(), caps);
  return eval_ep_between(F, f, src, dst);
}

// ---------------------------------------------------------------------------
// Relational action

/// F(R, S) on obj = F(carrier R, carrier S).
inline BinRel eval_rel_on(const FunctorExpr& F, const BinRel& R, const BinRel& S, const FinPoset& obj) {
  const FunctorNode& n = F.node();
  switch (n.kind) {
    case FKind::One: return total_rel(obj);
    case FKind::Const: {
      if (!(n.const_rel.carrier() == obj)) throw Error(ErrorKind::TypeMismatch, "constant relation carrier");
      return n.const_rel;
    }
    case FKind::Var: {
      if (!(S.carrier() == obj)) throw Error(ErrorKind::TypeMismatch, "covariant relation carrier");
      return S;
    }
    case FKind::Lift: {
      const auto& s = std::get<shape::Lifted>(obj.shape().node);
      BinRel inner = eval_rel_on(F.left(), R, S, s.inner);
      BinRel out = bottom_rel(obj);
      for (auto [a, b] : inner.pairs()) out.insert(s.elem_of_inner[a], s.elem_of_inner[b]);
      return out;
    }
    case FKind::Prod: {
      const auto& s = std::get<shape::Product>(obj.shape().node);
      BinRel ra = eval_rel_on(F.left(), R, S, s.first);
      BinRel rb = eval_rel_on(F.right(), R, S, s.second);
      BinRel out(obj);
      for (std::size_t x = 0; x < obj.size(); ++x)
        for (std::size_t y = 0; y < obj.size(); ++y)
          if (ra.contains(s.components[x].first, s.components[y].first) &&
              rb.contains(s.components[x].second, s.components[y].second))
            out.insert(static_cast<ElemId>(x), static_cast<ElemId>(y));
      return out;
    }
    case FKind::SumSep: {
      const auto& s = std::get<shape::SeparatedSum>(obj.shape().node);
      BinRel ra = eval_rel_on(F.left(), R, S, s.left);
      BinRel rb = eval_rel_on(F.right(), R, S, s.right);
      BinRel out = bottom_rel(obj);
      for (auto [a, b] : ra.pairs()) out.insert(s.elem_of_left[a], s.elem_of_left[b]);
      for (auto [a, b] : rb.pairs()) out.insert(s.elem_of_right[a], s.elem_of_right[b]);
      return out;
    }
    case FKind::Fun: {
      const auto& s = std::get<shape::FunctionSpace>(obj.shape().node);
      BinRel ra = eval_rel_on(F.left(), S, R, s.dom);
      BinRel rb = eval_rel_on(F.right(), R, S, s.cod);
      const auto apairs = ra.pairs();
      BinRel out(obj);
      for (std::size_t g = 0; g < obj.size(); ++g)
        for (std::size_t h = 0; h < obj.size(); ++h) {
          bool related = true;
          for (auto [x, y] : apairs)
            if (!rb.contains(s.tables[g][x], s.tables[h][y])) {
              related = false;
              break;
            }
          if (related) out.insert(static_cast<ElemId>(g), static_cast<ElemId>(h));
        }
      return out;
    }
  }
  throw Error(ErrorKind::InternalInvariantViolation, "unknown functor node");
}

inline BinRel eval_rel(const FunctorExpr& F, const BinRel& Rneg, const BinRel& Spos, const Caps& caps = {}) {
  return eval_rel_on(F, Rneg, Spos, eval_obj(F, Rneg.carrier(), Spos.carrier(), caps));
}

// ---------------------------------------------------------------------------
// Law checking

/// F(fneg, fpos) : src -> dst. Replaceable so that broken actions can be
/// fed to the checker.
using MapAction = std::function<MonotoneMap(const FunctorExpr&, const MonotoneMap&, const MonotoneMap&,
                                            const FinPoset&, const FinPoset&)>;

inline MapAction standard_map_action() {
  return [](const FunctorExpr& F, const MonotoneMap& a, const MonotoneMap& b, const FinPoset& s,
            const FinPoset& d) { return eval_map_between(F, a, b, s, d); };
}

struct LawBudget {
  int max_poset_size = 3;
  /// Relational law is exhaustive when all four posets are at most this big.
  int rel_exhaustive_size = 2;
  std::size_t rel_samples = 20000;
  std::uint64_t seed = 1;
  Caps caps{};
};

struct LawResult {
  std::string law;
  std::size_t cases = 0;
  bool exhaustive = true;
  bool ok = true;
  std::string witness;
};

struct LawReport {
  std::vector<LawResult> laws;
  bool ok() const {
    for (const auto& l : laws)
      if (!l.ok) return false;
    return true;
  }
  const LawResult* first_failure() const {
    for (const auto& l : laws)
      if (!l.ok) return &l;
    return nullptr;
  }
};

namespace detail {
inline std::string table_str(const std::vector<ElemId>& t) {
  std::string s = "[";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i]);
  return s + "]";
}

inline std::uint64_t rel_code(const BinRel& r) {
  std::uint64_t c = 0;
  for (auto i = r.bits().find_first(); i != Bits::npos; i = r.bits().find_next(i)) c |= std::uint64_t{1} << i;
  return c;
}
}  // namespace detail

/// Checks identity and composition preservation, monotonicity of the
/// morphism action, the e/p action, and relational functoriality over all
/// pointed posets up to `budget.max_poset_size` elements.
inline LawReport check_functor_laws(const FunctorExpr& F, const LawBudget& budget = {},
                                    MapAction action = standard_map_action()) {
  const auto Ps = pointed_posets_up_to(budget.max_poset_size);
  const std::size_t P = Ps.size();
  std::vector<std::vector<std::vector<MonotoneMap>>> homs(P, std::vector<std::vector<MonotoneMap>>(P));
  std::vector<std::vector<std::map<std::vector<ElemId>, std::size_t>>> hom_index(
      P, std::vector<std::map<std::vector<ElemId>, std::size_t>>(P));
  std::vector<std::vector<FinPoset>> objs(P, std::vector<FinPoset>(P));
  for (std::size_t i = 0; i < P; ++i)
    for (std::size_t j = 0; j < P; ++j) {
      homs[i][j] = all_monotone_maps(Ps[i], Ps[j]);
      for (std::size_t k = 0; k < homs[i][j].size(); ++k) hom_index[i][j].emplace(homs[i][j][k].table(), k);
      objs[i][j] = eval_obj(F, Ps[i], Ps[j], budget.caps);
    }

  // act[(i0,i1,j0,j1)][(fneg index, fpos index)] for fneg : P[i1] -> P[i0], fpos : P[j0] -> P[j1]
  std::map<std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>, std::vector<MonotoneMap>> act;
  auto acts = [&](std::size_t i0, std::size_t i1, std::size_t j0, std::size_t j1) -> const std::vector<MonotoneMap>& {
    auto key = std::make_tuple(i0, i1, j0, j1);
    auto it = act.find(key);
    if (it != act.end()) return it->second;
    std::vector<MonotoneMap> v;
    const auto& fn = homs[i1][i0];
    const auto& fp = homs[j0][j1];
    v.reserve(fn.size() * fp.size());
    for (const auto& a : fn)
      for (const auto& b : fp) v.push_back(action(F, a, b, objs[i0][j0], objs[i1][j1]));
    return act.emplace(key, std::move(v)).first->second;
  };

  LawReport report;

  {
    LawResult r{"identity", 0, true, true, {}};
    for (std::size_t i = 0; i < P && r.ok; ++i)
      for (std::size_t j = 0; j < P && r.ok; ++j) {
        ++r.cases;
        auto m = action(F, identity_map(Ps[i]), identity_map(Ps[j]), objs[i][j], objs[i][j]);
        if (m != identity_map(objs[i][j])) {
          r.ok = false;
          r.witness = "F(id,id) on F(" + Ps[i].label() + "," + Ps[j].label() + ") = " + detail::table_str(m.table());
        }
      }
    report.laws.push_back(r);
  }

  {
    LawResult r{"composition", 0, true, true, {}};
    for (std::size_t i0 = 0; i0 < P && r.ok; ++i0)
      for (std::size_t i1 = 0; i1 < P && r.ok; ++i1)
        for (std::size_t i2 = 0; i2 < P && r.ok; ++i2)
          for (std::size_t j0 = 0; j0 < P && r.ok; ++j0)
            for (std::size_t j1 = 0; j1 < P && r.ok; ++j1)
              for (std::size_t j2 = 0; j2 < P && r.ok; ++j2) {
                const auto& first = acts(i0, i1, j0, j1);
                const auto& second = acts(i1, i2, j1, j2);
                const auto& whole = acts(i0, i2, j0, j2);
                const auto& fns = homs[i1][i0];
                const auto& gns = homs[i2][i1];
                const auto& fps = homs[j0][j1];
                const auto& gps = homs[j1][j2];
                for (std::size_t a = 0; a < fns.size() && r.ok; ++a)
                  for (std::size_t b = 0; b < gns.size() && r.ok; ++b) {
                    auto neg = compose(fns[a], gns[b]);
                    std::size_t neg_idx = hom_index[i2][i0].at(neg.table());
                    for (std::size_t c = 0; c < fps.size() && r.ok; ++c)
                      for (std::size_t d = 0; d < gps.size() && r.ok; ++d) {
                        ++r.cases;
                        auto pos = compose(gps[d], fps[c]);
                        std::size_t pos_idx = hom_index[j0][j2].at(pos.table());
                        const auto& lhs = whole[neg_idx * homs[j0][j2].size() + pos_idx];
                        auto rhs = compose(second[b * gps.size() + d], first[a * fps.size() + c]);
                        if (lhs.table() != rhs.table()) {
                          r.ok = false;
                          r.witness = "fneg=" + detail::table_str(fns[a].table()) +
                                      " gneg=" + detail::table_str(gns[b].table()) +
                                      " fpos=" + detail::table_str(fps[c].table()) +
                                      " gpos=" + detail::table_str(gps[d].table()) +
                                      " F(fneg.gneg,gpos.fpos)=" + detail::table_str(lhs.table()) +
                                      " F(gneg,gpos).F(fneg,fpos)=" + detail::table_str(rhs.table());
                        }
                      }
                  }
              }
    report.laws.push_back(r);
  }

  {
    LawResult r{"monotone-action", 0, true, true, {}};
    for (std::size_t i0 = 0; i0 < P && r.ok; ++i0)
      for (std::size_t i1 = 0; i1 < P && r.ok; ++i1)
        for (std::size_t j0 = 0; j0 < P && r.ok; ++j0)
          for (std::size_t j1 = 0; j1 < P && r.ok; ++j1) {
            const auto& v = acts(i0, i1, j0, j1);
            const auto& fns = homs[i1][i0];
            const auto& fps = homs[j0][j1];
            for (std::size_t a = 0; a < fns.size() && r.ok; ++a)
              for (std::size_t a2 = 0; a2 < fns.size() && r.ok; ++a2) {
                if (!pointwise_leq(fns[a], fns[a2])) continue;
                for (std::size_t b = 0; b < fps.size() && r.ok; ++b)
                  for (std::size_t b2 = 0; b2 < fps.size() && r.ok; ++b2) {
                    if (!pointwise_leq(fps[b], fps[b2])) continue;
                    ++r.cases;
                    if (!pointwise_leq(v[a * fps.size() + b], v[a2 * fps.size() + b2])) {
                      r.ok = false;
                      r.witness = "fneg " + detail::table_str(fns[a].table()) + " <= " + detail::table_str(fns[a2].table()) +
                                  ", fpos " + detail::table_str(fps[b].table()) + " <= " + detail::table_str(fps[b2].table());
                    }
                  }
              }
          }
    report.laws.push_back(r);
  }

  {
    LawResult r{"ep-action", 0, true, true, {}};
    for (std::size_t i = 0; i < P && r.ok; ++i)
      for (std::size_t j = 0; j < P && r.ok; ++j)
        for (const auto& e : homs[i][j]) {
          auto ps = all_projections_of(e);
          if (ps.empty()) continue;
          ++r.cases;
          const EpPair f{e, ps.front()};
          auto fe = action(F, f.p, f.e, objs[i][i], objs[j][j]);
          auto fp = action(F, f.e, f.p, objs[j][j], objs[i][i]);
          std::vector<long long> w;
          std::string failure = detail::ep_law_failure(fe, fp, &w);
          if (!failure.empty()) {
            r.ok = false;
            r.witness = "e=" + detail::table_str(e.table()) + ": " + failure;
            break;
          }
        }
    report.laws.push_back(r);
  }

  {
    LawResult r{"relational", 0, true, true, {}};
    std::vector<std::vector<BinRel>> rels(P);
    for (std::size_t i = 0; i < P; ++i)
      if (Ps[i].size() * Ps[i].size() <= 16) rels[i] = all_admissible_rels(Ps[i]);
    std::map<std::tuple<std::size_t, std::size_t, std::uint64_t, std::uint64_t>, BinRel> rel_memo;
    auto frel = [&](std::size_t i, std::size_t j, const BinRel& R, const BinRel& S) -> const BinRel& {
      auto key = std::make_tuple(i, j, detail::rel_code(R), detail::rel_code(S));
      auto it = rel_memo.find(key);
      if (it != rel_memo.end()) return it->second;
      return rel_memo.emplace(key, eval_rel_on(F, R, S, objs[i][j])).first->second;
    };
    // f : R' -> R with f : N' -> N; g : S -> S' with g : P -> P'.
    auto check = [&](std::size_t i0, std::size_t i1, std::size_t j0, std::size_t j1, std::size_t a, std::size_t b,
                     const BinRel& Rp, const BinRel& R, const BinRel& S, const BinRel& Sp) {
      ++r.cases;
      const auto& fns = homs[i1][i0];
      const auto& fps = homs[j0][j1];
      const auto& m = acts(i0, i1, j0, j1)[a * fps.size() + b];
      if (!is_rel_morphism(m, frel(i0, j0, R, S), frel(i1, j1, Rp, Sp))) {
        r.ok = false;
        r.witness = "f=" + detail::table_str(fns[a].table()) + " g=" + detail::table_str(fps[b].table()) +
                    " R'=" + std::to_string(detail::rel_code(Rp)) + " R=" + std::to_string(detail::rel_code(R)) +
                    " S=" + std::to_string(detail::rel_code(S)) + " S'=" + std::to_string(detail::rel_code(Sp));
      }
    };
    const auto small = static_cast<std::size_t>(budget.rel_exhaustive_size);
    for (std::size_t i0 = 0; i0 < P && r.ok; ++i0)
      for (std::size_t i1 = 0; i1 < P && r.ok; ++i1)
        for (std::size_t j0 = 0; j0 < P && r.ok; ++j0)
          for (std::size_t j1 = 0; j1 < P && r.ok; ++j1) {
            if (Ps[i0].size() > small || Ps[i1].size() > small || Ps[j0].size() > small || Ps[j1].size() > small)
              continue;
            const auto& fns = homs[i1][i0];
            const auto& fps = homs[j0][j1];
            for (std::size_t a = 0; a < fns.size() && r.ok; ++a)
              for (const auto& Rp : rels[i1])
                for (const auto& R : rels[i0]) {
                  if (!r.ok || !is_rel_morphism(fns[a], Rp, R)) continue;
                  for (std::size_t b = 0; b < fps.size() && r.ok; ++b)
                    for (const auto& S : rels[j0])
                      for (const auto& Sp : rels[j1]) {
                        if (!r.ok || !is_rel_morphism(fps[b], S, Sp)) continue;
                        check(i0, i1, j0, j1, a, b, Rp, R, S, Sp);
                      }
                }
          }
    bool any_large = false;
    for (const auto& X : Ps) any_large = any_large || X.size() > small;
    if (any_large && budget.rel_samples > 0) {
      r.exhaustive = false;
      std::mt19937_64 rng(budget.seed);
      auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
      auto random_rel = [&](const FinPoset& X) {
        BinRel out = bottom_rel(X);
        for (std::size_t k = 1; k < X.size() * X.size(); ++k)
          if (rng() & 1U) out.bits().set(k);
        return out;
      };
      for (std::size_t s = 0; s < budget.rel_samples && r.ok; ++s) {
        std::size_t i0 = pick(P), i1 = pick(P), j0 = pick(P), j1 = pick(P);
        const auto& fns = homs[i1][i0];
        const auto& fps = homs[j0][j1];
        std::size_t a = pick(fns.size()), b = pick(fps.size());
        BinRel Rp = random_rel(Ps[i1]);
        BinRel R = direct_image(fns[a], Rp);
        R.bits() |= random_rel(Ps[i0]).bits();
        BinRel S = random_rel(Ps[j0]);
        BinRel Sp = direct_image(fps[b], S);
        Sp.bits() |= random_rel(Ps[j1]).bits();
        check(i0, i1, j0, j1, a, b, Rp, R, S, Sp);
      }
    }
    report.laws.push_back(r);
  }
  return report;
}

/// Throws LawViolation on the first failed law.
inline void require_functor_laws(const FunctorExpr& F, const LawBudget& budget = {},
                                 MapAction action = standard_map_action()) {
  auto rep = check_functor_laws(F, budget, std::move(action));
  if (const auto* f = rep.first_failure()) throw Error(ErrorKind::LawViolation, f->law + ": " + f->witness);
}

}  // namespace relfix

#endif  // RELFIX_FUNCTOR_HPP
