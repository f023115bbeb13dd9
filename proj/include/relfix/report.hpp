#ifndef RELFIX_REPORT_HPP
#define RELFIX_REPORT_HPP

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "relfix/chain.hpp"
#include "relfix/cofe.hpp"
#include "relfix/dsl.hpp"
#include "relfix/engines.hpp"
#include "relfix/karoubi.hpp"
#include "relfix/suites.hpp"

namespace relfix {

inline constexpr const char* kToolVersion = "1.0.0";

using nlohmann::json;

inline json rel_json(const BinRel& r) {
  json a = json::array();
  for (auto [x, y] : r.pairs()) a.push_back({x, y});
  return a;
}

inline json family_json(const RelFamily& f) {
  json a = json::array();
  for (const auto& r : f.rels) a.push_back(rel_json(r));
  return a;
}

inline json error_json(const Error& e) {
  return {{"kind", to_string(e.kind())}, {"message", e.detail()}, {"witness", e.witness()}};
}

/// 0 ok, 1 verification failure, 2 usage or parse problem, 3 resource cap.
inline int exit_code_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::ParseError:
    case ErrorKind::ResolveError:
    case ErrorKind::InadmissibleConstRelation:
    case ErrorKind::NotAPartialOrder:
    case ErrorKind::NoLeastElement:
      return 2;
    case ErrorKind::SizeCapExceeded:
      return 3;
    default:
      return 1;
  }
}

/// Effective settings after CLI flags override the spec file.
struct RunSettings {
  int depth = 3;
  std::uint64_t seed = 1;
  Caps caps{};
  std::string spec_hash;
  bool timings = false;
};

inline RunSettings resolve_settings(const SpecFile& spec, std::optional<int> depth, std::optional<std::uint64_t> seed,
                                    std::optional<std::size_t> max_size, const std::string& spec_hash) {
  RunSettings s;
  if (spec.depth) s.depth = *spec.depth;
  if (depth) s.depth = *depth;
  if (spec.seed) s.seed = *spec.seed;
  if (seed) s.seed = *seed;
  if (spec.max_size) s.caps.max_elements = *spec.max_size;
  if (spec.max_pairs) s.caps.max_pairs = *spec.max_pairs;
  if (max_size) s.caps.max_elements = *max_size;
  s.spec_hash = spec_hash;
  return s;
}

inline json header_json(const std::string& command, const SpecFile* spec, const RunSettings& s) {
  json h = {{"tool", "relfix"}, {"version", kToolVersion}, {"command", command}, {"seed", s.seed}};
  if (spec) {
    h["spec"] = {{"hash", s.spec_hash}, {"domain", spec->domain_name}, {"functor", to_string(spec->F)}, {"depth", s.depth}};
    h["caps"] = {{"max_size", s.caps.max_elements}, {"max_pairs", s.caps.max_pairs}};
  }
  return h;
}

class Stopwatch {
 public:
  Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

 private:
  std::chrono::steady_clock::time_point t0_;
};

/// solve: chain, e/p tables, projections and their checks.
inline json run_solve(const SpecFile& spec, const RunSettings& s, DomainChain* out_chain = nullptr) {
  json rep = header_json("solve", &spec, s);
  Stopwatch sw;
  DomainChain c = build_chain(spec.F, s.depth, s.caps);
  const double t_build = sw.seconds();
  json levels = json::array();
  for (std::size_t n = 0; n < c.levels.size(); ++n) {
    json names = json::array();
    for (std::size_t e = 0; e < c.levels[n].size(); ++e) names.push_back(element_name(c.levels[n], static_cast<ElemId>(e)));
    levels.push_back({{"n", n}, {"size", c.levels[n].size()}, {"elements", names}});
  }
  json steps = json::array();
  for (std::size_t n = 0; n < c.steps.size(); ++n)
    steps.push_back({{"n", n}, {"e", c.steps[n].e.table()}, {"p", c.steps[n].p.table()}});
  json pis = json::array();
  for (std::size_t j = 0; j < c.pis.size(); ++j) pis.push_back({{"j", j}, {"table", c.pis[j].table()}});
  auto pr = check_truncation_projections(c);
  json checks = json::object();
  for (const auto& ch : pr.checks) {
    checks[ch.name] = ch.ok;
    if (!ch.ok) checks[ch.name + " witness"] = ch.witness;
  }
  rep["sizes"] = c.sizes();
  rep["levels"] = levels;
  rep["steps"] = steps;
  rep["projections"] = pis;
  rep["checks"] = checks;
  rep["verdict"] = pr.ok() ? "ok" : "failed";
  if (s.timings) rep["timings"] = {{"build_seconds", t_build}, {"total_seconds", sw.seconds()}};
  if (out_chain) *out_chain = std::move(c);
  return rep;
}

/// relate: one engine or all three with agreement, uniformity and duality.
inline json run_relate(const SpecFile& spec, const RunSettings& s, const std::string& method) {
  json rep = header_json("relate", &spec, s);
  rep["method"] = method;
  Stopwatch sw;
  DomainChain c = build_chain(spec.F, s.depth, s.caps);
  rep["sizes"] = c.sizes();
  json timings = json::object();
  json results = json::object();
  bool ok = true;
  RelFamily result;

  auto duality_and_uniformity = [&](const RelFamily& fam) {
    auto g = glue_both(c, fam);
    const bool dual = g.meet == g.join;
    rep["duality"] = dual;
    rep["glued"] = rel_json(g.meet);
    auto u = check_uniform(c, g.meet);
    rep["uniform"] = u.uniform;
    if (!u.uniform) rep["uniform_witness"] = {{"i", u.level}, {"pair", {u.x, u.y}}};
    ok = ok && dual && u.uniform;
  };

  if (method == "all") {
    auto m = compare_methods(c);
    timings["engines_seconds"] = sw.seconds();
    results["kt"] = {{"iterations", m.kt.iterations},
                     {"neg_equals_pos", true},
                     {"ascending", m.kt.ascending},
                     {"family", family_json(m.kt.fixpoint.pos)}};
    results["kleene"] = {{"coherent", true}, {"family", family_json(m.kleene)}};
    results["banach"] = {{"iterations", m.banach.iterations},
                         {"stabilization", m.banach.stabilization},
                         {"second_start_agrees", m.two_starts_agree},
                         {"family", family_json(m.banach.fixpoint)}};
    rep["agreement"] = m.agreement;
    rep["unfolding"] = m.unfolding;
    ok = m.agreement && m.unfolding && m.kt.ascending;
    result = m.kleene;
  } else if (method == "kt") {
    auto kt = solve_knaster_tarski(c);
    results["kt"] = {{"iterations", kt.iterations},
                     {"neg_equals_pos", true},
                     {"ascending", kt.ascending},
                     {"family", family_json(kt.fixpoint.pos)}};
    ok = kt.ascending;
    result = kt.fixpoint.pos;
  } else if (method == "kleene") {
    result = solve_kleene(c);
    results["kleene"] = {{"coherent", true}, {"family", family_json(result)}};
  } else if (method == "banach") {
    auto b = solve_banach(c);
    auto b2 = solve_banach(c, bottom_family(c));
    const bool agree = b.fixpoint == b2.fixpoint;
    results["banach"] = {{"iterations", b.iterations},
                         {"stabilization", b.stabilization},
                         {"second_start_agrees", agree},
                         {"family", family_json(b.fixpoint)}};
    ok = agree;
    result = b.fixpoint;
  } else {
    throw Error(ErrorKind::PreconditionViolation, "unknown method '" + method + "' (kt, kleene, banach, all)");
  }
  rep["results"] = results;
  duality_and_uniformity(result);
  rep["verdict"] = ok ? "ok" : "failed";
  if (s.timings) {
    timings["total_seconds"] = sw.seconds();
    rep["timings"] = timings;
  }
  return rep;
}

/// karoubi: E_D, its order, the cpo and slice checks, and the fiber audit.
inline json run_karoubi(const FinPoset& D, const RunSettings& s) {
  json rep = header_json("karoubi", nullptr, s);
  Stopwatch sw;
  json order = json::array();
  for (std::size_t a = 0; a < D.size(); ++a) {
    json row = json::array();
    for (std::size_t b = 0; b < D.size(); ++b) row.push_back(D.leq(static_cast<ElemId>(a), static_cast<ElemId>(b)) ? 1 : 0);
    order.push_back(row);
  }
  rep["poset"] = {{"size", D.size()}, {"leq", order}};
  auto cpo = ed_cpo_check(D, s.caps);
  json ids = json::array();
  for (const auto& p : cpo.elements) ids.push_back(p.map.table());
  json leq = json::array();
  for (const auto& row : cpo.leq) {
    json r = json::array();
    for (bool v : row) r.push_back(v ? 1 : 0);
    leq.push_back(r);
  }
  rep["idempotents"] = ids;
  rep["E_D_size"] = cpo.elements.size();
  rep["order"] = leq;
  rep["cpo"] = {{"partial_order", cpo.partial_order},
                {"inclusion_monotone", cpo.inclusion_monotone},
                {"bottom_least", cpo.bottom_least},
                {"identity_greatest", cpo.identity_greatest},
                {"chain_lubs", cpo.chain_lubs}};
  bool ok = cpo.ok();
  if (D.size() <= 5) {
    auto sl = ed_slice_equivalence(D, s.caps);
    rep["slice_equivalence"] = {{"idempotents", sl.idempotents},
                                {"embeddings", sl.embeddings},
                                {"images", sl.images},
                                {"round_trip", sl.round_trip},
                                {"round_trip_iso", sl.round_trip_iso},
                                {"j_monotone", sl.j_monotone},
                                {"i_monotone", sl.i_monotone},
                                {"bijection", sl.bijection}};
    ok = ok && sl.ok();
  } else {
    rep["slice_equivalence"] = "skipped: more than 5 elements";
  }
  if (D.size() <= 4) {
    json audit = json::array();
    for (const auto& p : cpo.elements) {
      auto fr = karoubi_rel_fiber(KaroubiObj{D, p});
      json cex = json::array();
      for (std::size_t i = 0; i < fr.claim_counterexamples.size() && i < 3; ++i)
        cex.push_back(rel_json(fr.claim_counterexamples[i]));
      audit.push_back({{"idempotent", p.map.table()},
                       {"relations_checked", fr.relations_checked},
                       {"fiber_size", fr.fiber.size()},
                       {"claim_holds", fr.claim_holds()},
                       {"counterexample_count", fr.claim_counterexamples.size()},
                       {"first_counterexamples", cex}});
    }
    rep["claim_audit"] = audit;
  } else {
    rep["claim_audit"] = "skipped: more than 4 elements";
  }
  rep["verdict"] = ok ? "ok" : "failed";
  if (s.timings) rep["timings"] = {{"total_seconds", sw.seconds()}};
  return rep;
}

/// check: the named suites; "all" runs every standard suite.
inline json run_check(const std::string& selector, const RunSettings& s) {
  json rep = header_json("check", nullptr, s);
  std::vector<std::string> names = selector == "all" ? suite_names() : std::vector<std::string>{selector};
  json arr = json::array();
  bool ok = true;
  for (const auto& n : names) {
    Stopwatch sw;
    auto r = run_suite(n, s.seed);
    json j = {{"name", r.name}, {"ok", r.ok}, {"details", r.details}};
    if (s.timings) j["seconds"] = sw.seconds();
    arr.push_back(j);
    ok = ok && r.ok;
  }
  rep["suites"] = arr;
  rep["verdict"] = ok ? "ok" : "failed";
  return rep;
}

}  // namespace relfix

#endif  // RELFIX_REPORT_HPP
