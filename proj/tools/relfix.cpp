#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <openssl/evp.h>

#include "CLI11.hpp"
#include "relfix/relfix.hpp"

namespace {

using relfix::json;

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw relfix::Error(relfix::ErrorKind::ResolveError, "cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct Options {
  std::string spec_path;
  std::optional<int> depth;
  std::string method = "all";
  std::optional<std::size_t> max_size;
  std::string dot_dir;
  std::optional<std::uint64_t> seed;
  std::string report_path;
  std::string suite = "all";
  std::string poset = "chain(3)";
  bool timings = false;
};

void emit(const json& rep, const Options& o) {
  const std::string text = rep.dump(2) + "\n";
  if (o.report_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(o.report_path, std::ios::binary);
  if (!out) throw relfix::Error(relfix::ErrorKind::ResolveError, "cannot write '" + o.report_path + "'");
  out << text;
}

void emit_dot(const relfix::DomainChain& c, const std::string& dir) {
  std::filesystem::create_directories(dir);
  for (std::size_t n = 0; n < c.levels.size(); ++n) {
    const std::string name = "X_" + std::to_string(n);
    std::ofstream out(std::filesystem::path(dir) / (name + ".dot"));
    out << relfix::hasse_dot(c.levels[n], name);
  }
}

struct Loaded {
  relfix::SpecFile spec;
  relfix::RunSettings settings;
};

Loaded load(const Options& o) {
  if (o.spec_path.empty()) throw CLI::RequiredError("--spec");
  const std::string text = read_file(o.spec_path);
  Loaded l{relfix::parse_spec(text), {}};
  l.settings = relfix::resolve_settings(l.spec, o.depth, o.seed, o.max_size, sha256_hex(text));
  l.settings.timings = o.timings;
  return l;
}

relfix::RunSettings plain_settings(const Options& o) {
  relfix::RunSettings s;
  if (o.seed) s.seed = *o.seed;
  if (o.max_size) s.caps.max_elements = *o.max_size;
  s.timings = o.timings;
  return s;
}

int verdict_code(const json& rep) { return rep.at("verdict") == "ok" ? 0 : 1; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"relfix: relational properties of recursively defined finite domains"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "random seed for sampled checks");
    sub->add_option("--max-size", o.max_size, "cap on the number of elements of any poset");
    sub->add_option("--report", o.report_path, "write the JSON report to FILE instead of stdout");
    sub->add_flag("--timings", o.timings, "include wall-clock timings in the report");
  };
  auto with_spec = [&](CLI::App* sub) {
    sub->add_option("--spec", o.spec_path, "domain spec file")->required();
    sub->add_option("--depth", o.depth, "chain depth N")->check(CLI::Range(0, 64));
  };

  auto* solve = app.add_subcommand("solve", "build the approximation chain and verify the projections");
  with_spec(solve);
  common(solve);
  solve->add_option("--emit-dot", o.dot_dir, "write Hasse diagrams of every level to DIR");

  auto* relate = app.add_subcommand("relate", "compute the result relation by fixed-point methods");
  with_spec(relate);
  common(relate);
  relate->add_option("--method", o.method, "kt, kleene, banach or all")
      ->check(CLI::IsMember({"kt", "kleene", "banach", "all"}));
  relate->add_option("--emit-dot", o.dot_dir, "write Hasse diagrams of every level to DIR");

  auto* karoubi = app.add_subcommand("karoubi", "idempotents of a poset and their splittings");
  karoubi->add_option("--poset", o.poset, "poset literal, e.g. chain(3) or poset { elems: 3; le: [(0,1)]; bot: 0 }");
  common(karoubi);

  auto* check = app.add_subcommand("check", "run invariant suites");
  check->add_option("--suite", o.suite, "suite name or all")
      ->check(CLI::IsMember({"all", "lemma2", "functor-laws", "adjunction", "contractive", "karoubi", "duality",
                             "corrupt"}));
  common(check);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    json rep;
    if (solve->parsed()) {
      auto l = load(o);
      relfix::DomainChain c;
      rep = relfix::run_solve(l.spec, l.settings, &c);
      if (!o.dot_dir.empty()) emit_dot(c, o.dot_dir);
    } else if (relate->parsed()) {
      auto l = load(o);
      rep = relfix::run_relate(l.spec, l.settings, o.method);
      if (!o.dot_dir.empty()) emit_dot(relfix::build_chain(l.spec.F, l.settings.depth, l.settings.caps), o.dot_dir);
    } else if (karoubi->parsed()) {
      rep = relfix::run_karoubi(relfix::parse_poset_literal(o.poset), plain_settings(o));
    } else {
      rep = relfix::run_check(o.suite, plain_settings(o));
    }
    emit(rep, o);
    return verdict_code(rep);
  } catch (const CLI::Error& e) {
    std::cerr << "relfix: " << e.what() << "\n";
    return 2;
  } catch (const relfix::Error& e) {
    json err = {{"tool", "relfix"}, {"version", relfix::kToolVersion}, {"error", relfix::error_json(e)}};
    std::cerr << "relfix: " << relfix::to_string(e.kind()) << ": " << e.detail() << "\n";
    try {
      err["verdict"] = "error";
      emit(err, o);
    } catch (...) {
    }
    return relfix::exit_code_for(e.kind());
  }
}
