// Command-line workbench: algebra inspection, relation analysis and the
// lemma-verification harness.
//
// Exit codes: 0 success / all holds; 1 property violated (counterexample on
// stdout); 2 input error; 3 cap exceeded or inconclusive.
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "algwb/harness.hpp"

using namespace algwb;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SyntaxError("cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

FiniteAlgebra load_algebra(const std::string& file, const std::string& fixture,
                           bool allow_non_idempotent) {
  if (!fixture.empty()) {
    auto b = builtin_fixture(fixture);
    if (!b) throw SyntaxError("unknown fixture '" + fixture + "'");
    return *b;
  }
  if (file.empty()) throw SyntaxError("no algebra given (file or --fixture)");
  return parse_algebra(slurp(file), allow_non_idempotent);
}

std::string partition_str(const Partition& p) {
  std::ostringstream os;
  bool first = true;
  for (const auto& b : p.blocks()) {
    os << (first ? "" : " ") << "{";
    first = false;
    for (std::size_t i = 0; i < b.size(); ++i) os << (i ? " " : "") << b[i];
    os << "}";
  }
  return os.str();
}

int severity(Outcome o) {
  switch (o) {
    case Outcome::holds: return 0;
    case Outcome::hypothesis_not_met: return 0;
    case Outcome::inconclusive: return 3;
    case Outcome::violated: return 1;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"workbench for the structural theory of finite idempotent "
               "algebras omitting the unary type"};
  app.require_subcommand(1);
  std::size_t cap = kDefaultCap;
  app.add_option("--cap", cap, "enumeration cap (default 10^6)");

  // ---- alg ------------------------------------------------------------
  auto* alg = app.add_subcommand("alg", "inspect a single algebra");
  std::string alg_cmd, alg_file, alg_fixture;
  bool alg_dot = false, allow_non_idem = false;
  alg->add_option("cmd", alg_cmd, "check|con|typ|graph|maximality")
      ->required();
  alg->add_option("file", alg_file, "algebra file");
  alg->add_option("--fixture", alg_fixture, "built-in fixture name");
  alg->add_flag("--dot", alg_dot, "emit graphviz instead of text");
  alg->add_flag("--allow-non-idempotent", allow_non_idem,
                "load non-idempotent tables (negative tests)");

  // ---- rel ------------------------------------------------------------
  auto* rel = app.add_subcommand("rel", "analyse a subdirect product");
  std::string rel_cmd, rel_file;
  std::vector<std::string> rel_algs, rel_fixtures;
  rel->add_option("cmd", rel_cmd, "link|separation|collapse|conglemma")
      ->required();
  rel->add_option("file", rel_file, "relation file")->required();
  rel->add_option("--alg", rel_algs, "algebra file(s) referenced by name");
  rel->add_option("--fixture", rel_fixtures, "built-in algebra(s) to load");

  // ---- centralizer ----------------------------------------------------
  auto* cen = app.add_subcommand("centralizer",
                                 "centralizers of all prime intervals");
  std::string cen_file, cen_fixture;
  cen->add_option("file", cen_file, "algebra file");
  cen->add_option("--fixture", cen_fixture, "built-in fixture name");

  // ---- verify ----------------------------------------------------------
  auto* ver = app.add_subcommand("verify", "run a statement checker");
  std::string ver_lemma, ver_fixture, ver_file, ver_rel;
  bool ver_random = false, ver_list = false;
  std::uint64_t ver_seed = 0;
  int ver_count = 10, ver_min = 2, ver_max = 3;
  ver->add_option("lemma", ver_lemma, "lemma id or 'all'");
  ver->add_flag("--list", ver_list, "list registered lemma ids");
  ver->add_option("--fixture", ver_fixture, "built-in fixture name");
  ver->add_option("--file", ver_file, "algebra file");
  ver->add_option("--rel-file", ver_rel,
                  "relation file (algebras via --fixture/--file)");
  ver->add_flag("--random", ver_random, "generated instances");
  ver->add_option("--count", ver_count, "number of generated instances");
  ver->add_option("--size", ver_max, "maximum size of generated algebras");
  ver->add_option("--min-size", ver_min, "minimum size");
  ver->add_option("--seed", ver_seed, "generator seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*alg) {
      auto a = load_algebra(alg_file, alg_fixture, allow_non_idem);
      if (alg_cmd == "check") {
        std::cout << "algebra " << a.name << " size " << a.size << " ops "
                  << a.ops.size() << "\n";
        std::cout << "idempotent: " << (a.is_idempotent() ? "yes" : "no")
                  << "\n";
        std::cout << "smooth: " << (is_smooth(a, cap) ? "yes" : "no") << "\n";
        std::cout << "omits-type-1: "
                  << (omits_type_one(a, cap) ? "yes" : "no") << "\n";
      } else if (alg_cmd == "con") {
        auto lat = con_lattice(a, cap);
        if (alg_dot) {
          std::cout << export_dot(lat);
        } else {
          for (std::size_t i = 0; i < lat.congruences.size(); ++i)
            std::cout << "con " << i << ": "
                      << partition_str(lat.congruences[i]) << "\n";
          for (auto [lo, hi] : lat.covers)
            std::cout << "cover " << lo << " < " << hi << "\n";
        }
      } else if (alg_cmd == "typ") {
        auto lat = con_lattice(a, cap);
        for (const auto& pi : prime_intervals(lat))
          std::cout << "interval " << partition_str(pi.lower) << "  <  "
                    << partition_str(pi.upper) << "  type "
                    << interval_type(a, pi.lower, pi.upper, cap) << "\n";
      } else if (alg_cmd == "graph") {
        auto g = coloured_graph(a, cap);
        if (alg_dot) {
          std::cout << export_dot(g);
        } else {
          for (const auto& e : g.edges)
            std::cout << "edge " << e.a << " " << e.b << " "
                      << colour_name(e.colour) << " witness "
                      << partition_str(e.theta) << "\n";
        }
      } else if (alg_cmd == "maximality") {
        auto ctx = ClassContext::for_algebra(a, cap);
        const ThinGraph& g = ctx.thin_graph(a);
        if (alg_dot) {
          std::cout << export_dot(g);
        } else {
          for (const auto& e : g.edges)
            std::cout << "thin " << e.a << " -> " << e.b << " "
                      << colour_name(e.colour) << (e.special ? " special" : "")
                      << "\n";
          auto c = connectivity(g);
          auto print_set = [](const char* nm, const std::vector<Elem>& s) {
            std::cout << nm << ":";
            for (Elem x : s) std::cout << " " << x;
            std::cout << "\n";
          };
          print_set("max", c.max_elems);
          print_set("amax", c.amax_elems);
          print_set("umax", c.umax_elems);
        }
      } else {
        std::cerr << "unknown alg command '" << alg_cmd << "'\n";
        return 2;
      }
      return 0;
    }

    if (*rel) {
      std::map<std::string, FiniteAlgebra> loaded;
      for (const auto& f : rel_algs) {
        auto a = parse_algebra(slurp(f));
        loaded[a.name] = a;
      }
      for (const auto& n : rel_fixtures) {
        auto b = builtin_fixture(n);
        if (!b) throw SyntaxError("unknown fixture '" + n + "'");
        loaded[n] = *b;
      }
      auto r = parse_relation(slurp(rel_file), loaded, cap);
      if (rel_cmd == "link") {
        if (r.arity() != 2) {
          std::cerr << "link: binary relation expected\n";
          return 2;
        }
        auto ls = link_structure(r);
        std::cout << "lnk1: " << partition_str(ls.lnk1) << "\n";
        std::cout << "lnk2: " << partition_str(ls.lnk2) << "\n";
        std::cout << "linked: " << (ls.linked ? "yes" : "no") << "\n";
      } else if (rel_cmd == "separation") {
        auto m = separation_matrix(r, cap);
        for (std::size_t i = 0; i < m.intervals.size(); ++i)
          std::cout << "interval " << i << ": factor "
                    << m.intervals[i].factor + 1 << " "
                    << partition_str(m.intervals[i].interval.lower) << " < "
                    << partition_str(m.intervals[i].interval.upper) << "\n";
        for (std::size_t i = 0; i < m.intervals.size(); ++i) {
          std::cout << "sep " << i << ":";
          for (std::size_t j = 0; j < m.intervals.size(); ++j)
            std::cout << " "
                      << (m.sep[i][j] == SepEntry::yes
                              ? "+"
                              : m.sep[i][j] == SepEntry::no ? "-" : "?");
          std::cout << "\n";
        }
        if (!m.complete) {
          std::cout << "matrix partial (cap exceeded)\n";
          return 3;
        }
      } else if (rel_cmd == "collapse") {
        auto ctx = ClassContext::for_factors(r.factors, cap);
        auto env = make_env(r, ctx, full_frame(r), cap);
        int found = 0;
        for (int i = 0; i < r.arity(); ++i) {
          auto lat = con_lattice(r.factors[i], cap);
          int bi = lat.index_of(env.frame.beta[i]);
          for (int lo : lat.lower_covers(bi)) {
            try {
              auto f = collapsing_search(env, i, lat.congruences[lo],
                                         CollapsingVariant::plain);
              std::cout << "collapsing factor " << i + 1 << " alpha "
                        << partition_str(lat.congruences[lo]) << ":";
              for (Elem v : f) std::cout << " " << v;
              std::cout << "\n";
              ++found;
            } catch (const HypothesisNotMet& e) {
              std::cout << "factor " << i + 1 << ": hypothesis not met ("
                        << e.what() << ")\n";
            } catch (const NotFound& e) {
              std::cout << "VIOLATION: " << e.what() << "\n";
              return 1;
            }
          }
        }
        if (!found) return 3;
      } else if (rel_cmd == "conglemma") {
        if (r.arity() != 2) {
          std::cerr << "conglemma: binary relation expected\n";
          return 2;
        }
        auto rep = verify("L-affine-link", instance_of(r), cap);
        std::cout << format_report(rep) << "\n";
        return severity(rep.verdict);
      } else {
        std::cerr << "unknown rel command '" << rel_cmd << "'\n";
        return 2;
      }
      return 0;
    }

    if (*cen) {
      auto a = load_algebra(cen_file, cen_fixture, false);
      for (const auto& pi : prime_intervals(con_lattice(a, cap))) {
        std::cout << "interval " << partition_str(pi.lower) << " < "
                  << partition_str(pi.upper) << "\n";
        std::cout << "  (alpha:beta) = "
                  << partition_str(centralizer(a, pi.lower, pi.upper, cap))
                  << "\n";
        std::cout << "  zeta        = "
                  << partition_str(
                         quasi_centralizer(a, pi.lower, pi.upper, cap))
                  << "\n";
      }
      return 0;
    }

    if (*ver) {
      if (ver_list) {
        for (const auto& id : lemma_ids()) std::cout << id << "\n";
        return 0;
      }
      if (ver_lemma.empty()) {
        std::cerr << "verify: missing lemma id\n";
        return 2;
      }
      std::vector<std::string> ids;
      if (ver_lemma == "all")
        ids = lemma_ids();
      else
        ids.push_back(ver_lemma);
      std::vector<Instance> instances;
      if (ver_random) {
        GeneratorConfig cfg;
        cfg.seed = ver_seed;
        cfg.min_size = ver_min;
        cfg.max_size = ver_max;
        cfg.count = ver_count;
        GeneratorStats stats;
        auto pool = generate_instances(cfg, &stats, cap);
        std::cout << "# generated " << stats.emitted << " algebras, rejected "
                  << stats.rejected << "\n";
        bool rel_needed = false;
        for (const auto& id : ids) rel_needed |= lemma_takes_relation(id);
        for (const auto& a : pool) instances.push_back(instance_of(a));
        if (rel_needed) {
          SplitMix64 rng(ver_seed ^ 0x5DEECE66Dull);
          int want = std::max(1, ver_count / 2);
          for (int i = 0; i < want; ++i)
            if (auto r = generate_relation(rng, pool, 3, cap))
              instances.push_back(instance_of(*r));
        }
      } else if (!ver_rel.empty()) {
        std::map<std::string, FiniteAlgebra> loaded;
        if (!ver_fixture.empty()) {
          auto b = builtin_fixture(ver_fixture);
          if (!b) throw SyntaxError("unknown fixture '" + ver_fixture + "'");
          loaded[ver_fixture] = *b;
        }
        if (!ver_file.empty()) {
          auto a = parse_algebra(slurp(ver_file));
          loaded[a.name] = a;
        }
        instances.push_back(instance_of(parse_relation(slurp(ver_rel), loaded,
                                                       cap)));
      } else {
        instances.push_back(
            instance_of(load_algebra(ver_file, ver_fixture, false)));
      }
      int worst = 0;
      for (const auto& id : ids)
        for (const auto& inst : instances) {
          if (inst.relation && !lemma_takes_relation(id)) continue;
          auto rep = verify(id, inst, cap);
          std::cout << format_report(rep) << "\n";
          worst = std::max(worst, severity(rep.verdict));
        }
      return worst;
    }
  } catch (const CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
