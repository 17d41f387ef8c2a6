#include "algwb/harness.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

namespace algwb {

std::vector<FiniteAlgebra> generate_instances(const GeneratorConfig& cfg,
                                              GeneratorStats* stats,
                                              std::size_t cap) {
  SplitMix64 rng(cfg.seed);
  std::vector<FiniteAlgebra> out;
  GeneratorStats local;
  while (static_cast<int>(out.size()) < cfg.count) {
    int n = cfg.min_size +
            static_cast<int>(rng.below(cfg.max_size - cfg.min_size + 1));
    FiniteAlgebra a;
    a.name = "G" + std::to_string(cfg.seed) + "_" +
             std::to_string(local.emitted + local.rejected);
    a.size = n;
    for (std::size_t oi = 0; oi < cfg.arities.size(); ++oi) {
      OpTable t;
      t.name = "f" + std::to_string(oi + 1);
      t.arity = cfg.arities[oi];
      t.size = n;
      t.table.resize(table_size(n, t.arity));
      for (std::size_t idx = 0; idx < t.table.size(); ++idx) {
        // idempotent diagonal forced
        std::size_t rest = idx;
        bool diag = true;
        Elem first = -1;
        for (int p = t.arity - 1; p >= 0; --p) {
          Elem v = static_cast<Elem>(rest % n);
          rest /= n;
          if (first < 0)
            first = v;
          else if (v != first)
            diag = false;
        }
        t.table[idx] =
            diag ? first : static_cast<Elem>(rng.below(n));
      }
      a.ops.push_back(std::move(t));
    }
    bool keep = true;
    try {
      if (cfg.filter_smooth && !is_smooth(a, cap)) keep = false;
      if (keep && cfg.filter_omit_type1 && !omits_type_one(a, cap))
        keep = false;
    } catch (const CapExceeded&) {
      keep = false;
    }
    if (keep) {
      ++local.emitted;
      out.push_back(std::move(a));
    } else {
      ++local.rejected;
    }
  }
  if (stats) *stats = local;
  return out;
}

std::optional<SubdirectRelation> generate_relation(
    SplitMix64& rng, const std::vector<FiniteAlgebra>& pool, int max_factors,
    std::size_t cap) {
  if (pool.empty()) return std::nullopt;
  for (int attempt = 0; attempt < 16; ++attempt) {
    int nf = 2 + static_cast<int>(rng.below(std::max(1, max_factors - 1)));
    std::vector<FiniteAlgebra> factors;
    for (int i = 0; i < nf; ++i)
      factors.push_back(pool[rng.below(pool.size())]);
    int ngen = 2 + static_cast<int>(rng.below(3));
    std::vector<std::vector<Elem>> gens;
    for (int g = 0; g < ngen; ++g) {
      std::vector<Elem> t(nf);
      for (int i = 0; i < nf; ++i)
        t[i] = static_cast<Elem>(rng.below(factors[i].size));
      gens.push_back(std::move(t));
    }
    try {
      return make_relation(std::move(factors), gens, cap);
    } catch (const NotSubdirect&) {
      continue;
    } catch (const CapExceeded&) {
      continue;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

namespace {

struct Tokens {
  std::vector<std::string> toks;
  std::size_t pos = 0;
  explicit Tokens(const std::string& text) {
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::istringstream ls(line);
      std::string t;
      while (ls >> t) toks.push_back(t);
    }
  }
  std::string next(const char* what) {
    if (pos >= toks.size())
      throw SyntaxError(std::string("unexpected end of relation file, "
                                    "expected ") + what);
    return toks[pos++];
  }
  long next_int(const char* what) {
    std::string t = next(what);
    try {
      std::size_t used = 0;
      long v = std::stol(t, &used);
      if (used != t.size()) throw std::invalid_argument(t);
      return v;
    } catch (const std::exception&) {
      throw SyntaxError(std::string("expected integer for ") + what +
                        ", got '" + t + "'");
    }
  }
};

}  // namespace

SubdirectRelation parse_relation(
    const std::string& text,
    const std::map<std::string, FiniteAlgebra>& loaded, std::size_t cap) {
  Tokens tk(text);
  if (tk.next("'relation'") != "relation")
    throw SyntaxError("relation file must start with 'relation <name>'");
  tk.next("relation name");
  if (tk.next("'over'") != "over") throw SyntaxError("expected 'over'");
  std::vector<FiniteAlgebra> factors;
  std::string t = tk.next("factor name or 'arity'");
  while (t != "arity") {
    auto it = loaded.find(t);
    if (it == loaded.end())
      throw SyntaxError("relation references unknown algebra '" + t + "'");
    factors.push_back(it->second);
    t = tk.next("factor name or 'arity'");
  }
  long k = tk.next_int("arity");
  if (k != static_cast<long>(factors.size()))
    throw SyntaxError("arity " + std::to_string(k) + " does not match " +
                      std::to_string(factors.size()) + " listed factors");
  std::vector<std::vector<Elem>> gens;
  while (true) {
    std::string tok = tk.next("tuple entry or 'end'");
    if (tok == "end") break;
    std::vector<Elem> tup;
    tup.push_back(static_cast<Elem>(std::stol(tok)));
    for (long i = 1; i < k; ++i)
      tup.push_back(static_cast<Elem>(tk.next_int("tuple entry")));
    gens.push_back(std::move(tup));
  }
  return make_relation(std::move(factors), gens, cap);
}

std::string print_relation(const SubdirectRelation& r,
                           const std::string& name) {
  std::ostringstream os;
  os << "relation " << name << " over";
  for (const auto& f : r.factors) os << " " << f.name;
  os << " arity " << r.arity() << "\n";
  for (const auto& t : r.tuples) {
    for (std::size_t i = 0; i < t.size(); ++i)
      os << (i ? " " : "") << t[i];
    os << "\n";
  }
  os << "end\n";
  return os.str();
}

// ---------------------------------------------------------------------------

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::holds: return "holds";
    case Outcome::violated: return "violated";
    case Outcome::hypothesis_not_met: return "hypothesis-not-met";
    case Outcome::inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

std::uint64_t fnv(const std::vector<Elem>& v, std::uint64_t h) {
  for (Elem e : v) {
    h ^= static_cast<std::uint64_t>(e) + 0x9e3779b97f4a7c15ull;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex(std::uint64_t h) {
  std::ostringstream os;
  os << std::hex << (h & 0xffffffffull);
  return os.str();
}

}  // namespace

std::string Instance::fingerprint() const {
  if (relation) {
    std::uint64_t h = 1469598103934665603ull;
    for (const auto& f : relation->factors)
      for (const auto& op : f.ops) h = fnv(op.table, h);
    for (const auto& t : relation->tuples) h = fnv(t, h);
    return "rel[" + std::to_string(relation->arity()) + "x" +
           std::to_string(relation->size()) + "]#" + hex(h);
  }
  if (algebra) {
    std::uint64_t h = 1469598103934665603ull;
    for (const auto& op : algebra->ops) h = fnv(op.table, h);
    return "alg[" + std::to_string(algebra->size) + "]#" + hex(h);
  }
  return "empty";
}

Instance instance_of(FiniteAlgebra a) {
  Instance i;
  i.algebra = std::move(a);
  return i;
}

Instance instance_of(SubdirectRelation r) {
  Instance i;
  i.relation = std::move(r);
  return i;
}

std::string format_report(const VerificationReport& rep) {
  std::ostringstream os;
  os << "LEMMA " << rep.lemma << " " << outcome_name(rep.verdict) << " "
     << rep.fingerprint << " " << rep.millis;
  if (!rep.detail.empty()) {
    std::istringstream ds(rep.detail);
    std::string line;
    while (std::getline(ds, line)) os << "\n  " << line;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// DOT export

namespace {

std::string block_label(const Partition& p) {
  std::ostringstream os;
  bool first_block = true;
  for (const auto& b : p.blocks()) {
    if (!first_block) os << "|";
    first_block = false;
    for (std::size_t i = 0; i < b.size(); ++i) os << (i ? " " : "") << b[i];
  }
  return os.str();
}

const char* dot_colour(EdgeColour c) {
  switch (c) {
    case EdgeColour::semilattice: return "green";
    case EdgeColour::majority: return "blue";
    case EdgeColour::affine: return "red";
    case EdgeColour::unary: return "black";
  }
  return "black";
}

}  // namespace

std::string export_dot(const ConLattice& lat) {
  std::ostringstream os;
  os << "digraph con {\n  rankdir=BT;\n";
  for (std::size_t i = 0; i < lat.congruences.size(); ++i)
    os << "  n" << i << " [label=\"" << block_label(lat.congruences[i])
       << "\"];\n";
  for (auto [lo, hi] : lat.covers)
    os << "  n" << lo << " -> n" << hi << ";\n";
  os << "}\n";
  return os.str();
}

std::string export_dot(const ColouredGraph& g) {
  std::ostringstream os;
  os << "graph coloured {\n";
  int n = g.algebra ? g.algebra->size : 0;
  for (const auto& e : g.edges) n = std::max({n, e.a + 1, e.b + 1});
  for (int i = 0; i < n; ++i) os << "  n" << i << " [label=\"" << i << "\"];\n";
  for (const auto& e : g.edges)
    os << "  n" << e.a << " -- n" << e.b << " [color=" << dot_colour(e.colour)
       << "];\n";
  os << "}\n";
  return os.str();
}

std::string export_dot(const ThinGraph& g) {
  std::ostringstream os;
  os << "digraph thin {\n";
  for (int i = 0; i < g.n; ++i) os << "  n" << i << " [label=\"" << i << "\"];\n";
  for (const auto& e : g.edges) {
    os << "  n" << e.a << " -> n" << e.b << " [color=" << dot_colour(e.colour);
    if (e.special) os << ",style=bold";
    os << "];\n";
  }
  os << "}\n";
  return os.str();
}

std::optional<FiniteAlgebra> builtin_fixture(const std::string& name) {
  if (name == "S2") return make_s2();
  if (name == "A2") return make_a2();
  if (name == "M2") return make_m2();
  if (name == "S2xS2") return direct_product({make_s2(), make_s2()});
  if (name == "A2xA2") return direct_product({make_a2(), make_a2()});
  if (name == "M2xM2") return direct_product({make_m2(), make_m2()});
  return std::nullopt;
}

}  // namespace algwb
