// File formats, deterministic random instance generation, the
// lemma-verification registry and DOT export.
#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "algwb/chaining.hpp"

namespace algwb {

// splitmix64; the constants are part of the output contract (identical
// seeds must generate identical instance streams on every platform).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
  std::uint64_t below(std::uint64_t n) { return next() % n; }

 private:
  std::uint64_t state_;
};

struct GeneratorConfig {
  std::uint64_t seed = 0;
  int min_size = 2;
  int max_size = 3;
  std::vector<int> arities = {2, 3};
  bool filter_smooth = true;
  bool filter_omit_type1 = true;
  int count = 1;
};

struct GeneratorStats {
  int emitted = 0;
  int rejected = 0;
};

// Deterministic stream: tables filled from the seeded generator with the
// idempotent diagonal forced, then filtered.
std::vector<FiniteAlgebra> generate_instances(const GeneratorConfig& cfg,
                                              GeneratorStats* stats = nullptr,
                                              std::size_t cap = kDefaultCap);

// A deterministic subdirect product grown from random tuples over factors
// drawn from the same stream; nullopt when the tuples never close to a
// subdirect product within the attempt budget.
std::optional<SubdirectRelation> generate_relation(
    SplitMix64& rng, const std::vector<FiniteAlgebra>& pool, int max_factors,
    std::size_t cap = kDefaultCap);

// Relation file: "relation <name> over <alg> <alg> ... arity <k>",
// one k-tuple per line, "end".  Referenced algebras are looked up by name.
SubdirectRelation parse_relation(
    const std::string& text,
    const std::map<std::string, FiniteAlgebra>& loaded,
    std::size_t cap = kDefaultCap);
std::string print_relation(const SubdirectRelation& r,
                           const std::string& name);

// ---------------------------------------------------------------------------
// Verification registry

enum class Outcome { holds, violated, hypothesis_not_met, inconclusive };
const char* outcome_name(Outcome o);

struct VerificationReport {
  std::string lemma;
  std::string fingerprint;
  Outcome verdict = Outcome::holds;
  std::string detail;       // counterexample or reason
  long long millis = 0;
};

struct Instance {
  std::optional<FiniteAlgebra> algebra;
  std::optional<SubdirectRelation> relation;

  std::string fingerprint() const;
};

Instance instance_of(FiniteAlgebra a);
Instance instance_of(SubdirectRelation r);

// Registered statement checkers, in registry order.
const std::vector<std::string>& lemma_ids();
bool lemma_takes_relation(const std::string& id);

VerificationReport verify(const std::string& lemma_id, const Instance& inst,
                          std::size_t cap = kDefaultCap);

std::string format_report(const VerificationReport& rep);

// ---------------------------------------------------------------------------
// DOT export (deterministic: nodes sorted, fixed colour map)

std::string export_dot(const ConLattice& lat);
std::string export_dot(const ColouredGraph& g);
std::string export_dot(const ThinGraph& g);

// Built-in fixtures by name (S2, A2, M2, S2xS2, A2xA2, M2xM2).
std::optional<FiniteAlgebra> builtin_fixture(const std::string& name);

}  // namespace algwb
