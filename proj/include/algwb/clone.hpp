// Closure engine for term and polynomial searches.
//
// A closure enumerates the joint value-vectors of all k-ary terms (or
// polynomials) of a fixed signature at a chosen list of evaluation
// coordinates.  Each coordinate is an argument tuple in some algebra of the
// signature; coordinates of one closure may live in different algebras, which
// is how class-wide term conditions ("... on every member of the class") are
// decided without enumerating full tables.  Every element records its
// derivation, so a witness can be re-evaluated on any other algebra of the
// signature.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "algwb/algebra.hpp"

namespace algwb {

struct EvalCoord {
  const FiniteAlgebra* alg = nullptr;
  std::vector<Elem> args;
};

// generator >= 0: seed (projections first, then constants when enabled);
// otherwise op/children describe one composition step.
struct Derivation {
  int generator = -1;
  int op = -1;
  std::vector<int> children;
};

class ValueClosure {
 public:
  // `sig` supplies the operation arities (tables are taken per-coordinate).
  // Constants are only meaningful when every coordinate lives in a single
  // algebra; they are seeded in element order after the projections.
  ValueClosure(const FiniteAlgebra& sig, int arity,
               std::vector<EvalCoord> coords, bool with_constants,
               std::size_t cap = kDefaultCap);

  void run();  // to fixpoint; throws CapExceeded

  int arity() const { return arity_; }
  std::size_t size() const { return vectors_.size(); }
  const std::vector<Elem>& vector_of(int i) const { return vectors_[i]; }
  const std::vector<std::vector<Elem>>& vectors() const { return vectors_; }
  int find(const std::vector<Elem>& target) const;
  int num_projection_generators() const { return arity_; }
  bool uses_constants(int i) const;
  const FiniteAlgebra& signature() const { return *sig_; }
  Elem constant_value(int gen) const;  // generator index -> constant element

  // Evaluate element i at a point of algebra `m` (same signature).  Elements
  // whose derivation uses constants can only be evaluated on the original
  // algebra.
  Elem eval_at(int i, const FiniteAlgebra& m, const std::vector<Elem>& args) const;
  OpTable materialize(int i, const FiniteAlgebra& m) const;

  // Re-evaluate element i with the seeds replaced: seed j takes the value
  // seed_values[j] at a single imaginary coordinate of algebra `m`.  Used for
  // extending polynomials along a generator mapping.
  Elem eval_with_seeds(int i, const FiniteAlgebra& m,
                       const std::vector<Elem>& seed_values) const;

  const Derivation& derivation(int i) const { return derivs_[i]; }

 private:
  const FiniteAlgebra* sig_;
  int arity_;
  std::vector<EvalCoord> coords_;
  bool with_constants_;
  std::size_t cap_;
  bool ran_ = false;

  std::vector<std::vector<Elem>> vectors_;
  std::vector<Derivation> derivs_;
  std::vector<char> has_constant_;  // per element
};

// Convenience wrappers ------------------------------------------------------

// Is there a k-ary term with the given values at the given coordinates?
bool term_exists(const FiniteAlgebra& sig, int arity,
                 const std::vector<EvalCoord>& coords,
                 const std::vector<Elem>& target,
                 std::size_t cap = kDefaultCap);

// All k-ary polynomial tables of `a` (coordinates = every argument tuple,
// table order), derivations retained.
class PolyClosure {
 public:
  PolyClosure(const FiniteAlgebra& a, int arity, std::size_t cap = kDefaultCap);

  const FiniteAlgebra& algebra() const { return *alg_; }
  int arity() const { return closure_.arity(); }
  std::size_t size() const { return closure_.size(); }
  // For arity 1 the vector is the unary map itself; in general the table.
  const std::vector<Elem>& table(int i) const { return closure_.vector_of(i); }
  const std::vector<std::vector<Elem>>& tables() const {
    return closure_.vectors();
  }
  int find(const std::vector<Elem>& t) const { return closure_.find(t); }
  const ValueClosure& closure() const { return closure_; }

 private:
  const FiniteAlgebra* alg_;
  ValueClosure closure_;
};

using UnaryMap = std::vector<Elem>;

UnaryMap compose(const UnaryMap& outer, const UnaryMap& inner);
bool is_idempotent_map(const UnaryMap& f);
std::vector<Elem> map_image(const UnaryMap& f);
// Least idempotent iterate f^m (m >= 1) with f^m o f^m = f^m.
UnaryMap idempotent_power(const UnaryMap& f);

}  // namespace algwb
