// Tame-congruence-theory primitives: minimal sets, traces, subtraces, type
// labels, pseudo-meet/join witnesses and the Z-set.
#pragma once

#include <optional>
#include <vector>

#include "algwb/clone.hpp"
#include "algwb/congruence.hpp"

namespace algwb {

struct MinimalSet {
  PrimeInterval interval;
  std::vector<Elem> elements;  // U, sorted
  UnaryMap witness;            // idempotent, witness(A) = U, witness(beta) !<= alpha
};

// Whether alpha is covered by beta in Con(A): both congruences, alpha < beta,
// and every pair of beta - alpha generates beta over alpha.
bool is_prime_pair(const FiniteAlgebra& a, const Partition& alpha,
                   const Partition& beta);

// All (alpha,beta)-minimal sets with idempotent witnesses; pairwise
// polynomial isomorphism is verified.  Throws NotPrime.
std::vector<MinimalSet> minimal_sets(const FiniteAlgebra& a,
                                     const Partition& alpha,
                                     const Partition& beta,
                                     std::size_t cap = kDefaultCap);

// The induced polynomial tables on N/(alpha|N) for one arity: restrictions
// of the polynomials of A preserving N, factored by alpha.
struct InducedQuotient {
  int size = 0;                       // number of alpha-classes inside N
  std::vector<Elem> class_of;         // position in N -> class index
  std::vector<Elem> rep;              // class index -> representative in A
  std::vector<std::vector<Elem>> tables;  // induced tables, dedup, sorted
};
InducedQuotient induced_quotient_clone(const FiniteAlgebra& a,
                                       const Partition& alpha,
                                       const std::vector<Elem>& n, int arity,
                                       std::size_t cap = kDefaultCap);

struct TraceClassification {
  int label = 0;  // 1..5
  bool essentially_unary = false;
  bool has_maltsev = false;
  bool abelian = false;       // module reconstruction succeeded
  bool has_meet = false;      // some semilattice table on the 2-class quotient
  bool has_join = false;      // both orientations present
  bool has_complement = false;
};
TraceClassification classify_trace(const FiniteAlgebra& a,
                                   const Partition& alpha,
                                   const std::vector<Elem>& trace,
                                   std::size_t cap = kDefaultCap);

struct TraceStructure {
  MinimalSet minimal_set;
  std::vector<std::vector<Elem>> traces;
  std::vector<std::pair<Elem, Elem>> subtraces;
  int type_label = 0;
};
TraceStructure trace_structure(const FiniteAlgebra& a, const Partition& alpha,
                               const Partition& beta, const MinimalSet& u,
                               std::size_t cap = kDefaultCap);

// Common type of all minimal sets; well-definedness asserted.
int interval_type(const FiniteAlgebra& a, const Partition& alpha,
                  const Partition& beta, std::size_t cap = kDefaultCap);

struct PseudoMeetJoin {
  Elem one = -1;
  std::vector<Elem> p;                 // binary polynomial table on A
  std::optional<std::vector<Elem>> q;  // types 3 and 4
};
PseudoMeetJoin pseudo_meet_join(const FiniteAlgebra& a, const Partition& alpha,
                                const Partition& beta, const MinimalSet& u,
                                std::size_t cap = kDefaultCap);

// Union of all (alpha,beta)-subtraces.
std::vector<Elem> z_set(const FiniteAlgebra& a, const Partition& alpha,
                        const Partition& beta, std::size_t cap = kDefaultCap);

}  // namespace algwb
