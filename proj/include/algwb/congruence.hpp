// Partitions, congruence generation, the congruence lattice, prime
// intervals and perspectivity.
#pragma once

#include <vector>

#include "algwb/algebra.hpp"

namespace algwb {

// Partition of {0..n-1} stored as least-representative labels, so equality
// of congruences is structural equality.
// Invariants: labels[labels[i]] == labels[i] and labels[i] <= i.
struct Partition {
  std::vector<Elem> labels;

  Partition() = default;
  explicit Partition(std::vector<Elem> lab) : labels(std::move(lab)) {}

  int size() const { return static_cast<int>(labels.size()); }
  Elem rep(Elem x) const { return labels[x]; }
  bool related(Elem x, Elem y) const { return labels[x] == labels[y]; }
  int block_count() const;
  std::vector<std::vector<Elem>> blocks() const;
  std::vector<Elem> block_of(Elem x) const;
  bool is_equality() const;
  bool is_full() const;

  // theta <= other in the refinement order.
  bool leq(const Partition& other) const;

  bool operator==(const Partition& o) const { return labels == o.labels; }
  bool operator<(const Partition& o) const { return labels < o.labels; }
};

Partition partition_equality(int n);
Partition partition_full(int n);
// Normalises an arbitrary label vector to least-representative form.
Partition partition_from_labels(const std::vector<Elem>& raw);
Partition partition_from_pairs(int n,
                               const std::vector<std::pair<Elem, Elem>>& ps);

Partition partition_meet(const Partition& a, const Partition& b);
// Transitive closure of the union; a congruence whenever both are.
Partition partition_join(const Partition& a, const Partition& b);

// All partitions of an n-element set (test oracle; n small).
std::vector<Partition> all_partitions(int n);

bool is_congruence(const FiniteAlgebra& a, const Partition& p);

// Least congruence containing `pairs` (Mal'tsev worklist over elementary
// translations).
Partition cg_closure(const FiniteAlgebra& a,
                     const std::vector<std::pair<Elem, Elem>>& pairs);

struct PrimeInterval {
  Partition lower;
  Partition upper;

  bool operator==(const PrimeInterval& o) const {
    return lower == o.lower && upper == o.upper;
  }
};

struct ConLattice {
  std::vector<Partition> congruences;          // sorted by label sequence
  std::vector<std::pair<int, int>> covers;     // (lower, upper) index pairs

  int index_of(const Partition& p) const;      // -1 if absent
  std::vector<int> lower_covers(int i) const;  // indices covered by i
  std::vector<int> upper_covers(int i) const;
  std::vector<int> atoms() const;              // upper covers of the equality
  std::vector<int> coatoms() const;            // lower covers of the full one
};

// Complete congruence lattice: join-closure of the principal congruences.
ConLattice con_lattice(const FiniteAlgebra& a, std::size_t cap = kDefaultCap);

std::vector<PrimeInterval> prime_intervals(const ConLattice& lat);

// Whether alpha has beta as an upper cover within Con(A).
bool is_prime_interval(const ConLattice& lat, const Partition& alpha,
                       const Partition& beta);

// Paper clauses: beta = alpha v delta and gamma = alpha ^ delta, or
// delta = beta v gamma and alpha = beta ^ gamma, for intervals
// (alpha,beta), (gamma,delta).
bool is_perspective(const PrimeInterval& i1, const PrimeInterval& i2);

}  // namespace algwb
