// Finite algebras given by operation tables, and the basic constructions:
// subalgebra generation, quotients, restrictions, direct products, term
// clones and the HS-class.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "algwb/errors.hpp"

namespace algwb {

using Elem = int;

// Operation table over a universe {0..n-1}.  Entries are row-major with the
// last argument varying fastest; this one convention is shared by every
// module and by the file format.
struct OpTable {
  std::string name;
  int arity = 0;
  int size = 0;  // universe size the table is over
  std::vector<Elem> table;

  Elem apply(const std::vector<Elem>& args) const;
  Elem apply1(Elem a) const { return table[a]; }
  Elem apply2(Elem a, Elem b) const { return table[a * size + b]; }
  Elem apply3(Elem a, Elem b, Elem c) const {
    return table[(a * size + b) * size + c];
  }
  bool is_idempotent() const;
  bool is_projection() const;  // equal to some coordinate projection

  bool operator==(const OpTable& o) const {
    return arity == o.arity && size == o.size && table == o.table;
  }
  bool operator<(const OpTable& o) const { return table < o.table; }
};

std::size_t table_size(int universe, int arity);

struct FiniteAlgebra {
  std::string name;
  int size = 0;
  std::vector<OpTable> ops;

  bool is_idempotent() const;
  // Throws RangeError / NotIdempotent unless allow_non_idempotent is set.
  void validate(bool allow_non_idempotent = false) const;
  std::vector<int> arities() const;
  bool same_signature(const FiniteAlgebra& other) const;

  // Structural identity of the labelled tables (names ignored).
  bool same_tables(const FiniteAlgebra& other) const;
};

// ---------------------------------------------------------------------------
// Constructions

// Least subuniverse containing `gens`.
std::vector<Elem> sg_closure(const FiniteAlgebra& a,
                             const std::vector<Elem>& gens);

struct Partition;  // congruence.hpp

// Quotient modulo a congruence.  Blocks are indexed by least representative
// and renumbered densely in that order; `block_of` maps old elements to new.
struct QuotientResult {
  FiniteAlgebra algebra;
  std::vector<Elem> block_of;        // size |A|
  std::vector<Elem> representative;  // size |A/theta|, least element per block
};
QuotientResult quotient(const FiniteAlgebra& a, const Partition& theta);

// Restriction to a subuniverse (elements renumbered in increasing order).
struct RestrictResult {
  FiniteAlgebra algebra;
  std::vector<Elem> elements;  // new index -> old element, increasing
  std::vector<Elem> index_of;  // old element -> new index, -1 outside
};
RestrictResult restrict_algebra(const FiniteAlgebra& a,
                                const std::vector<Elem>& subuniverse);

// Direct product; universe encoded mixed-radix with factor 1 most
// significant.
FiniteAlgebra direct_product(const std::vector<FiniteAlgebra>& factors);
std::vector<Elem> product_decode(Elem code, const std::vector<int>& sizes);
Elem product_encode(const std::vector<Elem>& tuple,
                    const std::vector<int>& sizes);

// All k-ary term operations: fixpoint closure of the k projections under
// composition with basic operations.  Deterministic order: projections
// first, then breadth-first rounds, new tables of a round sorted
// lexicographically.  Throws CapExceeded past `cap` tables.
std::vector<OpTable> term_clone(const FiniteAlgebra& a, int k,
                                std::size_t cap = kDefaultCap);

// All nonempty subuniverses, each sorted, the list sorted (size, elements).
std::vector<std::vector<Elem>> all_subuniverses(const FiniteAlgebra& a,
                                                std::size_t cap = kDefaultCap);

// Canonical relabelling: the lexicographically least flattened table
// sequence over all permutations of the universe.  Exact; used for
// isomorphism reduction at small sizes.
std::vector<Elem> canonical_table_key(const FiniteAlgebra& a);
// Same, also returning the relabelling old -> new that achieves the key.
std::pair<std::vector<Elem>, std::vector<Elem>> canonical_table_key_perm(
    const FiniteAlgebra& a);

struct AlgebraClass {
  std::vector<FiniteAlgebra> members;  // signature-uniform, deterministic order
};

// HS(A): all quotients of all subalgebras, up to isomorphism of labelled
// tables (exact canonical form for members of size <= 6, identity-form
// deduplication above that).
AlgebraClass hs_class(const FiniteAlgebra& a, std::size_t cap = kDefaultCap);
AlgebraClass hs_class(const std::vector<FiniteAlgebra>& generators,
                      std::size_t cap = kDefaultCap);

// ---------------------------------------------------------------------------
// Text format (grammar in the README):
//   algebra <name>
//   size <n>
//   op <name> <arity>
//   <n^arity integers>
//   end
FiniteAlgebra parse_algebra(const std::string& text,
                            bool allow_non_idempotent = false);
std::string print_algebra(const FiniteAlgebra& a);

// Fixture algebras used throughout the test-suite and docs.
FiniteAlgebra make_s2();  // ({0,1}; meet)
FiniteAlgebra make_a2();  // ({0,1}; x+y+z mod 2)
FiniteAlgebra make_m2();  // ({0,1}; majority)
FiniteAlgebra make_set2();  // ({0,1}; no operations)

}  // namespace algwb
