// Polynomial enumeration, idempotent iterates, the relation Q_ab, and
// extension of polynomials from a projection of a relation to the relation.
#pragma once

#include <string>
#include <vector>

#include "algwb/clone.hpp"

namespace algwb {

struct SubdirectRelation;

struct PolySet {
  int arity = 1;
  std::vector<std::vector<Elem>> members;  // tables, enumeration order
  std::string filter = "none";
};

// All unary polynomials: closure of {identity} and the constant maps under
// composition with the basic operations.  Constants are polynomials because
// the algebras are idempotent (t(c,...,c) = c), which the unit tests record.
PolySet pol1(const FiniteAlgebra& a, std::size_t cap = kDefaultCap);

// All k-ary polynomials (projections and constants as seeds).
PolySet polk(const FiniteAlgebra& a, int k, std::size_t cap = kDefaultCap);

// Componentwise closure of a tuple set under the operations (coordinates may
// live in different algebras of one signature).  Result sorted.
std::vector<std::vector<Elem>> sg_closure_tuples(
    const std::vector<const FiniteAlgebra*>& coord_algs,
    const std::vector<std::vector<Elem>>& gens, std::size_t cap = kDefaultCap);

// Q_ab: the subalgebra of A^2 generated by the diagonal and (a,b); equals
// {(f(a), f(b)) | f unary polynomial}, which is cross-checked when pol1
// stays within cap.
std::vector<std::pair<Elem, Elem>> qab_relation(const FiniteAlgebra& a, Elem x,
                                                Elem y,
                                                std::size_t cap = kDefaultCap);

// Extension of a polynomial of pr_I R to a polynomial of R: every constant
// (a pr_I R tuple) is replaced by its lexicographically least extension in R.
// `pc` must be the polynomial closure of the materialised pr_I R algebra;
// the result is the extension's action on R's tuple indices.
UnaryMap extend_polynomial(const SubdirectRelation& r,
                           const std::vector<int>& coords,
                           const PolyClosure& pc, int poly_index);

}  // namespace algwb
