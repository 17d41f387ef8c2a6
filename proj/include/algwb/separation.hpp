// Separation of prime intervals by unary polynomials, the separation
// matrix, minimal-set-normalised separators, centralizers and alignment.
#pragma once

#include <optional>

#include "algwb/subdirect.hpp"
#include "algwb/tct.hpp"

namespace algwb {

struct IntervalRef {
  int factor = 0;  // 0-based coordinate of the subdirect product
  PrimeInterval interval;
};

// f separates I from J: the action on factor I keeps beta_I off alpha_I
// while the action on factor J collapses beta_J into alpha_J.
bool separates(const SubdirectRelation& r, const UnaryMap& f,
               const IntervalRef& i, const IntervalRef& j);

// Complete search over pol1(R).  nullopt = cannot be separated (the
// enumeration is complete); CapExceeded propagates and is never reported as
// "cannot".
std::optional<UnaryMap> can_separate(const SubdirectRelation& r,
                                     const IntervalRef& i,
                                     const IntervalRef& j,
                                     std::size_t cap = kDefaultCap);

enum class SepEntry : int { no = -1, unknown = 0, yes = 1 };

struct SeparationMatrix {
  std::vector<IntervalRef> intervals;  // all prime intervals of all factors
  std::vector<std::vector<SepEntry>> sep;
  std::vector<std::vector<UnaryMap>> witness;  // filled where sep = yes
  bool complete = true;

  // decided "cannot be separated" in both directions
  bool mutually_nonseparable(int i, int j) const {
    return sep[i][j] == SepEntry::no && sep[j][i] == SepEntry::no;
  }
  int index_of(const IntervalRef& ref) const;
};

SeparationMatrix separation_matrix(const SubdirectRelation& r,
                                   std::size_t cap = kDefaultCap);

// The complement relation "cannot be separated from" must be reflexive and
// transitive on the decided part; returns false with a detail on violation.
Verdict check_nonseparation_preorder(const SeparationMatrix& m);

// Single-algebra separation routed through the doubled equality relation.
std::optional<UnaryMap> can_separate_single(const FiniteAlgebra& a,
                                            const PrimeInterval& i1,
                                            const PrimeInterval& i2,
                                            std::size_t cap = kDefaultCap);

// Lemma min-set-separation: an idempotent separator whose image on factor I
// is an (alpha,beta)-minimal set, produced by the lemma's recipe.
UnaryMap normalize_separator(const SubdirectRelation& r, const IntervalRef& i,
                             const IntervalRef& j, const UnaryMap& f,
                             std::size_t cap = kDefaultCap);

// Largest theta with C(theta, beta; alpha); decided pair-by-pair through
// subpower closures, then the largest congruence inside the passing pairs.
Partition centralizer(const FiniteAlgebra& a, const Partition& alpha,
                      const Partition& beta, std::size_t cap = kDefaultCap);

// zeta(alpha,beta): invariance of "g^x collapses beta into alpha".
Partition quasi_centralizer(const FiniteAlgebra& a, const Partition& alpha,
                            const Partition& beta,
                            std::size_t cap = kDefaultCap);

// alpha1-alpha2 alignment of the two coordinate positions of a binary R.
bool alignment_check(const SubdirectRelation& r, const Partition& alpha1,
                     const Partition& alpha2);

}  // namespace algwb
