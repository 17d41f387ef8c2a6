// Block frames, block-preserving polynomial sets, T-sets, the chained
// conditions (Q1)/(Q2), relative-symmetry witnesses, collapsing-polynomial
// search, polynomially-closed / as-closed predicates, and the Congruence
// Lemma evaluator.
#pragma once

#include <memory>
#include <optional>

#include "algwb/graph.hpp"
#include "algwb/separation.hpp"
#include "algwb/subdirect.hpp"

namespace algwb {

struct BlockFrame {
  std::vector<Partition> beta;            // beta_j per factor
  std::vector<std::vector<Elem>> blocks;  // chosen beta_j-block per factor
  std::vector<int> rprime;                // tuple indices of R' = R cap B
  std::vector<std::vector<Elem>> bprime;  // B'_j = pr_j R'
};

BlockFrame full_frame(const SubdirectRelation& r);
// Blocks chosen as the beta_j-blocks of the witness tuple.
BlockFrame block_frame(const SubdirectRelation& r,
                       std::vector<Partition> beta,
                       const std::vector<Elem>& witness_tuple);

// Shared caches for one (relation, frame) pair.
struct FrameEnv {
  const SubdirectRelation* r = nullptr;
  const ClassContext* ctx = nullptr;
  BlockFrame frame;
  std::size_t cap = kDefaultCap;
  std::shared_ptr<PolyClosure> pols;   // pol1 of the relation algebra
  std::vector<UnaryMap> preserving;    // U_B as maps on tuple indices

  UnaryMap factor_action(const UnaryMap& f, int factor) const;
};

FrameEnv make_env(const SubdirectRelation& r, const ClassContext& ctx,
                  BlockFrame frame, std::size_t cap = kDefaultCap);

struct CollapseSpec {
  int factor = 0;
  Partition gamma, delta;  // gamma covered by delta, delta <= beta_factor
};

// U(gamma,delta,B): B-preserving polynomials whose action on the collapse
// factor maps delta into gamma.
std::vector<UnaryMap> u_collapse(const FrameEnv& env, const CollapseSpec& cs);

// T_alpha(a,b,U) as unordered pairs of alpha-class representatives; `maps`
// act on the same universe alpha lives on.
std::vector<std::pair<Elem, Elem>> t_set(const Partition& alpha, Elem a,
                                         Elem b,
                                         const std::vector<UnaryMap>& maps);

// U-chained with respect to D (a subuniverse of the host, as element list).
Verdict is_u_chained(const FiniteAlgebra& host, const ThinGraph& thin,
                     const Partition& alpha, const Partition& beta,
                     const std::vector<UnaryMap>& maps,
                     const std::vector<Elem>& d);

// Conditions (Q1) and (Q2) over all coordinate subsets (arity capped).
Verdict is_chained(const FrameEnv& env, int max_arity = 4);

// Theorem relative-symmetry: a B-preserving g with g(beta|B'_f1) <= alpha,
// g(delta) !<= gamma, fixing the gamma-classes c and d elementwise on the
// quotient.  c_class/d_class are classes of A_f2/gamma given by reps.
UnaryMap relative_symmetry_witness(const FrameEnv& env, int f1,
                                   const PrimeInterval& i1, int f2,
                                   const PrimeInterval& i2, Elem c_rep,
                                   Elem d_rep, bool check_chained = true);

enum class CollapsingVariant { plain, d, e, f };
struct CollapsingData {
  std::pair<Elem, Elem> subtrace{-1, -1};  // variants d and f
  std::vector<Elem> fix_tuple;             // variants e and f
};

// Theorem collapsing: an alpha/beta_i-collapsing polynomial for the frame,
// satisfying the requested extra condition.  Lexicographically least
// qualifying map; NotFound is a theorem-violation report.
UnaryMap collapsing_search(const FrameEnv& env, int factor,
                           const Partition& alpha, CollapsingVariant variant,
                           const CollapsingData& data = {},
                           bool check_chained = true);

// Q (a subalgebra of R given by tuple indices) polynomially closed in R.
Verdict is_poly_closed(const FrameEnv& env, const std::vector<int>& q);

// S as-closed in Q inside the given thin graph.
Verdict is_as_closed(const ThinGraph& g, const std::vector<Elem>& q,
                     const std::vector<Elem>& s);
// Weak variant: every projection of S as-closed in the projection of Q.
Verdict is_weakly_as_closed(const FrameEnv& env, const std::vector<int>& q,
                            const std::vector<int>& s);

struct CongruenceLemmaOutcome {
  int option = 0;  // 1 or 2; 0 = violation / inconclusive
  std::vector<Elem> component;                 // the as-component C used
  std::vector<Elem> b2;                        // B''_2 = R'[C]
  Partition eta, beta_prime;                   // option 2
  std::vector<std::pair<Elem, Elem>> phi;      // option 2: graph of mapping
  bool inconclusive = false;
  std::string detail;
};

// Lemma affine-link for a binary frame with alpha = 0 on factor 1.
// `rprime_sub` is the polynomially closed subalgebra R' (tuple indices).
CongruenceLemmaOutcome congruence_lemma_eval(const FrameEnv& env,
                                             const std::vector<int>& rprime_sub,
                                             bool check_hypotheses = true);

}  // namespace algwb
