// The edge-coloured graph of an algebra, smoothness and type-1 tests, the
// uniform operations of a class, thin edges, the connectivity/maximality
// report, and the special operations t_ab, h_ab, p, h'.
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "algwb/congruence.hpp"
#include "algwb/clone.hpp"

namespace algwb {

enum class EdgeColour { semilattice, majority, affine, unary };
const char* colour_name(EdgeColour c);

// Reconstructed abelian group of a quotient that passed the module test.
struct ModuleStructure {
  Elem zero = 0;
  std::vector<Elem> add;  // size n^2
  std::vector<Elem> neg;  // size n
  std::vector<Elem> mal;  // the witnessing Mal'tsev term table, size n^3
};

struct Edge {
  Elem a = 0, b = 0;  // a < b
  EdgeColour colour = EdgeColour::unary;
  RestrictResult sub;       // B = Sg{a,b} as an algebra
  Partition theta;          // maximal congruence of B witnessing the colour
  QuotientResult quot;      // B/theta
  Elem qa = 0, qb = 0;      // classes of a and b in B/theta
  std::optional<ModuleStructure> module;  // affine colour only

  // the thick edge {a/theta, b/theta} as elements of the ambient algebra
  std::vector<Elem> block_a_in_parent() const;
  std::vector<Elem> block_b_in_parent() const;
};

struct ColouredGraph {
  const FiniteAlgebra* algebra = nullptr;
  std::vector<Edge> edges;  // pairs in lex order, witnesses in lattice order

  bool has_colour(EdgeColour c) const;
  const Edge* find_edge(Elem a, Elem b, EdgeColour c) const;  // unordered pair
};

ColouredGraph coloured_graph(const FiniteAlgebra& a,
                             std::size_t cap = kDefaultCap);

bool is_smooth(const FiniteAlgebra& a, std::size_t cap = kDefaultCap);
bool omits_type_one(const FiniteAlgebra& a, std::size_t cap = kDefaultCap);

// ---------------------------------------------------------------------------
// Thin edges

struct ThinEdge {
  Elem a = 0, b = 0;  // directed a -> b
  EdgeColour colour = EdgeColour::semilattice;
  bool special = false;  // thin majority edge that is also a majority edge
};

enum class PathKind { s, as, asm_ };

struct ThinGraph {
  int n = 0;
  std::vector<ThinEdge> edges;
  // adjacency[x][y] per kind
  std::vector<std::vector<char>> adj_s, adj_as, adj_asm;

  const std::vector<std::vector<char>>& adj(PathKind k) const;
  bool has_edge(Elem a, Elem b) const;  // any thin edge a -> b
};

// Strongly connected components of the induced subgraph on `subset`
// (whole universe when empty is passed to helpers below explicitly).
std::vector<std::vector<Elem>> components_in(const ThinGraph& g, PathKind k,
                                             const std::vector<Elem>& subset);
// Elements of the maximal (sink) components of the induced subgraph.
std::vector<Elem> max_in(const ThinGraph& g, PathKind k,
                         const std::vector<Elem>& subset);
// Reachability x ->* y inside the induced subgraph.
bool reaches_in(const ThinGraph& g, PathKind k, const std::vector<Elem>& subset,
                Elem x, Elem y);
// The component of x in the induced subgraph.
std::vector<Elem> component_of_in(const ThinGraph& g, PathKind k,
                                  const std::vector<Elem>& subset, Elem x);

std::vector<Elem> whole_universe(int n);

// Per-spec maximality report, with the as-connectivity checks performed.
struct Connectivity {
  std::vector<std::vector<Elem>> s_comps, as_comps, asm_comps;
  std::vector<int> s_id, as_id, asm_id;  // component index per element
  std::vector<Elem> max_elems, amax_elems, umax_elems;
  bool as_connectivity_undirected_ok = false;  // Prop as-connectivity (1)
  bool as_connectivity_directed_ok = false;    // Prop as-connectivity (2)
  bool unique_umax_component = false;
};
Connectivity connectivity(const ThinGraph& g);

// ---------------------------------------------------------------------------
// Class context: a finite class closed under subalgebras and quotients, the
// coloured graphs of its members, the fixed operations of Theorem "uniform",
// Lemma "good-operation" and Theorem "pseudo-majority", and thin-edge
// computation for any algebra of the signature relative to this class.

// A term of the class; evaluable on any algebra of the signature.
struct TermOp {
  std::shared_ptr<const ValueClosure> closure;
  int id = -1;

  bool valid() const { return id >= 0; }
  Elem eval(const FiniteAlgebra& m, const std::vector<Elem>& args) const;
  OpTable table_on(const FiniteAlgebra& m) const;
};

struct UniformOps {
  TermOp f, g, h, maj, mult;
};

class ClassContext {
 public:
  explicit ClassContext(AlgebraClass cls, std::size_t cap = kDefaultCap);
  static ClassContext for_algebra(const FiniteAlgebra& a,
                                  std::size_t cap = kDefaultCap);
  static ClassContext for_factors(const std::vector<FiniteAlgebra>& factors,
                                  std::size_t cap = kDefaultCap);

  const AlgebraClass& cls() const { return cls_; }
  std::size_t cap() const { return cap_; }

  const ColouredGraph& coloured(int member) const;
  // Content-addressed; also usable for non-member algebras of the signature.
  const ColouredGraph& coloured(const FiniteAlgebra& x) const;

  bool omits_type_one() const;
  bool all_smooth() const;

  // Fixed operations (lazy, deterministic least witness).  NotFound signals
  // a hypothesis violation of the corresponding theorem.
  const TermOp& op_f() const;
  const TermOp& op_g() const;
  const TermOp& op_h() const;
  const TermOp& op_maj() const;
  const TermOp& op_mult() const;
  UniformOps uniform_ops() const;

  // Thin edges of `x` (any algebra of the signature) relative to this class.
  const ThinGraph& thin_graph(const FiniteAlgebra& x) const;

  // Thin semilattice test (class-independent, cached).
  bool thin_sl_edge(const FiniteAlgebra& x, Elem a, Elem b) const;

  // Special operations of Lemma "op-s-on-affine".
  TermOp special_t_ab(const FiniteAlgebra& x, Elem a, Elem b) const;
  TermOp special_h_ab(const FiniteAlgebra& x, Elem a, Elem b) const;
  TermOp special_p(const FiniteAlgebra& x1, Elem a, Elem b,
                   const FiniteAlgebra& x2, Elem c, Elem d) const;
  TermOp special_h_prime(const FiniteAlgebra& x1, Elem a, Elem b,
                         const FiniteAlgebra& x2, Elem c, Elem d) const;

  // All "majority condition" / "minority condition" witnesses evaluated at
  // the given points of `x`: the set of joint value rows over all qualifying
  // terms of the class.  Complete (the closure is finite); CapExceeded
  // aborts honestly.
  std::vector<std::vector<Elem>> majority_condition_values(
      const FiniteAlgebra& x, const std::vector<std::vector<Elem>>& points) const;
  std::vector<std::vector<Elem>> minority_condition_values(
      const FiniteAlgebra& x, const std::vector<std::vector<Elem>>& points) const;

 private:
  struct Search;
  AlgebraClass cls_;
  std::size_t cap_;
  mutable std::vector<std::unique_ptr<ColouredGraph>> member_graphs_;
  mutable std::map<std::vector<Elem>, std::unique_ptr<ColouredGraph>>
      foreign_graphs_;
  mutable std::map<std::vector<Elem>, std::unique_ptr<ThinGraph>> thin_cache_;
  mutable std::map<std::vector<Elem>, std::vector<std::vector<char>>>
      thin_sl_cache_;
  mutable TermOp f_, g_, h_, maj_, mult_;
  mutable bool f_done_ = false, g_done_ = false, h_done_ = false,
               maj_done_ = false, mult_done_ = false;

  std::vector<Elem> key_of(const FiniteAlgebra& x) const;
  // edges of one colour across all members with isomorphic pointed
  // quotients collapsed; a term's action commutes with isomorphisms, so one
  // representative carries the constraint for all copies
  const std::vector<const Edge*>& distinct_edges(EdgeColour c) const;
  mutable std::map<int, std::vector<const Edge*>> distinct_edges_;
  const std::vector<std::vector<char>>& thin_sl_adj(
      const FiniteAlgebra& x) const;
  // constraint coordinates shared by the searches
  void majority_constraints(std::vector<EvalCoord>* coords,
                            std::vector<Elem>* forced) const;
  void minority_constraints(std::vector<EvalCoord>* coords,
                            std::vector<Elem>* forced) const;
  ThinGraph compute_thin_graph(const FiniteAlgebra& x) const;
};

}  // namespace algwb
