#include "algwb/graph.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "algwb/polynomials.hpp"

namespace algwb {

const char* colour_name(EdgeColour c) {
  switch (c) {
    case EdgeColour::semilattice: return "semilattice";
    case EdgeColour::majority: return "majority";
    case EdgeColour::affine: return "affine";
    case EdgeColour::unary: return "unary";
  }
  return "?";
}

std::vector<Elem> Edge::block_a_in_parent() const {
  std::vector<Elem> out;
  for (std::size_t i = 0; i < sub.elements.size(); ++i)
    if (quot.block_of[i] == qa) out.push_back(sub.elements[i]);
  return out;
}

std::vector<Elem> Edge::block_b_in_parent() const {
  std::vector<Elem> out;
  for (std::size_t i = 0; i < sub.elements.size(); ++i)
    if (quot.block_of[i] == qb) out.push_back(sub.elements[i]);
  return out;
}

bool ColouredGraph::has_colour(EdgeColour c) const {
  for (const auto& e : edges)
    if (e.colour == c) return true;
  return false;
}

const Edge* ColouredGraph::find_edge(Elem a, Elem b, EdgeColour c) const {
  if (a > b) std::swap(a, b);
  for (const auto& e : edges)
    if (e.a == a && e.b == b && e.colour == c) return &e;
  return nullptr;
}

// ---------------------------------------------------------------------------
// per-quotient colour tests

namespace {

bool sl_term_on_pair(const FiniteAlgebra& q, Elem u, Elem v, std::size_t cap) {
  ValueClosure vc(q, 2, {{&q, {u, v}}, {&q, {v, u}}}, false, cap);
  vc.run();
  return vc.find({u, u}) >= 0 || vc.find({v, v}) >= 0;
}

bool majority_term_on_pair(const FiniteAlgebra& q, Elem u, Elem v,
                           std::size_t cap) {
  std::vector<EvalCoord> coords = {{&q, {u, u, v}}, {&q, {u, v, u}},
                                   {&q, {v, u, u}}, {&q, {v, v, u}},
                                   {&q, {v, u, v}}, {&q, {u, v, v}}};
  return term_exists(q, 3, coords, {u, u, u, v, v, v}, cap);
}

std::optional<ModuleStructure> module_test(const FiniteAlgebra& q,
                                           std::size_t cap) {
  const int n = q.size;
  // Mal'tsev term: forced values at all (x,y,y) and (y,y,x).
  std::vector<EvalCoord> coords;
  std::vector<Elem> target;
  for (Elem x = 0; x < n; ++x)
    for (Elem y = 0; y < n; ++y) {
      coords.push_back({&q, {x, y, y}});
      target.push_back(x);
      coords.push_back({&q, {y, y, x}});
      target.push_back(x);
    }
  ValueClosure vc(q, 3, coords, false, cap);
  vc.run();
  int id = vc.find(target);
  if (id < 0) return std::nullopt;
  ModuleStructure ms;
  ms.zero = 0;
  ms.mal = vc.materialize(id, q).table;
  auto mal = [&](Elem x, Elem y, Elem z) {
    return ms.mal[(x * n + y) * n + z];
  };
  ms.add.resize(n * n);
  ms.neg.resize(n);
  for (Elem x = 0; x < n; ++x) {
    ms.neg[x] = mal(ms.zero, x, ms.zero);
    for (Elem y = 0; y < n; ++y) ms.add[x * n + y] = mal(x, ms.zero, y);
  }
  auto add = [&](Elem x, Elem y) { return ms.add[x * n + y]; };
  // abelian group axioms with zero 0
  for (Elem x = 0; x < n; ++x) {
    if (add(x, ms.zero) != x || add(ms.zero, x) != x) return std::nullopt;
    if (add(x, ms.neg[x]) != ms.zero) return std::nullopt;
    for (Elem y = 0; y < n; ++y) {
      if (add(x, y) != add(y, x)) return std::nullopt;
      for (Elem z = 0; z < n; ++z)
        if (add(add(x, y), z) != add(x, add(y, z))) return std::nullopt;
    }
  }
  // the Mal'tsev term is exactly x - y + z
  for (Elem x = 0; x < n; ++x)
    for (Elem y = 0; y < n; ++y)
      for (Elem z = 0; z < n; ++z)
        if (mal(x, y, z) != add(add(x, ms.neg[y]), z)) return std::nullopt;
  // every basic operation is linear w.r.t. the group
  for (const auto& op : q.ops) {
    const int k = op.arity;
    if (k == 0) continue;
    const std::size_t total = table_size(n, k);
    std::vector<Elem> xs(k), ys(k), zs(k);
    for (std::size_t ix = 0; ix < total; ++ix) {
      std::size_t rx = ix;
      for (int p = k - 1; p >= 0; --p) {
        xs[p] = static_cast<Elem>(rx % n);
        rx /= n;
      }
      for (std::size_t iy = 0; iy < total; ++iy) {
        std::size_t ry = iy;
        for (int p = k - 1; p >= 0; --p) {
          ys[p] = static_cast<Elem>(ry % n);
          ry /= n;
        }
        for (int p = 0; p < k; ++p) zs[p] = add(xs[p], ys[p]);
        if (op.apply(zs) != add(op.apply(xs), op.apply(ys)))
          return std::nullopt;
      }
    }
  }
  return ms;
}

bool all_ops_projections(const FiniteAlgebra& q) {
  for (const auto& op : q.ops)
    if (op.arity >= 1 && !op.is_projection()) return false;
  return true;
}

}  // namespace

ColouredGraph coloured_graph(const FiniteAlgebra& a, std::size_t cap) {
  ColouredGraph g;
  g.algebra = &a;
  for (Elem x = 0; x < a.size; ++x)
    for (Elem y = x + 1; y < a.size; ++y) {
      auto sub = sg_closure(a, {x, y});
      auto rest = restrict_algebra(a, sub);
      auto lat = con_lattice(rest.algebra, cap);
      for (int ci : lat.coatoms()) {
        const Partition& theta = lat.congruences[ci];
        auto quot = quotient(rest.algebra, theta);
        Elem qa = quot.block_of[rest.index_of[x]];
        Elem qb = quot.block_of[rest.index_of[y]];
        const FiniteAlgebra& q = quot.algebra;
        Edge e;
        e.a = x;
        e.b = y;
        e.sub = rest;
        e.theta = theta;
        e.qa = qa;
        e.qb = qb;
        if (sl_term_on_pair(q, qa, qb, cap)) {
          e.colour = EdgeColour::semilattice;
        } else if (majority_term_on_pair(q, qa, qb, cap)) {
          e.colour = EdgeColour::majority;
        } else if (auto ms = module_test(q, cap)) {
          e.colour = EdgeColour::affine;
          e.module = ms;
        } else if (all_ops_projections(q)) {
          e.colour = EdgeColour::unary;
        } else {
          continue;  // this witness yields no edge
        }
        e.quot = std::move(quot);
        g.edges.push_back(std::move(e));
      }
    }
  return g;
}

bool is_smooth(const FiniteAlgebra& a, std::size_t cap) {
  auto g = coloured_graph(a, cap);
  for (const auto& e : g.edges) {
    if (e.colour != EdgeColour::semilattice && e.colour != EdgeColour::majority)
      continue;
    auto u = e.block_a_in_parent();
    auto v = e.block_b_in_parent();
    u.insert(u.end(), v.begin(), v.end());
    std::sort(u.begin(), u.end());
    if (sg_closure(a, u) != u) return false;
  }
  return true;
}

bool omits_type_one(const FiniteAlgebra& a, std::size_t cap) {
  auto cls = hs_class(a, cap);
  for (const auto& m : cls.members)
    if (coloured_graph(m, cap).has_colour(EdgeColour::unary)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// thin graph combinatorics

const std::vector<std::vector<char>>& ThinGraph::adj(PathKind k) const {
  switch (k) {
    case PathKind::s: return adj_s;
    case PathKind::as: return adj_as;
    default: return adj_asm;
  }
}

bool ThinGraph::has_edge(Elem a, Elem b) const { return adj_asm[a][b]; }

std::vector<Elem> whole_universe(int n) {
  std::vector<Elem> u(n);
  for (int i = 0; i < n; ++i) u[i] = i;
  return u;
}

std::vector<std::vector<Elem>> components_in(const ThinGraph& g, PathKind k,
                                             const std::vector<Elem>& subset) {
  const auto& adj = g.adj(k);
  const int m = static_cast<int>(subset.size());
  std::vector<int> local(g.n, -1);
  for (int i = 0; i < m; ++i) local[subset[i]] = i;
  // Tarjan, iterative
  std::vector<int> idx(m, -1), low(m, 0), comp(m, -1);
  std::vector<char> on(m, 0);
  std::vector<int> stk;
  int counter = 0, ncomp = 0;
  for (int s = 0; s < m; ++s) {
    if (idx[s] >= 0) continue;
    std::vector<std::pair<int, int>> call{{s, 0}};
    while (!call.empty()) {
      auto& [v, ei] = call.back();
      if (ei == 0) {
        idx[v] = low[v] = counter++;
        stk.push_back(v);
        on[v] = 1;
      }
      bool descended = false;
      while (ei < m) {
        int w = ei++;
        if (!adj[subset[v]][subset[w]]) continue;
        if (idx[w] < 0) {
          call.push_back({w, 0});
          descended = true;
          break;
        }
        if (on[w]) low[v] = std::min(low[v], idx[w]);
      }
      if (descended) continue;
      if (low[v] == idx[v]) {
        while (true) {
          int w = stk.back();
          stk.pop_back();
          on[w] = 0;
          comp[w] = ncomp;
          if (w == v) break;
        }
        ++ncomp;
      }
      int finished = v;
      call.pop_back();
      if (!call.empty())
        low[call.back().first] =
            std::min(low[call.back().first], low[finished]);
    }
  }
  std::vector<std::vector<Elem>> comps(ncomp);
  for (int i = 0; i < m; ++i) comps[comp[i]].push_back(subset[i]);
  for (auto& c : comps) std::sort(c.begin(), c.end());
  std::sort(comps.begin(), comps.end());
  return comps;
}

std::vector<Elem> max_in(const ThinGraph& g, PathKind k,
                         const std::vector<Elem>& subset) {
  auto comps = components_in(g, k, subset);
  const auto& adj = g.adj(k);
  std::vector<Elem> out;
  for (const auto& c : comps) {
    bool sink = true;
    for (Elem x : c) {
      for (Elem y : subset) {
        if (!adj[x][y]) continue;
        if (!std::binary_search(c.begin(), c.end(), y)) sink = false;
      }
      if (!sink) break;
    }
    if (sink) out.insert(out.end(), c.begin(), c.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool reaches_in(const ThinGraph& g, PathKind k, const std::vector<Elem>& subset,
                Elem x, Elem y) {
  if (x == y) return true;
  const auto& adj = g.adj(k);
  std::vector<char> vis(g.n, 0);
  std::vector<Elem> stack{x};
  vis[x] = 1;
  while (!stack.empty()) {
    Elem v = stack.back();
    stack.pop_back();
    for (Elem w : subset) {
      if (vis[w] || !adj[v][w]) continue;
      if (w == y) return true;
      vis[w] = 1;
      stack.push_back(w);
    }
  }
  return false;
}

std::vector<Elem> component_of_in(const ThinGraph& g, PathKind k,
                                  const std::vector<Elem>& subset, Elem x) {
  for (auto& c : components_in(g, k, subset))
    if (std::binary_search(c.begin(), c.end(), x)) return c;
  return {};
}

Connectivity connectivity(const ThinGraph& g) {
  Connectivity c;
  auto uni = whole_universe(g.n);
  c.s_comps = components_in(g, PathKind::s, uni);
  c.as_comps = components_in(g, PathKind::as, uni);
  c.asm_comps = components_in(g, PathKind::asm_, uni);
  auto ids = [&](const std::vector<std::vector<Elem>>& comps) {
    std::vector<int> id(g.n, -1);
    for (std::size_t i = 0; i < comps.size(); ++i)
      for (Elem x : comps[i]) id[x] = static_cast<int>(i);
    return id;
  };
  c.s_id = ids(c.s_comps);
  c.as_id = ids(c.as_comps);
  c.asm_id = ids(c.asm_comps);
  c.max_elems = max_in(g, PathKind::s, uni);
  c.amax_elems = max_in(g, PathKind::as, uni);
  c.umax_elems = max_in(g, PathKind::asm_, uni);

  // Prop as-connectivity (1): undirected connectivity of G_asm.
  {
    std::vector<char> vis(g.n, 0);
    std::vector<Elem> stack{0};
    vis[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      Elem v = stack.back();
      stack.pop_back();
      for (Elem w = 0; w < g.n; ++w)
        if (!vis[w] && (g.adj_asm[v][w] || g.adj_asm[w][v])) {
          vis[w] = 1;
          ++count;
          stack.push_back(w);
        }
    }
    c.as_connectivity_undirected_ok = count == g.n;
  }
  // Prop as-connectivity (2): directed paths between maximal elements.
  c.as_connectivity_directed_ok = true;
  for (const auto* set : {&c.max_elems, &c.amax_elems, &c.umax_elems})
    for (Elem x : *set)
      for (Elem y : *set)
        if (!reaches_in(g, PathKind::asm_, uni, x, y))
          c.as_connectivity_directed_ok = false;
  int sink_count = 0;
  for (const auto& comp : c.asm_comps) {
    bool sink = true;
    for (Elem x : comp)
      for (Elem y = 0; y < g.n; ++y)
        if (g.adj_asm[x][y] && !std::binary_search(comp.begin(), comp.end(), y))
          sink = false;
    if (sink) ++sink_count;
  }
  c.unique_umax_component = sink_count == 1;
  return c;
}

// ---------------------------------------------------------------------------
// ClassContext

ClassContext::ClassContext(AlgebraClass cls, std::size_t cap)
    : cls_(std::move(cls)), cap_(cap) {
  if (cls_.members.empty()) throw InternalError("ClassContext: empty class");
  member_graphs_.resize(cls_.members.size());
}

ClassContext ClassContext::for_algebra(const FiniteAlgebra& a,
                                       std::size_t cap) {
  return ClassContext(hs_class(a, cap), cap);
}

ClassContext ClassContext::for_factors(
    const std::vector<FiniteAlgebra>& factors, std::size_t cap) {
  return ClassContext(hs_class(factors, cap), cap);
}

std::vector<Elem> ClassContext::key_of(const FiniteAlgebra& x) const {
  std::vector<Elem> key;
  key.push_back(x.size);
  for (const auto& op : x.ops) {
    key.push_back(op.arity);
    key.insert(key.end(), op.table.begin(), op.table.end());
  }
  return key;
}

const ColouredGraph& ClassContext::coloured(int member) const {
  if (!member_graphs_[member])
    member_graphs_[member] = std::make_unique<ColouredGraph>(
        coloured_graph(cls_.members[member], cap_));
  return *member_graphs_[member];
}

const ColouredGraph& ClassContext::coloured(const FiniteAlgebra& x) const {
  auto key = key_of(x);
  auto it = foreign_graphs_.find(key);
  if (it == foreign_graphs_.end()) {
    it = foreign_graphs_
             .emplace(key, std::make_unique<ColouredGraph>(
                               coloured_graph(x, cap_)))
             .first;
  } else {
    it->second->algebra = &x;  // rebind to the caller's instance
  }
  return *it->second;
}

bool ClassContext::omits_type_one() const {
  for (std::size_t i = 0; i < cls_.members.size(); ++i)
    if (coloured(static_cast<int>(i)).has_colour(EdgeColour::unary))
      return false;
  return true;
}

bool ClassContext::all_smooth() const {
  for (const auto& m : cls_.members)
    if (!is_smooth(m, cap_)) return false;
  return true;
}


const std::vector<const Edge*>& ClassContext::distinct_edges(
    EdgeColour c) const {
  int key = static_cast<int>(c);
  auto it = distinct_edges_.find(key);
  if (it != distinct_edges_.end()) return it->second;
  std::vector<const Edge*> out;
  std::set<std::vector<Elem>> seen;
  for (std::size_t i = 0; i < cls_.members.size(); ++i) {
    const auto& g = coloured(static_cast<int>(i));
    for (const auto& e : g.edges) {
      if (e.colour != c) continue;
      const FiniteAlgebra& q = e.quot.algebra;
      if (q.size <= 7) {
        auto [ck, perm] = canonical_table_key_perm(q);
        std::vector<Elem> dedup_key = ck;
        dedup_key.push_back(perm[e.qa]);
        dedup_key.push_back(perm[e.qb]);
        if (!seen.insert(dedup_key).second) continue;
      }
      out.push_back(&e);
    }
  }
  return distinct_edges_.emplace(key, std::move(out)).first->second;
}

void ClassContext::majority_constraints(std::vector<EvalCoord>* coords,
                                        std::vector<Elem>* forced) const {
  for (const Edge* ep : distinct_edges(EdgeColour::majority)) {
    const Edge& e = *ep;
    const FiniteAlgebra* q = &e.quot.algebra;
    const Elem u = e.qa, v = e.qb;
    const Elem pts[6][4] = {{u, u, v, u}, {u, v, u, u}, {v, u, u, u},
                            {v, v, u, v}, {v, u, v, v}, {u, v, v, v}};
    for (const auto& p : pts) {
      coords->push_back({q, {p[0], p[1], p[2]}});
      forced->push_back(p[3]);
    }
  }
}

void ClassContext::minority_constraints(std::vector<EvalCoord>* coords,
                                        std::vector<Elem>* forced) const {
  for (const Edge* ep : distinct_edges(EdgeColour::affine)) {
    const Edge& e = *ep;
    const FiniteAlgebra* q = &e.quot.algebra;
    const Elem u = e.qa, v = e.qb;
    // Mal'tsev identities instantiated on the thick edge {u,v}
    const Elem pts[4][4] = {
        {u, v, v, u}, {v, u, u, v}, {u, u, v, v}, {v, v, u, u}};
    for (const auto& p : pts) {
      coords->push_back({q, {p[0], p[1], p[2]}});
      forced->push_back(p[3]);
    }
  }
}

// shared search plumbing
struct ClassContext::Search {
  const ClassContext* ctx;
  int arity;
  std::vector<EvalCoord> coords;  // constraints first
  std::vector<Elem> forced;       // -1 = unconstrained
  std::size_t probe_offset = 0;   // index where probe coords begin
  std::function<bool(const std::vector<Elem>&)> pred;  // may be empty

  // Append every argument tuple of every member as probe coordinates when the
  // budget allows; the chosen witness is then least by actual tables.
  void add_probes(std::size_t budget) {
    probe_offset = coords.size();
    std::size_t need = 0;
    for (const auto& m : ctx->cls_.members)
      need += table_size(m.size, arity);
    if (need > budget) return;
    for (const auto& m : ctx->cls_.members) {
      const std::size_t total = table_size(m.size, arity);
      std::vector<Elem> args(arity);
      for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rest = idx;
        for (int p = arity - 1; p >= 0; --p) {
          args[p] = static_cast<Elem>(rest % m.size);
          rest /= m.size;
        }
        coords.push_back({&m, args});
      }
    }
  }

  TermOp run(const char* what) const {
    auto vc = std::make_shared<ValueClosure>(ctx->cls_.members[0], arity,
                                             coords, false, ctx->cap_);
    vc->run();
    int best = -1;
    auto better = [&](int x, int y) {  // x beats y
      const auto& vx = vc->vector_of(x);
      const auto& vy = vc->vector_of(y);
      auto mid = vx.begin() + static_cast<long>(probe_offset);
      auto midy = vy.begin() + static_cast<long>(probe_offset);
      if (!std::equal(mid, vx.end(), midy))
        return std::lexicographical_compare(mid, vx.end(), midy, vy.end());
      return std::lexicographical_compare(vx.begin(), mid, vy.begin(), midy);
    };
    for (std::size_t i = 0; i < vc->size(); ++i) {
      const auto& v = vc->vector_of(i);
      bool ok = true;
      for (std::size_t q = 0; q < forced.size() && ok; ++q)
        if (forced[q] >= 0 && v[q] != forced[q]) ok = false;
      if (ok && pred) ok = pred(v);
      if (!ok) continue;
      if (best < 0 || better(static_cast<int>(i), best))
        best = static_cast<int>(i);
    }
    if (best < 0)
      throw NotFound(std::string("no term operation satisfies: ") + what);
    return TermOp{vc, best};
  }
};

Elem TermOp::eval(const FiniteAlgebra& m, const std::vector<Elem>& args) const {
  return closure->eval_at(id, m, args);
}

OpTable TermOp::table_on(const FiniteAlgebra& m) const {
  return closure->materialize(id, m);
}

namespace {
// full-table probe coordinates give the spec's exact lex-least-table pick;
// they are only affordable when the joint profile space stays tiny
constexpr std::size_t kProbeBudget = 256;
}

const TermOp& ClassContext::op_f() const {
  if (f_done_) return f_;
  Search s{this, 2, {}, {}, 0, nullptr};
  std::vector<std::pair<std::size_t, std::pair<Elem, Elem>>> sl_pairs;
  for (const Edge* ep : distinct_edges(EdgeColour::semilattice)) {
    const Edge& e = *ep;
    const FiniteAlgebra* q = &e.quot.algebra;
    sl_pairs.push_back({s.coords.size(), {e.qa, e.qb}});
    s.coords.push_back({q, {e.qa, e.qb}});
    s.coords.push_back({q, {e.qb, e.qa}});
    s.forced.push_back(-1);
    s.forced.push_back(-1);
  }
  s.pred = [sl_pairs](const std::vector<Elem>& v) {
    for (const auto& [at, uv] : sl_pairs) {
      if (v[at] != v[at + 1]) return false;
      if (v[at] != uv.first && v[at] != uv.second) return false;
    }
    return true;
  };
  s.add_probes(kProbeBudget);
  f_ = s.run("Theorem uniform (semilattice part)");
  f_done_ = true;
  return f_;
}

const TermOp& ClassContext::op_g() const {
  if (g_done_) return g_;
  Search s{this, 3, {}, {}, 0, nullptr};
  majority_constraints(&s.coords, &s.forced);
  s.add_probes(kProbeBudget);
  g_ = s.run("Theorem uniform (majority part)");
  g_done_ = true;
  return g_;
}

const TermOp& ClassContext::op_h() const {
  if (h_done_) return h_;
  Search s{this, 3, {}, {}, 0, nullptr};
  for (const Edge* ep : distinct_edges(EdgeColour::affine)) {
    const Edge& e = *ep;
    const FiniteAlgebra* q = &e.quot.algebra;
    const auto& ms = *e.module;
    const int n = q->size;
    auto add = [&](Elem x, Elem y) { return ms.add[x * n + y]; };
    for (Elem x = 0; x < n; ++x)
      for (Elem y = 0; y < n; ++y)
        for (Elem z = 0; z < n; ++z) {
          s.coords.push_back({q, {x, y, z}});
          s.forced.push_back(add(add(x, ms.neg[y]), z));
        }
  }
  s.add_probes(kProbeBudget);
  h_ = s.run("Theorem uniform (affine part)");
  h_done_ = true;
  return h_;
}

const std::vector<std::vector<char>>& ClassContext::thin_sl_adj(
    const FiniteAlgebra& x) const {
  auto key = key_of(x);
  auto it = thin_sl_cache_.find(key);
  if (it != thin_sl_cache_.end()) return it->second;
  std::vector<std::vector<char>> adj(x.size, std::vector<char>(x.size, 0));
  for (Elem a = 0; a < x.size; ++a)
    for (Elem b = 0; b < x.size; ++b) {
      if (a == b) continue;
      ValueClosure vc(x, 2, {{&x, {a, b}}, {&x, {b, a}}}, false, cap_);
      vc.run();
      adj[a][b] = vc.find({b, b}) >= 0;
    }
  return thin_sl_cache_.emplace(std::move(key), std::move(adj)).first->second;
}

bool ClassContext::thin_sl_edge(const FiniteAlgebra& x, Elem a, Elem b) const {
  return a != b && thin_sl_adj(x)[a][b];
}

const TermOp& ClassContext::op_mult() const {
  if (mult_done_) return mult_;
  Search s{this, 2, {}, {}, 0, nullptr};
  std::vector<std::pair<std::size_t, std::pair<Elem, Elem>>> sl_pairs;
  for (const Edge* ep : distinct_edges(EdgeColour::semilattice)) {
    const Edge& e = *ep;
    const FiniteAlgebra* q = &e.quot.algebra;
    sl_pairs.push_back({s.coords.size(), {e.qa, e.qb}});
    s.coords.push_back({q, {e.qa, e.qb}});
    s.coords.push_back({q, {e.qb, e.qa}});
    s.forced.push_back(-1);
    s.forced.push_back(-1);
  }
  // all pairs of all members: a = f(a,b) or (a, f(a,b)) thin semilattice
  struct PairAt {
    std::size_t at;
    Elem a;
    const std::vector<std::vector<char>>* adj;
  };
  std::vector<PairAt> pairs;
  for (const auto& m : cls_.members) {
    const auto& adj = thin_sl_adj(m);
    for (Elem a = 0; a < m.size; ++a)
      for (Elem b = 0; b < m.size; ++b) {
        pairs.push_back({s.coords.size(), a, &adj});
        s.coords.push_back({&m, {a, b}});
        s.forced.push_back(-1);
      }
  }
  s.pred = [sl_pairs, pairs](const std::vector<Elem>& v) {
    for (const auto& [at, uv] : sl_pairs) {
      if (v[at] != v[at + 1]) return false;
      if (v[at] != uv.first && v[at] != uv.second) return false;
    }
    for (const auto& p : pairs) {
      Elem val = v[p.at];
      if (val != p.a && !(*p.adj)[p.a][val]) return false;
    }
    return true;
  };
  s.add_probes(kProbeBudget);
  mult_ = s.run("Lemma good-operation");
  mult_done_ = true;
  return mult_;
}

std::vector<std::vector<char>> reach_matrix(const ThinGraph& g, PathKind k) {
  const auto& adj = g.adj(k);
  std::vector<std::vector<char>> reach(g.n, std::vector<char>(g.n, 0));
  for (int i = 0; i < g.n; ++i) {
    reach[i][i] = 1;
    for (int j = 0; j < g.n; ++j)
      if (adj[i][j]) reach[i][j] = 1;
  }
  for (int k2 = 0; k2 < g.n; ++k2)
    for (int i = 0; i < g.n; ++i)
      if (reach[i][k2])
        for (int j = 0; j < g.n; ++j)
          if (reach[k2][j]) reach[i][j] = 1;
  return reach;
}

const TermOp& ClassContext::op_maj() const {
  if (maj_done_) return maj_;
  Search s{this, 3, {}, {}, 0, nullptr};
  struct Cond {
    std::size_t at;
    Elem a;
    int member;
  };
  std::vector<Cond> conds;
  std::vector<std::vector<std::vector<char>>> reach;
  for (std::size_t mi = 0; mi < cls_.members.size(); ++mi) {
    const auto& m = cls_.members[mi];
    reach.push_back(reach_matrix(thin_graph(m), PathKind::as));
    for (Elem a = 0; a < m.size; ++a)
      for (Elem b = 0; b < m.size; ++b) {
        for (const auto& args : {std::vector<Elem>{a, a, b},
                                 std::vector<Elem>{a, b, a},
                                 std::vector<Elem>{b, a, a}}) {
          conds.push_back({s.coords.size(), a, static_cast<int>(mi)});
          s.coords.push_back({&m, args});
          s.forced.push_back(-1);
        }
      }
  }
  s.pred = [conds, reach](const std::vector<Elem>& v) {
    for (const auto& c : conds)
      if (!reach[c.member][c.a][v[c.at]]) return false;
    return true;
  };
  s.add_probes(kProbeBudget);
  maj_ = s.run("Theorem pseudo-majority");
  maj_done_ = true;
  return maj_;
}

UniformOps ClassContext::uniform_ops() const {
  return UniformOps{op_f(), op_g(), op_h(), op_maj(), op_mult()};
}

std::vector<std::vector<Elem>> ClassContext::majority_condition_values(
    const FiniteAlgebra& x, const std::vector<std::vector<Elem>>& points) const {
  std::vector<EvalCoord> coords;
  std::vector<Elem> forced;
  majority_constraints(&coords, &forced);
  const std::size_t off = coords.size();
  for (const auto& p : points) coords.push_back({&x, p});
  ValueClosure vc(cls_.members[0], 3, coords, false, cap_);
  vc.run();
  std::set<std::vector<Elem>> rows;
  for (std::size_t i = 0; i < vc.size(); ++i) {
    const auto& v = vc.vector_of(i);
    bool ok = true;
    for (std::size_t q = 0; q < off && ok; ++q) ok = v[q] == forced[q];
    if (!ok) continue;
    rows.insert(std::vector<Elem>(v.begin() + static_cast<long>(off), v.end()));
  }
  return {rows.begin(), rows.end()};
}

std::vector<std::vector<Elem>> ClassContext::minority_condition_values(
    const FiniteAlgebra& x, const std::vector<std::vector<Elem>>& points) const {
  std::vector<EvalCoord> coords;
  std::vector<Elem> forced;
  minority_constraints(&coords, &forced);
  const std::size_t off = coords.size();
  for (const auto& p : points) coords.push_back({&x, p});
  ValueClosure vc(cls_.members[0], 3, coords, false, cap_);
  vc.run();
  std::set<std::vector<Elem>> rows;
  for (std::size_t i = 0; i < vc.size(); ++i) {
    const auto& v = vc.vector_of(i);
    bool ok = true;
    for (std::size_t q = 0; q < off && ok; ++q) ok = v[q] == forced[q];
    if (!ok) continue;
    rows.insert(std::vector<Elem>(v.begin() + static_cast<long>(off), v.end()));
  }
  return {rows.begin(), rows.end()};
}

ThinGraph ClassContext::compute_thin_graph(const FiniteAlgebra& x) const {
  ThinGraph g;
  g.n = x.size;
  g.adj_s.assign(g.n, std::vector<char>(g.n, 0));
  g.adj_as.assign(g.n, std::vector<char>(g.n, 0));
  g.adj_asm.assign(g.n, std::vector<char>(g.n, 0));

  std::map<std::pair<Elem, Elem>, std::vector<Elem>> sg2;
  auto member_of_sg2 = [&](Elem a, Elem v, Elem b) {
    auto key = std::make_pair(std::min(a, v), std::max(a, v));
    auto it = sg2.find(key);
    if (it == sg2.end()) it = sg2.emplace(key, sg_closure(x, {a, v})).first;
    return std::binary_search(it->second.begin(), it->second.end(), b);
  };

  const auto& sl = thin_sl_adj(x);
  for (Elem a = 0; a < g.n; ++a)
    for (Elem b = 0; b < g.n; ++b)
      if (a != b && sl[a][b])
        g.edges.push_back({a, b, EdgeColour::semilattice, false});

  // thin affine: h(b,a,a) = b plus condition (**) over all minority terms
  {
    const TermOp& h = op_h();
    std::vector<std::pair<Elem, Elem>> cand;
    for (Elem a = 0; a < g.n; ++a)
      for (Elem b = 0; b < g.n; ++b)
        if (a != b && h.eval(x, {b, a, a}) == b) cand.push_back({a, b});
    if (!cand.empty()) {
      std::vector<std::vector<Elem>> pts;
      for (auto [a, b] : cand) pts.push_back({a, a, b});
      auto rows = minority_condition_values(x, pts);
      for (std::size_t ci = 0; ci < cand.size(); ++ci) {
        auto [a, b] = cand[ci];
        bool ok = true;
        for (const auto& row : rows)
          if (!member_of_sg2(a, row[ci], b)) ok = false;
        if (ok) g.edges.push_back({a, b, EdgeColour::affine, false});
      }
    }
  }

  // thin majority: condition (*) over all majority terms; prefilter by g
  {
    const TermOp& gg = op_g();
    std::vector<std::pair<Elem, Elem>> cand;
    for (Elem a = 0; a < g.n; ++a)
      for (Elem b = 0; b < g.n; ++b) {
        if (a == b) continue;
        if (member_of_sg2(a, gg.eval(x, {a, b, b}), b) &&
            member_of_sg2(a, gg.eval(x, {b, a, b}), b) &&
            member_of_sg2(a, gg.eval(x, {b, b, a}), b))
          cand.push_back({a, b});
      }
    if (!cand.empty()) {
      std::vector<std::vector<Elem>> pts;
      for (auto [a, b] : cand) {
        pts.push_back({a, b, b});
        pts.push_back({b, a, b});
        pts.push_back({b, b, a});
      }
      auto rows = majority_condition_values(x, pts);
      for (std::size_t ci = 0; ci < cand.size(); ++ci) {
        auto [a, b] = cand[ci];
        bool ok = true;
        for (const auto& row : rows) {
          if (!member_of_sg2(a, row[3 * ci], b) ||
              !member_of_sg2(a, row[3 * ci + 1], b) ||
              !member_of_sg2(a, row[3 * ci + 2], b)) {
            ok = false;
            break;
          }
        }
        if (ok) {
          bool special =
              coloured(x).find_edge(a, b, EdgeColour::majority) != nullptr;
          g.edges.push_back({a, b, EdgeColour::majority, special});
        }
      }
    }
  }

  std::sort(g.edges.begin(), g.edges.end(),
            [](const ThinEdge& x1, const ThinEdge& y1) {
              return std::tie(x1.a, x1.b, x1.colour) <
                     std::tie(y1.a, y1.b, y1.colour);
            });
  for (const auto& e : g.edges) {
    g.adj_asm[e.a][e.b] = 1;
    if (e.colour == EdgeColour::semilattice) {
      g.adj_s[e.a][e.b] = 1;
      g.adj_as[e.a][e.b] = 1;
    }
    if (e.colour == EdgeColour::affine) g.adj_as[e.a][e.b] = 1;
  }
  return g;
}

const ThinGraph& ClassContext::thin_graph(const FiniteAlgebra& x) const {
  auto key = key_of(x);
  auto it = thin_cache_.find(key);
  if (it == thin_cache_.end())
    it = thin_cache_
             .emplace(key, std::make_unique<ThinGraph>(compute_thin_graph(x)))
             .first;
  return *it->second;
}

// ---------------------------------------------------------------------------
// special operations (Lemma op-s-on-affine)

TermOp ClassContext::special_t_ab(const FiniteAlgebra& x, Elem a,
                                  Elem b) const {
  Search s{this, 2, {}, {}, 0, nullptr};
  s.coords.push_back({&x, {a, b}});
  s.forced.push_back(b);
  for (const Edge* ep : distinct_edges(EdgeColour::affine)) {
    s.coords.push_back({&ep->quot.algebra, {ep->qa, ep->qb}});
    s.forced.push_back(ep->qa);
  }
  s.add_probes(kProbeBudget);
  return s.run("Lemma op-s-on-affine (1), t_ab");
}

TermOp ClassContext::special_h_ab(const FiniteAlgebra& x, Elem a,
                                  Elem b) const {
  Search s{this, 3, {}, {}, 0, nullptr};
  s.coords.push_back({&x, {a, a, b}});
  s.forced.push_back(b);
  struct PermBlock {
    std::size_t at;
    int n;
  };
  std::vector<PermBlock> perms;
  for (const Edge* ep : distinct_edges(EdgeColour::affine)) {
    const FiniteAlgebra* q = &ep->quot.algebra;
    s.coords.push_back({q, {ep->qb, ep->qa, ep->qa}});
    s.forced.push_back(ep->qb);
    // h_ab(x, c', d') is a permutation of Sg{c,d}/eta for all c', d'
    perms.push_back({s.coords.size(), q->size});
    for (Elem cp = 0; cp < q->size; ++cp)
      for (Elem dp = 0; dp < q->size; ++dp)
        for (Elem xx = 0; xx < q->size; ++xx) {
          s.coords.push_back({q, {xx, cp, dp}});
          s.forced.push_back(-1);
        }
  }
  s.pred = [perms](const std::vector<Elem>& v) {
    for (const auto& pb : perms) {
      const int n = pb.n;
      for (int cp = 0; cp < n; ++cp)
        for (int dp = 0; dp < n; ++dp) {
          std::size_t base = pb.at + (static_cast<std::size_t>(cp) * n + dp) * n;
          std::vector<char> seen(n, 0);
          for (int xx = 0; xx < n; ++xx) {
            Elem val = v[base + xx];
            if (seen[val]) return false;
            seen[val] = 1;
          }
        }
    }
    return true;
  };
  s.add_probes(kProbeBudget);
  return s.run("Lemma op-s-on-affine (2), h_ab");
}

TermOp ClassContext::special_p(const FiniteAlgebra& x1, Elem a, Elem b,
                               const FiniteAlgebra& x2, Elem c, Elem d) const {
  Search s{this, 2, {}, {}, 0, nullptr};
  s.coords.push_back({&x1, {b, a}});
  s.forced.push_back(b);
  s.coords.push_back({&x2, {c, d}});
  s.forced.push_back(d);
  s.add_probes(kProbeBudget);
  return s.run("Lemma op-s-on-affine (3), p");
}

TermOp ClassContext::special_h_prime(const FiniteAlgebra& x1, Elem a, Elem b,
                                     const FiniteAlgebra& x2, Elem c,
                                     Elem d) const {
  Search s{this, 3, {}, {}, 0, nullptr};
  s.coords.push_back({&x1, {a, a, b}});
  s.forced.push_back(b);
  s.coords.push_back({&x2, {d, c, c}});
  s.forced.push_back(d);
  s.add_probes(kProbeBudget);
  return s.run("Lemma op-s-on-affine (3), h'");
}

}  // namespace algwb
