#include "algwb/subdirect.hpp"

#include <algorithm>
#include <set>

#include "algwb/graph.hpp"
#include "algwb/polynomials.hpp"

namespace algwb {

int SubdirectRelation::index_of(const std::vector<Elem>& t) const {
  auto it = std::lower_bound(tuples.begin(), tuples.end(), t);
  if (it != tuples.end() && *it == t)
    return static_cast<int>(it - tuples.begin());
  return -1;
}

std::vector<int> SubdirectRelation::fiber(int i, Elem a) const {
  std::vector<int> out;
  for (int t = 0; t < size(); ++t)
    if (tuples[t][i] == a) out.push_back(t);
  return out;
}

std::vector<Elem> SubdirectRelation::neighbours(int i,
                                                const std::vector<Elem>& s,
                                                int j) const {
  std::set<Elem> out;
  for (const auto& t : tuples)
    if (std::binary_search(s.begin(), s.end(), t[i])) out.insert(t[j]);
  return {out.begin(), out.end()};
}

namespace {

FiniteAlgebra relation_algebra(const std::vector<FiniteAlgebra>& factors,
                               const std::vector<std::vector<Elem>>& tuples) {
  FiniteAlgebra alg;
  alg.name = "R";
  alg.size = static_cast<int>(tuples.size());
  auto index_of = [&](const std::vector<Elem>& t) {
    auto it = std::lower_bound(tuples.begin(), tuples.end(), t);
    return static_cast<Elem>(it - tuples.begin());
  };
  const std::size_t m = factors.size();
  for (std::size_t oi = 0; oi < factors[0].ops.size(); ++oi) {
    const int k = factors[0].ops[oi].arity;
    OpTable t;
    t.name = factors[0].ops[oi].name;
    t.arity = k;
    t.size = alg.size;
    t.table.resize(table_size(alg.size, k));
    std::vector<Elem> idxs(k);
    std::vector<Elem> vals(k);
    std::vector<Elem> res(m);
    for (std::size_t idx = 0; idx < t.table.size(); ++idx) {
      std::size_t rest = idx;
      for (int p = k - 1; p >= 0; --p) {
        idxs[p] = static_cast<Elem>(rest % alg.size);
        rest /= alg.size;
      }
      for (std::size_t q = 0; q < m; ++q) {
        for (int p = 0; p < k; ++p) vals[p] = tuples[idxs[p]][q];
        res[q] = k == 0 ? factors[q].ops[oi].table[0]
                        : factors[q].ops[oi].apply(vals);
      }
      t.table[idx] = index_of(res);
    }
    alg.ops.push_back(std::move(t));
  }
  return alg;
}

}  // namespace

SubdirectRelation make_relation(std::vector<FiniteAlgebra> factors,
                                const std::vector<std::vector<Elem>>& gens,
                                std::size_t cap) {
  if (factors.empty()) throw RangeError("make_relation: no factors");
  if (gens.empty()) throw RangeError("make_relation: no generator tuples");
  for (const auto& f : factors)
    if (!f.same_signature(factors[0]))
      throw SignatureMismatch("make_relation: factor signature mismatch");
  std::vector<const FiniteAlgebra*> coord;
  for (const auto& f : factors) coord.push_back(&f);
  for (const auto& g : gens) {
    if (g.size() != factors.size())
      throw SyntaxError("make_relation: tuple arity mismatch");
    for (std::size_t i = 0; i < g.size(); ++i)
      if (g[i] < 0 || g[i] >= factors[i].size)
        throw RangeError("make_relation: tuple entry out of range");
  }
  SubdirectRelation r;
  r.tuples = sg_closure_tuples(coord, gens, cap);
  // subdirectness
  for (std::size_t i = 0; i < factors.size(); ++i) {
    std::set<Elem> seen;
    for (const auto& t : r.tuples) seen.insert(t[i]);
    if (static_cast<int>(seen.size()) != factors[i].size)
      throw NotSubdirect("projection onto factor " + std::to_string(i + 1) +
                         " is not surjective");
  }
  r.alg = relation_algebra(factors, r.tuples);
  r.factors = std::move(factors);
  return r;
}

SubdirectRelation eq_relation(const FiniteAlgebra& a) {
  std::vector<std::vector<Elem>> gens;
  for (Elem x = 0; x < a.size; ++x) gens.push_back({x, x});
  return make_relation({a, a}, gens);
}

SubdirectRelation full_square(const FiniteAlgebra& a) {
  std::vector<std::vector<Elem>> gens;
  for (Elem x = 0; x < a.size; ++x)
    for (Elem y = 0; y < a.size; ++y) gens.push_back({x, y});
  return make_relation({a, a}, gens);
}

SubdirectRelation SubdirectRelation::project(
    const std::vector<int>& coords) const {
  SubdirectRelation p;
  std::set<std::vector<Elem>> seen;
  for (const auto& t : tuples) {
    std::vector<Elem> s(coords.size());
    for (std::size_t j = 0; j < coords.size(); ++j) s[j] = t[coords[j]];
    seen.insert(std::move(s));
  }
  p.tuples.assign(seen.begin(), seen.end());
  for (int c : coords) p.factors.push_back(factors[c]);
  p.alg = relation_algebra(p.factors, p.tuples);
  return p;
}

std::vector<int> SubdirectRelation::projection_index_map(
    const SubdirectRelation& proj, const std::vector<int>& coords) const {
  std::vector<int> map(size());
  for (int t = 0; t < size(); ++t) {
    std::vector<Elem> s(coords.size());
    for (std::size_t j = 0; j < coords.size(); ++j)
      s[j] = tuples[t][coords[j]];
    map[t] = proj.index_of(s);
    if (map[t] < 0) throw InternalError("projection_index_map: missing tuple");
  }
  return map;
}

UnaryMap coordinate_action(const SubdirectRelation& r, const UnaryMap& f,
                           int i) {
  UnaryMap act(r.factors[i].size, -1);
  for (int t = 0; t < r.size(); ++t) {
    Elem from = r.tuples[t][i];
    Elem to = r.tuples[f[t]][i];
    if (act[from] < 0)
      act[from] = to;
    else if (act[from] != to)
      throw InternalError("coordinate_action: polynomial not coordinatewise");
  }
  return act;
}

UnaryMap action_on_projection(const SubdirectRelation& r,
                              const SubdirectRelation& proj,
                              const std::vector<int>& coords,
                              const UnaryMap& f) {
  auto pm = r.projection_index_map(proj, coords);
  UnaryMap act(proj.size(), -1);
  for (int t = 0; t < r.size(); ++t) {
    Elem from = pm[t];
    Elem to = pm[f[t]];
    if (act[from] < 0)
      act[from] = to;
    else if (act[from] != to)
      throw InternalError("action_on_projection: polynomial not blockwise");
  }
  return act;
}

bool map_collapses(const UnaryMap& f, const Partition& theta,
                   const Partition& psi) {
  const int n = static_cast<int>(f.size());
  for (Elem x = 0; x < n; ++x)
    for (Elem y = x + 1; y < n; ++y)
      if (theta.related(x, y) && !psi.related(f[x], f[y])) return false;
  return true;
}

LinkStructure link_structure(const SubdirectRelation& r,
                             const std::vector<int>& side1,
                             const std::vector<int>& side2) {
  SubdirectRelation p1 = r.project(side1);
  SubdirectRelation p2 = r.project(side2);
  auto m1 = r.projection_index_map(p1, side1);
  auto m2 = r.projection_index_map(p2, side2);
  // neighbour sets
  std::vector<std::set<int>> nb1(p1.size()), nb2(p2.size());
  for (int t = 0; t < r.size(); ++t) {
    nb1[m1[t]].insert(m2[t]);
    nb2[m2[t]].insert(m1[t]);
  }
  LinkStructure ls;
  std::vector<std::pair<Elem, Elem>> pairs1, pairs2;
  for (int x = 0; x < p1.size(); ++x)
    for (int y = 0; y < p1.size(); ++y) {
      std::vector<int> inter;
      std::set_intersection(nb1[x].begin(), nb1[x].end(), nb1[y].begin(),
                            nb1[y].end(), std::back_inserter(inter));
      if (!inter.empty()) {
        ls.tol1.push_back({x, y});
        pairs1.push_back({x, y});
      }
    }
  for (int x = 0; x < p2.size(); ++x)
    for (int y = 0; y < p2.size(); ++y) {
      std::vector<int> inter;
      std::set_intersection(nb2[x].begin(), nb2[x].end(), nb2[y].begin(),
                            nb2[y].end(), std::back_inserter(inter));
      if (!inter.empty()) {
        ls.tol2.push_back({x, y});
        pairs2.push_back({x, y});
      }
    }
  ls.lnk1 = partition_from_pairs(p1.size(), pairs1);
  ls.lnk2 = partition_from_pairs(p2.size(), pairs2);
  ls.linked = ls.lnk1.is_full() && ls.lnk2.is_full();
  return ls;
}

LinkStructure link_structure(const SubdirectRelation& r) {
  if (r.arity() != 2)
    throw RangeError("link_structure: binary form needs a binary relation");
  return link_structure(r, {0}, {1});
}

// ---------------------------------------------------------------------------

namespace {

bool subset_of(const std::vector<Elem>& a, const std::vector<Elem>& b) {
  for (Elem x : a)
    if (!std::binary_search(b.begin(), b.end(), x)) return false;
  return true;
}

}  // namespace

Verdict rectangularity_check(const SubdirectRelation& r,
                             const ClassContext& ctx,
                             const std::vector<Elem>& b1,
                             const std::vector<Elem>& b2, RectMode mode) {
  if (r.arity() != 2)
    throw RangeError("rectangularity_check: binary relation expected");
  auto ls = link_structure(r);
  const ThinGraph& g1 = ctx.thin_graph(r.factors[0]);
  const ThinGraph& g2 = ctx.thin_graph(r.factors[1]);

  // b1 must be an as-component of a lnk1-block
  auto block1 = ls.lnk1.block_of(b1.at(0));
  {
    auto comp = component_of_in(g1, PathKind::as, block1, b1.at(0));
    bool is_as_comp = comp == b1;
    bool maximal = true;
    for (Elem x : comp)
      for (Elem y : block1)
        if (g1.adj(PathKind::as)[x][y] &&
            !std::binary_search(comp.begin(), comp.end(), y))
          maximal = false;
    if (!is_as_comp || !maximal)
      throw HypothesisNotMet(
          "B1 is not an as-component of its link-congruence block");
  }

  if (mode == RectMode::as_as) {
    auto block2 = ls.lnk2.block_of(b2.at(0));
    auto comp = component_of_in(g2, PathKind::as, block2, b2.at(0));
    bool maximal = true;
    for (Elem x : comp)
      for (Elem y : block2)
        if (g2.adj(PathKind::as)[x][y] &&
            !std::binary_search(comp.begin(), comp.end(), y))
          maximal = false;
    if (comp != b2 || !maximal)
      throw HypothesisNotMet(
          "B2 is not an as-component of its link-congruence block");
    bool meets = false;
    for (Elem x : b1)
      for (Elem y : b2)
        if (r.index_of({x, y}) >= 0) meets = true;
    if (!meets)
      throw HypothesisNotMet("R does not meet B1 x B2");
    for (Elem x : b1)
      for (Elem y : b2)
        if (r.index_of({x, y}) < 0)
          return {false, "missing pair (" + std::to_string(x) + "," +
                             std::to_string(y) + ")"};
    return {true, ""};
  }

  // as_umax: b2 = R[B1], conclusion B1 x umax(B2) subseteq R
  auto img = r.neighbours(0, b1, 1);
  if (img != b2) throw HypothesisNotMet("B2 is not R[B1]");
  auto um = max_in(g2, PathKind::asm_, b2);
  for (Elem x : b1)
    for (Elem y : um)
      if (r.index_of({x, y}) < 0)
        return {false, "missing pair (" + std::to_string(x) + "," +
                           std::to_string(y) + ")"};
  return {true, ""};
}

Verdict as_rect_check(const SubdirectRelation& r, const ClassContext& ctx,
                      Elem a, Elem b) {
  if (r.arity() != 2)
    throw RangeError("as_rect_check: binary relation expected");
  const ThinGraph& g1 = ctx.thin_graph(r.factors[0]);
  if (!g1.has_edge(a, b)) throw HypothesisNotMet("ab is not a thin edge");
  const ThinGraph& g2 = ctx.thin_graph(r.factors[1]);
  auto big = r.neighbours(0, {a}, 1);   // B = R[a]
  auto rb = r.neighbours(0, {b}, 1);    // R[b]
  for (Elem c : rb) {
    if (!std::binary_search(big.begin(), big.end(), c)) continue;
    for (Elem d : big) {
      if (!reaches_in(g2, PathKind::as, big, c, d)) continue;
      if (!std::binary_search(rb.begin(), rb.end(), d))
        return {false, "c=" + std::to_string(c) + " as-reaches d=" +
                           std::to_string(d) + " in R[a] but d not in R[b]"};
    }
  }
  return {true, ""};
}

Quasi2Result quasi2_check(const SubdirectRelation& r, const ClassContext& ctx,
                          const std::vector<Elem>& a,
                          const std::vector<int>& x_coords) {
  const int n = r.arity();
  if (static_cast<int>(a.size()) != n)
    throw RangeError("quasi2_check: tuple arity mismatch");
  // hypothesis: pr_J a in pr_J R for all |J| = 2
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      auto pj = r.project({i, j});
      if (pj.index_of({a[i], a[j]}) < 0)
        throw HypothesisNotMet("pr_J a not in pr_J R for J = {" +
                               std::to_string(i + 1) + "," +
                               std::to_string(j + 1) + "}");
    }
  auto px = r.project(x_coords);
  std::vector<Elem> ax(x_coords.size());
  for (std::size_t j = 0; j < x_coords.size(); ++j) ax[j] = a[x_coords[j]];
  int axi = px.index_of(ax);
  auto amax_px = max_in(ctx.thin_graph(px.alg), PathKind::as,
                        whole_universe(px.size()));
  if (axi < 0 || !std::binary_search(amax_px.begin(), amax_px.end(), axi))
    throw HypothesisNotMet("pr_X a is not as-maximal in pr_X R");

  // search candidates b in R
  for (int t = 0; t < r.size(); ++t) {
    bool ok = true;
    for (int c : x_coords)
      if (r.tuples[t][c] != a[c]) ok = false;
    if (!ok) continue;
    for (int i = 0; i < n && ok; ++i)
      for (int j = i + 1; j < n && ok; ++j) {
        auto pj = r.project({i, j});
        int from = pj.index_of({a[i], a[j]});
        int to = pj.index_of({r.tuples[t][i], r.tuples[t][j]});
        if (!reaches_in(ctx.thin_graph(pj.alg), PathKind::as,
                        whole_universe(pj.size()), from, to))
          ok = false;
      }
    if (ok) return {true, r.tuples[t], ""};
  }
  return {false, {}, "no tuple b satisfies the conclusion"};
}

std::pair<Elem, Elem> as_square_witness(const FiniteAlgebra& a,
                                        const ClassContext& ctx,
                                        const std::vector<Elem>& component,
                                        const Partition& alpha) {
  // hypothesis: Sg(component) = A and component is an as-component of A
  if (sg_closure(a, component) != whole_universe(a.size))
    throw HypothesisNotMet("Sg(C) is not the whole algebra");
  {
    const ThinGraph& g = ctx.thin_graph(a);
    auto comp =
        component_of_in(g, PathKind::as, whole_universe(a.size), component.at(0));
    if (comp != component)
      throw HypothesisNotMet("C is not an as-component of A");
  }
  auto sq = full_square(a);
  if (alpha.size() != sq.size())
    throw RangeError("as_square_witness: alpha size mismatch");
  if (!is_congruence(sq.alg, alpha))
    throw HypothesisNotMet("alpha is not a congruence of A x A");
  const ThinGraph& gsq = ctx.thin_graph(sq.alg);
  for (Elem x : component)
    for (Elem y : component) {
      if (x == y) continue;
      int t = sq.index_of({x, y});
      auto block = alpha.block_of(t);
      auto am = max_in(gsq, PathKind::as, block);
      if (std::binary_search(am.begin(), am.end(), t)) return {x, y};
    }
  throw NotFound("as_square_witness: no as-maximal pair in C (violation)");
}

}  // namespace algwb
