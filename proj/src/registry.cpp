// The lemma-verification registry: one brute-force checker per numbered
// statement, each verifying its hypotheses before asserting anything.
#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <set>

#include "registry_impl.hpp"

namespace algwb {

using namespace registry_detail;

namespace {

// ---------------------------------------------------------------------------
// 2.2  minimal sets, traces, perspectivity, pseudo-meet

void chk_minimal_sets(const Instance& inst, Acc& acc, std::size_t cap) {
  const FiniteAlgebra& a = need_algebra(inst);
  PolyClosure pc(a, 1, cap);
  for (const auto& pi : prime_intervals(con_lattice(a, cap))) {
    const Partition &al = pi.lower, &be = pi.upper;
    auto mins = minimal_sets(a, al, be, cap);  // verifies (1),(3) internally
    acc.meet();
    std::set<std::vector<Elem>> min_sets;
    for (const auto& m : mins) min_sets.insert(m.elements);
    for (const auto& f : pc.tables()) {
      bool keeps_some = !collapses(f, be, al);
      // (6): a non-collapsing f witnesses an isomorphism on some minimal set
      if (keeps_some) {
        bool witnessed = false;
        for (const auto& u : min_sets) {
          bool keeps_u = false;
          for (Elem x : u)
            for (Elem y : u)
              if (be.related(x, y) && !al.related(f[x], f[y])) keeps_u = true;
          if (!keeps_u) continue;
          // (2): the image is again minimal
          std::vector<Elem> img;
          for (Elem x : u) img.push_back(f[x]);
          std::sort(img.begin(), img.end());
          img.erase(std::unique(img.begin(), img.end()), img.end());
          if (!min_sets.count(img))
            acc.fail("Lemma minimal-sets(2): image of a minimal set under a "
                     "non-collapsing polynomial is not minimal");
          for (const auto& g : pc.tables()) {
            bool inv = true;
            for (Elem x : u)
              if (g[f[x]] != x) inv = false;
            if (inv) witnessed = true;
          }
        }
        if (!witnessed)
          acc.fail("Lemma minimal-sets(6): no minimal set is witnessed by a "
                   "non-collapsing polynomial");
      }
      if (acc.failed()) return;
    }
    // (4) and (5)
    for (Elem x = 0; x < a.size && !acc.failed(); ++x)
      for (Elem y = x + 1; y < a.size && !acc.failed(); ++y) {
        if (!be.related(x, y) || al.related(x, y)) continue;
        for (const auto& u : min_sets) {
          bool found = false;
          for (const auto& f : pc.tables()) {
            if (map_image(f) != u) continue;
            bool in_u = std::binary_search(u.begin(), u.end(), f[x]) &&
                        std::binary_search(u.begin(), u.end(), f[y]);
            if (in_u && be.related(f[x], f[y]) && !al.related(f[x], f[y]))
              found = true;
          }
          if (!found)
            acc.fail("Lemma minimal-sets(4): pair " + pair_str(x, y) +
                     " has no witness onto a minimal set");
        }
        std::vector<std::pair<Elem, Elem>> pairs;
        for (Elem u2 = 0; u2 < a.size; ++u2)
          if (al.rep(u2) != u2) pairs.push_back({al.rep(u2), u2});
        for (const auto& f : pc.tables()) pairs.push_back({f[x], f[y]});
        if (!(partition_from_pairs(a.size, pairs) == be))
          acc.fail("Lemma minimal-sets(5): beta is not the closure of alpha "
                   "plus the images of " + pair_str(x, y));
      }
  }
}

void chk_traces(const Instance& inst, Acc& acc, std::size_t cap) {
  const FiniteAlgebra& a = need_algebra(inst);
  for (const auto& pi : prime_intervals(con_lattice(a, cap))) {
    auto mins = minimal_sets(a, pi.lower, pi.upper, cap);
    int label = interval_type(a, pi.lower, pi.upper, cap);
    acc.meet();
    for (const auto& u : mins) {
      auto ts = trace_structure(a, pi.lower, pi.upper, u, cap);
      if (label == 2) {
        for (const auto& tr : ts.traces) {
          auto c = classify_trace(a, pi.lower, tr, cap);
          if (!(c.has_maltsev && c.abelian))
            acc.fail("Lemma traces(1): a type-2 trace is not polynomially "
                     "equivalent to a vector space");
        }
      } else if (label >= 3) {
        if (ts.traces.size() != 1)
          acc.fail("Lemma traces(2): type-" + std::to_string(label) +
                   " minimal set has " + std::to_string(ts.traces.size()) +
                   " traces");
        else {
          const auto& tr = ts.traces[0];
          if ((label == 3 || label == 4) && tr.size() != 2)
            acc.fail("Lemma traces(2): type-3/4 trace has " +
                     std::to_string(tr.size()) + " elements");
          auto c = classify_trace(a, pi.lower, tr, cap);
          if (c.label != label)
            acc.fail("Lemma traces(2): trace classification " +
                     std::to_string(c.label) + " disagrees with type " +
                     std::to_string(label));
        }
      }
    }
  }
}

void chk_perspective(const Instance& inst, Acc& acc, std::size_t cap) {
  const FiniteAlgebra& a = need_algebra(inst);
  auto pis = prime_intervals(con_lattice(a, cap));
  for (std::size_t i = 0; i < pis.size(); ++i)
    for (std::size_t j = 0; j < pis.size(); ++j) {
      if (i == j || !is_perspective(pis[i], pis[j])) continue;
      acc.meet();
      if (interval_type(a, pis[i].lower, pis[i].upper, cap) !=
          interval_type(a, pis[j].lower, pis[j].upper, cap))
        acc.fail("Lemma perspective-intervals: types differ for " +
                 interval_str(pis[i]) + " ~ " + interval_str(pis[j]));
      std::set<std::vector<Elem>> mi, mj;
      for (const auto& m : minimal_sets(a, pis[i].lower, pis[i].upper, cap))
        mi.insert(m.elements);
      for (const auto& m : minimal_sets(a, pis[j].lower, pis[j].upper, cap))
        mj.insert(m.elements);
      if (mi != mj)
        acc.fail("Lemma perspective-intervals: minimal-set families differ");
      if (acc.failed()) return;
    }
}

void chk_pseudo_meet(const Instance& inst, Acc& acc, std::size_t cap) {
  const FiniteAlgebra& a = need_algebra(inst);
  for (const auto& pi : prime_intervals(con_lattice(a, cap))) {
    int label = interval_type(a, pi.lower, pi.upper, cap);
    if (label < 3) continue;
    for (const auto& u : minimal_sets(a, pi.lower, pi.upper, cap)) {
      acc.meet();
      try {
        auto pm = pseudo_meet_join(a, pi.lower, pi.upper, u, cap);
        // re-verify the quoted identities
        auto pv = [&](Elem x, Elem y) { return pm.p[x * a.size + y]; };
        if (pv(pm.one, pm.one) != pm.one) acc.fail("pseudo-meet: p(1,1) != 1");
        for (Elem x : u.elements) {
          if (x == pm.one) continue;
          if (pi.lower.related(pm.one, x))
            acc.fail("pseudo-meet: (1,a) in alpha");
          if (pv(pm.one, x) != x || pv(x, pm.one) != x || pv(x, x) != x)
            acc.fail("pseudo-meet: semilattice identities fail");
        }
        if ((label == 3 || label == 4) && !pm.q)
          acc.fail("pseudo-join missing for type 3/4");
      } catch (const NotFound& e) {
        acc.fail(e.what());
      }
      if (acc.failed()) return;
    }
  }
}

// ---------------------------------------------------------------------------
// 2.3/2.4  coloured graph, uniform ops, thin edges, maximality

void chk_connectedness(const Instance& inst, Acc& acc, std::size_t cap) {
  const FiniteAlgebra& a = need_algebra(inst);
  auto cls = hs_class(a, cap);
  bool no_unary = true;
  for (const auto& m : cls.members)
    if (coloured_graph(m, cap).has_colour(EdgeColour::unary)) no_unary = false;
  bool no_type1 = true;
  for (const auto& m : cls.members)
    for (const auto& pi : prime_intervals(con_lattice(m, cap)))
      if (interval_type(m, pi.lower, pi.upper, cap) == 1) no_type1 = false;
  acc.check(no_unary == no_type1,
            "Theorem connectedness: unary-edge criterion disagrees with "
            "type-1 intervals over HS");
}

void chk_uniform(const Instance& inst, Acc& acc, std::size_t cap) {
  const FiniteAlgebra& a = need_algebra(inst);
  auto ctx = ClassContext::for_algebra(a, cap);
  if (!ctx.omits_type_one()) {
    acc.out = Outcome::hypothesis_not_met;
    acc.detail = "class has a unary edge";
    return;
  }
  try {
    const TermOp& f = ctx.op_f();
    const TermOp& g = ctx.op_g();
    const TermOp& h = ctx.op_h();
    acc.meet();
    for (std::size_t mi = 0; mi < ctx.cls().members.size(); ++mi) {
      const auto& m = ctx.cls().members[mi];
      for (const auto& e : ctx.coloured(static_cast<int>(mi)).edges) {
        const FiniteAlgebra& q = e.quot.algebra;
        if (e.colour == EdgeColour::semilattice) {
          Elem v1 = f.eval(q, {e.qa, e.qb}), v2 = f.eval(q, {e.qb, e.qa});
          if (v1 != v2 || (v1 != e.qa && v1 != e.qb))
            acc.fail("uniform f is not semilattice on a thick edge of " +
                     m.name);
        } else if (e.colour == EdgeColour::majority) {
          for (Elem x : {e.qa, e.qb})
            for (Elem y : {e.qa, e.qb}) {
              if (g.eval(q, {x, x, y}) != x || g.eval(q, {x, y, x}) != x ||
                  g.eval(q, {y, x, x}) != x)
                acc.fail("uniform g is not majority on a thick edge of " +
                         m.name);
            }
        } else if (e.colour == EdgeColour::affine) {
          const auto& ms = *e.module;
          auto add = [&](Elem x, Elem y) { return ms.add[x * q.size + y]; };
          for (Elem x = 0; x < q.size; ++x)
            for (Elem y = 0; y < q.size; ++y)
              for (Elem z = 0; z < q.size; ++z)
                if (h.eval(q, {x, y, z}) != add(add(x, ms.neg[y]), z))
                  acc.fail("uniform h is not x-y+z on an affine quotient of " +
                           m.name);
        }
      }
    }
  } catch (const NotFound& e) {
    acc.meet();
    acc.fail(std::string("Theorem uniform: ") + e.what());
  }
}

void chk_thin_semilattice(const Instance& inst, Acc& acc, std::size_t cap) {
  const FiniteAlgebra& a = need_algebra(inst);
  auto ctx = ClassContext::for_algebra(a, cap);
  const TermOp& h = ctx.op_h();
  for (std::size_t mi = 0; mi < ctx.cls().members.size(); ++mi) {
    const auto& m = ctx.cls().members[mi];
    const ThinGraph& tg = ctx.thin_graph(m);
    for (const auto& e : ctx.coloured(static_cast<int>(mi)).edges) {
      if (e.colour == EdgeColour::unary) continue;
      // minimal pair c,d wrt theta: d in Sg{c,d'} for every d' theta-rel d
      auto minimal_pair = [&](Elem c, Elem d) {
        int di = e.sub.index_of[d];
        for (Elem dp : e.sub.elements) {
          if (e.theta.rep(e.sub.index_of[dp]) != e.theta.rep(di)) continue;
          auto sg = sg_closure(m, {c, dp});
          if (!std::binary_search(sg.begin(), sg.end(), d)) return false;
        }
        return true;
      };
      // orientations: for a semilattice edge b must be the absorbing class;
      // majority and affine edges are symmetric, so both orders are checked
      std::vector<std::pair<Elem, Elem>> orientations;
      if (e.colour == EdgeColour::semilattice) {
        const FiniteAlgebra& q = e.quot.algebra;
        ValueClosure vc(q, 2, {{&q, {e.qa, e.qb}}, {&q, {e.qb, e.qa}}}, false,
                        cap);
        vc.run();
        if (vc.find({e.qb, e.qb}) >= 0) orientations.push_back({e.a, e.b});
        if (vc.find({e.qa, e.qa}) >= 0) orientations.push_back({e.b, e.a});
      } else {
        orientations = {{e.a, e.b}, {e.b, e.a}};
      }
      for (auto [src, dst] : orientations) {
        auto block_src = e.theta.rep(e.sub.index_of[src]) ==
                                 e.theta.rep(e.sub.index_of[e.a])
                             ? e.block_a_in_parent()
                             : e.block_b_in_parent();
        auto block_dst = e.theta.rep(e.sub.index_of[dst]) ==
                                 e.theta.rep(e.sub.index_of[e.a])
                             ? e.block_a_in_parent()
                             : e.block_b_in_parent();
        if (e.colour == EdgeColour::semilattice ||
            e.colour == EdgeColour::majority) {
          for (Elem c : block_src) {
            acc.meet();
            bool exists = false;
            for (Elem d : block_dst) {
              if (!minimal_pair(c, d)) continue;
              exists = true;
              bool thin_ok;
              if (e.colour == EdgeColour::semilattice)
                thin_ok = ctx.thin_sl_edge(m, c, d);
              else {
                bool special = false;
                for (const auto& te : tg.edges)
                  if (te.a == c && te.b == d &&
                      te.colour == EdgeColour::majority && te.special)
                    special = true;
                thin_ok = special;
              }
              if (!thin_ok)
                acc.fail("Lemma thin-semilattice: minimal pair " +
                         pair_str(c, d) + " of " + m.name +
                         " is not a thin " + colour_name(e.colour) + " edge");
            }
            if (!exists)
              acc.fail("Lemma thin-semilattice: no minimal pair exists for " +
                       std::to_string(c));
            if (acc.failed()) return;
          }
        } else {  // affine
          acc.meet();
          bool exists = false;
          for (Elem d : block_dst) {
            if (!minimal_pair(src, d)) continue;
            if (h.eval(m, {d, src, src}) != d) continue;
            exists = true;
            if (!tg.adj_as[src][d] || tg.adj_s[src][d])
              acc.fail("Lemma thin-semilattice: pair " + pair_str(src, d) +
                       " of " + m.name + " is not a thin affine edge");
          }
          if (!exists)
            acc.fail("Lemma thin-semilattice: no minimal affine pair for " +
                     std::to_string(src));
          if (acc.failed()) return;
        }
      }
    }
  }
}

void chk_good_operation(const Instance& inst, Acc& acc, std::size_t cap) {
  const FiniteAlgebra& a = need_algebra(inst);
  auto ctx = ClassContext::for_algebra(a, cap);
  try {
    const TermOp& mult = ctx.op_mult();
    acc.meet();
    for (const auto& m : ctx.cls().members) {
      for (Elem x = 0; x < m.size; ++x)
        for (Elem y = 0; y < m.size; ++y) {
          Elem v = mult.eval(m, {x, y});
          if (v != x && !ctx.thin_sl_edge(m, x, v))
            acc.fail("Lemma good-operation: (x, x*y) = " + pair_str(x, v) +
                     " is neither equal nor a thin semilattice edge in " +
                     m.name);
        }
    }
  } catch (const NotFound& e) {
    acc.meet();
    acc.fail(std::string("Lemma good-operation: ") + e.what());
  }
}

void chk_thin_properties(const Instance& inst, Acc& acc, std::size_t cap) {
  const FiniteAlgebra& a = need_algebra(inst);
  auto ctx = ClassContext::for_algebra(a, cap);
  const ThinGraph& g = ctx.thin_graph(a);
  auto lat = con_lattice(a, cap);
  for (const auto& theta : lat.congruences) {
    auto q = quotient(a, theta);
    const ThinGraph& gq = ctx.thin_graph(q.algebra);
    // (1): lift thin edges of the quotient
    for (const auto& eq : gq.edges) {
      for (Elem x = 0; x < a.size; ++x) {
        if (q.block_of[x] != eq.a) continue;
        acc.meet();
        bool lifted = false;
        for (const auto& e : g.edges)
          if (e.a == x && q.block_of[e.b] == eq.b && e.colour == eq.colour)
            lifted = true;
        if (!lifted)
          acc.fail("Lemma thin-properties(1): edge " +
                   pair_str(eq.a, eq.b) + " of the quotient does not lift "
                   "at " + std::to_string(x));
        if (acc.failed()) return;
      }
    }
    // (2): thin edges project to the quotient
    for (const auto& e : g.edges) {
      acc.meet();
      Elem qa = q.block_of[e.a], qb = q.block_of[e.b];
      if (qa != qb && !gq.adj(PathKind::asm_)[qa][qb])
        acc.fail("Lemma thin-properties(2): edge " + pair_str(e.a, e.b) +
                 " does not survive into the quotient");
      if (acc.failed()) return;
    }
  }
  // (2): thin edges survive into subalgebras containing both ends
  for (const auto& sub : all_subuniverses(a, cap)) {
    auto rest = restrict_algebra(a, sub);
    const ThinGraph& gs = ctx.thin_graph(rest.algebra);
    for (const auto& e : g.edges) {
      if (rest.index_of[e.a] < 0 || rest.index_of[e.b] < 0) continue;
      acc.meet();
      if (!gs.adj(PathKind::asm_)[rest.index_of[e.a]][rest.index_of[e.b]])
        acc.fail("Lemma thin-properties(2): edge " + pair_str(e.a, e.b) +
                 " missing in a subalgebra");
      if (acc.failed()) return;
    }
  }
}

void chk_op_s_affine(const Instance& inst, Acc& acc, std::size_t cap) {
  const FiniteAlgebra& a = need_algebra(inst);
  auto ctx = ClassContext::for_algebra(a, cap);
  struct ThinRef {
    const FiniteAlgebra* m;
    ThinEdge e;
  };
  std::vector<ThinRef> thin;
  for (const auto& m : ctx.cls().members)
    for (const auto& e : ctx.thin_graph(m).edges) thin.push_back({&m, e});
  for (const auto& t : thin) {
    if (t.e.colour == EdgeColour::majority) {
      acc.meet();
      try {
        auto op = ctx.special_t_ab(*t.m, t.e.a, t.e.b);
        if (op.eval(*t.m, {t.e.a, t.e.b}) != t.e.b)
          acc.fail("op-s-on-affine(1): t_ab(a,b) != b");
      } catch (const NotFound& e) {
        acc.fail(std::string("op-s-on-affine(1): ") + e.what());
      }
    }
    if (t.e.colour == EdgeColour::affine) {
      acc.meet();
      try {
        auto op = ctx.special_h_ab(*t.m, t.e.a, t.e.b);
        if (op.eval(*t.m, {t.e.a, t.e.a, t.e.b}) != t.e.b)
          acc.fail("op-s-on-affine(2): h_ab(a,a,b) != b");
      } catch (const NotFound& e) {
        acc.fail(std::string("op-s-on-affine(2): ") + e.what());
      }
    }
    if (acc.failed()) return;
  }
  // (3): pairs of thin edges
  for (const auto& t1 : thin)
    for (const auto& t2 : thin) {
      if (t1.e.colour != t2.e.colour) {
        acc.meet();
        try {
          auto p = ctx.special_p(*t1.m, t1.e.a, t1.e.b, *t2.m, t2.e.a, t2.e.b);
          if (p.eval(*t1.m, {t1.e.b, t1.e.a}) != t1.e.b ||
              p.eval(*t2.m, {t2.e.a, t2.e.b}) != t2.e.b)
            acc.fail("op-s-on-affine(3): p identities fail");
        } catch (const NotFound& e) {
          acc.fail(std::string("op-s-on-affine(3): ") + e.what());
        }
      } else if (t1.e.colour == EdgeColour::affine) {
        acc.meet();
        try {
          auto hp = ctx.special_h_prime(*t1.m, t1.e.a, t1.e.b, *t2.m, t2.e.a,
                                        t2.e.b);
          if (hp.eval(*t1.m, {t1.e.a, t1.e.a, t1.e.b}) != t1.e.b ||
              hp.eval(*t2.m, {t2.e.b, t2.e.a, t2.e.a}) != t2.e.b)
            acc.fail("op-s-on-affine(3): h' identities fail");
        } catch (const NotFound& e) {
          acc.fail(std::string("op-s-on-affine(3): ") + e.what());
        }
      }
      if (acc.failed()) return;
    }
}

void chk_as_connectivity(const Instance& inst, Acc& acc, std::size_t cap) {
  const FiniteAlgebra& a = need_algebra(inst);
  auto ctx = ClassContext::for_algebra(a, cap);
  auto c = connectivity(ctx.thin_graph(a));
  acc.check(c.as_connectivity_undirected_ok,
            "Prop as-connectivity(1): G_asm not connected undirected");
  acc.check(c.as_connectivity_directed_ok,
            "Prop as-connectivity(2): maximal elements not mutually "
            "asm-reachable");
  acc.check(c.unique_umax_component, "u-maximal component is not unique");
}

void chk_umax_congruence(const Instance& inst, Acc& acc, std::size_t cap) {
  const FiniteAlgebra& a = need_algebra(inst);
  auto ctx = ClassContext::for_algebra(a, cap);
  const ThinGraph& g = ctx.thin_graph(a);
  auto umax_a = max_in(g, PathKind::asm_, whole_universe(a.size));
  for (const auto& sub : all_subuniverses(a, cap)) {
    bool contains_umax = false;
    for (Elem x : sub)
      if (std::binary_search(umax_a.begin(), umax_a.end(), x))
        contains_umax = true;
    if (!contains_umax) continue;
    acc.meet();
    for (Elem x : max_in(g, PathKind::asm_, sub))
      if (!std::binary_search(umax_a.begin(), umax_a.end(), x))
        acc.fail("Lemma u-max-congruence: umax(B) escapes umax(A) at " +
                 std::to_string(x));
    if (acc.failed()) return;
  }
}

void chk_to_max(const Instance& inst, Acc& acc, std::size_t cap) {
  for (const auto& r : relations_of(inst, cap)) {
    auto ctx = ClassContext::for_factors(r.factors, cap);
    const ThinGraph& g = ctx.thin_graph(r.alg);
    const int n = r.arity();
    auto uni = whole_universe(r.size());
    for (int mask = 1; mask < (1 << n) - 1; ++mask) {
      std::vector<int> coords;
      for (int i = 0; i < n; ++i)
        if (mask & (1 << i)) coords.push_back(i);
      std::vector<int> rest;
      for (int i = 0; i < n; ++i)
        if (!(mask & (1 << i))) rest.push_back(i);
      auto ri = r.project(coords);
      auto rrest = r.project(rest);
      auto pm = r.projection_index_map(ri, coords);
      auto pm_rest = r.projection_index_map(rrest, rest);
      const ThinGraph& gi = ctx.thin_graph(ri.alg);
      auto uni_i = whole_universe(ri.size());
      // (1) thin edge lifting
      for (int t = 0; t < r.size(); ++t)
        for (const auto& e : gi.edges) {
          if (e.a != pm[t]) continue;
          acc.meet();
          bool lifted = false;
          for (const auto& re : g.edges)
            if (re.a == t && pm[re.b] == e.b && re.colour == e.colour)
              lifted = true;
          if (!lifted)
            acc.fail("to-max(1): thin edge of the projection does not lift");
          if (acc.failed()) return;
        }
      // (2) thin edges project
      for (const auto& re : g.edges) {
        acc.meet();
        if (pm[re.a] != pm[re.b] &&
            !gi.adj(PathKind::asm_)[pm[re.a]][pm[re.b]])
          acc.fail("to-max(2): thin edge does not project");
      }
      for (PathKind k : {PathKind::s, PathKind::as, PathKind::asm_}) {
        // (3) path lifting at the reachability level
        for (int t = 0; t < r.size(); ++t)
          for (Elem b = 0; b < ri.size(); ++b) {
            if (!reaches_in(gi, k, uni_i, pm[t], b)) continue;
            acc.meet();
            bool lifted = false;
            for (int t2 = 0; t2 < r.size(); ++t2)
              if (pm[t2] == b && reaches_in(g, k, uni, t, t2)) lifted = true;
            if (!lifted) acc.fail("to-max(3): path does not lift");
            if (acc.failed()) return;
          }
        // (4) paths project
        for (int t = 0; t < r.size(); ++t)
          for (int t2 = 0; t2 < r.size(); ++t2) {
            if (!reaches_in(g, k, uni, t, t2)) continue;
            acc.meet();
            if (!reaches_in(gi, k, uni_i, pm[t], pm[t2]))
              acc.fail("to-max(4): path does not project");
            if (acc.failed()) return;
          }
        // (5) maximal elements lift, with maximal complement projection
        auto max_r = max_in(g, k, uni);
        auto max_i = max_in(gi, k, uni_i);
        auto max_rest = max_in(ctx.thin_graph(rrest.alg), k,
                               whole_universe(rrest.size()));
        for (Elem b : max_i) {
          acc.meet();
          bool found = false;
          for (int t = 0; t < r.size(); ++t)
            if (pm[t] == b &&
                std::binary_search(max_r.begin(), max_r.end(), t) &&
                std::binary_search(max_rest.begin(), max_rest.end(),
                                   pm_rest[t]))
              found = true;
          if (!found) acc.fail("to-max(5): maximal element does not lift");
          if (acc.failed()) return;
        }
        // (6) maximality projects
        for (int t : max_r) {
          acc.meet();
          if (!std::binary_search(max_i.begin(), max_i.end(), pm[t]))
            acc.fail("to-max(6): maximality does not project");
          if (acc.failed()) return;
        }
      }
    }
  }
}

void chk_as_product(const Instance& inst, Acc& acc, std::size_t cap) {
  for (const auto& r : relations_of(inst, cap)) {
    if (r.arity() != 2) continue;
    auto ctx = ClassContext::for_factors(r.factors, cap);
    const ThinGraph& g = ctx.thin_graph(r.alg);
    const ThinGraph& g1 = ctx.thin_graph(r.factors[0]);
    const ThinGraph& g2 = ctx.thin_graph(r.factors[1]);
    for (PathKind k : {PathKind::s, PathKind::as, PathKind::asm_}) {
      auto comps1 = components_in(g1, k, whole_universe(r.factors[0].size));
      auto comps2 = components_in(g2, k, whole_universe(r.factors[1].size));
      auto max1 = max_in(g1, k, whole_universe(r.factors[0].size));
      auto max2 = max_in(g2, k, whole_universe(r.factors[1].size));
      auto max_r = max_in(g, k, whole_universe(r.size()));
      for (const auto& b : comps1) {
        if (!std::includes(max1.begin(), max1.end(), b.begin(), b.end()))
          continue;
        for (const auto& c : comps2) {
          if (!std::includes(max2.begin(), max2.end(), c.begin(), c.end()))
            continue;
          // hypothesis: B x C inside R
          std::vector<Elem> prod;
          bool inside = true;
          for (Elem x : b)
            for (Elem y : c) {
              int t = r.index_of({x, y});
              if (t < 0) inside = false;
              prod.push_back(t);
            }
          if (!inside) continue;
          acc.meet();
          std::sort(prod.begin(), prod.end());
          auto comp = component_of_in(g, k, whole_universe(r.size()), prod[0]);
          bool is_max = std::includes(max_r.begin(), max_r.end(), prod.begin(),
                                      prod.end());
          if (comp != prod || !is_max)
            acc.fail("Lemma as-product: B x C is not a maximal component of "
                     "the relation");
          if (acc.failed()) return;
        }
      }
    }
  }
}

void chk_as_type2(const Instance& inst, Acc& acc, std::size_t cap) {
  const FiniteAlgebra& a = need_algebra(inst);
  auto ctx = ClassContext::for_algebra(a, cap);
  auto lat = con_lattice(a, cap);
  for (const auto& pi : prime_intervals(lat)) {
    if (interval_type(a, pi.lower, pi.upper, cap) != 2) continue;
    auto q = quotient(a, pi.lower);
    const ThinGraph& gq = ctx.thin_graph(q.algebra);
    for (const auto& block : pi.upper.blocks()) {
      acc.meet();
      // Mal'tsev term on the block modulo alpha
      auto rest = restrict_algebra(a, block);
      Partition al_b;
      {
        std::vector<Elem> lab(block.size());
        for (std::size_t i = 0; i < block.size(); ++i) {
          lab[i] = static_cast<Elem>(i);
          for (std::size_t j = 0; j < i; ++j)
            if (pi.lower.related(block[j], block[i])) {
              lab[i] = lab[j];
              break;
            }
        }
        al_b = partition_from_labels(lab);
      }
      auto qb = quotient(rest.algebra, al_b);
      const FiniteAlgebra& mq = qb.algebra;
      std::vector<EvalCoord> coords;
      std::vector<Elem> target;
      for (Elem x = 0; x < mq.size; ++x)
        for (Elem y = 0; y < mq.size; ++y) {
          coords.push_back({&mq, {x, y, y}});
          target.push_back(x);
          coords.push_back({&mq, {y, y, x}});
          target.push_back(x);
        }
      if (!term_exists(mq, 3, coords, target, cap))
        acc.fail("Lemma as-type-2: no Mal'tsev term on a type-2 block");
      // every pair of the block is a thin affine edge in A/alpha
      std::set<Elem> cls;
      for (Elem x : block) cls.insert(q.block_of[x]);
      for (Elem x : cls)
        for (Elem y : cls) {
          if (x == y) continue;
          bool affine_edge = false;
          for (const auto& e : gq.edges)
            if (e.a == x && e.b == y && e.colour == EdgeColour::affine)
              affine_edge = true;
          if (!affine_edge)
            acc.fail("Lemma as-type-2: pair " + pair_str(x, y) +
                     " of a type-2 block is not a thin affine edge");
        }
      if (acc.failed()) return;
    }
  }
}

void chk_quasi2(const Instance& inst, Acc& acc, std::size_t cap) {
  for (const auto& r : relations_of(inst, cap)) {
    auto ctx = ClassContext::for_factors(r.factors, cap);
    const int n = r.arity();
    std::vector<int> sizes;
    std::size_t total = 1;
    for (const auto& f : r.factors) {
      sizes.push_back(f.size);
      total *= static_cast<std::size_t>(f.size);
    }
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<Elem> a = product_decode(static_cast<Elem>(code), sizes);
      for (int mask = 1; mask < (1 << n); ++mask) {
        std::vector<int> x_coords;
        for (int i = 0; i < n; ++i)
          if (mask & (1 << i)) x_coords.push_back(i);
        try {
          auto res = quasi2_check(r, ctx, a, x_coords);
          acc.meet();
          if (!res.holds)
            acc.fail("Theorem quasi-2-decomp: " + res.detail);
        } catch (const HypothesisNotMet&) {
        }
        if (acc.failed()) return;
      }
    }
  }
}

void chk_pseudo_majority(const Instance& inst, Acc& acc, std::size_t cap) {
  const FiniteAlgebra& a = need_algebra(inst);
  auto ctx = ClassContext::for_algebra(a, cap);
  try {
    const TermOp& maj = ctx.op_maj();
    acc.meet();
    for (const auto& m : ctx.cls().members) {
      const ThinGraph& g = ctx.thin_graph(m);
      auto uni = whole_universe(m.size);
      for (Elem x = 0; x < m.size; ++x)
        for (Elem y = 0; y < m.size; ++y)
          for (const auto& args : {std::vector<Elem>{x, x, y},
                                   std::vector<Elem>{x, y, x},
                                   std::vector<Elem>{y, x, x}})
            if (!reaches_in(g, PathKind::as, uni, x, maj.eval(m, args)))
              acc.fail("Theorem pseudo-majority: a !as<= maj image in " +
                       m.name);
    }
  } catch (const NotFound& e) {
    acc.meet();
    acc.fail(std::string("Theorem pseudo-majority: ") + e.what());
  }
}

void chk_as_rect(const Instance& inst, Acc& acc, std::size_t cap) {
  for (const auto& r : relations_of(inst, cap)) {
    if (r.arity() != 2) continue;
    auto ctx = ClassContext::for_factors(r.factors, cap);
    const ThinGraph& g1 = ctx.thin_graph(r.factors[0]);
    for (const auto& e : g1.edges) {
      acc.meet();
      auto v = as_rect_check(r, ctx, e.a, e.b);
      if (!v.holds) acc.fail("Lemma as-rectangularity: " + v.detail);
      if (acc.failed()) return;
    }
  }
}

void chk_link_rect(const Instance& inst, Acc& acc, std::size_t cap) {
  for (const auto& r : relations_of(inst, cap)) {
    if (r.arity() != 2) continue;
    auto ctx = ClassContext::for_factors(r.factors, cap);
    auto ls = link_structure(r);
    const ThinGraph& g1 = ctx.thin_graph(r.factors[0]);
    const ThinGraph& g2 = ctx.thin_graph(r.factors[1]);
    for (const auto& block1 : ls.lnk1.blocks())
      for (const auto& c1 : components_in(g1, PathKind::as, block1)) {
        auto am1 = max_in(g1, PathKind::as, block1);
        if (!std::includes(am1.begin(), am1.end(), c1.begin(), c1.end()))
          continue;
        for (const auto& block2 : ls.lnk2.blocks())
          for (const auto& c2 : components_in(g2, PathKind::as, block2)) {
            auto am2 = max_in(g2, PathKind::as, block2);
            if (!std::includes(am2.begin(), am2.end(), c2.begin(), c2.end()))
              continue;
            bool meets = false;
            for (Elem x : c1)
              for (Elem y : c2)
                if (r.index_of({x, y}) >= 0) meets = true;
            if (!meets) continue;
            acc.meet();
            auto v = rectangularity_check(r, ctx, c1, c2, RectMode::as_as);
            if (!v.holds)
              acc.fail("Prop linkage-rectangularity: " + v.detail);
            if (acc.failed()) return;
          }
      }
  }
}

void chk_umax_rect(const Instance& inst, Acc& acc, std::size_t cap) {
  for (const auto& r : relations_of(inst, cap)) {
    if (r.arity() != 2) continue;
    auto ctx = ClassContext::for_factors(r.factors, cap);
    auto ls = link_structure(r);
    const ThinGraph& g1 = ctx.thin_graph(r.factors[0]);
    for (const auto& block1 : ls.lnk1.blocks())
      for (const auto& c1 : components_in(g1, PathKind::as, block1)) {
        auto am1 = max_in(g1, PathKind::as, block1);
        if (!std::includes(am1.begin(), am1.end(), c1.begin(), c1.end()))
          continue;
        acc.meet();
        auto b2 = r.neighbours(0, c1, 1);
        auto v = rectangularity_check(r, ctx, c1, b2, RectMode::as_umax);
        if (!v.holds) acc.fail("Prop umax-rectangular: " + v.detail);
        if (acc.failed()) return;
      }
  }
}

void chk_as_square(const Instance& inst, Acc& acc, std::size_t cap) {
  const FiniteAlgebra& a = need_algebra(inst);
  auto ctx = ClassContext::for_algebra(a, cap);
  const ThinGraph& g = ctx.thin_graph(a);
  auto uni = whole_universe(a.size);
  auto am = max_in(g, PathKind::as, uni);
  for (const auto& c : components_in(g, PathKind::as, uni)) {
    if (!std::includes(am.begin(), am.end(), c.begin(), c.end())) continue;
    if (sg_closure(a, c) != uni) continue;
    if (c.size() < 2) continue;  // a != b is required in the conclusion
    auto sq = full_square(a);
    for (const auto& alpha : con_lattice(sq.alg, cap).congruences) {
      acc.meet();
      try {
        auto [x, y] = as_square_witness(a, ctx, c, alpha);
        if (x == y) acc.fail("Lemma as-square-congruence: witness collapsed");
      } catch (const NotFound& e) {
        acc.fail(e.what());
      }
      if (acc.failed()) return;
    }
  }
}

// ---------------------------------------------------------------------------
// 3.1  Q_ab, mapping pairs, types

void chk_qab(const Instance& inst, Acc& acc, std::size_t cap) {
  const FiniteAlgebra& a = need_algebra(inst);
  auto ctx = ClassContext::for_algebra(a, cap);
  PolyClosure pc(a, 1, cap);
  const ThinGraph& g = ctx.thin_graph(a);
  for (Elem x = 0; x < a.size; ++x)
    for (Elem y = 0; y < a.size; ++y) {
      if (x == y) continue;
      acc.meet();
      auto q = qab_relation(a, x, y, cap);  // (1) verified inside
      std::set<std::pair<Elem, Elem>> qset(q.begin(), q.end());
      // (2): lnk1(Q_ab) = Cg(a,b)
      std::vector<std::vector<Elem>> tuples;
      for (auto [u, v] : q) tuples.push_back({u, v});
      auto qrel = make_relation({a, a}, tuples, cap);
      auto ls = link_structure(qrel);
      auto cg = cg_closure(a, {{x, y}});
      if (!(ls.lnk1 == cg))
        acc.fail("Lemma Qab-tolerance(2): lnk1 differs from Cg(a,b)");
      // (3): Q_ab inside Cg(a,b)
      for (auto [u, v] : q)
        if (!cg.related(u, v))
          acc.fail("Lemma Qab-tolerance(3): Q_ab escapes Cg(a,b)");
      // (4): rectangularity of as-components
      for (const auto& b1 : cg.blocks())
        for (const auto& b2 : cg.blocks()) {
          for (const auto& c1 : components_in(g, PathKind::as, b1)) {
            auto am1 = max_in(g, PathKind::as, b1);
            if (!std::includes(am1.begin(), am1.end(), c1.begin(), c1.end()))
              continue;
            for (const auto& c2 : components_in(g, PathKind::as, b2)) {
              auto am2 = max_in(g, PathKind::as, b2);
              if (!std::includes(am2.begin(), am2.end(), c2.begin(),
                                 c2.end()))
                continue;
              bool hyp = false;
              for (const auto& f : pc.tables())
                if (std::binary_search(c1.begin(), c1.end(), f[x]) &&
                    std::binary_search(c2.begin(), c2.end(), f[y]))
                  hyp = true;
              if (!hyp) continue;
              for (Elem u : c1)
                for (Elem v : c2)
                  if (!qset.count({u, v}))
                    acc.fail("Lemma Qab-tolerance(4): C1 x C2 escapes Q_ab");
            }
          }
        }
      if (acc.failed()) return;
    }
}

void chk_mapping_pairs(const Instance& inst, Acc& acc, std::size_t cap) {
  const FiniteAlgebra& a = need_algebra(inst);
  auto ctx = ClassContext::for_algebra(a, cap);
  const ThinGraph& g = ctx.thin_graph(a);
  auto lat = con_lattice(a, cap);
  for (int ai : lat.atoms()) {
    const Partition& alpha = lat.congruences[ai];
    for (Elem x = 0; x < a.size; ++x)
      for (Elem y = 0; y < a.size; ++y) {
        if (x == y || !alpha.related(x, y)) continue;
        auto q = qab_relation(a, x, y, cap);
        std::set<std::pair<Elem, Elem>> qset(q.begin(), q.end());
        for (const auto& block : alpha.blocks())
          for (const auto& comp : components_in(g, PathKind::as, block))
            for (Elem c : comp)
              for (Elem d : comp) {
                if (c == d) continue;
                acc.meet();
                if (!qset.count({c, d}))
                  acc.fail("Corollary mapping-pairs: no f with f" +
                           pair_str(x, y) + " = " + pair_str(c, d));
                if (acc.failed()) return;
              }
      }
  }
}

void chk_max_min_set(const Instance& inst, Acc& acc, std::size_t cap) {
  const FiniteAlgebra& a = need_algebra(inst);
  auto ctx = ClassContext::for_algebra(a, cap);
  const ThinGraph& g = ctx.thin_graph(a);
  auto lat = con_lattice(a, cap);
  for (int ai : lat.atoms()) {
    const Partition& alpha = lat.congruences[ai];
    Partition zero = partition_equality(a.size);
    std::set<std::pair<Elem, Elem>> subtraces;
    for (const auto& u : minimal_sets(a, zero, alpha, cap)) {
      auto ts = trace_structure(a, zero, alpha, u, cap);
      for (auto [p, qq] : ts.subtraces) {
        subtraces.insert({p, qq});
        subtraces.insert({qq, p});
      }
    }
    for (const auto& block : alpha.blocks()) {
      auto amax_block = max_in(g, PathKind::as, block);
      auto comps = components_in(g, PathKind::as, block);
      for (Elem c : amax_block)
        for (Elem d : amax_block) {
          if (c == d) continue;
          auto comp_c = component_of_in(g, PathKind::as, block, c);
          bool same = std::binary_search(comp_c.begin(), comp_c.end(), d);
          if (same) {
            acc.meet();
            if (!subtraces.count({c, d}))
              acc.fail("Corollary max-min-set(1): as-component pair " +
                       pair_str(c, d) + " is not a subtrace");
          } else {
            // (2): subtrace linking the two as-components
            bool linked = false;
            auto comp_d = component_of_in(g, PathKind::as, block, d);
            for (auto [p, qq] : subtraces)
              if (std::binary_search(comp_c.begin(), comp_c.end(), p) &&
                  std::binary_search(comp_d.begin(), comp_d.end(), qq))
                linked = true;
            if (linked) {
              acc.meet();
              if (!subtraces.count({c, d}))
                acc.fail("Corollary max-min-set(2): pair " + pair_str(c, d) +
                         " is not a subtrace");
            }
          }
          if (acc.failed()) return;
        }
    }
  }
}

void chk_type23(const Instance& inst, Acc& acc, std::size_t cap) {
  const FiniteAlgebra& a = need_algebra(inst);
  auto ctx = ClassContext::for_algebra(a, cap);
  const ThinGraph& g = ctx.thin_graph(a);
  auto lat = con_lattice(a, cap);
  for (int ai : lat.atoms()) {
    const Partition& alpha = lat.congruences[ai];
    bool nontrivial = false;
    for (const auto& block : alpha.blocks())
      for (const auto& comp : components_in(g, PathKind::as, block))
        if (comp.size() > 1) nontrivial = true;
    if (!nontrivial) continue;
    acc.meet();
    int label = interval_type(a, partition_equality(a.size), alpha, cap);
    if (label != 2 && label != 3)
      acc.fail("Lemma type23: type is " + std::to_string(label));
    if (acc.failed()) return;
  }
}

void chk_type2_cond(const Instance& inst, Acc& acc, std::size_t cap) {
  const FiniteAlgebra& a = need_algebra(inst);
  auto cg = coloured_graph(a, cap);
  auto lat = con_lattice(a, cap);
  for (int ai : lat.atoms()) {
    const Partition& alpha = lat.congruences[ai];
    bool has_sm_edge = false;
    for (const auto& e : cg.edges)
      if ((e.colour == EdgeColour::semilattice ||
           e.colour == EdgeColour::majority) &&
          alpha.related(e.a, e.b))
        has_sm_edge = true;
    if (!has_sm_edge) continue;
    acc.meet();
    int label = interval_type(a, partition_equality(a.size), alpha, cap);
    if (label != 3 && label != 4 && label != 5)
      acc.fail("Lemma type2-condition: type is " + std::to_string(label));
    if (acc.failed()) return;
  }
}

}  // namespace

const std::vector<std::string>& lemma_ids() {
  static const std::vector<std::string> ids = {
      "L-minimal-sets", "L-traces",       "L-perspective",
      "L-pseudo-meet",  "T-connectedness", "T-uniform",
      "L-thin-semilattice", "L-good-operation", "L-thin-properties",
      "L-op-s-affine",  "P-as-connectivity", "L-umax-congruence",
      "L-to-max",       "L-as-product",   "L-as-type-2",
      "T-quasi-2-decomp", "T-pseudo-majority", "L-as-rect",
      "P-link-rect",    "P-umax-rect",    "L-as-square",
      "L-Qab",          "C-mapping-pairs", "C-max-min-set",
      "L-type23",       "L-type2-cond",   "L-sep-sep",
      "L-minset-sep",   "L-good-polys",   "T-rel-symmetry",
      "L-e-related",    "L-type-equal",   "P-two-centralizers",
      "L-delta-align",  "L-34-links",     "L-central-map",
      "C-centralizer-mult", "C-equal-centralizer", "L-maximal-minimal",
      "T-collapsing",   "L-poly-closed",  "L-affine-link",
      "L-full-chaining", "L-S7",
  };
  return ids;
}

namespace {

const std::map<std::string, Checker>& checkers() {
  static const std::map<std::string, Checker> table = [] {
    std::map<std::string, Checker> t;
    t["L-minimal-sets"] = chk_minimal_sets;
    t["L-traces"] = chk_traces;
    t["L-perspective"] = chk_perspective;
    t["L-pseudo-meet"] = chk_pseudo_meet;
    t["T-connectedness"] = chk_connectedness;
    t["T-uniform"] = chk_uniform;
    t["L-thin-semilattice"] = chk_thin_semilattice;
    t["L-good-operation"] = chk_good_operation;
    t["L-thin-properties"] = chk_thin_properties;
    t["L-op-s-affine"] = chk_op_s_affine;
    t["P-as-connectivity"] = chk_as_connectivity;
    t["L-umax-congruence"] = chk_umax_congruence;
    t["L-to-max"] = chk_to_max;
    t["L-as-product"] = chk_as_product;
    t["L-as-type-2"] = chk_as_type2;
    t["T-quasi-2-decomp"] = chk_quasi2;
    t["T-pseudo-majority"] = chk_pseudo_majority;
    t["L-as-rect"] = chk_as_rect;
    t["P-link-rect"] = chk_link_rect;
    t["P-umax-rect"] = chk_umax_rect;
    t["L-as-square"] = chk_as_square;
    t["L-Qab"] = chk_qab;
    t["C-mapping-pairs"] = chk_mapping_pairs;
    t["C-max-min-set"] = chk_max_min_set;
    t["L-type23"] = chk_type23;
    t["L-type2-cond"] = chk_type2_cond;
    for (const auto& [k, v] : registry_detail::part2_checkers()) t[k] = v;
    return t;
  }();
  return table;
}

}  // namespace

bool lemma_takes_relation(const std::string& id) {
  static const std::set<std::string> rel = {
      "L-to-max",      "L-as-product",  "T-quasi-2-decomp", "L-as-rect",
      "P-link-rect",   "P-umax-rect",   "L-minset-sep",     "L-good-polys",
      "T-rel-symmetry", "L-e-related",  "L-type-equal",     "L-delta-align",
      "L-34-links",    "T-collapsing",  "L-poly-closed",    "L-affine-link",
      "L-full-chaining", "L-S7"};
  return rel.count(id) > 0;
}

VerificationReport verify(const std::string& lemma_id, const Instance& inst,
                          std::size_t cap) {
  auto it = checkers().find(lemma_id);
  if (it == checkers().end())
    throw UnknownLemma("unknown lemma id '" + lemma_id + "'");
  VerificationReport rep;
  rep.lemma = lemma_id;
  rep.fingerprint = inst.fingerprint();
  auto start = std::chrono::steady_clock::now();
  Acc acc;
  try {
    it->second(inst, acc, cap);
    rep.verdict = acc.out;
    rep.detail = acc.detail;
  } catch (const CapExceeded& e) {
    rep.verdict = Outcome::inconclusive;
    rep.detail = e.what();
  } catch (const HypothesisNotMet& e) {
    rep.verdict = Outcome::hypothesis_not_met;
    rep.detail = e.what();
  }
  rep.millis = std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - start)
                   .count();
  return rep;
}

}  // namespace algwb
