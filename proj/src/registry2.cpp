// Statement checkers for sections 3-7: separation, centralizers, chaining,
// collapsing polynomials and the Congruence Lemma.
#include <algorithm>
#include <set>

#include "registry_impl.hpp"

namespace algwb::registry_detail {

namespace {

// full frame plus one coatom frame per factor, anchored at the first tuple
std::vector<BlockFrame> candidate_frames(const SubdirectRelation& r,
                                         std::size_t cap) {
  std::vector<BlockFrame> frames{full_frame(r)};
  for (int j = 0; j < r.arity(); ++j) {
    auto lat = con_lattice(r.factors[j], cap);
    for (int ci : lat.coatoms()) {
      std::vector<Partition> beta;
      for (int i = 0; i < r.arity(); ++i)
        beta.push_back(i == j ? lat.congruences[ci]
                              : partition_full(r.factors[i].size));
      frames.push_back(block_frame(r, beta, r.tuples[0]));
    }
  }
  return frames;
}

// ---------------------------------------------------------------------------

void chk_sep_sep(const Instance& inst, Acc& acc, std::size_t cap) {
  const FiniteAlgebra& a = need_algebra(inst);
  PolyClosure pc(a, 1, cap);
  auto pis = prime_intervals(con_lattice(a, cap));
  for (std::size_t i = 0; i < pis.size(); ++i)
    for (std::size_t j = 0; j < pis.size(); ++j) {
      if (i == j) continue;
      acc.meet();
      bool direct = false;
      for (const auto& f : pc.tables())
        if (!collapses(f, pis[i].upper, pis[i].lower) &&
            collapses(f, pis[j].upper, pis[j].lower))
          direct = true;
      bool doubled = can_separate_single(a, pis[i], pis[j], cap).has_value();
      if (direct != doubled)
        acc.fail("Lemma separation-separation: direct and doubled routes "
                 "disagree for " + interval_str(pis[i]) + " vs " +
                 interval_str(pis[j]));
      if (acc.failed()) return;
    }
}

void chk_minset_sep(const Instance& inst, Acc& acc, std::size_t cap) {
  for (const auto& r : relations_of(inst, cap)) {
    auto m = separation_matrix(r, cap);
    if (!m.complete) {
      acc.undecided("separation matrix incomplete");
      continue;
    }
    for (std::size_t i = 0; i < m.intervals.size(); ++i)
      for (std::size_t j = 0; j < m.intervals.size(); ++j) {
        if (m.sep[i][j] != SepEntry::yes) continue;
        acc.meet();
        try {
          normalize_separator(r, m.intervals[i], m.intervals[j],
                              m.witness[i][j], cap);
        } catch (const Error& e) {
          acc.fail(std::string("Lemma min-set-separation: ") + e.what());
        }
        if (acc.failed()) return;
      }
  }
}

void chk_good_polys(const Instance& inst, Acc& acc, std::size_t cap) {
  for (const auto& r : relations_of(inst, cap)) {
    auto ctx = ClassContext::for_factors(r.factors, cap);
    for (const auto& frame : candidate_frames(r, cap)) {
      auto env = make_env(r, ctx, frame, cap);
      // (1): every constant from R' is B-preserving
      for (int t : env.frame.rprime) {
        acc.meet();
        UnaryMap c(r.size(), t);
        if (std::find(env.preserving.begin(), env.preserving.end(), c) ==
            env.preserving.end())
          acc.fail("good-polys(1): constant polynomial from R' missing");
      }
      // (2): closed under composition with term operations (basic ops)
      {
        const std::size_t bound = std::min<std::size_t>(
            env.preserving.size(), 8);  // spot-check scale
        for (const auto& op : r.alg.ops) {
          const int k = op.arity;
          std::vector<std::size_t> pick(k, 0);
          std::vector<Elem> args(k);
          while (true) {
            UnaryMap h(r.size());
            for (int t = 0; t < r.size(); ++t) {
              for (int p = 0; p < k; ++p)
                args[p] = env.preserving[pick[p]][t];
              h[t] = op.apply(args);
            }
            acc.meet();
            if (std::find(env.preserving.begin(), env.preserving.end(), h) ==
                env.preserving.end())
              acc.fail("good-polys(2): composition escapes U_B");
            if (acc.failed()) return;
            int pos = k - 1;
            while (pos >= 0 && ++pick[pos] == bound) pick[pos--] = 0;
            if (pos < 0) break;
          }
        }
      }
      bool chained = is_chained(env).holds;
      // per factor, alpha < beta pairs
      for (int i = 0; i < r.arity(); ++i) {
        const FiniteAlgebra& ai = r.factors[i];
        auto lat = con_lattice(ai, cap);
        // the U families to examine: U_B and each U(gamma,delta,B)
        struct Fam {
          std::vector<UnaryMap> maps;
          bool needs_sep = false;
          int j = -1;
          PrimeInterval target;
        };
        std::vector<Fam> fams;
        fams.push_back({env.preserving, false, -1, {}});
        for (int j = 0; j < r.arity(); ++j) {
          auto latj = con_lattice(r.factors[j], cap);
          for (const auto& pj : prime_intervals(latj)) {
            if (!pj.upper.leq(env.frame.beta[j])) continue;
            fams.push_back({u_collapse(env, {j, pj.lower, pj.upper}), true, j,
                            pj});
          }
        }
        for (auto [lo, hi] : lat.covers) {
          const Partition& alpha = lat.congruences[lo];
          const Partition& beta = lat.congruences[hi];
          if (!beta.leq(env.frame.beta[i])) continue;
          auto q = quotient(ai, alpha);
          // beta / alpha on the quotient
          std::vector<Elem> lab(q.algebra.size);
          for (Elem c = 0; c < q.algebra.size; ++c) {
            lab[c] = c;
            for (Elem c2 = 0; c2 < c; ++c2)
              if (beta.related(q.representative[c], q.representative[c2])) {
                lab[c] = lab[c2];
                break;
              }
          }
          Partition beta_q = partition_from_labels(lab);
          std::set<Elem> bp_cls;
          for (Elem x : env.frame.bprime[i]) bp_cls.insert(q.block_of[x]);
          std::vector<Elem> bprime_q(bp_cls.begin(), bp_cls.end());
          const ThinGraph& tq = env.ctx->thin_graph(q.algebra);
          for (const auto& fam : fams) {
            if (fam.needs_sep) {
              // only meaningful when (alpha,beta) is separable from target
              bool sep = false;
              for (const auto& f : env.pols->tables()) {
                if (collapses(env.factor_action(f, i), beta, alpha)) continue;
                if (collapses(env.factor_action(f, fam.j), fam.target.upper,
                              fam.target.lower)) {
                  sep = true;
                  break;
                }
              }
              if (!sep) continue;
            }
            if (!chained) continue;  // items (3)-(7) assume a chained frame
            // induced actions on the quotient
            std::vector<UnaryMap> maps_q;
            for (const auto& f : fam.maps) {
              UnaryMap fi = env.factor_action(f, i);
              UnaryMap mq(q.algebra.size);
              for (Elem c = 0; c < q.algebra.size; ++c)
                mq[c] = q.block_of[fi[q.representative[c]]];
              maps_q.push_back(mq);
            }
            auto tset = [&](Elem x, Elem y) {
              return t_set(partition_equality(q.algebra.size), x, y, maps_q);
            };
            auto umax_bq = max_in(tq, PathKind::asm_, bprime_q);
            // generating pairs
            std::vector<std::pair<Elem, Elem>> gens;
            for (Elem x : bprime_q)
              for (Elem y : bprime_q)
                if (x != y && cg_closure(q.algebra, {{x, y}}) == beta_q)
                  gens.push_back({x, y});
            for (auto [ga, gb] : gens) {
              auto t_ab = tset(ga, gb);
              std::set<std::pair<Elem, Elem>> t_ab_set(t_ab.begin(),
                                                       t_ab.end());
              for (const auto& eblock : beta_q.blocks()) {
                bool meets_umax = false;
                for (Elem x : eblock)
                  if (std::binary_search(umax_bq.begin(), umax_bq.end(), x))
                    meets_umax = true;
                if (!meets_umax) continue;
                std::vector<Elem> eprime;
                for (Elem x : eblock)
                  if (bp_cls.count(x)) eprime.push_back(x);
                // (3)
                for (const auto& comp :
                     components_in(tq, PathKind::as, eprime))
                  for (Elem c : comp)
                    for (Elem d : comp) {
                      acc.meet();
                      auto key = std::make_pair(std::min(c, d), std::max(c, d));
                      if (!t_ab_set.count(key))
                        acc.fail("good-polys(3): as-component pair not in "
                                 "the T-set");
                      if (acc.failed()) return;
                    }
                // (4)
                auto um_e = max_in(tq, PathKind::asm_, eprime);
                Partition tcl = partition_from_pairs(
                    q.algebra.size,
                    std::vector<std::pair<Elem, Elem>>(t_ab.begin(),
                                                       t_ab.end()));
                for (Elem c : um_e)
                  for (Elem d : um_e) {
                    acc.meet();
                    if (!tcl.related(c, d))
                      acc.fail("good-polys(4): umax pair not T-chained");
                    if (acc.failed()) return;
                  }
              }
              // (5)
              for (auto [c, d] : t_ab) {
                if (c == d) continue;
                acc.meet();
                for (auto p : tset(c, d))
                  if (!t_ab_set.count(p))
                    acc.fail("good-polys(5): T(c,d) escapes T(a,b)");
                if (acc.failed()) return;
              }
            }
            // (6) and (7): minimal T over beta-related pairs
            if (!gens.empty()) {
              std::set<std::pair<Elem, Elem>> tmin;
              bool first = true;
              auto nondiag = [](const std::vector<std::pair<Elem, Elem>>& v) {
                std::set<std::pair<Elem, Elem>> s;
                for (auto p : v)
                  if (p.first != p.second) s.insert(p);
                return s;
              };
              for (Elem c : bprime_q)
                for (Elem d : bprime_q) {
                  if (c == d || !beta_q.related(c, d)) continue;
                  auto s = nondiag(tset(c, d));
                  if (first) {
                    tmin = s;
                    first = false;
                  } else {
                    std::set<std::pair<Elem, Elem>> inter;
                    std::set_intersection(tmin.begin(), tmin.end(), s.begin(),
                                          s.end(),
                                          std::inserter(inter, inter.begin()));
                    tmin = inter;
                  }
                }
              // (6) needs a nontrivial as-component in a qualifying block
              bool has_nontrivial = false;
              for (const auto& eblock : beta_q.blocks()) {
                bool meets_umax = false;
                for (Elem x : eblock)
                  if (std::binary_search(umax_bq.begin(), umax_bq.end(), x))
                    meets_umax = true;
                if (!meets_umax) continue;
                std::vector<Elem> eprime;
                for (Elem x : eblock)
                  if (bp_cls.count(x)) eprime.push_back(x);
                for (const auto& comp :
                     components_in(tq, PathKind::as, eprime))
                  if (comp.size() > 1) has_nontrivial = true;
              }
              if (has_nontrivial && (!fam.needs_sep || true)) {
                acc.meet();
                bool realized = false;
                std::pair<Elem, Elem> min_gen{-1, -1};
                for (auto [ga, gb] : gens) {
                  if (nondiag(tset(ga, gb)) == tmin) {
                    realized = true;
                    min_gen = {ga, gb};
                  }
                }
                if (!realized)
                  acc.fail("good-polys(6): minimal T not realised by a "
                           "generating pair");
                else {
                  // (7)
                  for (auto [c, d] : tmin) {
                    acc.meet();
                    bool found = false;
                    for (const auto& h : fam.maps) {
                      if (!is_idempotent_map(h)) continue;
                      UnaryMap hq(q.algebra.size);
                      UnaryMap hi = env.factor_action(h, i);
                      for (Elem cc = 0; cc < q.algebra.size; ++cc)
                        hq[cc] = q.block_of[hi[q.representative[cc]]];
                      if ((hq[c] == min_gen.first && hq[d] == min_gen.second) ||
                          (hq[d] == min_gen.first && hq[c] == min_gen.second))
                        found = true;
                    }
                    if (!found)
                      acc.fail("good-polys(7): no idempotent map returns a "
                               "T-pair to the generating pair");
                    if (acc.failed()) return;
                  }
                }
              }
            }
          }
        }
      }
    }
  }
}

void chk_rel_symmetry(const Instance& inst, Acc& acc, std::size_t cap) {
  for (const auto& r : relations_of(inst, cap)) {
    auto ctx = ClassContext::for_factors(r.factors, cap);
    for (const auto& frame : candidate_frames(r, cap)) {
      auto env = make_env(r, ctx, frame, cap);
      if (!is_chained(env).holds) continue;
      for (int f1 = 0; f1 < r.arity(); ++f1)
        for (int f2 = 0; f2 < r.arity(); ++f2) {
          if (f1 == f2) continue;
          auto lat1 = con_lattice(r.factors[f1], cap);
          auto lat2 = con_lattice(r.factors[f2], cap);
          for (const auto& i2 : prime_intervals(lat2)) {
            if (!(i2.upper == env.frame.beta[f2])) continue;
            auto q = quotient(r.factors[f2], i2.lower);
            std::set<Elem> cls;
            for (Elem x : env.frame.bprime[f2]) cls.insert(q.block_of[x]);
            std::vector<Elem> classes(cls.begin(), cls.end());
            const ThinGraph& tq = ctx.thin_graph(q.algebra);
            for (const auto& i1 : prime_intervals(lat1)) {
              if (!i1.upper.leq(env.frame.beta[f1])) continue;
              for (const auto& comp :
                   components_in(tq, PathKind::as, classes)) {
                if (comp.size() < 2) continue;
                auto am = max_in(tq, PathKind::as, classes);
                if (!std::includes(am.begin(), am.end(), comp.begin(),
                                   comp.end()))
                  continue;
                for (Elem c : comp)
                  for (Elem d : comp) {
                    if (c == d) continue;
                    try {
                      auto g = relative_symmetry_witness(
                          env, f1, i1, f2, i2, q.representative[c],
                          q.representative[d], false);
                      acc.meet();
                      (void)g;
                    } catch (const HypothesisNotMet&) {
                    } catch (const NotFound& e) {
                      acc.meet();
                      acc.fail(std::string("Theorem relative-symmetry: ") +
                               e.what());
                    }
                    if (acc.failed()) return;
                  }
              }
            }
          }
        }
    }
  }
}

void chk_e_related(const Instance& inst, Acc& acc, std::size_t cap) {
  if (inst.algebra) {
    const FiniteAlgebra& a = *inst.algebra;
    auto m = separation_matrix(eq_relation(a), cap);
    if (!m.complete) {
      acc.undecided("separation matrix incomplete");
      return;
    }
    for (std::size_t i = 0; i < m.intervals.size(); ++i)
      for (std::size_t j = 0; j < m.intervals.size(); ++j) {
        if (i == j) continue;
        if (m.intervals[i].factor == m.intervals[j].factor) continue;
        const auto& pi = m.intervals[i].interval;
        const auto& pj = m.intervals[j].interval;
        // (1): perspective implies cannot be separated
        if (is_perspective(pi, pj)) {
          acc.meet();
          if (m.sep[i][j] == SepEntry::yes || m.sep[j][i] == SepEntry::yes)
            acc.fail("Lemma e-related(1): perspective intervals separated");
        }
        // (2): mutual non-separability implies equal minimal-set families
        if (m.mutually_nonseparable(static_cast<int>(i),
                                    static_cast<int>(j))) {
          acc.meet();
          std::set<std::vector<Elem>> mi, mj;
          for (const auto& u : minimal_sets(a, pi.lower, pi.upper, cap))
            mi.insert(u.elements);
          for (const auto& u : minimal_sets(a, pj.lower, pj.upper, cap))
            mj.insert(u.elements);
          if (mi != mj)
            acc.fail("Lemma e-related(2): minimal-set families differ");
        }
        if (acc.failed()) return;
      }
  }
  // (3): on binary subdirect products
  for (const auto& r : relations_of(inst, cap)) {
    if (r.arity() != 2) continue;
    auto m = separation_matrix(r, cap);
    if (!m.complete) {
      acc.undecided("separation matrix incomplete");
      continue;
    }
    PolyClosure pc(r.alg, 1, cap);
    for (std::size_t i = 0; i < m.intervals.size(); ++i)
      for (std::size_t j = 0; j < m.intervals.size(); ++j) {
        if (m.intervals[i].factor != 0 || m.intervals[j].factor != 1) continue;
        if (!m.mutually_nonseparable(static_cast<int>(i),
                                     static_cast<int>(j)))
          continue;
        const auto& pi = m.intervals[i].interval;
        const auto& pj = m.intervals[j].interval;
        auto mins_j = minimal_sets(r.factors[1], pj.lower, pj.upper, cap);
        std::set<std::vector<Elem>> vj;
        for (const auto& u : mins_j) vj.insert(u.elements);
        for (const auto& u : minimal_sets(r.factors[0], pi.lower, pi.upper,
                                          cap)) {
          acc.meet();
          bool found = false;
          for (const auto& f : pc.tables()) {
            if (!is_idempotent_map(f)) continue;
            if (map_image(coordinate_action(r, f, 0)) != u.elements) continue;
            if (vj.count(map_image(coordinate_action(r, f, 1)))) found = true;
          }
          if (!found)
            acc.fail("Lemma e-related(3): no idempotent polynomial maps onto "
                     "the minimal set on both sides");
          if (acc.failed()) return;
        }
      }
  }
}

void chk_type_equal(const Instance& inst, Acc& acc, std::size_t cap) {
  for (const auto& r : relations_of(inst, cap)) {
    if (r.arity() != 2) continue;
    auto m = separation_matrix(r, cap);
    if (!m.complete) {
      acc.undecided("separation matrix incomplete");
      continue;
    }
    for (std::size_t i = 0; i < m.intervals.size(); ++i)
      for (std::size_t j = 0; j < m.intervals.size(); ++j) {
        if (m.intervals[i].factor != 0 || m.intervals[j].factor != 1) continue;
        if (!m.mutually_nonseparable(static_cast<int>(i),
                                     static_cast<int>(j)))
          continue;
        acc.meet();
        int t1 = interval_type(r.factors[0], m.intervals[i].interval.lower,
                               m.intervals[i].interval.upper, cap);
        int t2 = interval_type(r.factors[1], m.intervals[j].interval.lower,
                               m.intervals[j].interval.upper, cap);
        if (t1 != t2)
          acc.fail("Lemma type-equal: types " + std::to_string(t1) + " vs " +
                   std::to_string(t2));
        if (acc.failed()) return;
      }
  }
}

void chk_two_centralizers(const Instance& inst, Acc& acc, std::size_t cap) {
  const FiniteAlgebra& a = need_algebra(inst);
  for (const auto& pi : prime_intervals(con_lattice(a, cap))) {
    if (interval_type(a, pi.lower, pi.upper, cap) == 1) continue;
    acc.meet();
    if (!(quasi_centralizer(a, pi.lower, pi.upper, cap) ==
          centralizer(a, pi.lower, pi.upper, cap)))
      acc.fail("Prop two-centralizers: zeta != (alpha:beta) on " +
               interval_str(pi));
    if (acc.failed()) return;
  }
}

void chk_delta_align(const Instance& inst, Acc& acc, std::size_t cap) {
  for (const auto& r : relations_of(inst, cap)) {
    if (r.arity() != 2) continue;
    auto m = separation_matrix(r, cap);
    if (!m.complete) {
      acc.undecided("separation matrix incomplete");
      continue;
    }
    for (std::size_t i = 0; i < m.intervals.size(); ++i)
      for (std::size_t j = 0; j < m.intervals.size(); ++j) {
        if (m.intervals[i].factor != 0 || m.intervals[j].factor != 1) continue;
        if (!m.mutually_nonseparable(static_cast<int>(i),
                                     static_cast<int>(j)))
          continue;
        acc.meet();
        auto z1 = centralizer(r.factors[0], m.intervals[i].interval.lower,
                              m.intervals[i].interval.upper, cap);
        auto z2 = centralizer(r.factors[1], m.intervals[j].interval.lower,
                              m.intervals[j].interval.upper, cap);
        if (!alignment_check(r, z1, z2))
          acc.fail("Lemma delta-alignment: coordinates not centralizer-"
                   "aligned");
        if (acc.failed()) return;
      }
  }
}

void chk_34_links(const Instance& inst, Acc& acc, std::size_t cap) {
  for (const auto& r : relations_of(inst, cap)) {
    if (r.arity() != 2) continue;
    auto m = separation_matrix(r, cap);
    if (!m.complete) {
      acc.undecided("separation matrix incomplete");
      continue;
    }
    auto ls = link_structure(r);
    for (std::size_t i = 0; i < m.intervals.size(); ++i)
      for (std::size_t j = 0; j < m.intervals.size(); ++j) {
        if (m.intervals[i].factor != 0 || m.intervals[j].factor != 1) continue;
        if (!m.mutually_nonseparable(static_cast<int>(i),
                                     static_cast<int>(j)))
          continue;
        const auto& pi = m.intervals[i].interval;
        const auto& pj = m.intervals[j].interval;
        if (interval_type(r.factors[0], pi.lower, pi.upper, cap) == 2)
          continue;
        acc.meet();
        if (!partition_meet(ls.lnk1, pi.upper).leq(pi.lower) ||
            !partition_meet(ls.lnk2, pj.upper).leq(pj.lower))
          acc.fail("Lemma 34-links: link congruence meets the interval");
        if (acc.failed()) return;
      }
  }
}

void chk_central_map(const Instance& inst, Acc& acc, std::size_t cap) {
  const FiniteAlgebra& a = need_algebra(inst);
  auto ctx = ClassContext::for_algebra(a, cap);
  const ThinGraph& g = ctx.thin_graph(a);
  for (const auto& pi : prime_intervals(con_lattice(a, cap))) {
    if (interval_type(a, pi.lower, pi.upper, cap) != 2) continue;
    const Partition &alpha = pi.lower, &beta = pi.upper;
    auto zeta = centralizer(a, alpha, beta, cap);
    acc.check(beta.leq(zeta), "L-central-map: beta is not below (alpha:beta)");
    auto qb = quotient(a, beta);
    const ThinGraph& gq = ctx.thin_graph(qb.algebra);
    auto qa = quotient(a, alpha);
    const ThinGraph& gqa = ctx.thin_graph(qa.algebra);
    for (const auto& eq : gq.edges) {
      Elem rb = qb.representative[eq.a], rc = qb.representative[eq.b];
      if (!zeta.related(rb, rc)) continue;
      auto block_b = beta.block_of(rb);
      auto block_c = beta.block_of(rc);
      for (Elem b : block_b)
        for (Elem c : block_c) {
          // the element-level thin edge of the same type
          bool has = false;
          for (const auto& te : g.edges)
            if (te.a == b && te.b == c && te.colour == eq.colour) has = true;
          if (!has) continue;
          acc.meet();
          UnaryMap f(a.size);
          try {
            if (eq.colour == EdgeColour::semilattice) {
              const TermOp& mult = ctx.op_mult();
              for (Elem x = 0; x < a.size; ++x) f[x] = mult.eval(a, {x, c});
            } else if (eq.colour == EdgeColour::majority) {
              auto t_bc = ctx.special_t_ab(a, b, c);
              for (Elem x = 0; x < a.size; ++x) f[x] = t_bc.eval(a, {x, c});
            } else {
              auto h_bc = ctx.special_h_ab(a, b, c);
              for (Elem x = 0; x < a.size; ++x) f[x] = h_bc.eval(a, {x, b, c});
            }
          } catch (const NotFound& e) {
            acc.fail(std::string("L-central-map: ") + e.what());
            return;
          }
          // injective mapping from B/alpha to C/alpha
          std::set<Elem> images;
          for (Elem x : block_b) {
            if (!std::binary_search(block_c.begin(), block_c.end(), f[x])) {
              acc.fail("L-central-map: image leaves the target block");
              return;
            }
            images.insert(alpha.rep(f[x]));
          }
          std::set<Elem> sources;
          for (Elem x : block_b) sources.insert(alpha.rep(x));
          if (images.size() != sources.size())
            acc.fail("L-central-map: induced mapping not injective");
          if (eq.colour == EdgeColour::semilattice) {
            // a <= f(a), and a <= b' for no other b' in C/alpha
            for (Elem x : block_b) {
              Elem xa = qa.block_of[x], fa = qa.block_of[f[x]];
              if (xa != fa && !gqa.adj_s[xa][fa])
                acc.fail("L-central-map: a !<= f(a) in the semilattice case");
              for (Elem y : block_c) {
                Elem ya = qa.block_of[y];
                if (ya == fa) continue;
                if (gqa.adj_s[xa][ya])
                  acc.fail("L-central-map: a <= b' for a second class b'");
              }
            }
          }
          if (acc.failed()) return;
        }
    }
  }
}

void chk_centralizer_mult(const Instance& inst, Acc& acc, std::size_t cap) {
  const FiniteAlgebra& a = need_algebra(inst);
  auto ctx = ClassContext::for_algebra(a, cap);
  for (const auto& pi : prime_intervals(con_lattice(a, cap))) {
    if (interval_type(a, pi.lower, pi.upper, cap) != 2) continue;
    auto zeta = centralizer(a, pi.lower, pi.upper, cap);
    const TermOp& mult = ctx.op_mult();
    for (Elem x = 0; x < a.size; ++x)
      for (Elem y = 0; y < a.size; ++y)
        for (Elem z = 0; z < a.size; ++z) {
          if (!zeta.related(x, y) || !zeta.related(y, z)) continue;
          if (!pi.upper.related(y, z)) continue;
          acc.meet();
          if (!pi.lower.related(mult.eval(a, {x, y}), mult.eval(a, {x, z})))
            acc.fail("Corollary centralizer-multiplication: xy !~ xz");
          if (acc.failed()) return;
        }
  }
}

void chk_equal_centralizer(const Instance& inst, Acc& acc, std::size_t cap) {
  const FiniteAlgebra& a = need_algebra(inst);
  auto ctx = ClassContext::for_algebra(a, cap);
  for (const auto& pi : prime_intervals(con_lattice(a, cap))) {
    if (interval_type(a, pi.lower, pi.upper, cap) != 2) continue;
    const Partition &alpha = pi.lower, &beta = pi.upper;
    auto zeta = centralizer(a, alpha, beta, cap);
    for (const auto& zblock : zeta.blocks()) {
      auto rest = restrict_algebra(a, zblock);
      // beta restricted to the zeta-block
      std::vector<Elem> lab(zblock.size());
      for (std::size_t i = 0; i < zblock.size(); ++i) {
        lab[i] = static_cast<Elem>(i);
        for (std::size_t j = 0; j < i; ++j)
          if (beta.related(zblock[j], zblock[i])) {
            lab[i] = lab[j];
            break;
          }
      }
      auto qc = quotient(rest.algebra, partition_from_labels(lab));
      const ThinGraph& gq = ctx.thin_graph(qc.algebra);
      auto uni = whole_universe(qc.algebra.size);
      for (Elem b1 = 0; b1 < qc.algebra.size; ++b1)
        for (Elem b2 = 0; b2 < qc.algebra.size; ++b2) {
          if (b1 == b2) continue;
          if (!reaches_in(gq, PathKind::asm_, uni, b1, b2) ||
              !reaches_in(gq, PathKind::asm_, uni, b2, b1))
            continue;
          acc.meet();
          auto count_classes = [&](Elem blk) {
            std::set<Elem> cls;
            for (std::size_t i = 0; i < zblock.size(); ++i)
              if (qc.block_of[i] == blk) cls.insert(alpha.rep(zblock[i]));
            return cls.size();
          };
          if (count_classes(b1) != count_classes(b2))
            acc.fail("Corollary equal-centralizer: |B1/alpha| != |B2/alpha|");
          if (acc.failed()) return;
        }
    }
  }
}

void chk_maximal_minimal(const Instance& inst, Acc& acc, std::size_t cap) {
  const FiniteAlgebra& a = need_algebra(inst);
  auto ctx = ClassContext::for_algebra(a, cap);
  const ThinGraph& g = ctx.thin_graph(a);
  PolyClosure pc(a, 1, cap);
  auto subs = all_subuniverses(a, cap);
  for (const auto& pi : prime_intervals(con_lattice(a, cap))) {
    if (interval_type(a, pi.lower, pi.upper, cap) != 2) continue;
    const Partition &alpha = pi.lower, &beta = pi.upper;
    auto z = z_set(a, alpha, beta, cap);
    auto mins = minimal_sets(a, alpha, beta, cap);
    std::set<std::vector<Elem>> min_sets;
    for (const auto& m : mins) min_sets.insert(m.elements);
    for (const auto& block : beta.blocks()) {
      // (1)
      for (Elem x : block) {
        if (!std::binary_search(z.begin(), z.end(), x)) continue;
        for (Elem y : block) {
          if (!reaches_in(g, PathKind::asm_, block, x, y)) continue;
          acc.meet();
          if (!std::binary_search(z.begin(), z.end(), y))
            acc.fail("Lemma maximal-minimal(1): asm-reachable element "
                     "escapes the Z-set");
          if (acc.failed()) return;
        }
      }
      for (Elem y : max_in(g, PathKind::asm_, block)) {
        acc.meet();
        if (!std::binary_search(z.begin(), z.end(), y))
          acc.fail("Lemma maximal-minimal(1): umax(B) escapes the Z-set");
        if (acc.failed()) return;
      }
      // (2) and (3) over subalgebras containing the block
      for (const auto& sub : subs) {
        if (!std::includes(sub.begin(), sub.end(), block.begin(),
                           block.end()))
          continue;
        auto preserves_sub = [&](const UnaryMap& f) {
          for (Elem x : sub)
            if (!std::binary_search(sub.begin(), sub.end(), f[x]))
              return false;
          return true;
        };
        for (const auto& f : pc.tables()) {
          if (!is_idempotent_map(f) || !preserves_sub(f)) continue;
          auto img = map_image(f);
          if (!min_sets.count(img)) continue;
          // (2)
          for (Elem x : img) {
            if (!std::binary_search(block.begin(), block.end(), x)) continue;
            for (Elem y : block) {
              if (!reaches_in(g, PathKind::asm_, block, x, y) ||
                  !reaches_in(g, PathKind::asm_, block, y, x))
                continue;
              acc.meet();
              bool found = false;
              for (const auto& h : pc.tables()) {
                if (!preserves_sub(h)) continue;
                auto himg = map_image(h);
                if (!min_sets.count(himg)) continue;
                if (std::binary_search(himg.begin(), himg.end(), y))
                  found = true;
              }
              if (!found)
                acc.fail("Lemma maximal-minimal(2): no minimal set through "
                         "the asm-equivalent element");
              if (acc.failed()) return;
            }
          }
          // (3)
          for (Elem x : img) {
            if (f[x] != x) continue;
            // trace of the image containing x
            std::vector<Elem> trace;
            for (Elem u : img)
              if (beta.related(u, x)) trace.push_back(u);
            std::set<Elem> trace_cls;
            for (Elem u : trace) trace_cls.insert(alpha.rep(u));
            if (trace_cls.size() < 2) continue;
            auto ablock = alpha.block_of(x);
            for (Elem y : ablock) {
              if (y == x || !reaches_in(g, PathKind::asm_, ablock, x, y))
                continue;
              acc.meet();
              bool found = false;
              for (const auto& h : pc.tables()) {
                if (h[y] != y || !preserves_sub(h)) continue;
                auto himg = map_image(h);
                if (!min_sets.count(himg)) continue;
                std::vector<Elem> tr2;
                for (Elem u : himg)
                  if (beta.related(u, y)) tr2.push_back(u);
                std::set<Elem> cls2;
                for (Elem u : tr2) cls2.insert(alpha.rep(u));
                if (cls2 == trace_cls &&
                    std::binary_search(himg.begin(), himg.end(), y))
                  found = true;
              }
              if (!found)
                acc.fail("Lemma maximal-minimal(3): no matching trace "
                         "through the alpha-equivalent element");
              if (acc.failed()) return;
            }
          }
        }
      }
    }
  }
}

void chk_collapsing(const Instance& inst, Acc& acc, std::size_t cap) {
  for (const auto& r : relations_of(inst, cap)) {
    auto ctx = ClassContext::for_factors(r.factors, cap);
    for (const auto& frame : candidate_frames(r, cap)) {
      auto env = make_env(r, ctx, frame, cap);
      if (!is_chained(env).holds) continue;
      for (int i = 0; i < r.arity(); ++i) {
        const FiniteAlgebra& ai = r.factors[i];
        auto lat = con_lattice(ai, cap);
        int beta_idx = lat.index_of(env.frame.beta[i]);
        if (beta_idx < 0) continue;
        for (int lo : lat.lower_covers(beta_idx)) {
          const Partition& alpha = lat.congruences[lo];
          try {
            auto f = collapsing_search(env, i, alpha,
                                       CollapsingVariant::plain, {}, false);
            acc.meet();
            (void)f;
          } catch (const HypothesisNotMet&) {
            continue;
          } catch (const NotFound& e) {
            acc.meet();
            acc.fail(std::string("Theorem collapsing (plain): ") + e.what());
            return;
          }
          // variant (d): first qualifying subtrace
          const ThinGraph& ti = ctx.thin_graph(ai);
          auto am = max_in(ti, PathKind::as, env.frame.bprime[i]);
          CollapsingData data;
          bool have_d = false;
          for (const auto& u :
               minimal_sets(ai, alpha, env.frame.beta[i], cap)) {
            auto ts = trace_structure(ai, alpha, env.frame.beta[i], u, cap);
            for (auto [x, y] : ts.subtraces) {
              bool both_amax = std::binary_search(am.begin(), am.end(), x) &&
                               std::binary_search(am.begin(), am.end(), y);
              auto comp = component_of_in(ti, PathKind::as,
                                          whole_universe(ai.size), x);
              if (both_amax &&
                  std::binary_search(comp.begin(), comp.end(), y)) {
                data.subtrace = {x, y};
                have_d = true;
                break;
              }
            }
            if (have_d) break;
          }
          if (have_d) {
            try {
              collapsing_search(env, i, alpha, CollapsingVariant::d, data,
                                false);
              acc.meet();
            } catch (const HypothesisNotMet&) {
            } catch (const NotFound& e) {
              acc.meet();
              acc.fail(std::string("Theorem collapsing (d): ") + e.what());
              return;
            }
          }
          if (interval_type(ai, alpha, env.frame.beta[i], cap) == 2) {
            const ThinGraph& tr = ctx.thin_graph(r.alg);
            auto um = max_in(tr, PathKind::asm_, env.frame.rprime);
            if (!um.empty()) {
              CollapsingData de;
              de.fix_tuple = r.tuples[um[0]];
              try {
                collapsing_search(env, i, alpha, CollapsingVariant::e, de,
                                  false);
                acc.meet();
              } catch (const HypothesisNotMet&) {
              } catch (const NotFound& e) {
                acc.meet();
                acc.fail(std::string("Theorem collapsing (e): ") + e.what());
                return;
              }
              if (have_d) {
                // variant (f): a tuple through the subtrace start
                CollapsingData df;
                df.subtrace = data.subtrace;
                std::vector<Elem> rpp;
                for (int t = 0; t < r.size(); ++t)
                  if (alpha.related(r.tuples[t][i], data.subtrace.first))
                    rpp.push_back(t);
                auto umf = max_in(tr, PathKind::asm_, rpp);
                for (Elem t : umf)
                  if (r.tuples[t][i] == data.subtrace.first) {
                    df.fix_tuple = r.tuples[t];
                    break;
                  }
                if (!df.fix_tuple.empty()) {
                  try {
                    collapsing_search(env, i, alpha, CollapsingVariant::f, df,
                                      false);
                    acc.meet();
                  } catch (const HypothesisNotMet&) {
                  } catch (const NotFound& e) {
                    acc.meet();
                    acc.fail(std::string("Theorem collapsing (f): ") +
                             e.what());
                    return;
                  }
                }
              }
            }
          }
        }
      }
    }
  }
}

void chk_poly_closed(const Instance& inst, Acc& acc, std::size_t cap) {
  for (const auto& r : relations_of(inst, cap)) {
    auto ctx = ClassContext::for_factors(r.factors, cap);
    auto env = make_env(r, ctx, full_frame(r), cap);
    const ThinGraph& tr = ctx.thin_graph(r.alg);
    std::vector<int> all;
    for (int t = 0; t < r.size(); ++t) all.push_back(t);
    // (1)
    acc.check(is_poly_closed(env, all).holds,
              "Lemma poly-closed(1): R not polynomially closed in itself");
    acc.check(is_as_closed(tr, all, all).holds,
              "Lemma poly-closed(1): R not as-closed in itself");
    // (2): intersections of polynomially closed subalgebras
    std::vector<std::vector<int>> closed;
    for (const auto& sub : all_subuniverses(r.alg, cap)) {
      std::vector<int> q(sub.begin(), sub.end());
      try {
        if (is_poly_closed(env, q).holds) closed.push_back(q);
      } catch (const HypothesisNotMet&) {
      }
    }
    auto umax_r = max_in(tr, PathKind::asm_, all);
    for (const auto& q1 : closed)
      for (const auto& q2 : closed) {
        std::vector<int> inter;
        std::set_intersection(q1.begin(), q1.end(), q2.begin(), q2.end(),
                              std::back_inserter(inter));
        bool meets = false;
        for (int t : inter)
          if (std::binary_search(umax_r.begin(), umax_r.end(), t))
            meets = true;
        if (inter.empty() || !meets) continue;
        acc.meet();
        try {
          if (!is_poly_closed(env, inter).holds)
            acc.fail("Lemma poly-closed(2): intersection not polynomially "
                     "closed");
        } catch (const HypothesisNotMet&) {
          acc.fail("Lemma poly-closed(2): intersection not a subalgebra");
        }
        if (acc.failed()) return;
      }
    // (3): a pp-definable combination, Q o Q^-1 inside R o R^-1
    if (r.arity() == 2) {
      auto compose_rel = [&](const std::vector<int>& q)
          -> std::vector<std::vector<Elem>> {
        std::set<std::vector<Elem>> out;
        for (int s : q)
          for (int t : q)
            if (r.tuples[s][1] == r.tuples[t][1])
              out.insert({r.tuples[s][0], r.tuples[t][0]});
        return {out.begin(), out.end()};
      };
      for (const auto& q1 : closed) {
        auto rr = compose_rel(all);
        auto qq = compose_rel(q1);
        if (qq.empty()) continue;
        try {
          auto rrel = make_relation({r.factors[0], r.factors[0]}, rr, cap);
          // require the composed generators to already be closed
          if (static_cast<int>(rr.size()) != rrel.size()) continue;
          std::vector<int> qidx;
          bool q_closed = true;
          for (const auto& t : qq) {
            int idx = rrel.index_of(t);
            if (idx < 0) q_closed = false;
            qidx.push_back(idx);
          }
          if (!q_closed) continue;
          std::sort(qidx.begin(), qidx.end());
          auto ctx2 = ClassContext::for_factors(rrel.factors, cap);
          auto env2 = make_env(rrel, ctx2, full_frame(rrel), cap);
          const ThinGraph& tr2 = ctx2.thin_graph(rrel.alg);
          std::vector<int> all2;
          for (int t = 0; t < rrel.size(); ++t) all2.push_back(t);
          auto um2 = max_in(tr2, PathKind::asm_, all2);
          auto umq = max_in(tr2, PathKind::asm_, qidx);
          bool side = false;
          for (int t : umq)
            if (std::binary_search(um2.begin(), um2.end(), t)) side = true;
          if (!side) continue;
          acc.meet();
          try {
            if (!is_poly_closed(env2, qidx).holds)
              acc.fail("Lemma poly-closed(3): pp-composed subalgebra not "
                       "polynomially closed");
          } catch (const HypothesisNotMet&) {
          }
        } catch (const Error&) {
          continue;
        }
        if (acc.failed()) return;
      }
    }
    // (4): quotient stability
    for (int j = 0; j < r.arity(); ++j) {
      auto lat = con_lattice(r.factors[j], cap);
      for (int ci : lat.coatoms()) {
        std::vector<QuotientResult> quots;
        std::vector<FiniteAlgebra> qfactors;
        for (int i = 0; i < r.arity(); ++i) {
          Partition p = i == j ? lat.congruences[ci]
                               : partition_equality(r.factors[i].size);
          quots.push_back(quotient(r.factors[i], p));
          qfactors.push_back(quots.back().algebra);
        }
        std::set<std::vector<Elem>> qtuples;
        for (const auto& t : r.tuples) {
          std::vector<Elem> qt(t.size());
          for (std::size_t i = 0; i < t.size(); ++i)
            qt[i] = quots[i].block_of[t[i]];
          qtuples.insert(qt);
        }
        auto rq = make_relation(qfactors, {qtuples.begin(), qtuples.end()},
                                cap);
        auto ctxq = ClassContext::for_factors(rq.factors, cap);
        auto envq = make_env(rq, ctxq, full_frame(rq), cap);
        for (const auto& q1 : closed) {
          std::set<int> qimg;
          for (int t : q1) {
            std::vector<Elem> qt(r.arity());
            for (int i = 0; i < r.arity(); ++i)
              qt[i] = quots[i].block_of[r.tuples[t][i]];
            qimg.insert(rq.index_of(qt));
          }
          acc.meet();
          try {
            if (!is_poly_closed(envq, {qimg.begin(), qimg.end()}).holds)
              acc.fail("Lemma poly-closed(4): quotient image not "
                       "polynomially closed");
          } catch (const HypothesisNotMet&) {
          }
          if (acc.failed()) return;
        }
      }
    }
  }
}

void chk_affine_link(const Instance& inst, Acc& acc, std::size_t cap) {
  for (const auto& r : relations_of(inst, cap)) {
    if (r.arity() != 2) continue;
    auto ctx = ClassContext::for_factors(r.factors, cap);
    auto lat1 = con_lattice(r.factors[0], cap);
    auto lat2 = con_lattice(r.factors[1], cap);
    for (int b1 : lat1.atoms()) {
      const Partition& beta1 = lat1.congruences[b1];
      for (const auto& beta2 : lat2.congruences) {
        std::set<std::pair<Elem, Elem>> seen_blocks;
        for (const auto& t : r.tuples) {
          auto key = std::make_pair(beta1.rep(t[0]), beta2.rep(t[1]));
          if (!seen_blocks.insert(key).second) continue;
          BlockFrame frame;
          try {
            frame = block_frame(r, {beta1, beta2}, t);
          } catch (const Error&) {
            continue;
          }
          auto env = make_env(r, ctx, frame, cap);
          // candidate subalgebras R' inside R*
          for (const auto& sub : all_subuniverses(r.alg, cap)) {
            std::vector<int> q(sub.begin(), sub.end());
            bool inside = std::includes(env.frame.rprime.begin(),
                                        env.frame.rprime.end(), q.begin(),
                                        q.end());
            if (!inside) continue;
            try {
              auto out = congruence_lemma_eval(env, q, true);
              acc.meet();
              if (out.inconclusive)
                acc.undecided("congruence lemma: " + out.detail);
              else if (out.option == 0)
                acc.fail("Congruence Lemma: neither option holds: " +
                         out.detail);
            } catch (const HypothesisNotMet&) {
            }
            if (acc.failed()) return;
          }
        }
      }
    }
  }
}

void chk_full_chaining(const Instance& inst, Acc& acc, std::size_t cap) {
  for (const auto& r : relations_of(inst, cap)) {
    auto ctx = ClassContext::for_factors(r.factors, cap);
    auto env = make_env(r, ctx, full_frame(r), cap);
    acc.meet();
    auto v = is_chained(env);
    if (!v.holds) acc.fail("Lemma full-chaining: " + v.detail);
    if (acc.failed()) return;
  }
}

void chk_s7(const Instance& inst, Acc& acc, std::size_t cap) {
  for (const auto& r : relations_of(inst, cap)) {
    auto ctx = ClassContext::for_factors(r.factors, cap);
    // start from the full frame, which is chained by Lemma full-chaining
    auto env0 = make_env(r, ctx, full_frame(r), cap);
    if (!is_chained(env0).holds) continue;
    for (int i = 0; i < r.arity(); ++i) {
      auto lat = con_lattice(r.factors[i], cap);
      for (int ci : lat.coatoms()) {
        const Partition& beta_prime = lat.congruences[ci];
        // D_i must be as-maximal in B'_i / beta'_i
        auto q = quotient(r.factors[i], beta_prime);
        const ThinGraph& tq = ctx.thin_graph(q.algebra);
        auto amax_q =
            max_in(tq, PathKind::as, whole_universe(q.algebra.size));
        for (Elem blk : amax_q) {
          std::vector<Partition> beta;
          std::vector<Elem> witness(r.arity());
          for (int j = 0; j < r.arity(); ++j)
            beta.push_back(j == i ? beta_prime
                                  : partition_full(r.factors[j].size));
          // a witness tuple whose i-th entry lies in the chosen block
          int wt = -1;
          for (int t = 0; t < r.size(); ++t)
            if (q.block_of[r.tuples[t][i]] == blk) wt = t;
          if (wt < 0) continue;
          BlockFrame frame;
          try {
            frame = block_frame(r, beta, r.tuples[wt]);
          } catch (const Error&) {
            continue;
          }
          auto env = make_env(r, ctx, frame, cap);
          acc.meet();
          auto v = is_chained(env);
          if (!v.holds) acc.fail("Lemma S7: restricted frame not chained: " +
                                 v.detail);
          if (acc.failed()) return;
        }
      }
    }
  }
}

}  // namespace

const std::map<std::string, Checker>& part2_checkers() {
  static const std::map<std::string, Checker> table = {
      {"L-sep-sep", chk_sep_sep},
      {"L-minset-sep", chk_minset_sep},
      {"L-good-polys", chk_good_polys},
      {"T-rel-symmetry", chk_rel_symmetry},
      {"L-e-related", chk_e_related},
      {"L-type-equal", chk_type_equal},
      {"P-two-centralizers", chk_two_centralizers},
      {"L-delta-align", chk_delta_align},
      {"L-34-links", chk_34_links},
      {"L-central-map", chk_central_map},
      {"C-centralizer-mult", chk_centralizer_mult},
      {"C-equal-centralizer", chk_equal_centralizer},
      {"L-maximal-minimal", chk_maximal_minimal},
      {"T-collapsing", chk_collapsing},
      {"L-poly-closed", chk_poly_closed},
      {"L-affine-link", chk_affine_link},
      {"L-full-chaining", chk_full_chaining},
      {"L-S7", chk_s7},
  };
  return table;
}

}  // namespace algwb::registry_detail
