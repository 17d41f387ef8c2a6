#include "algwb/chaining.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "algwb/polynomials.hpp"
#include "algwb/tct.hpp"

namespace algwb {

namespace {

bool collapses(const UnaryMap& f, const Partition& theta,
               const Partition& psi) {
  const int n = static_cast<int>(f.size());
  for (Elem x = 0; x < n; ++x)
    for (Elem y = x + 1; y < n; ++y)
      if (theta.related(x, y) && !psi.related(f[x], f[y])) return false;
  return true;
}

std::vector<std::pair<Elem, Elem>> partition_pairs(const Partition& p) {
  std::vector<std::pair<Elem, Elem>> out;
  for (Elem x = 0; x < p.size(); ++x)
    if (p.rep(x) != x) out.push_back({p.rep(x), x});
  return out;
}

}  // namespace

BlockFrame full_frame(const SubdirectRelation& r) {
  BlockFrame f;
  for (int i = 0; i < r.arity(); ++i) {
    f.beta.push_back(partition_full(r.factors[i].size));
    f.blocks.push_back(whole_universe(r.factors[i].size));
  }
  for (int t = 0; t < r.size(); ++t) f.rprime.push_back(t);
  for (int i = 0; i < r.arity(); ++i)
    f.bprime.push_back(whole_universe(r.factors[i].size));
  return f;
}

BlockFrame block_frame(const SubdirectRelation& r,
                       std::vector<Partition> beta,
                       const std::vector<Elem>& witness_tuple) {
  if (static_cast<int>(beta.size()) != r.arity())
    throw RangeError("block_frame: one congruence per factor required");
  BlockFrame f;
  f.beta = std::move(beta);
  for (int i = 0; i < r.arity(); ++i) {
    if (!is_congruence(r.factors[i], f.beta[i]))
      throw NotACongruence("block_frame: beta_" + std::to_string(i + 1) +
                           " is not a congruence");
    f.blocks.push_back(f.beta[i].block_of(witness_tuple[i]));
  }
  for (int t = 0; t < r.size(); ++t) {
    bool in = true;
    for (int i = 0; i < r.arity(); ++i)
      if (!f.beta[i].related(r.tuples[t][i], witness_tuple[i])) in = false;
    if (in) f.rprime.push_back(t);
  }
  if (f.rprime.empty())
    throw HypothesisNotMet("block_frame: R' is empty");
  for (int i = 0; i < r.arity(); ++i) {
    std::set<Elem> b;
    for (int t : f.rprime) b.insert(r.tuples[t][i]);
    f.bprime.push_back({b.begin(), b.end()});
  }
  return f;
}

UnaryMap FrameEnv::factor_action(const UnaryMap& f, int factor) const {
  return coordinate_action(*r, f, factor);
}

FrameEnv make_env(const SubdirectRelation& r, const ClassContext& ctx,
                  BlockFrame frame, std::size_t cap) {
  FrameEnv env;
  env.r = &r;
  env.ctx = &ctx;
  env.frame = std::move(frame);
  env.cap = cap;
  env.pols = std::make_shared<PolyClosure>(r.alg, 1, cap);
  for (const auto& f : env.pols->tables()) {
    bool pres = true;
    for (int t : env.frame.rprime) {
      int ft = f[t];
      for (int i = 0; i < r.arity() && pres; ++i)
        if (!env.frame.beta[i].related(r.tuples[ft][i],
                                       env.frame.blocks[i][0]))
          pres = false;
      if (!pres) break;
    }
    if (pres) env.preserving.push_back(f);
  }
  return env;
}

std::vector<UnaryMap> u_collapse(const FrameEnv& env, const CollapseSpec& cs) {
  std::vector<UnaryMap> out;
  for (const auto& f : env.preserving) {
    UnaryMap fj = env.factor_action(f, cs.factor);
    if (collapses(fj, cs.delta, cs.gamma)) out.push_back(f);
  }
  return out;
}

std::vector<std::pair<Elem, Elem>> t_set(const Partition& alpha, Elem a,
                                         Elem b,
                                         const std::vector<UnaryMap>& maps) {
  std::set<std::pair<Elem, Elem>> out;
  for (const auto& f : maps) {
    Elem x = alpha.rep(f[a]), y = alpha.rep(f[b]);
    out.insert({std::min(x, y), std::max(x, y)});
  }
  return {out.begin(), out.end()};
}

Verdict is_u_chained(const FiniteAlgebra& host, const ThinGraph& thin,
                     const Partition& alpha, const Partition& beta,
                     const std::vector<UnaryMap>& maps,
                     const std::vector<Elem>& d) {
  auto alpha_pairs = partition_pairs(alpha);
  auto umax_d = max_in(thin, PathKind::asm_, d);
  for (Elem a : d)
    for (Elem b : d) {
      if (a == b) continue;
      auto gens = alpha_pairs;
      gens.push_back({a, b});
      if (!(cg_closure(host, gens) == beta)) continue;
      // transitive-symmetric closure of alpha together with the U-images of
      // (a,b).  Alpha itself must be part of the closure: polynomial images
      // of alpha-pairs never leave alpha, and without the alpha-steps the
      // chains of Lemma full-chaining cannot be assembled (condition (Q2)
      // would already fail on the square of the 2-element majority algebra).
      std::vector<std::pair<Elem, Elem>> t_pairs = alpha_pairs;
      for (const auto& f : maps) t_pairs.push_back({f[a], f[b]});
      Partition cl = partition_from_pairs(host.size, t_pairs);
      for (const auto& block : beta.blocks()) {
        std::vector<Elem> bp;
        for (Elem x : block)
          if (std::binary_search(umax_d.begin(), umax_d.end(), x))
            bp.push_back(x);
        if (bp.empty()) continue;
        auto um = max_in(thin, PathKind::asm_, bp);
        for (Elem x : um)
          for (Elem y : um)
            if (!cl.related(x, y))
              return {false,
                      "pair (" + std::to_string(x) + "," + std::to_string(y) +
                          ") of umax(B') not chained from generating pair (" +
                          std::to_string(a) + "," + std::to_string(b) + ")"};
      }
    }
  return {true, ""};
}

namespace {

std::vector<std::vector<int>> nonempty_subsets(int n) {
  std::vector<std::vector<int>> out;
  for (int mask = 1; mask < (1 << n); ++mask) {
    std::vector<int> s;
    for (int i = 0; i < n; ++i)
      if (mask & (1 << i)) s.push_back(i);
    out.push_back(s);
  }
  std::sort(out.begin(), out.end(),
            [](const auto& x, const auto& y) {
              if (x.size() != y.size()) return x.size() < y.size();
              return x < y;
            });
  return out;
}

}  // namespace

Verdict is_chained(const FrameEnv& env, int max_arity) {
  const SubdirectRelation& r = *env.r;
  if (r.arity() > max_arity)
    throw CapExceeded(max_arity, "is_chained: too many factors");
  // prime intervals below beta_j per factor, for (Q2)
  std::vector<std::vector<PrimeInterval>> factor_primes(r.arity());
  for (int j = 0; j < r.arity(); ++j) {
    auto lat = con_lattice(r.factors[j], env.cap);
    for (const auto& pi : prime_intervals(lat))
      if (pi.upper.leq(env.frame.beta[j])) factor_primes[j].push_back(pi);
  }
  for (const auto& coords : nonempty_subsets(r.arity())) {
    SubdirectRelation ri = r.project(coords);
    auto pm = r.projection_index_map(ri, coords);
    // induced actions of the preserving polynomials
    std::vector<UnaryMap> maps;
    maps.reserve(env.preserving.size());
    for (const auto& f : env.preserving)
      maps.push_back(action_on_projection(r, ri, coords, f));
    std::sort(maps.begin(), maps.end());
    maps.erase(std::unique(maps.begin(), maps.end()), maps.end());
    // D = pr_I R'
    std::set<Elem> dset;
    for (int t : env.frame.rprime) dset.insert(pm[t]);
    std::vector<Elem> d(dset.begin(), dset.end());
    // beta bar restricted to the projection
    std::vector<Elem> lab(ri.size());
    {
      std::map<std::vector<Elem>, Elem> first;
      for (int t = 0; t < ri.size(); ++t) {
        std::vector<Elem> key(coords.size());
        for (std::size_t j = 0; j < coords.size(); ++j)
          key[j] = env.frame.beta[coords[j]].rep(ri.tuples[t][j]);
        auto it = first.find(key);
        lab[t] = it == first.end() ? t : it->second;
        first.emplace(key, lab[t]);
      }
    }
    Partition beta_bar = partition_from_labels(lab);
    auto lat = con_lattice(ri.alg, env.cap);
    const ThinGraph& thin = env.ctx->thin_graph(ri.alg);
    // (Q1)
    for (const auto& alpha : lat.congruences) {
      if (!alpha.leq(beta_bar)) continue;
      for (const auto& beta : lat.congruences) {
        if (!alpha.leq(beta) || !beta.leq(beta_bar)) continue;
        auto v = is_u_chained(ri.alg, thin, alpha, beta, maps, d);
        if (!v.holds)
          return {false, "(Q1) fails on pr_I R: " + v.detail};
      }
    }
    // (Q2)
    for (auto [lo, hi] : lat.covers) {
      const Partition& alpha = lat.congruences[lo];
      const Partition& beta = lat.congruences[hi];
      if (!beta.leq(beta_bar)) continue;
      for (int j = 0; j < r.arity(); ++j) {
        for (const auto& pj : factor_primes[j]) {
          // can (alpha,beta) over pr_I be separated from (gamma,delta)?
          bool separable = false;
          for (const auto& f : env.pols->tables()) {
            UnaryMap fi = action_on_projection(r, ri, coords, f);
            if (collapses(fi, beta, alpha)) continue;
            UnaryMap fj = env.factor_action(f, j);
            if (collapses(fj, pj.upper, pj.lower)) {
              separable = true;
              break;
            }
          }
          if (!separable) continue;
          std::vector<UnaryMap> maps2;
          for (const auto& f : env.preserving) {
            UnaryMap fj = env.factor_action(f, j);
            if (collapses(fj, pj.upper, pj.lower))
              maps2.push_back(action_on_projection(r, ri, coords, f));
          }
          std::sort(maps2.begin(), maps2.end());
          maps2.erase(std::unique(maps2.begin(), maps2.end()), maps2.end());
          auto v = is_u_chained(ri.alg, thin, alpha, beta, maps2, d);
          if (!v.holds)
            return {false, "(Q2) fails on pr_I R vs factor " +
                               std::to_string(j + 1) + ": " + v.detail};
        }
      }
    }
  }
  return {true, ""};
}

UnaryMap relative_symmetry_witness(const FrameEnv& env, int f1,
                                   const PrimeInterval& i1, int f2,
                                   const PrimeInterval& i2, Elem c_rep,
                                   Elem d_rep, bool check_chained) {
  const SubdirectRelation& r = *env.r;
  const Partition &alpha = i1.lower, &beta = i1.upper;
  const Partition &gamma = i2.lower, &delta = i2.upper;
  if (!(delta == env.frame.beta[f2]))
    throw HypothesisNotMet("relative-symmetry: delta must equal beta_2");
  if (!beta.leq(env.frame.beta[f1]))
    throw HypothesisNotMet("relative-symmetry: beta must lie below beta_1");
  if (!is_prime_pair(r.factors[f1], alpha, beta) ||
      !is_prime_pair(r.factors[f2], gamma, delta))
    throw HypothesisNotMet("relative-symmetry: intervals must be prime");
  // nontrivial as-component C' of B'_2 / gamma containing c and d
  auto q = quotient(r.factors[f2], gamma);
  std::set<Elem> cls;
  for (Elem x : env.frame.bprime[f2]) cls.insert(q.block_of[x]);
  std::vector<Elem> classes(cls.begin(), cls.end());
  const ThinGraph& tq = env.ctx->thin_graph(q.algebra);
  Elem c_cl = q.block_of[c_rep], d_cl = q.block_of[d_rep];
  auto comp = component_of_in(tq, PathKind::as, classes, c_cl);
  {
    auto am = max_in(tq, PathKind::as, classes);
    bool comp_maximal =
        std::includes(am.begin(), am.end(), comp.begin(), comp.end());
    if (comp.size() < 2 || c_cl == d_cl ||
        !std::binary_search(comp.begin(), comp.end(), d_cl) || !comp_maximal)
      throw HypothesisNotMet(
          "relative-symmetry: c,d must lie in one nontrivial as-component");
  }
  // separability hypothesis
  bool separable = false;
  for (const auto& f : env.pols->tables()) {
    if (collapses(env.factor_action(f, f1), beta, alpha)) continue;
    if (collapses(env.factor_action(f, f2), delta, gamma)) {
      separable = true;
      break;
    }
  }
  if (!separable)
    throw HypothesisNotMet(
        "relative-symmetry: (alpha,beta) is not separable from (gamma,delta)");
  if (check_chained) {
    auto v = is_chained(env);
    if (!v.holds)
      throw HypothesisNotMet("relative-symmetry: frame not chained: " +
                             v.detail);
  }
  const UnaryMap* best = nullptr;
  for (const auto& g : env.preserving) {
    UnaryMap g1 = env.factor_action(g, f1);
    UnaryMap g2 = env.factor_action(g, f2);
    // g(beta restricted to B'_1) <= alpha
    bool coll = true;
    for (Elem x : env.frame.bprime[f1])
      for (Elem y : env.frame.bprime[f1])
        if (beta.related(x, y) && !alpha.related(g1[x], g1[y])) coll = false;
    if (!coll) continue;
    if (collapses(g2, delta, gamma)) continue;
    if (q.block_of[g2[c_rep]] != c_cl || q.block_of[g2[d_rep]] != d_cl)
      continue;
    if (!best || g < *best) best = &g;
  }
  if (!best)
    throw NotFound("relative-symmetry witness does not exist "
                   "(Theorem relative-symmetry violation)");
  return *best;
}

UnaryMap collapsing_search(const FrameEnv& env, int factor,
                           const Partition& alpha, CollapsingVariant variant,
                           const CollapsingData& data, bool check_chained) {
  const SubdirectRelation& r = *env.r;
  const Partition& beta = env.frame.beta[factor];
  const FiniteAlgebra& ai = r.factors[factor];
  if (!is_prime_pair(ai, alpha, beta))
    throw HypothesisNotMet("collapsing: (alpha, beta_i) must be prime");
  // nontrivial as-component of pr_i R' / alpha
  auto q = quotient(ai, alpha);
  std::set<Elem> cls;
  for (Elem x : env.frame.bprime[factor]) cls.insert(q.block_of[x]);
  std::vector<Elem> classes(cls.begin(), cls.end());
  const ThinGraph& tq = env.ctx->thin_graph(q.algebra);
  bool nontrivial = false;
  for (const auto& comp : components_in(tq, PathKind::as, classes))
    if (comp.size() >= 2) nontrivial = true;
  if (!nontrivial)
    throw HypothesisNotMet(
        "collapsing: pr_i R'/alpha has no nontrivial as-component");
  if (check_chained) {
    auto v = is_chained(env);
    if (!v.holds)
      throw HypothesisNotMet("collapsing: frame not chained: " + v.detail);
  }
  // separable prime intervals below the beta_j
  struct SepTarget {
    int j;
    PrimeInterval pi;
  };
  std::vector<SepTarget> targets;
  for (int j = 0; j < r.arity(); ++j) {
    auto lat = con_lattice(r.factors[j], env.cap);
    for (const auto& pj : prime_intervals(lat)) {
      if (!pj.upper.leq(env.frame.beta[j])) continue;
      if (j == factor && pj.lower == alpha && pj.upper == beta) continue;
      bool sep = false;
      for (const auto& f : env.pols->tables()) {
        UnaryMap fi = env.factor_action(f, factor);
        UnaryMap fj = env.factor_action(f, j);
        bool ab_from_gd = !collapses(fi, beta, alpha) &&
                          collapses(fj, pj.upper, pj.lower);
        bool gd_from_ab = !collapses(fj, pj.upper, pj.lower) &&
                          collapses(fi, beta, alpha);
        if (ab_from_gd || gd_from_ab) {
          sep = true;
          break;
        }
      }
      if (sep) targets.push_back({j, pj});
    }
  }
  auto mins = minimal_sets(ai, alpha, beta, env.cap);
  // variant data checks
  const ThinGraph& ti = env.ctx->thin_graph(ai);
  const ThinGraph& tr = env.ctx->thin_graph(r.alg);
  if (variant == CollapsingVariant::d || variant == CollapsingVariant::f) {
    auto [a, b] = data.subtrace;
    bool is_subtrace = false;
    for (const auto& u : mins) {
      auto ts = trace_structure(ai, alpha, beta, u, env.cap);
      for (auto [x, y] : ts.subtraces)
        if ((x == a && y == b) || (x == b && y == a)) is_subtrace = true;
    }
    auto am = max_in(ti, PathKind::as, env.frame.bprime[factor]);
    bool amax_ok = std::binary_search(am.begin(), am.end(), a) &&
                   std::binary_search(am.begin(), am.end(), b);
    auto comp = component_of_in(ti, PathKind::as, whole_universe(ai.size), a);
    bool same_comp = std::binary_search(comp.begin(), comp.end(), b);
    if (!is_subtrace || !amax_ok || !same_comp)
      throw HypothesisNotMet("collapsing (d/f): subtrace data invalid");
  }
  if (variant == CollapsingVariant::e || variant == CollapsingVariant::f) {
    if (interval_type(ai, alpha, beta, env.cap) != 2)
      throw HypothesisNotMet("collapsing (e/f): interval type must be 2");
    int at = r.index_of(data.fix_tuple);
    if (at < 0) throw HypothesisNotMet("collapsing (e/f): tuple not in R");
    if (variant == CollapsingVariant::e) {
      auto um = max_in(tr, PathKind::asm_, env.frame.rprime);
      if (!std::binary_search(um.begin(), um.end(), at))
        throw HypothesisNotMet("collapsing (e): tuple not in umax(R')");
    } else {
      std::vector<Elem> rpp;
      for (int t = 0; t < r.size(); ++t)
        if (alpha.related(r.tuples[t][factor], data.fix_tuple[factor]))
          rpp.push_back(t);
      auto um = max_in(tr, PathKind::asm_, rpp);
      if (!std::binary_search(um.begin(), um.end(), at))
        throw HypothesisNotMet("collapsing (f): tuple not in umax(R'')");
      if (data.fix_tuple[factor] != data.subtrace.first)
        throw HypothesisNotMet("collapsing (f): tuple must start the subtrace");
    }
  }
  // candidates: idempotent powers of the preserving polynomials
  std::set<UnaryMap> seen;
  const UnaryMap* best = nullptr;
  std::vector<UnaryMap> candidates;
  for (const auto& u : env.preserving) {
    UnaryMap e = idempotent_power(u);
    if (seen.insert(e).second) candidates.push_back(e);
  }
  std::sort(candidates.begin(), candidates.end());
  for (const auto& e : candidates) {
    UnaryMap ei = env.factor_action(e, factor);
    auto img = map_image(ei);
    bool img_min = false;
    for (const auto& m : mins) img_min |= img == m.elements;
    if (!img_min) continue;
    bool ok = true;
    for (const auto& t : targets) {
      UnaryMap ej = env.factor_action(e, t.j);
      const auto& bj = env.frame.blocks[t.j];
      for (Elem x : bj) {
        for (Elem y : bj) {
          if (!t.pi.upper.related(x, y)) continue;
          if (!t.pi.lower.related(ej[x], ej[y])) {
            ok = false;
            break;
          }
        }
        if (!ok) break;
      }
      if (!ok) break;
    }
    if (!ok) continue;
    switch (variant) {
      case CollapsingVariant::plain:
        break;
      case CollapsingVariant::d: {
        auto [a, b] = data.subtrace;
        if (!std::binary_search(img.begin(), img.end(), a) ||
            !std::binary_search(img.begin(), img.end(), b))
          ok = false;
        break;
      }
      case CollapsingVariant::e: {
        int at = r.index_of(data.fix_tuple);
        if (e[at] != at) ok = false;
        break;
      }
      case CollapsingVariant::f: {
        int at = r.index_of(data.fix_tuple);
        if (e[at] != at) ok = false;
        auto [a, b] = data.subtrace;
        if (!std::binary_search(img.begin(), img.end(), a)) ok = false;
        bool bprime_in = false;
        for (Elem x : img)
          if (alpha.related(x, b)) bprime_in = true;
        if (!bprime_in) ok = false;
        break;
      }
    }
    if (ok) {
      best = &e;
      break;  // candidates sorted: first hit is least
    }
  }
  if (!best)
    throw NotFound("collapsing polynomial does not exist "
                   "(Theorem collapsing violation)");
  return *best;
}

Verdict is_poly_closed(const FrameEnv& env, const std::vector<int>& q) {
  const SubdirectRelation& r = *env.r;
  // q must be a subalgebra
  for (const auto& op : r.alg.ops) {
    const int k = op.arity;
    if (k == 0) continue;
    std::vector<std::size_t> pick(k, 0);
    std::vector<Elem> args(k);
    while (true) {
      for (int i = 0; i < k; ++i) args[i] = q[pick[i]];
      if (!std::binary_search(q.begin(), q.end(), op.apply(args)))
        throw HypothesisNotMet("is_poly_closed: Q is not a subalgebra");
      int pos = k - 1;
      while (pos >= 0 && ++pick[pos] == q.size()) pick[pos--] = 0;
      if (pos < 0) break;
    }
  }
  const ThinGraph& tr = env.ctx->thin_graph(r.alg);
  auto umax_q = max_in(tr, PathKind::asm_, q);
  std::map<std::pair<Elem, Elem>, std::vector<Elem>> sg_cache;
  for (const auto& f : env.pols->tables()) {
    for (Elem a : umax_q) {
      if (f[a] != a) continue;
      for (Elem b : umax_q) {
        Elem fb = f[b];
        auto key = std::make_pair(a, fb);
        auto it = sg_cache.find(key);
        if (it == sg_cache.end())
          it = sg_cache.emplace(key, sg_closure(r.alg, {a, fb})).first;
        const auto& sg = it->second;
        for (Elem c : sg) {
          if (!reaches_in(tr, PathKind::as, sg, a, c)) continue;
          if (!std::binary_search(q.begin(), q.end(), c))
            return {false, "tuple " + std::to_string(c) +
                               " as-reachable from fixed " +
                               std::to_string(a) + " in Sg{a,f(b)} escapes Q"};
        }
      }
    }
  }
  return {true, ""};
}

Verdict is_as_closed(const ThinGraph& g, const std::vector<Elem>& q,
                     const std::vector<Elem>& s) {
  auto um = max_in(g, PathKind::asm_, s);
  for (Elem a : um)
    for (Elem b : q) {
      if (!reaches_in(g, PathKind::as, q, a, b)) continue;
      if (!std::binary_search(s.begin(), s.end(), b))
        return {false, std::to_string(a) + " as-reaches " + std::to_string(b) +
                           " outside S"};
    }
  return {true, ""};
}

Verdict is_weakly_as_closed(const FrameEnv& env, const std::vector<int>& q,
                            const std::vector<int>& s) {
  const SubdirectRelation& r = *env.r;
  for (int i = 0; i < r.arity(); ++i) {
    std::set<Elem> qi, si;
    for (int t : q) qi.insert(r.tuples[t][i]);
    for (int t : s) si.insert(r.tuples[t][i]);
    auto v = is_as_closed(env.ctx->thin_graph(r.factors[i]),
                          {qi.begin(), qi.end()}, {si.begin(), si.end()});
    if (!v.holds)
      return {false, "coordinate " + std::to_string(i + 1) + ": " + v.detail};
  }
  return {true, ""};
}

CongruenceLemmaOutcome congruence_lemma_eval(const FrameEnv& env,
                                             const std::vector<int>& rp,
                                             bool check_hypotheses) {
  const SubdirectRelation& r = *env.r;
  CongruenceLemmaOutcome out;
  if (r.arity() != 2)
    throw RangeError("congruence_lemma_eval: binary relation expected");
  const FiniteAlgebra& a1 = r.factors[0];
  const FiniteAlgebra& a2 = r.factors[1];
  const Partition& beta1 = env.frame.beta[0];
  const Partition& beta2 = env.frame.beta[1];
  if (!is_prime_pair(a1, partition_equality(a1.size), beta1))
    throw HypothesisNotMet("congruence lemma: 0 must be covered by beta_1");
  // R' inside R* and its projections
  for (int t : rp)
    if (!std::binary_search(env.frame.rprime.begin(), env.frame.rprime.end(),
                            t))
      throw HypothesisNotMet("congruence lemma: R' must lie inside R*");
  const ThinGraph& t1 = env.ctx->thin_graph(a1);
  const ThinGraph& tr = env.ctx->thin_graph(r.alg);
  std::set<Elem> b1p_set;
  for (int t : rp) b1p_set.insert(r.tuples[t][0]);
  std::vector<Elem> b1p(b1p_set.begin(), b1p_set.end());
  // as-component C of B*_1 contained in B'_1
  std::vector<Elem> component;
  {
    auto comps = components_in(t1, PathKind::as, env.frame.bprime[0]);
    auto am = max_in(t1, PathKind::as, env.frame.bprime[0]);
    for (const auto& comp : comps) {
      if (!std::includes(am.begin(), am.end(), comp.begin(), comp.end()))
        continue;
      if (std::includes(b1p.begin(), b1p.end(), comp.begin(), comp.end())) {
        component = comp;
        break;
      }
    }
  }
  if (component.empty())
    throw HypothesisNotMet(
        "congruence lemma: B'_1 contains no as-component of B*_1");
  if (check_hypotheses) {
    auto um = max_in(tr, PathKind::asm_, env.frame.rprime);
    bool meets = false;
    for (int t : rp)
      if (std::binary_search(um.begin(), um.end(), t)) meets = true;
    if (!meets)
      throw HypothesisNotMet("congruence lemma: R' misses umax(R*)");
    auto v = is_poly_closed(env, rp);
    if (!v.holds)
      throw HypothesisNotMet("congruence lemma: R' not polynomially closed: " +
                             v.detail);
    auto vc = is_chained(env);
    if (!vc.holds)
      throw HypothesisNotMet("congruence lemma: frame not chained: " +
                             vc.detail);
  }
  out.component = component;
  // B''_2 = R'[C]
  std::set<Elem> b2_set;
  for (int t : rp)
    if (std::binary_search(component.begin(), component.end(),
                           r.tuples[t][0]))
      b2_set.insert(r.tuples[t][1]);
  out.b2.assign(b2_set.begin(), b2_set.end());
  const ThinGraph& t2 = env.ctx->thin_graph(a2);
  auto um2 = max_in(t2, PathKind::asm_, out.b2);
  // beta' = least congruence of A_2 collapsing umax(B''_2)
  std::vector<std::pair<Elem, Elem>> gen;
  for (std::size_t i = 1; i < um2.size(); ++i) gen.push_back({um2[0], um2[i]});
  out.beta_prime = cg_closure(a2, gen);
  // option 1
  bool opt1 = true;
  for (Elem c : component)
    for (Elem y : um2) {
      int t = r.index_of({c, y});
      if (t < 0 || !std::binary_search(rp.begin(), rp.end(), t)) opt1 = false;
    }
  if (opt1) {
    out.option = 1;
    return out;
  }
  // option 2: some eta covered by beta' with non-separable intervals and the
  // graph-of-mapping structure
  if (!out.beta_prime.leq(beta2)) {
    out.detail = "beta' does not lie below beta_2";
    return out;
  }
  auto lat2 = con_lattice(a2, env.cap);
  int bp_idx = lat2.index_of(out.beta_prime);
  if (bp_idx < 0) throw InternalError("congruence lemma: beta' not in Con");
  PrimeInterval i1{partition_equality(a1.size), beta1};
  for (int eta_idx : lat2.lower_covers(bp_idx)) {
    const Partition& eta = lat2.congruences[eta_idx];
    PrimeInterval i2{eta, out.beta_prime};
    // mutual non-separability with complete enumeration
    bool sep_any = false;
    try {
      sep_any = can_separate(r, {0, i1}, {1, i2}, env.cap).has_value() ||
                can_separate(r, {1, i2}, {0, i1}, env.cap).has_value();
    } catch (const CapExceeded&) {
      out.inconclusive = true;
      out.detail = "separation enumeration exceeded the cap";
      continue;
    }
    if (sep_any) continue;
    // graph of a mapping phi : B''_2 -> C with kernel eta|B''_2
    std::map<Elem, Elem> phi;
    bool graph = true;
    for (Elem y : out.b2) {
      Elem image = -1;
      for (Elem c : component) {
        int t = r.index_of({c, y});
        if (t < 0 || !std::binary_search(rp.begin(), rp.end(), t)) continue;
        if (image >= 0) graph = false;
        image = c;
      }
      if (image < 0) graph = false;
      if (!graph) break;
      phi[y] = image;
    }
    if (!graph) continue;
    bool kernel_ok = true;
    for (Elem y1 : out.b2)
      for (Elem y2 : out.b2)
        if ((phi[y1] == phi[y2]) != eta.related(y1, y2)) kernel_ok = false;
    if (!kernel_ok) continue;
    out.option = 2;
    out.eta = eta;
    for (auto [y, c] : phi) out.phi.push_back({y, c});
    return out;
  }
  out.detail = out.detail.empty()
                   ? "neither option of the congruence lemma holds"
                   : out.detail;
  return out;
}

}  // namespace algwb
