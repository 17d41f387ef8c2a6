#include "algwb/tct.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "algwb/polynomials.hpp"

namespace algwb {

bool is_prime_pair(const FiniteAlgebra& a, const Partition& alpha,
                   const Partition& beta) {
  if (!is_congruence(a, alpha) || !is_congruence(a, beta)) return false;
  if (!alpha.leq(beta) || alpha == beta) return false;
  for (Elem x = 0; x < a.size; ++x)
    for (Elem y = x + 1; y < a.size; ++y) {
      if (!beta.related(x, y) || alpha.related(x, y)) continue;
      std::vector<std::pair<Elem, Elem>> gens{{x, y}};
      for (Elem u = 0; u < a.size; ++u)
        if (alpha.rep(u) != u) gens.push_back({alpha.rep(u), u});
      if (!(cg_closure(a, gens) == beta)) return false;
    }
  return true;
}

namespace {

// f(beta) subseteq alpha?
bool collapses(const UnaryMap& f, const Partition& beta,
               const Partition& alpha) {
  const int n = static_cast<int>(f.size());
  for (Elem x = 0; x < n; ++x)
    for (Elem y = x + 1; y < n; ++y)
      if (beta.related(x, y) && !alpha.related(f[x], f[y])) return false;
  return true;
}

}  // namespace

std::vector<MinimalSet> minimal_sets(const FiniteAlgebra& a,
                                     const Partition& alpha,
                                     const Partition& beta, std::size_t cap) {
  if (!is_prime_pair(a, alpha, beta))
    throw NotPrime("minimal_sets: (alpha,beta) is not a prime interval");
  PolyClosure pc(a, 1, cap);
  std::set<std::vector<Elem>> images;
  for (const auto& f : pc.tables())
    if (!collapses(f, beta, alpha)) images.insert(map_image(f));
  // inclusion-minimal images
  std::vector<std::vector<Elem>> mins;
  for (const auto& u : images) {
    bool minimal = true;
    for (const auto& v : images) {
      if (v == u) continue;
      if (std::includes(u.begin(), u.end(), v.begin(), v.end()))
        minimal = false;
    }
    if (minimal) mins.push_back(u);
  }
  std::vector<MinimalSet> out;
  for (const auto& u : mins) {
    MinimalSet ms;
    ms.interval = {alpha, beta};
    ms.elements = u;
    bool found = false;
    for (const auto& f : pc.tables()) {
      if (map_image(f) == u && is_idempotent_map(f) &&
          !collapses(f, beta, alpha)) {
        ms.witness = f;
        found = true;
        break;
      }
    }
    if (!found)
      throw NotFound("minimal_sets: no idempotent witness for a minimal set "
                     "(Lemma minimal-sets(3) violation)");
    out.push_back(std::move(ms));
  }
  // Lemma minimal-sets(1): pairwise polynomial isomorphism
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = i + 1; j < out.size(); ++j) {
      const auto& u = out[i].elements;
      const auto& v = out[j].elements;
      bool iso = false;
      for (const auto& f : pc.tables()) {
        std::vector<Elem> img;
        for (Elem x : u) img.push_back(f[x]);
        std::sort(img.begin(), img.end());
        auto uniq = img;
        uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
        if (uniq != v || uniq.size() != u.size()) continue;
        // need g with g(f(x)) = x on u
        for (const auto& g : pc.tables()) {
          bool ok = true;
          for (Elem x : u)
            if (g[f[x]] != x) ok = false;
          if (ok) {
            iso = true;
            break;
          }
        }
        if (iso) break;
      }
      if (!iso)
        throw NotFound("minimal_sets: minimal sets are not polynomially "
                       "isomorphic (Lemma minimal-sets(1) violation)");
    }
  return out;
}

InducedQuotient induced_quotient_clone(const FiniteAlgebra& a,
                                       const Partition& alpha,
                                       const std::vector<Elem>& n, int arity,
                                       std::size_t cap) {
  InducedQuotient iq;
  // classes of alpha inside n, indexed by least member
  std::vector<Elem> reps;
  for (Elem x : n)
    if (std::none_of(reps.begin(), reps.end(),
                     [&](Elem r) { return alpha.related(r, x); }))
      reps.push_back(x);
  std::sort(reps.begin(), reps.end());
  iq.rep = reps;
  iq.size = static_cast<int>(reps.size());
  iq.class_of.resize(n.size());
  for (std::size_t i = 0; i < n.size(); ++i)
    for (std::size_t c = 0; c < reps.size(); ++c)
      if (alpha.related(n[i], reps[c])) iq.class_of[i] = static_cast<Elem>(c);
  // The induced quotient clone equals the restriction clone of A/alpha on
  // the class set: composing with the idempotent minimal-set witness pulls
  // any N-bar-preserving polynomial of the quotient back to an N-preserving
  // polynomial of A with the same quotient action.  Working over A/alpha
  // keeps the closure free of within-class noise.
  auto q = quotient(a, alpha);
  std::vector<Elem> qcls(iq.size);
  for (int c = 0; c < iq.size; ++c) qcls[c] = q.block_of[reps[c]];
  const std::size_t m = qcls.size();
  std::size_t total = 1;
  for (int i = 0; i < arity; ++i) total *= m;
  std::vector<EvalCoord> coords;
  coords.reserve(total);
  std::vector<Elem> args(arity);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (int p = arity - 1; p >= 0; --p) {
      args[p] = qcls[rest % m];
      rest /= m;
    }
    coords.push_back({&q.algebra, args});
  }
  ValueClosure vc(q.algebra, arity, coords, true, cap);
  vc.run();
  std::vector<Elem> back(q.algebra.size, -1);
  for (int c = 0; c < iq.size; ++c) back[qcls[c]] = static_cast<Elem>(c);
  std::set<std::vector<Elem>> tables;
  for (std::size_t i = 0; i < vc.size(); ++i) {
    const auto& v = vc.vector_of(i);
    bool preserves = true;
    for (Elem x : v)
      if (back[x] < 0) preserves = false;
    if (!preserves) continue;
    std::vector<Elem> qt(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) qt[j] = back[v[j]];
    tables.insert(qt);
  }
  iq.tables.assign(tables.begin(), tables.end());
  return iq;
}

namespace {

bool table_depends_on_at_most_one(const std::vector<Elem>& t, int arity,
                                  int size) {
  for (int p = 0; p < arity; ++p) {
    // does t depend only on coordinate p?
    bool only_p = true;
    std::size_t total = t.size();
    std::map<Elem, Elem> val;
    for (std::size_t idx = 0; idx < total && only_p; ++idx) {
      std::size_t rest = idx;
      Elem xp = 0;
      for (int q = arity - 1; q >= 0; --q) {
        Elem v = static_cast<Elem>(rest % size);
        rest /= size;
        if (q == p) xp = v;
      }
      auto it = val.find(xp);
      if (it == val.end())
        val[xp] = t[idx];
      else if (it->second != t[idx])
        only_p = false;
    }
    if (only_p) return true;
  }
  return false;
}

}  // namespace

TraceClassification classify_trace(const FiniteAlgebra& a,
                                   const Partition& alpha,
                                   const std::vector<Elem>& trace,
                                   std::size_t cap) {
  TraceClassification c;
  auto u1 = induced_quotient_clone(a, alpha, trace, 1, cap);
  auto u2 = induced_quotient_clone(a, alpha, trace, 2, cap);
  const int n = u1.size;
  if (n < 2) throw InternalError("classify_trace: trivial trace quotient");

  c.essentially_unary = true;
  for (const auto& t : u2.tables)
    if (!table_depends_on_at_most_one(t, 2, n)) c.essentially_unary = false;

  if (n == 2) {
    // On a two-class quotient the unary and binary fragments decide the
    // label outright (Post): an essential binary polynomial clone either
    // contains a semilattice operation (types 3/4/5) or is linear (type 2).
    for (const auto& t : u2.tables) {
      if (t == std::vector<Elem>{0, 0, 0, 1}) c.has_meet = true;
      if (t == std::vector<Elem>{0, 1, 1, 1}) c.has_join = true;
    }
    for (const auto& t : u1.tables)
      if (t == std::vector<Elem>{1, 0}) c.has_complement = true;
    if (c.has_meet && c.has_join)
      c.label = c.has_complement ? 3 : 4;
    else if (c.has_meet || c.has_join)
      c.label = 5;
    else if (!c.essentially_unary) {
      c.label = 2;
      c.has_maltsev = true;  // x+y+z of the linear clone
      c.abelian = true;
    } else {
      c.label = 1;
    }
    return c;
  }

  // Larger quotients: the ternary fragment is needed for the Mal'tsev and
  // abelianness tests.  These closures stay small in every case a prime
  // interval can produce (affine or essentially unary action).
  auto u3 = induced_quotient_clone(a, alpha, trace, 3,
                                   std::min<std::size_t>(cap, 2000));
  for (const auto& t : u3.tables)
    if (!table_depends_on_at_most_one(t, 3, n)) c.essentially_unary = false;

  // Mal'tsev table among induced ternary polynomials
  std::vector<Elem> malt;
  for (const auto& t : u3.tables) {
    bool ok = true;
    for (Elem x = 0; x < n && ok; ++x)
      for (Elem y = 0; y < n && ok; ++y) {
        if (t[(x * n + y) * n + y] != x) ok = false;
        if (t[(y * n + y) * n + x] != x) ok = false;
      }
    if (ok) {
      malt = t;
      break;
    }
  }
  c.has_maltsev = !malt.empty();
  if (c.has_maltsev) {
    // module reconstruction over the induced polynomial clone
    auto mal = [&](Elem x, Elem y, Elem z) { return malt[(x * n + y) * n + z]; };
    Elem zero = 0;
    auto add = [&](Elem x, Elem y) { return mal(x, zero, y); };
    auto neg = [&](Elem x) { return mal(zero, x, zero); };
    bool good = true;
    for (Elem x = 0; x < n && good; ++x) {
      if (add(x, zero) != x || add(zero, x) != x || add(x, neg(x)) != zero)
        good = false;
      for (Elem y = 0; y < n && good; ++y) {
        if (add(x, y) != add(y, x)) good = false;
        for (Elem z = 0; z < n && good; ++z) {
          if (add(add(x, y), z) != add(x, add(y, z))) good = false;
          if (mal(x, y, z) != add(add(x, neg(y)), z)) good = false;
        }
      }
    }
    if (good) {
      // every induced polynomial affine: f(x+y) = f(x) + f(y) - f(0...)
      auto affine = [&](const std::vector<Elem>& t, int k) {
        std::size_t total = t.size();
        std::vector<Elem> xs(k), ys(k), zs(k);
        std::vector<Elem> zero_args(k, zero);
        std::size_t zidx = 0;
        for (int p = 0; p < k; ++p) zidx = zidx * n + zero;
        Elem f0 = t[zidx];
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
            std::size_t izz = 0;
            for (int p = 0; p < k; ++p) izz = izz * n + add(xs[p], ys[p]);
            if (t[izz] != add(add(t[ix], t[iy]), neg(f0))) return false;
          }
        }
        return true;
      };
      for (const auto& t : u1.tables)
        if (!affine(t, 1)) good = false;
      for (const auto& t : u2.tables)
        if (!affine(t, 2)) good = false;
      for (const auto& t : u3.tables)
        if (!affine(t, 3)) good = false;
      c.abelian = good;
    }
  }
  if (c.essentially_unary)
    c.label = 1;
  else if (c.has_maltsev && c.abelian)
    c.label = 2;
  else if (c.has_maltsev)
    c.label = 3;
  else
    c.label = 1;
  return c;
}

TraceStructure trace_structure(const FiniteAlgebra& a, const Partition& alpha,
                               const Partition& beta, const MinimalSet& u,
                               std::size_t cap) {
  TraceStructure ts;
  ts.minimal_set = u;
  for (const auto& block : beta.blocks()) {
    std::vector<Elem> n;
    for (Elem x : block)
      if (std::binary_search(u.elements.begin(), u.elements.end(), x))
        n.push_back(x);
    if (n.size() < 2) continue;
    bool nontrivial = false;
    for (std::size_t i = 0; i < n.size() && !nontrivial; ++i)
      for (std::size_t j = i + 1; j < n.size(); ++j)
        if (!alpha.related(n[i], n[j])) {
          nontrivial = true;
          break;
        }
    if (nontrivial) ts.traces.push_back(n);
  }
  for (const auto& tr : ts.traces)
    for (std::size_t i = 0; i < tr.size(); ++i)
      for (std::size_t j = i + 1; j < tr.size(); ++j)
        if (!alpha.related(tr[i], tr[j]))
          ts.subtraces.push_back({tr[i], tr[j]});
  if (ts.traces.empty())
    throw InternalError("trace_structure: minimal set has no trace");
  int label = 0;
  for (const auto& tr : ts.traces) {
    auto c = classify_trace(a, alpha, tr, cap);
    if (c.label == 2) {
      label = 2;
      break;
    }
    if (label == 0) label = c.label;
  }
  ts.type_label = label;
  return ts;
}

int interval_type(const FiniteAlgebra& a, const Partition& alpha,
                  const Partition& beta, std::size_t cap) {
  auto mins = minimal_sets(a, alpha, beta, cap);
  int label = 0;
  for (const auto& u : mins) {
    auto ts = trace_structure(a, alpha, beta, u, cap);
    if (label == 0)
      label = ts.type_label;
    else if (label != ts.type_label)
      throw InternalError("interval_type: minimal sets disagree on the type");
  }
  return label;
}

PseudoMeetJoin pseudo_meet_join(const FiniteAlgebra& a, const Partition& alpha,
                                const Partition& beta, const MinimalSet& u,
                                std::size_t cap) {
  auto ts = trace_structure(a, alpha, beta, u, cap);
  if (ts.type_label == 2 || ts.type_label == 1)
    throw TypeMismatch("pseudo_meet_join: interval type is " +
                       std::to_string(ts.type_label));
  if (ts.traces.size() != 1)
    throw InternalError("pseudo_meet_join: expected a unique trace");
  const auto& n = ts.traces[0];
  // binary polynomial values are only constrained on U x U
  std::vector<EvalCoord> coords;
  for (Elem x : u.elements)
    for (Elem y : u.elements) coords.push_back({&a, {x, y}});
  auto at = [&](Elem x, Elem y) {
    std::size_t ix =
        std::lower_bound(u.elements.begin(), u.elements.end(), x) -
        u.elements.begin();
    std::size_t iy =
        std::lower_bound(u.elements.begin(), u.elements.end(), y) -
        u.elements.begin();
    return ix * u.elements.size() + iy;
  };
  ValueClosure vc(a, 2, coords, true, cap);
  vc.run();
  PseudoMeetJoin out;
  // scan candidate neutral elements from above so the deterministic pick
  // matches the usual 1-on-top convention
  int p_id = -1;
  for (auto it = n.rbegin(); it != n.rend() && out.one < 0; ++it) {
    Elem one = *it;
    bool separated = true;
    for (Elem x : u.elements)
      if (x != one && alpha.related(one, x)) separated = false;
    if (!separated) continue;
    for (std::size_t i = 0; i < vc.size(); ++i) {
      const auto& v = vc.vector_of(i);
      if (v[at(one, one)] != one) continue;
      bool ok = true;
      for (Elem x : u.elements) {
        if (x == one) continue;
        if (v[at(one, x)] != x || v[at(x, one)] != x || v[at(x, x)] != x)
          ok = false;
      }
      if (ok) {
        out.one = one;
        p_id = static_cast<int>(i);
        break;
      }
    }
  }
  if (out.one < 0)
    throw NotFound("pseudo_meet_join: no pseudo-meet operation "
                   "(Lemma pseudo-meet violation)");
  out.p = vc.materialize(p_id, a).table;
  if (ts.type_label == 3 || ts.type_label == 4) {
    // pseudo-join: semilattice on the 2-element trace with q(1,0) = 1
    if (n.size() != 2)
      throw InternalError("pseudo_meet_join: type 3/4 trace is not 2-element");
    Elem other = n[0] == out.one ? n[1] : n[0];
    for (std::size_t i = 0; i < vc.size(); ++i) {
      const auto& v = vc.vector_of(i);
      if (v[at(out.one, out.one)] == out.one && v[at(other, other)] == other &&
          v[at(out.one, other)] == out.one && v[at(other, out.one)] == out.one) {
        out.q = vc.materialize(static_cast<int>(i), a).table;
        break;
      }
    }
    if (!out.q)
      throw NotFound("pseudo_meet_join: no pseudo-join operation "
                     "(Lemma pseudo-meet violation)");
  }
  return out;
}

std::vector<Elem> z_set(const FiniteAlgebra& a, const Partition& alpha,
                        const Partition& beta, std::size_t cap) {
  std::set<Elem> z;
  for (const auto& u : minimal_sets(a, alpha, beta, cap)) {
    auto ts = trace_structure(a, alpha, beta, u, cap);
    for (auto [x, y] : ts.subtraces) {
      z.insert(x);
      z.insert(y);
    }
  }
  return {z.begin(), z.end()};
}

}  // namespace algwb
