#include "algwb/separation.hpp"

#include <algorithm>

#include "algwb/polynomials.hpp"

namespace algwb {

namespace {

// f(theta) subseteq psi
bool collapses(const UnaryMap& f, const Partition& theta,
               const Partition& psi) {
  const int n = static_cast<int>(f.size());
  for (Elem x = 0; x < n; ++x)
    for (Elem y = x + 1; y < n; ++y)
      if (theta.related(x, y) && !psi.related(f[x], f[y])) return false;
  return true;
}

}  // namespace

bool separates(const SubdirectRelation& r, const UnaryMap& f,
               const IntervalRef& i, const IntervalRef& j) {
  if (i.factor == j.factor && i.interval == j.interval) return false;
  UnaryMap fi = coordinate_action(r, f, i.factor);
  UnaryMap fj = coordinate_action(r, f, j.factor);
  return !collapses(fi, i.interval.upper, i.interval.lower) &&
         collapses(fj, j.interval.upper, j.interval.lower);
}

std::optional<UnaryMap> can_separate(const SubdirectRelation& r,
                                     const IntervalRef& i,
                                     const IntervalRef& j, std::size_t cap) {
  PolyClosure pc(r.alg, 1, cap);
  for (const auto& f : pc.tables())
    if (separates(r, f, i, j)) return f;
  return std::nullopt;
}

int SeparationMatrix::index_of(const IntervalRef& ref) const {
  for (std::size_t k = 0; k < intervals.size(); ++k)
    if (intervals[k].factor == ref.factor &&
        intervals[k].interval == ref.interval)
      return static_cast<int>(k);
  return -1;
}

SeparationMatrix separation_matrix(const SubdirectRelation& r,
                                   std::size_t cap) {
  SeparationMatrix m;
  for (int i = 0; i < r.arity(); ++i) {
    auto lat = con_lattice(r.factors[i], cap);
    for (const auto& pi : prime_intervals(lat))
      m.intervals.push_back({i, pi});
  }
  const std::size_t k = m.intervals.size();
  m.sep.assign(k, std::vector<SepEntry>(k, SepEntry::unknown));
  m.witness.assign(k, std::vector<UnaryMap>(k));
  for (std::size_t x = 0; x < k; ++x) m.sep[x][x] = SepEntry::no;
  try {
    PolyClosure pc(r.alg, 1, cap);
    // per polynomial: which intervals stay apart, which collapse
    std::vector<char> keeps(k), coll(k);
    std::vector<UnaryMap> actions(r.arity());
    for (const auto& f : pc.tables()) {
      for (int i = 0; i < r.arity(); ++i)
        actions[i] = coordinate_action(r, f, i);
      for (std::size_t x = 0; x < k; ++x) {
        const auto& ref = m.intervals[x];
        bool c = collapses(actions[ref.factor], ref.interval.upper,
                           ref.interval.lower);
        coll[x] = c;
        keeps[x] = !c;
      }
      for (std::size_t x = 0; x < k; ++x) {
        if (!keeps[x]) continue;
        for (std::size_t y = 0; y < k; ++y) {
          if (x == y || !coll[y]) continue;
          if (m.sep[x][y] != SepEntry::yes) {
            m.sep[x][y] = SepEntry::yes;
            m.witness[x][y] = f;
          }
        }
      }
    }
    // the enumeration is complete, so everything undecided is "cannot"
    for (std::size_t x = 0; x < k; ++x)
      for (std::size_t y = 0; y < k; ++y)
        if (m.sep[x][y] == SepEntry::unknown) m.sep[x][y] = SepEntry::no;
  } catch (const CapExceeded&) {
    m.complete = false;  // undecided entries stay unknown
  }
  return m;
}

Verdict check_nonseparation_preorder(const SeparationMatrix& m) {
  const std::size_t k = m.intervals.size();
  for (std::size_t x = 0; x < k; ++x)
    if (m.sep[x][x] != SepEntry::no) return {false, "not reflexive"};
  for (std::size_t x = 0; x < k; ++x)
    for (std::size_t y = 0; y < k; ++y)
      for (std::size_t z = 0; z < k; ++z)
        if (m.sep[x][y] == SepEntry::no && m.sep[y][z] == SepEntry::no &&
            m.sep[x][z] == SepEntry::yes)
          return {false, "cannot-be-separated fails transitivity at (" +
                             std::to_string(x) + "," + std::to_string(y) +
                             "," + std::to_string(z) + ")"};
  return {true, ""};
}

std::optional<UnaryMap> can_separate_single(const FiniteAlgebra& a,
                                            const PrimeInterval& i1,
                                            const PrimeInterval& i2,
                                            std::size_t cap) {
  auto eq = eq_relation(a);
  return can_separate(eq, {0, i1}, {1, i2}, cap);
}

UnaryMap normalize_separator(const SubdirectRelation& r, const IntervalRef& i,
                             const IntervalRef& j, const UnaryMap& f,
                             std::size_t cap) {
  if (!separates(r, f, i, j))
    throw HypothesisNotMet("normalize_separator: f does not separate I from J");
  const FiniteAlgebra& ai = r.factors[i.factor];
  const Partition& alpha = i.interval.lower;
  const Partition& beta = i.interval.upper;
  UnaryMap g_i = coordinate_action(r, f, i.factor);
  // a minimal set U with g(beta|U) not inside alpha
  auto mins = minimal_sets(ai, alpha, beta, cap);
  const std::vector<Elem>* u = nullptr;
  for (const auto& ms : mins) {
    bool keeps = false;
    for (Elem x : ms.elements)
      for (Elem y : ms.elements)
        if (beta.related(x, y) && !alpha.related(g_i[x], g_i[y])) keeps = true;
    if (keeps) {
      u = &ms.elements;
      break;
    }
  }
  if (!u)
    throw NotFound("normalize_separator: no minimal set survives g "
                   "(Lemma minimal-sets(6) violation)");
  // h in pol1(A_i) with h(A_i) = U and h(g(x)) = x on U
  PolyClosure pci(ai, 1, cap);
  int h_id = -1;
  for (std::size_t t = 0; t < pci.size(); ++t) {
    const auto& h = pci.table(t);
    if (map_image(h) != *u) continue;
    bool inv = true;
    for (Elem x : *u)
      if (h[g_i[x]] != x) inv = false;
    if (inv) {
      h_id = static_cast<int>(t);
      break;
    }
  }
  if (h_id < 0)
    throw NotFound("normalize_separator: no inverse-on-minimal-set polynomial "
                   "(Lemma min-set-separation violation)");
  UnaryMap h_ext = extend_polynomial(r, {i.factor}, pci, h_id);
  UnaryMap hg = compose(h_ext, f);
  UnaryMap res = idempotent_power(hg);
  // verify the postconditions
  UnaryMap ri = coordinate_action(r, res, i.factor);
  UnaryMap rj = coordinate_action(r, res, j.factor);
  if (!is_idempotent_map(res) || map_image(ri) != *u ||
      collapses(ri, beta, alpha) ||
      !collapses(rj, j.interval.upper, j.interval.lower))
    throw InternalError("normalize_separator: recipe postcondition failed");
  return res;
}

// ---------------------------------------------------------------------------

namespace {

// {(f(x,c), f(x,d), f(y,c), f(y,d)) : f binary polynomial}
std::vector<std::vector<Elem>> pol2_profile(const FiniteAlgebra& a, Elem x,
                                            Elem y, Elem c, Elem d,
                                            std::size_t cap) {
  std::vector<std::vector<Elem>> gens;
  gens.push_back({x, x, y, y});
  gens.push_back({c, d, c, d});
  for (Elem e = 0; e < a.size; ++e) gens.push_back({e, e, e, e});
  return sg_closure_tuples({&a, &a, &a, &a}, gens, cap);
}

// Coarsest partition refining `start` that is stable under all one-position
// translations, i.e. the largest congruence below the given equivalence.
Partition largest_congruence_below(const FiniteAlgebra& a,
                                   const Partition& start) {
  const int n = a.size;
  std::vector<Elem> lab = start.labels;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& op : a.ops) {
      const int k = op.arity;
      if (k == 0) continue;
      std::vector<Elem> args(k);
      const std::size_t rest_total = table_size(n, k - 1);
      for (int pos = 0; pos < k; ++pos)
        for (std::size_t restv = 0; restv < rest_total; ++restv) {
          std::size_t rr = restv;
          for (int q = k - 1; q >= 0; --q) {
            if (q == pos) continue;
            args[q] = static_cast<Elem>(rr % n);
            rr /= n;
          }
          // split blocks by the label of the translation image
          std::vector<Elem> sig(n);
          for (Elem e = 0; e < n; ++e) {
            args[pos] = e;
            sig[e] = lab[op.apply(args)];
          }
          // relabel: block = (old label, signature)
          std::vector<Elem> fresh(n);
          for (Elem e = 0; e < n; ++e) {
            int found = -1;
            for (Elem e2 = 0; e2 < e; ++e2)
              if (lab[e2] == lab[e] && sig[e2] == sig[e]) {
                found = fresh[e2];
                break;
              }
            fresh[e] = found >= 0 ? found : e;
          }
          for (Elem e = 0; e < n; ++e)
            if (fresh[e] != lab[e]) changed = true;
          lab = fresh;
        }
    }
  }
  Partition theta = partition_from_labels(lab);
  if (!is_congruence(a, theta))
    throw InternalError("largest_congruence_below: refinement failed");
  return theta;
}

}  // namespace

Partition centralizer(const FiniteAlgebra& a, const Partition& alpha,
                      const Partition& beta, std::size_t cap) {
  const int n = a.size;
  // pairs passing the term condition C(.,beta;alpha); this is an equivalence
  // (equality of collapse profiles)
  std::vector<std::pair<Elem, Elem>> pass;
  for (Elem x = 0; x < n; ++x)
    for (Elem y = x + 1; y < n; ++y) {
      bool ok = true;
      for (Elem c = 0; c < n && ok; ++c)
        for (Elem d = c + 1; d < n && ok; ++d) {
          if (!beta.related(c, d) || alpha.related(c, d)) continue;
          for (const auto& w : pol2_profile(a, x, y, c, d, cap)) {
            bool left = alpha.related(w[0], w[1]);
            bool right = alpha.related(w[2], w[3]);
            if (left != right) {
              ok = false;
              break;
            }
          }
        }
      if (ok) pass.push_back({x, y});
    }
  Partition pass_part = partition_from_pairs(n, pass);
  for (Elem x = 0; x < n; ++x)
    for (Elem y = x + 1; y < n; ++y) {
      bool in = std::find(pass.begin(), pass.end(), std::make_pair(x, y)) !=
                pass.end();
      if (pass_part.related(x, y) != in)
        throw InternalError("centralizer: C-condition relation not transitive");
    }
  // the condition relation need not be a congruence in general; take the
  // largest congruence below it
  return largest_congruence_below(a, pass_part);
}

Partition quasi_centralizer(const FiniteAlgebra& a, const Partition& alpha,
                            const Partition& beta, std::size_t cap) {
  const int n = a.size;
  // beta-pairs that are not already alpha-related
  std::vector<std::pair<Elem, Elem>> bp;
  for (Elem c = 0; c < n; ++c)
    for (Elem d = c + 1; d < n; ++d)
      if (beta.related(c, d) && !alpha.related(c, d)) bp.push_back({c, d});
  std::vector<std::pair<Elem, Elem>> zeta_pairs;
  for (Elem x = 0; x < n; ++x)
    for (Elem y = x + 1; y < n; ++y) {
      // joint profile of g at (x,c),(x,d),(y,c),(y,d) over all beta-pairs
      const std::size_t m = bp.size();
      std::vector<const FiniteAlgebra*> coord(4 * m, &a);
      std::vector<Elem> g1(4 * m), g2(4 * m);
      for (std::size_t t = 0; t < m; ++t) {
        g1[4 * t] = x;
        g1[4 * t + 1] = x;
        g1[4 * t + 2] = y;
        g1[4 * t + 3] = y;
        g2[4 * t] = bp[t].first;
        g2[4 * t + 1] = bp[t].second;
        g2[4 * t + 2] = bp[t].first;
        g2[4 * t + 3] = bp[t].second;
      }
      std::vector<std::vector<Elem>> gens{g1, g2};
      for (Elem e = 0; e < n; ++e)
        gens.push_back(std::vector<Elem>(4 * m, e));
      bool ok = true;
      for (const auto& w : sg_closure_tuples(coord, gens, cap)) {
        bool x_collapses = true, y_collapses = true;
        for (std::size_t t = 0; t < m; ++t) {
          if (!alpha.related(w[4 * t], w[4 * t + 1])) x_collapses = false;
          if (!alpha.related(w[4 * t + 2], w[4 * t + 3])) y_collapses = false;
        }
        if (x_collapses != y_collapses) {
          ok = false;
          break;
        }
      }
      if (ok) zeta_pairs.push_back({x, y});
    }
  // zeta is an equivalence by construction (equality of collapse profiles);
  // make sure the pair set is transitive before packaging
  Partition zeta = partition_from_pairs(n, zeta_pairs);
  for (Elem x = 0; x < n; ++x)
    for (Elem y = x + 1; y < n; ++y) {
      bool in = std::find(zeta_pairs.begin(), zeta_pairs.end(),
                          std::make_pair(x, y)) != zeta_pairs.end();
      if (zeta.related(x, y) != in)
        throw InternalError("quasi_centralizer: relation is not transitive");
    }
  return zeta;
}

bool alignment_check(const SubdirectRelation& r, const Partition& alpha1,
                     const Partition& alpha2) {
  if (r.arity() != 2)
    throw RangeError("alignment_check: binary relation expected");
  for (const auto& t1 : r.tuples)
    for (const auto& t2 : r.tuples) {
      bool left = alpha1.related(t1[0], t2[0]);
      bool right = alpha2.related(t1[1], t2[1]);
      if (left != right) return false;
    }
  return true;
}

}  // namespace algwb
