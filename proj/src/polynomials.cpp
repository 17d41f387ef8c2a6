#include "algwb/polynomials.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "algwb/subdirect.hpp"

namespace algwb {

PolySet pol1(const FiniteAlgebra& a, std::size_t cap) {
  PolyClosure pc(a, 1, cap);
  PolySet out;
  out.arity = 1;
  out.members = pc.tables();
  return out;
}

PolySet polk(const FiniteAlgebra& a, int k, std::size_t cap) {
  if (k < 1) throw RangeError("polk: arity must be >= 1");
  PolyClosure pc(a, k, cap);
  PolySet out;
  out.arity = k;
  out.members = pc.tables();
  return out;
}

namespace {

struct TupleHash {
  std::size_t operator()(const std::vector<Elem>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (Elem e : v) {
      h ^= static_cast<std::size_t>(e) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return h;
  }
};

}  // namespace

std::vector<std::vector<Elem>> sg_closure_tuples(
    const std::vector<const FiniteAlgebra*>& coord_algs,
    const std::vector<std::vector<Elem>>& gens, std::size_t cap) {
  const std::size_t m = coord_algs.size();
  for (std::size_t q = 1; q < m; ++q)
    if (!coord_algs[q]->same_signature(*coord_algs[0]))
      throw SignatureMismatch("sg_closure_tuples: signature mismatch");
  std::unordered_set<std::vector<Elem>, TupleHash> seen;
  std::vector<std::vector<Elem>> found;
  for (const auto& g : gens) {
    if (g.size() != m) throw InternalError("sg_closure_tuples: bad tuple arity");
    if (seen.insert(g).second) found.push_back(g);
  }
  std::size_t frontier = 0;
  while (frontier < found.size()) {
    std::size_t round_end = found.size();
    std::vector<std::vector<Elem>> fresh;
    for (std::size_t oi = 0; oi < coord_algs[0]->ops.size(); ++oi) {
      const int k = coord_algs[0]->ops[oi].arity;
      if (k == 0) continue;
      std::vector<std::size_t> pick(k, 0);
      std::vector<Elem> vals(k);
      while (true) {
        bool uses_frontier = false;
        for (int i = 0; i < k; ++i)
          if (pick[i] >= frontier) uses_frontier = true;
        if (uses_frontier) {
          std::vector<Elem> t(m);
          for (std::size_t q = 0; q < m; ++q) {
            for (int i = 0; i < k; ++i) vals[i] = found[pick[i]][q];
            t[q] = coord_algs[q]->ops[oi].apply(vals);
          }
          if (!seen.count(t)) {
            seen.insert(t);
            fresh.push_back(std::move(t));
            if (seen.size() > cap)
              throw CapExceeded(cap, "sg_closure_tuples");
          }
        }
        int pos = k - 1;
        while (pos >= 0 && ++pick[pos] == round_end) pick[pos--] = 0;
        if (pos < 0) break;
      }
    }
    frontier = round_end;
    for (auto& t : fresh) found.push_back(std::move(t));
  }
  std::sort(found.begin(), found.end());
  return found;
}

std::vector<std::pair<Elem, Elem>> qab_relation(const FiniteAlgebra& a, Elem x,
                                                Elem y, std::size_t cap) {
  std::vector<std::vector<Elem>> gens;
  for (Elem e = 0; e < a.size; ++e) gens.push_back({e, e});
  gens.push_back({x, y});
  auto cl = sg_closure_tuples({&a, &a}, gens, cap);
  std::vector<std::pair<Elem, Elem>> out;
  out.reserve(cl.size());
  for (const auto& t : cl) out.push_back({t[0], t[1]});
  // Lemma Qab-tolerance (1): equal to the set of (f(x), f(y)) over unary
  // polynomials.  Cross-checked when the enumeration stays within cap.
  try {
    PolyClosure pc(a, 1, cap);
    std::set<std::pair<Elem, Elem>> images;
    for (const auto& f : pc.tables()) images.insert({f[x], f[y]});
    if (std::set<std::pair<Elem, Elem>>(out.begin(), out.end()) != images)
      throw InternalError("qab_relation: generated subalgebra differs from "
                          "polynomial images");
  } catch (const CapExceeded&) {
    // generation route stands on its own
  }
  return out;
}

UnaryMap extend_polynomial(const SubdirectRelation& r,
                           const std::vector<int>& coords,
                           const PolyClosure& pc, int poly_index) {
  SubdirectRelation proj = r.project(coords);
  if (pc.algebra().size != proj.size())
    throw InternalError("extend_polynomial: closure is not over pr_I R");
  // lexicographically least extension of each pr_I R tuple
  std::vector<Elem> extension(proj.size(), -1);
  for (int t = 0; t < r.size(); ++t) {
    std::vector<Elem> sub(coords.size());
    for (std::size_t j = 0; j < coords.size(); ++j)
      sub[j] = r.tuples[t][coords[j]];
    int pi = proj.index_of(sub);
    if (extension[pi] < 0) extension[pi] = t;  // r.tuples sorted => least
  }
  const ValueClosure& vc = pc.closure();
  UnaryMap out(r.size());
  for (int t = 0; t < r.size(); ++t) {
    std::vector<Elem> seeds;
    seeds.push_back(t);  // the variable
    for (Elem c = 0; c < proj.size(); ++c) seeds.push_back(extension[c]);
    out[t] = vc.eval_with_seeds(poly_index, r.alg, seeds);
  }
  return out;
}

}  // namespace algwb
