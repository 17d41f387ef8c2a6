#include "algwb/clone.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace algwb {

namespace {

// hard ceiling on composition work per closure; exceeding it is reported as
// CapExceeded, never silently truncated
constexpr unsigned long long kComboBudget = 200'000'000ull;

struct VecHash {
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

ValueClosure::ValueClosure(const FiniteAlgebra& sig, int arity,
                           std::vector<EvalCoord> coords, bool with_constants,
                           std::size_t cap)
    : sig_(&sig),
      arity_(arity),
      coords_(std::move(coords)),
      with_constants_(with_constants),
      cap_(cap) {
  if (with_constants_) {
    for (const auto& c : coords_)
      if (c.alg != coords_[0].alg)
        throw InternalError("ValueClosure: constants need a single algebra");
  }
  for (const auto& c : coords_) {
    if (!c.alg->same_signature(*sig_))
      throw SignatureMismatch("ValueClosure: coordinate signature mismatch");
    if (static_cast<int>(c.args.size()) != arity_)
      throw InternalError("ValueClosure: coordinate arity mismatch");
  }
}

void ValueClosure::run() {
  if (ran_) return;
  ran_ = true;
  const std::size_t m = coords_.size();
  std::unordered_map<std::vector<Elem>, int, VecHash> seen;
  auto add = [&](std::vector<Elem> v, Derivation d, bool constant_based) -> bool {
    if (seen.count(v)) return false;
    int id = static_cast<int>(vectors_.size());
    seen.emplace(v, id);
    vectors_.push_back(std::move(v));
    derivs_.push_back(std::move(d));
    has_constant_.push_back(constant_based ? 1 : 0);
    if (vectors_.size() > cap_) throw CapExceeded(cap_, "value closure");
    return true;
  };
  // seeds: projections, then constants
  for (int p = 0; p < arity_; ++p) {
    std::vector<Elem> v(m);
    for (std::size_t q = 0; q < m; ++q) v[q] = coords_[q].args[p];
    Derivation d;
    d.generator = p;
    add(std::move(v), std::move(d), false);
  }
  if (with_constants_ && !coords_.empty()) {
    const int n = coords_[0].alg->size;
    for (Elem c = 0; c < n; ++c) {
      Derivation d;
      d.generator = arity_ + c;
      add(std::vector<Elem>(m, c), std::move(d), true);
    }
  }
  // breadth-first rounds; new vectors of a round sorted lexicographically.
  // Argument combinations are enumerated so that the first frontier index
  // sits at a fixed position: earlier positions range over the old part
  // only, so every combination touching the frontier is visited exactly
  // once and none of the purely-old ones are revisited.
  std::size_t frontier = 0;
  std::vector<Elem> scratch(m);
  std::vector<Elem> vals;
  unsigned long long combos = 0;
  while (frontier < vectors_.size()) {
    const std::size_t round_end = vectors_.size();
    std::vector<std::pair<std::vector<Elem>, Derivation>> fresh;
    std::unordered_set<std::vector<Elem>, VecHash> fresh_seen;
    for (std::size_t oi = 0; oi < sig_->ops.size(); ++oi) {
      const int k = sig_->ops[oi].arity;
      if (k == 0) continue;
      vals.assign(k, 0);
      std::vector<std::size_t> pick(k, 0);
      for (int fpos = 0; fpos < k; ++fpos) {
        if (frontier == round_end) break;  // no old part at all handled below
        // lows/highs per position
        bool empty = false;
        for (int i = 0; i < k; ++i) {
          if (i < fpos) {
            pick[i] = 0;
            if (frontier == 0) empty = true;  // no old elements
          } else if (i == fpos) {
            pick[i] = frontier;
          } else {
            pick[i] = 0;
          }
        }
        if (empty) continue;
        while (true) {
          if (++combos > kComboBudget)
            throw CapExceeded(cap_, "value closure (composition budget)");
          for (std::size_t q = 0; q < m; ++q) {
            for (int i = 0; i < k; ++i) vals[i] = vectors_[pick[i]][q];
            scratch[q] = coords_[q].alg->ops[oi].apply(vals);
          }
          if (!seen.count(scratch) && !fresh_seen.count(scratch)) {
            fresh_seen.insert(scratch);
            Derivation d;
            d.op = static_cast<int>(oi);
            d.children.assign(pick.begin(), pick.end());
            fresh.push_back({scratch, std::move(d)});
            if (vectors_.size() + fresh.size() > cap_)
              throw CapExceeded(cap_, "value closure");
          }
          int pos = k - 1;
          while (pos >= 0) {
            std::size_t hi = pos < fpos ? frontier : round_end;
            std::size_t lo = pos == fpos ? frontier : 0;
            if (++pick[pos] < hi) break;
            pick[pos] = lo;
            --pos;
          }
          if (pos < 0) break;
        }
      }
    }
    std::sort(fresh.begin(), fresh.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    frontier = round_end;
    for (auto& [v, d] : fresh) {
      bool cst = false;
      for (int ch : d.children)
        if (has_constant_[ch]) cst = true;
      add(std::move(v), std::move(d), cst);
    }
  }
}

int ValueClosure::find(const std::vector<Elem>& target) const {
  for (std::size_t i = 0; i < vectors_.size(); ++i)
    if (vectors_[i] == target) return static_cast<int>(i);
  return -1;
}

bool ValueClosure::uses_constants(int i) const { return has_constant_[i]; }

Elem ValueClosure::constant_value(int gen) const {
  return static_cast<Elem>(gen - arity_);
}

Elem ValueClosure::eval_with_seeds(int i, const FiniteAlgebra& m,
                                   const std::vector<Elem>& seed_values) const {
  // collect ancestors
  std::vector<int> stack{i};
  std::vector<char> needed(vectors_.size(), 0);
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    if (needed[x]) continue;
    needed[x] = 1;
    for (int ch : derivs_[x].children) stack.push_back(ch);
  }
  std::vector<Elem> val(vectors_.size(), -1);
  for (std::size_t x = 0; x < vectors_.size(); ++x) {
    if (!needed[x]) continue;
    const Derivation& d = derivs_[x];
    if (d.generator >= 0) {
      if (d.generator >= static_cast<int>(seed_values.size()))
        throw InternalError("eval_with_seeds: missing seed value");
      val[x] = seed_values[d.generator];
    } else {
      std::vector<Elem> args(d.children.size());
      for (std::size_t j = 0; j < d.children.size(); ++j)
        args[j] = val[d.children[j]];
      val[x] = m.ops[d.op].apply(args);
    }
  }
  return val[i];
}

Elem ValueClosure::eval_at(int i, const FiniteAlgebra& m,
                           const std::vector<Elem>& args) const {
  std::vector<Elem> seeds(args.begin(), args.end());
  if (has_constant_[i]) {
    if (coords_.empty() || coords_[0].alg != &m)
      throw InternalError("eval_at: constant-based term on foreign algebra");
    for (Elem c = 0; c < m.size; ++c) seeds.push_back(c);
  }
  return eval_with_seeds(i, m, seeds);
}

OpTable ValueClosure::materialize(int i, const FiniteAlgebra& m) const {
  OpTable t;
  t.name = "w" + std::to_string(i);
  t.arity = arity_;
  t.size = m.size;
  t.table.resize(table_size(m.size, arity_));
  std::vector<Elem> args(arity_);
  for (std::size_t idx = 0; idx < t.table.size(); ++idx) {
    std::size_t rest = idx;
    for (int pos = arity_ - 1; pos >= 0; --pos) {
      args[pos] = static_cast<Elem>(rest % m.size);
      rest /= m.size;
    }
    t.table[idx] = eval_at(i, m, args);
  }
  return t;
}

bool term_exists(const FiniteAlgebra& sig, int arity,
                 const std::vector<EvalCoord>& coords,
                 const std::vector<Elem>& target, std::size_t cap) {
  ValueClosure vc(sig, arity, coords, false, cap);
  vc.run();
  return vc.find(target) >= 0;
}

namespace {

std::vector<EvalCoord> all_points(const FiniteAlgebra& a, int arity) {
  std::vector<EvalCoord> coords;
  coords.reserve(table_size(a.size, arity));
  std::vector<Elem> args(arity);
  const std::size_t total = table_size(a.size, arity);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (int pos = arity - 1; pos >= 0; --pos) {
      args[pos] = static_cast<Elem>(rest % a.size);
      rest /= a.size;
    }
    coords.push_back({&a, args});
  }
  return coords;
}

}  // namespace

PolyClosure::PolyClosure(const FiniteAlgebra& a, int arity, std::size_t cap)
    : alg_(&a), closure_(a, arity, all_points(a, arity), true, cap) {
  closure_.run();
}

UnaryMap compose(const UnaryMap& outer, const UnaryMap& inner) {
  UnaryMap r(inner.size());
  for (std::size_t i = 0; i < inner.size(); ++i) r[i] = outer[inner[i]];
  return r;
}

bool is_idempotent_map(const UnaryMap& f) {
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[f[i]] != f[i]) return false;
  return true;
}

std::vector<Elem> map_image(const UnaryMap& f) {
  std::vector<Elem> img(f);
  std::sort(img.begin(), img.end());
  img.erase(std::unique(img.begin(), img.end()), img.end());
  return img;
}

UnaryMap idempotent_power(const UnaryMap& f) {
  UnaryMap g = f;
  // cycle lengths of a map on n points have lcm well below this guard
  for (std::size_t step = 0; step < 100000; ++step) {
    if (is_idempotent_map(g)) return g;
    g = compose(g, f);
  }
  throw InternalError("idempotent_power: did not stabilise");
}

}  // namespace algwb
