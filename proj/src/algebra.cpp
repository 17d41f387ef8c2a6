#include "algwb/algebra.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

#include "algwb/congruence.hpp"

namespace algwb {

std::size_t table_size(int universe, int arity) {
  std::size_t s = 1;
  for (int i = 0; i < arity; ++i) s *= static_cast<std::size_t>(universe);
  return s;
}

Elem OpTable::apply(const std::vector<Elem>& args) const {
  std::size_t idx = 0;
  for (Elem a : args) idx = idx * static_cast<std::size_t>(size) + a;
  return table[idx];
}

bool OpTable::is_idempotent() const {
  std::vector<Elem> args(arity);
  for (Elem a = 0; a < size; ++a) {
    std::fill(args.begin(), args.end(), a);
    if (arity == 0) {
      if (table[0] != a) return false;  // only for size 1
      continue;
    }
    if (apply(args) != a) return false;
  }
  return true;
}

bool OpTable::is_projection() const {
  const std::size_t total = table.size();
  for (int p = 0; p < arity; ++p) {
    bool ok = true;
    for (std::size_t idx = 0; idx < total && ok; ++idx) {
      std::size_t rest = idx;
      Elem arg = 0;
      for (int pos = arity - 1; pos >= 0; --pos) {
        Elem v = static_cast<Elem>(rest % size);
        rest /= size;
        if (pos == p) arg = v;
      }
      ok = table[idx] == arg;
    }
    if (ok) return true;
  }
  return false;
}

bool FiniteAlgebra::is_idempotent() const {
  for (const auto& op : ops)
    if (!op.is_idempotent()) return false;
  return true;
}

void FiniteAlgebra::validate(bool allow_non_idempotent) const {
  if (size <= 0) throw RangeError("algebra '" + name + "': size must be positive");
  std::set<std::string> seen;
  for (const auto& op : ops) {
    if (!seen.insert(op.name).second)
      throw SyntaxError("algebra '" + name + "': duplicate op name '" + op.name + "'");
    if (op.arity < 0) throw RangeError("op '" + op.name + "': negative arity");
    if (op.size != size)
      throw InternalError("op '" + op.name + "': universe size mismatch");
    if (op.table.size() != table_size(size, op.arity))
      throw SyntaxError("op '" + op.name + "': table length " +
                        std::to_string(op.table.size()) + ", expected " +
                        std::to_string(table_size(size, op.arity)));
    for (Elem e : op.table)
      if (e < 0 || e >= size)
        throw RangeError("op '" + op.name + "': entry " + std::to_string(e) +
                         " outside 0.." + std::to_string(size - 1));
  }
  if (!allow_non_idempotent && !is_idempotent())
    throw NotIdempotent("algebra '" + name + "' is not idempotent");
}

std::vector<int> FiniteAlgebra::arities() const {
  std::vector<int> r;
  r.reserve(ops.size());
  for (const auto& op : ops) r.push_back(op.arity);
  return r;
}

bool FiniteAlgebra::same_signature(const FiniteAlgebra& other) const {
  return arities() == other.arities();
}

bool FiniteAlgebra::same_tables(const FiniteAlgebra& other) const {
  if (size != other.size || ops.size() != other.ops.size()) return false;
  for (std::size_t i = 0; i < ops.size(); ++i)
    if (!(ops[i] == other.ops[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------

std::vector<Elem> sg_closure(const FiniteAlgebra& a,
                             const std::vector<Elem>& gens) {
  std::vector<char> in(a.size, 0);
  std::vector<Elem> members;
  for (Elem g : gens) {
    if (g < 0 || g >= a.size) throw RangeError("sg_closure: generator out of range");
    if (!in[g]) {
      in[g] = 1;
      members.push_back(g);
    }
  }
  // Worklist over argument tuples drawn from the current set.
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& op : a.ops) {
      if (op.arity == 0) continue;
      std::vector<std::size_t> pick(op.arity, 0);
      const std::size_t m = members.size();
      std::vector<Elem> args(op.arity);
      while (true) {
        for (int i = 0; i < op.arity; ++i) args[i] = members[pick[i]];
        Elem v = op.apply(args);
        if (!in[v]) {
          in[v] = 1;
          members.push_back(v);
          grew = true;
        }
        int pos = op.arity - 1;
        while (pos >= 0 && ++pick[pos] == m) pick[pos--] = 0;
        if (pos < 0) break;
      }
    }
  }
  std::sort(members.begin(), members.end());
  return members;
}

QuotientResult quotient(const FiniteAlgebra& a, const Partition& theta) {
  if (theta.size() != a.size)
    throw RangeError("quotient: partition size mismatch");
  if (!is_congruence(a, theta))
    throw NotACongruence("quotient: partition is not a congruence of '" +
                         a.name + "'");
  QuotientResult res;
  // Dense renumbering by least representative.
  std::vector<Elem> reps;
  for (Elem x = 0; x < a.size; ++x)
    if (theta.rep(x) == x) reps.push_back(x);
  res.representative = reps;
  res.block_of.assign(a.size, -1);
  for (Elem x = 0; x < a.size; ++x) {
    auto it = std::lower_bound(reps.begin(), reps.end(), theta.rep(x));
    res.block_of[x] = static_cast<Elem>(it - reps.begin());
  }
  FiniteAlgebra q;
  q.name = a.name + "/theta";
  q.size = static_cast<int>(reps.size());
  for (const auto& op : a.ops) {
    OpTable t;
    t.name = op.name;
    t.arity = op.arity;
    t.size = q.size;
    t.table.resize(table_size(q.size, op.arity));
    std::vector<Elem> args(op.arity);
    const std::size_t total = t.table.size();
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::size_t rest = idx;
      for (int pos = op.arity - 1; pos >= 0; --pos) {
        args[pos] = reps[rest % q.size];
        rest /= q.size;
      }
      t.table[idx] = res.block_of[op.arity == 0 ? op.table[0] : op.apply(args)];
    }
    q.ops.push_back(std::move(t));
  }
  res.algebra = std::move(q);
  return res;
}

RestrictResult restrict_algebra(const FiniteAlgebra& a,
                                const std::vector<Elem>& subuniverse) {
  std::vector<Elem> s = subuniverse;
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  if (sg_closure(a, s) != s)
    throw NotClosed("restrict: set is not a subuniverse of '" + a.name + "'");
  RestrictResult res;
  res.elements = s;
  res.index_of.assign(a.size, -1);
  for (std::size_t i = 0; i < s.size(); ++i) res.index_of[s[i]] = static_cast<Elem>(i);
  FiniteAlgebra b;
  b.name = a.name + "|S";
  b.size = static_cast<int>(s.size());
  for (const auto& op : a.ops) {
    OpTable t;
    t.name = op.name;
    t.arity = op.arity;
    t.size = b.size;
    t.table.resize(table_size(b.size, op.arity));
    std::vector<Elem> args(op.arity);
    for (std::size_t idx = 0; idx < t.table.size(); ++idx) {
      std::size_t rest = idx;
      for (int pos = op.arity - 1; pos >= 0; --pos) {
        args[pos] = s[rest % b.size];
        rest /= b.size;
      }
      t.table[idx] = res.index_of[op.arity == 0 ? op.table[0] : op.apply(args)];
    }
    b.ops.push_back(std::move(t));
  }
  res.algebra = std::move(b);
  return res;
}

std::vector<Elem> product_decode(Elem code, const std::vector<int>& sizes) {
  std::vector<Elem> t(sizes.size());
  for (int i = static_cast<int>(sizes.size()) - 1; i >= 0; --i) {
    t[i] = code % sizes[i];
    code /= sizes[i];
  }
  return t;
}

Elem product_encode(const std::vector<Elem>& tuple,
                    const std::vector<int>& sizes) {
  Elem code = 0;
  for (std::size_t i = 0; i < sizes.size(); ++i)
    code = code * sizes[i] + tuple[i];
  return code;
}

FiniteAlgebra direct_product(const std::vector<FiniteAlgebra>& factors) {
  if (factors.empty()) throw RangeError("direct_product: no factors");
  for (const auto& f : factors)
    if (!f.same_signature(factors[0]))
      throw SignatureMismatch("direct_product: factors differ in signature");
  std::vector<int> sizes;
  std::size_t total = 1;
  std::string nm;
  for (const auto& f : factors) {
    sizes.push_back(f.size);
    total *= static_cast<std::size_t>(f.size);
    if (!nm.empty()) nm += "x";
    nm += f.name;
  }
  FiniteAlgebra p;
  p.name = nm;
  p.size = static_cast<int>(total);
  for (std::size_t oi = 0; oi < factors[0].ops.size(); ++oi) {
    const int k = factors[0].ops[oi].arity;
    OpTable t;
    t.name = factors[0].ops[oi].name;
    t.arity = k;
    t.size = p.size;
    t.table.resize(table_size(p.size, k));
    std::vector<std::vector<Elem>> argt(k);
    std::vector<Elem> res(factors.size());
    std::vector<Elem> cargs(k);
    for (std::size_t idx = 0; idx < t.table.size(); ++idx) {
      std::size_t rest = idx;
      std::vector<Elem> codes(k);
      for (int pos = k - 1; pos >= 0; --pos) {
        codes[pos] = static_cast<Elem>(rest % p.size);
        rest /= p.size;
      }
      for (int pos = 0; pos < k; ++pos) argt[pos] = product_decode(codes[pos], sizes);
      for (std::size_t fi = 0; fi < factors.size(); ++fi) {
        for (int pos = 0; pos < k; ++pos) cargs[pos] = argt[pos][fi];
        res[fi] = k == 0 ? factors[fi].ops[oi].table[0]
                         : factors[fi].ops[oi].apply(cargs);
      }
      t.table[idx] = product_encode(res, sizes);
    }
    p.ops.push_back(std::move(t));
  }
  return p;
}

// ---------------------------------------------------------------------------

namespace {

struct TableHash {
  std::size_t operator()(const std::vector<Elem>& v) const {
    std::size_t h = 1469598103934665603ull;
    for (Elem e : v) {
      h ^= static_cast<std::size_t>(e) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return h;
  }
};

std::vector<Elem> projection_table(int n, int k, int coord) {
  std::vector<Elem> t(table_size(n, k));
  for (std::size_t idx = 0; idx < t.size(); ++idx) {
    std::size_t rest = idx;
    Elem arg = 0;
    for (int pos = k - 1; pos >= 0; --pos) {
      Elem v = static_cast<Elem>(rest % n);
      rest /= n;
      if (pos == coord) arg = v;
    }
    t[idx] = arg;
  }
  return t;
}

}  // namespace

std::vector<OpTable> term_clone(const FiniteAlgebra& a, int k,
                                std::size_t cap) {
  if (k < 1) throw RangeError("term_clone: arity must be >= 1");
  const int n = a.size;
  std::vector<std::vector<Elem>> found;
  std::unordered_set<std::vector<Elem>, TableHash> seen;
  for (int c = 0; c < k; ++c) {
    auto t = projection_table(n, k, c);
    if (seen.insert(t).second) found.push_back(std::move(t));
  }
  std::size_t frontier_start = 0;
  while (frontier_start < found.size()) {
    std::size_t round_end = found.size();
    std::vector<std::vector<Elem>> fresh;
    for (const auto& op : a.ops) {
      const int m = op.arity;
      if (m == 0) continue;
      std::vector<std::size_t> pick(m, 0);
      while (true) {
        // At least one argument from the current frontier keeps rounds
        // breadth-first.
        bool uses_frontier = false;
        for (int i = 0; i < m; ++i)
          if (pick[i] >= frontier_start) uses_frontier = true;
        if (uses_frontier) {
          std::vector<Elem> t(found[0].size());
          std::vector<Elem> args(m);
          for (std::size_t idx = 0; idx < t.size(); ++idx) {
            for (int i = 0; i < m; ++i) args[i] = found[pick[i]][idx];
            t[idx] = op.apply(args);
          }
          if (!seen.count(t)) {
            seen.insert(t);
            fresh.push_back(std::move(t));
            if (seen.size() > cap)
              throw CapExceeded(cap, "term_clone of '" + a.name + "'");
          }
        }
        int pos = m - 1;
        while (pos >= 0 && ++pick[pos] == round_end) pick[pos--] = 0;
        if (pos < 0) break;
      }
    }
    std::sort(fresh.begin(), fresh.end());
    frontier_start = round_end;
    for (auto& t : fresh) found.push_back(std::move(t));
  }
  std::vector<OpTable> out;
  out.reserve(found.size());
  for (std::size_t i = 0; i < found.size(); ++i) {
    OpTable t;
    t.name = "t" + std::to_string(i);
    t.arity = k;
    t.size = n;
    t.table = std::move(found[i]);
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<std::vector<Elem>> all_subuniverses(const FiniteAlgebra& a,
                                                std::size_t cap) {
  std::set<std::vector<Elem>> seen;
  std::vector<std::vector<Elem>> work;
  for (Elem x = 0; x < a.size; ++x) {
    auto s = sg_closure(a, {x});
    if (seen.insert(s).second) work.push_back(s);
  }
  for (std::size_t w = 0; w < work.size(); ++w) {
    auto base = work[w];  // copy: work may reallocate
    for (Elem x = 0; x < a.size; ++x) {
      if (std::binary_search(base.begin(), base.end(), x)) continue;
      auto withx = base;
      withx.push_back(x);
      auto s = sg_closure(a, withx);
      if (seen.insert(s).second) {
        work.push_back(s);
        if (seen.size() > cap)
          throw CapExceeded(cap, "subuniverses of '" + a.name + "'");
      }
    }
  }
  std::vector<std::vector<Elem>> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    if (x.size() != y.size()) return x.size() < y.size();
    return x < y;
  });
  return out;
}

std::pair<std::vector<Elem>, std::vector<Elem>> canonical_table_key_perm(
    const FiniteAlgebra& a) {
  const int n = a.size;
  std::vector<Elem> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Elem> best, best_perm;
  std::vector<Elem> inv(n);
  do {
    for (int i = 0; i < n; ++i) inv[perm[i]] = i;
    std::vector<Elem> key;
    std::vector<Elem> args;
    for (const auto& op : a.ops) {
      args.assign(op.arity, 0);
      const std::size_t total = op.table.size();
      for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rest = idx;
        for (int pos = op.arity - 1; pos >= 0; --pos) {
          args[pos] = inv[rest % n];  // argument idx in new labels -> old
          rest /= n;
        }
        key.push_back(perm[op.arity == 0 ? op.table[0] : op.apply(args)]);
      }
    }
    if (best.empty() || key < best) {
      best = std::move(key);
      best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return {best, best_perm};
}

std::vector<Elem> canonical_table_key(const FiniteAlgebra& a) {
  return canonical_table_key_perm(a).first;
}

namespace {

std::vector<Elem> dedup_key(const FiniteAlgebra& a) {
  // Exact canonical form is factorial in the size; beyond 6 fall back to the
  // identity labelling (duplicates are then only a mild inefficiency for the
  // class-wide quantifications).
  std::vector<Elem> key;
  key.push_back(a.size);
  for (int ar : a.arities()) key.push_back(ar);
  std::vector<Elem> body;
  if (a.size <= 6) {
    body = canonical_table_key(a);
  } else {
    for (const auto& op : a.ops)
      body.insert(body.end(), op.table.begin(), op.table.end());
  }
  key.insert(key.end(), body.begin(), body.end());
  return key;
}

}  // namespace

AlgebraClass hs_class(const FiniteAlgebra& a, std::size_t cap) {
  return hs_class(std::vector<FiniteAlgebra>{a}, cap);
}

AlgebraClass hs_class(const std::vector<FiniteAlgebra>& generators,
                      std::size_t cap) {
  std::map<std::vector<Elem>, FiniteAlgebra> pool;
  std::size_t counter = 0;
  for (const auto& g : generators) {
    if (!g.same_signature(generators[0]))
      throw SignatureMismatch("hs_class: generators differ in signature");
    for (const auto& sub : all_subuniverses(g, cap)) {
      auto r = restrict_algebra(g, sub);
      auto lat = con_lattice(r.algebra, cap);
      for (const auto& theta : lat.congruences) {
        auto q = quotient(r.algebra, theta);
        q.algebra.name = g.name + "#" + std::to_string(counter++);
        auto key = dedup_key(q.algebra);
        if (!pool.count(key)) {
          pool.emplace(std::move(key), std::move(q.algebra));
          if (pool.size() > cap) throw CapExceeded(cap, "hs_class");
        }
      }
    }
  }
  AlgebraClass cls;
  for (auto& [k, alg] : pool) cls.members.push_back(std::move(alg));
  // Stable, deterministic member order: by (size, key) which is the map order.
  for (std::size_t i = 0; i < cls.members.size(); ++i)
    cls.members[i].name = "C" + std::to_string(i);
  return cls;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

struct Tokenizer {
  std::vector<std::string> toks;
  std::size_t pos = 0;

  explicit Tokenizer(const std::string& text) {
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      std::istringstream ls(line);
      std::string t;
      while (ls >> t) toks.push_back(t);
    }
  }
  bool done() const { return pos >= toks.size(); }
  std::string next(const char* what) {
    if (done()) throw SyntaxError(std::string("unexpected end of input, expected ") + what);
    return toks[pos++];
  }
  long next_int(const char* what) {
    std::string t = next(what);
    try {
      std::size_t used = 0;
      long v = std::stol(t, &used);
      if (used != t.size()) throw std::invalid_argument(t);
      return v;
    } catch (const std::exception&) {
      throw SyntaxError(std::string("expected integer for ") + what + ", got '" + t + "'");
    }
  }
};

}  // namespace

FiniteAlgebra parse_algebra(const std::string& text,
                            bool allow_non_idempotent) {
  Tokenizer tk(text);
  if (tk.next("'algebra'") != "algebra")
    throw SyntaxError("algebra file must start with 'algebra <name>'");
  FiniteAlgebra a;
  a.name = tk.next("algebra name");
  if (tk.next("'size'") != "size") throw SyntaxError("expected 'size <n>'");
  long n = tk.next_int("size");
  if (n <= 0) throw RangeError("size must be positive");
  a.size = static_cast<int>(n);
  while (true) {
    std::string kw = tk.next("'op' or 'end'");
    if (kw == "end") break;
    if (kw != "op") throw SyntaxError("expected 'op' or 'end', got '" + kw + "'");
    OpTable t;
    t.name = tk.next("op name");
    long ar = tk.next_int("arity");
    if (ar < 0) throw RangeError("negative arity");
    t.arity = static_cast<int>(ar);
    t.size = a.size;
    std::size_t len = table_size(a.size, t.arity);
    t.table.reserve(len);
    for (std::size_t i = 0; i < len; ++i) {
      long v = tk.next_int("table entry");
      if (v < 0 || v >= n)
        throw RangeError("op '" + t.name + "': entry " + std::to_string(v) +
                         " outside 0.." + std::to_string(n - 1));
      t.table.push_back(static_cast<Elem>(v));
    }
    a.ops.push_back(std::move(t));
  }
  a.validate(allow_non_idempotent);
  return a;
}

std::string print_algebra(const FiniteAlgebra& a) {
  std::ostringstream os;
  os << "algebra " << a.name << "\n";
  os << "size " << a.size << "\n";
  for (const auto& op : a.ops) {
    os << "op " << op.name << " " << op.arity << "\n";
    std::size_t row = table_size(a.size, std::max(0, op.arity - 1));
    for (std::size_t i = 0; i < op.table.size(); ++i) {
      os << op.table[i];
      os << ((i + 1) % row == 0 ? '\n' : ' ');
    }
    if (op.table.empty()) os << "\n";
  }
  os << "end\n";
  return os.str();
}

FiniteAlgebra make_s2() {
  FiniteAlgebra a;
  a.name = "S2";
  a.size = 2;
  a.ops.push_back({"meet", 2, 2, {0, 0, 0, 1}});
  return a;
}

FiniteAlgebra make_a2() {
  FiniteAlgebra a;
  a.name = "A2";
  a.size = 2;
  // x + y + z mod 2, last argument fastest
  a.ops.push_back({"mal", 3, 2, {0, 1, 1, 0, 1, 0, 0, 1}});
  return a;
}

FiniteAlgebra make_m2() {
  FiniteAlgebra a;
  a.name = "M2";
  a.size = 2;
  a.ops.push_back({"maj", 3, 2, {0, 0, 0, 1, 0, 1, 1, 1}});
  return a;
}

FiniteAlgebra make_set2() {
  FiniteAlgebra a;
  a.name = "Set2";
  a.size = 2;
  return a;
}

}  // namespace algwb
