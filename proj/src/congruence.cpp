#include "algwb/congruence.hpp"

#include <algorithm>
#include <set>

namespace algwb {

namespace {

// Least-representative normal form from a union-find parent vector.
Partition normalize(std::vector<Elem> parent) {
  const int n = static_cast<int>(parent.size());
  std::vector<Elem> lead(n, -1);
  std::vector<Elem> labels(n);
  // path-compress
  for (int i = 0; i < n; ++i) {
    Elem r = i;
    while (parent[r] != r) r = parent[r];
    for (Elem j = i; parent[j] != r;) {
      Elem nx = parent[j];
      parent[j] = r;
      j = nx;
    }
    if (lead[r] < 0) lead[r] = i;  // first (= least) element seen for root r
  }
  for (int i = 0; i < n; ++i) {
    Elem r = i;
    while (parent[r] != r) r = parent[r];
    labels[i] = lead[r];
  }
  return Partition(labels);
}

}  // namespace

int Partition::block_count() const {
  int c = 0;
  for (int i = 0; i < size(); ++i)
    if (labels[i] == i) ++c;
  return c;
}

std::vector<std::vector<Elem>> Partition::blocks() const {
  std::vector<std::vector<Elem>> out;
  std::vector<int> idx(size(), -1);
  for (int i = 0; i < size(); ++i) {
    if (labels[i] == i) {
      idx[i] = static_cast<int>(out.size());
      out.push_back({});
    }
    out[idx[labels[i]]].push_back(i);
  }
  return out;
}

std::vector<Elem> Partition::block_of(Elem x) const {
  std::vector<Elem> out;
  for (int i = 0; i < size(); ++i)
    if (labels[i] == labels[x]) out.push_back(i);
  return out;
}

bool Partition::is_equality() const {
  for (int i = 0; i < size(); ++i)
    if (labels[i] != i) return false;
  return true;
}

bool Partition::is_full() const {
  for (int i = 0; i < size(); ++i)
    if (labels[i] != 0) return false;
  return true;
}

bool Partition::leq(const Partition& other) const {
  for (int i = 0; i < size(); ++i)
    if (other.labels[i] != other.labels[labels[i]]) return false;
  return true;
}

Partition partition_equality(int n) {
  std::vector<Elem> lab(n);
  for (int i = 0; i < n; ++i) lab[i] = i;
  return Partition(lab);
}

Partition partition_full(int n) { return Partition(std::vector<Elem>(n, 0)); }

Partition partition_from_labels(const std::vector<Elem>& raw) {
  const int n = static_cast<int>(raw.size());
  std::vector<Elem> least(n, -1);
  std::vector<Elem> lab(n);
  for (int i = 0; i < n; ++i) {
    Elem r = raw[i];
    if (least[r] < 0) least[r] = i;
    lab[i] = least[r];
  }
  return Partition(lab);
}

Partition partition_from_pairs(int n,
                               const std::vector<std::pair<Elem, Elem>>& ps) {
  std::vector<Elem> parent(n);
  for (int i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](Elem x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (auto [a, b] : ps) {
    Elem ra = find(a), rb = find(b);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }
  return normalize(parent);
}

Partition partition_meet(const Partition& a, const Partition& b) {
  const int n = a.size();
  std::vector<std::pair<Elem, Elem>> key(n);
  for (int i = 0; i < n; ++i) key[i] = {a.labels[i], b.labels[i]};
  std::vector<Elem> lab(n);
  std::vector<Elem> least(n, -1);
  // label by least element with the same key pair
  for (int i = 0; i < n; ++i) {
    int found = -1;
    for (int j = 0; j <= i; ++j)
      if (key[j] == key[i]) {
        found = j;
        break;
      }
    lab[i] = found;
  }
  (void)least;
  return Partition(lab);
}

Partition partition_join(const Partition& a, const Partition& b) {
  const int n = a.size();
  std::vector<std::pair<Elem, Elem>> ps;
  for (int i = 0; i < n; ++i) {
    ps.push_back({i, a.labels[i]});
    ps.push_back({i, b.labels[i]});
  }
  return partition_from_pairs(n, ps);
}

std::vector<Partition> all_partitions(int n) {
  // Restricted-growth strings.
  std::vector<Partition> out;
  std::vector<Elem> rgs(n, 0);
  while (true) {
    out.push_back(partition_from_labels(rgs));
    int pos = n - 1;
    while (pos > 0) {
      Elem maxv = 0;
      for (int i = 0; i < pos; ++i) maxv = std::max(maxv, rgs[i]);
      if (rgs[pos] <= maxv) {
        ++rgs[pos];
        for (int i = pos + 1; i < n; ++i) rgs[i] = 0;
        break;
      }
      --pos;
    }
    if (pos == 0) break;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool is_congruence(const FiniteAlgebra& a, const Partition& p) {
  // Compatibility with every op via one-position translations.
  for (const auto& op : a.ops) {
    const int k = op.arity;
    if (k == 0) continue;
    std::vector<Elem> args(k);
    const std::size_t rest_total = table_size(a.size, k - 1);
    for (int pos = 0; pos < k; ++pos) {
      for (std::size_t rest = 0; rest < rest_total; ++rest) {
        std::size_t r = rest;
        for (int i = k - 1; i >= 0; --i) {
          if (i == pos) continue;
          args[i] = static_cast<Elem>(r % a.size);
          r /= a.size;
        }
        for (Elem x = 0; x < a.size; ++x) {
          Elem y = p.rep(x);
          if (y == x) continue;
          args[pos] = x;
          Elem vx = op.apply(args);
          args[pos] = y;
          Elem vy = op.apply(args);
          if (!p.related(vx, vy)) return false;
        }
      }
    }
  }
  return true;
}

Partition cg_closure(const FiniteAlgebra& a,
                     const std::vector<std::pair<Elem, Elem>>& pairs) {
  const int n = a.size;
  std::vector<Elem> parent(n);
  for (int i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](Elem x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<std::pair<Elem, Elem>> work;
  auto unite = [&](Elem x, Elem y) {
    Elem rx = find(x), ry = find(y);
    if (rx == ry) return;
    parent[std::max(rx, ry)] = std::min(rx, ry);
    work.push_back({x, y});
  };
  for (auto [x, y] : pairs) unite(x, y);
  // Close the merged pairs under all one-position translations.
  while (!work.empty()) {
    auto [x, y] = work.back();
    work.pop_back();
    for (const auto& op : a.ops) {
      const int k = op.arity;
      if (k == 0) continue;
      std::vector<Elem> args(k);
      const std::size_t rest_total = table_size(n, k - 1);
      for (int pos = 0; pos < k; ++pos) {
        for (std::size_t rest = 0; rest < rest_total; ++rest) {
          std::size_t r = rest;
          for (int i = k - 1; i >= 0; --i) {
            if (i == pos) continue;
            args[i] = static_cast<Elem>(r % n);
            r /= n;
          }
          args[pos] = x;
          Elem vx = op.apply(args);
          args[pos] = y;
          Elem vy = op.apply(args);
          if (find(vx) != find(vy)) unite(vx, vy);
        }
      }
    }
  }
  return normalize(parent);
}

int ConLattice::index_of(const Partition& p) const {
  auto it = std::lower_bound(congruences.begin(), congruences.end(), p);
  if (it != congruences.end() && *it == p)
    return static_cast<int>(it - congruences.begin());
  return -1;
}

std::vector<int> ConLattice::lower_covers(int i) const {
  std::vector<int> out;
  for (auto [lo, hi] : covers)
    if (hi == i) out.push_back(lo);
  return out;
}

std::vector<int> ConLattice::upper_covers(int i) const {
  std::vector<int> out;
  for (auto [lo, hi] : covers)
    if (lo == i) out.push_back(hi);
  return out;
}

std::vector<int> ConLattice::atoms() const {
  int zero = -1;
  for (std::size_t i = 0; i < congruences.size(); ++i)
    if (congruences[i].is_equality()) zero = static_cast<int>(i);
  return upper_covers(zero);
}

std::vector<int> ConLattice::coatoms() const {
  int one = -1;
  for (std::size_t i = 0; i < congruences.size(); ++i)
    if (congruences[i].is_full()) one = static_cast<int>(i);
  return lower_covers(one);
}

ConLattice con_lattice(const FiniteAlgebra& a, std::size_t cap) {
  std::set<Partition> cons;
  cons.insert(partition_equality(a.size));
  // principal congruences
  for (Elem x = 0; x < a.size; ++x)
    for (Elem y = x + 1; y < a.size; ++y) cons.insert(cg_closure(a, {{x, y}}));
  // join closure
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<Partition> cur(cons.begin(), cons.end());
    for (std::size_t i = 0; i < cur.size(); ++i)
      for (std::size_t j = i + 1; j < cur.size(); ++j) {
        Partition jn = partition_join(cur[i], cur[j]);
        if (cons.insert(jn).second) {
          grew = true;
          if (cons.size() > cap) throw CapExceeded(cap, "con_lattice");
        }
      }
  }
  ConLattice lat;
  lat.congruences.assign(cons.begin(), cons.end());
  const int m = static_cast<int>(lat.congruences.size());
  // covers by interval-emptiness over the stored list
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      const Partition& lo = lat.congruences[i];
      const Partition& hi = lat.congruences[j];
      if (!(lo.leq(hi)) || lo == hi) continue;
      bool cover = true;
      for (int k = 0; k < m && cover; ++k) {
        if (k == i || k == j) continue;
        const Partition& mid = lat.congruences[k];
        if (lo.leq(mid) && mid.leq(hi)) cover = false;
      }
      if (cover) lat.covers.push_back({i, j});
    }
  std::sort(lat.covers.begin(), lat.covers.end());
  return lat;
}

std::vector<PrimeInterval> prime_intervals(const ConLattice& lat) {
  std::vector<PrimeInterval> out;
  for (auto [lo, hi] : lat.covers)
    out.push_back({lat.congruences[lo], lat.congruences[hi]});
  return out;
}

bool is_prime_interval(const ConLattice& lat, const Partition& alpha,
                       const Partition& beta) {
  int i = lat.index_of(alpha), j = lat.index_of(beta);
  if (i < 0 || j < 0) return false;
  for (auto [lo, hi] : lat.covers)
    if (lo == i && hi == j) return true;
  return false;
}

bool is_perspective(const PrimeInterval& i1, const PrimeInterval& i2) {
  const Partition &al = i1.lower, &be = i1.upper;
  const Partition &gm = i2.lower, &dl = i2.upper;
  bool c1 = partition_join(al, dl) == be && partition_meet(al, dl) == gm;
  bool c2 = partition_join(be, gm) == dl && partition_meet(be, gm) == al;
  return c1 || c2;
}

}  // namespace algwb
