// Shared plumbing for the statement checkers (internal header).
#pragma once

#include <functional>
#include <map>
#include <sstream>

#include "algwb/harness.hpp"
#include "algwb/polynomials.hpp"
#include "algwb/tct.hpp"

namespace algwb::registry_detail {

inline bool collapses(const UnaryMap& f, const Partition& theta,
                      const Partition& psi) {
  const int n = static_cast<int>(f.size());
  for (Elem x = 0; x < n; ++x)
    for (Elem y = x + 1; y < n; ++y)
      if (theta.related(x, y) && !psi.related(f[x], f[y])) return false;
  return true;
}

// Accumulates quantified checking: "holds" only when at least one
// hypothesis-met case was examined and none failed.
struct Acc {
  int met = 0;
  Outcome out = Outcome::hypothesis_not_met;
  std::string detail;

  bool failed() const { return out == Outcome::violated; }
  void meet() {
    ++met;
    if (out == Outcome::hypothesis_not_met) out = Outcome::holds;
  }
  void fail(std::string d) {
    if (out != Outcome::violated) {
      out = Outcome::violated;
      detail = std::move(d);
    }
  }
  void undecided(std::string d) {
    if (out == Outcome::holds || out == Outcome::hypothesis_not_met) {
      out = Outcome::inconclusive;
      if (detail.empty()) detail = std::move(d);
    }
  }
  void check(bool ok, const std::string& d) {
    meet();
    if (!ok) fail(d);
  }
};

using Checker = std::function<void(const Instance&, Acc&, std::size_t)>;

inline const FiniteAlgebra& need_algebra(const Instance& inst) {
  if (!inst.algebra) throw RangeError("this lemma checker needs an algebra");
  return *inst.algebra;
}

inline std::vector<SubdirectRelation> relations_of(const Instance& inst,
                                                   std::size_t cap) {
  (void)cap;
  if (inst.relation) return {*inst.relation};
  const FiniteAlgebra& a = need_algebra(inst);
  return {eq_relation(a), full_square(a)};
}

inline std::string pair_str(Elem a, Elem b) {
  return "(" + std::to_string(a) + "," + std::to_string(b) + ")";
}

inline std::string interval_str(const PrimeInterval& pi) {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < pi.lower.size(); ++i)
    os << (i ? " " : "") << pi.lower.labels[i];
  os << " < ";
  for (int i = 0; i < pi.upper.size(); ++i)
    os << (i ? " " : "") << pi.upper.labels[i];
  os << "]";
  return os.str();
}

const std::map<std::string, Checker>& part2_checkers();

}  // namespace algwb::registry_detail
