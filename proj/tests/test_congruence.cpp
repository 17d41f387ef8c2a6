#include <algorithm>

#include "algwb/algebra.hpp"
#include "algwb/congruence.hpp"
#include "doctest.h"

using namespace algwb;

TEST_CASE("partition basics") {
  auto p = partition_from_labels({0, 0, 2, 2});
  CHECK(p.block_count() == 2);
  CHECK(p.related(0, 1));
  CHECK(!p.related(1, 2));
  CHECK(partition_equality(4).leq(p));
  CHECK(p.leq(partition_full(4)));
  CHECK(!partition_full(4).leq(p));
}

TEST_CASE("meet and join") {
  auto eta1 = partition_from_labels({0, 0, 2, 2});
  auto eta2 = partition_from_labels({0, 1, 0, 1});
  CHECK(partition_meet(eta1, eta2) == partition_equality(4));
  CHECK(partition_join(eta1, eta2) == partition_full(4));
  auto theta = partition_from_labels({0, 0, 2, 3});
  CHECK(partition_join(theta, partition_equality(4)) == theta);
  CHECK(partition_meet(theta, partition_full(4)) == theta);
}

TEST_CASE("all_partitions bell numbers") {
  CHECK(all_partitions(1).size() == 1);
  CHECK(all_partitions(2).size() == 2);
  CHECK(all_partitions(3).size() == 5);
  CHECK(all_partitions(4).size() == 15);
}

TEST_CASE("cg_closure") {
  CHECK(cg_closure(make_s2(), {{0, 1}}) == partition_full(2));
  CHECK(cg_closure(make_a2(), {}) == partition_equality(2));
  auto sq = direct_product({make_s2(), make_s2()});
  Elem e00 = 0, e01 = 1;
  auto theta = cg_closure(sq, {{e00, e01}});
  // Oracle: least compatible partition containing the pair.  (Blocks
  // {00,01},{10},{11}; closing under meet-translations adds nothing else.)
  Partition least = partition_full(4);
  for (const auto& p : all_partitions(4))
    if (p.related(e00, e01) && is_congruence(sq, p) && p.leq(least)) least = p;
  CHECK(theta == least);
  CHECK(theta == partition_from_labels({0, 0, 2, 3}));
}

TEST_CASE("cg_closure output is a congruence") {
  auto sq = direct_product({make_m2(), make_m2()});
  for (Elem x = 0; x < sq.size; ++x)
    for (Elem y = x + 1; y < sq.size; ++y)
      CHECK(is_congruence(sq, cg_closure(sq, {{x, y}})));
}

TEST_CASE("con_lattice S2") {
  auto lat = con_lattice(make_s2());
  CHECK(lat.congruences.size() == 2);
  CHECK(lat.covers.size() == 1);
}

TEST_CASE("con_lattice A2xA2 is M3 plus bounds") {
  auto z22 = direct_product({make_a2(), make_a2()});
  auto lat = con_lattice(z22);
  CHECK(lat.congruences.size() == 5);
  CHECK(prime_intervals(lat).size() == 6);
  // the skew congruence {(00),(11)},{(01),(10)} appears
  Partition skew = partition_from_labels({0, 1, 1, 0});
  CHECK(lat.index_of(skew) >= 0);
}

TEST_CASE("con_lattice S2xS2 exact by enumeration oracle") {
  auto sq = direct_product({make_s2(), make_s2()});
  auto lat = con_lattice(sq);
  // oracle: test all 15 partitions for compatibility
  std::vector<Partition> oracle;
  for (const auto& p : all_partitions(4))
    if (is_congruence(sq, p)) oracle.push_back(p);
  CHECK(lat.congruences == oracle);
  Partition down = partition_from_labels({0, 0, 2, 3});  // {00,01},{10},{11}
  CHECK(lat.index_of(down) >= 0);
}

TEST_CASE("con_lattice equals oracle on small products") {
  for (const auto& a :
       {direct_product({make_a2(), make_a2()}),
        direct_product({make_m2(), make_m2()}), make_m2(), make_a2()}) {
    auto lat = con_lattice(a);
    std::vector<Partition> oracle;
    for (const auto& p : all_partitions(a.size))
      if (is_congruence(a, p)) oracle.push_back(p);
    CHECK(lat.congruences == oracle);
  }
}

TEST_CASE("prime intervals and covers") {
  auto one = restrict_algebra(make_s2(), {1}).algebra;
  CHECK(prime_intervals(con_lattice(one)).empty());
  auto lat = con_lattice(direct_product({make_a2(), make_a2()}));
  for (const auto& pi : prime_intervals(lat)) {
    CHECK(pi.lower.leq(pi.upper));
    // nothing strictly between
    for (const auto& g : lat.congruences) {
      if (g == pi.lower || g == pi.upper) continue;
      CHECK(!(pi.lower.leq(g) && g.leq(pi.upper)));
    }
  }
}

TEST_CASE("perspectivity") {
  auto z22 = direct_product({make_a2(), make_a2()});
  auto lat = con_lattice(z22);
  Partition zero = partition_equality(4), one = partition_full(4);
  Partition eta1 = partition_from_labels({0, 0, 2, 2});
  Partition eta2 = partition_from_labels({0, 1, 0, 1});
  PrimeInterval i1{zero, eta1}, i2{eta2, one};
  CHECK(is_perspective(i1, i2));
  CHECK(is_perspective(i2, i1));  // symmetric
  PrimeInterval i3{eta1, one};
  CHECK(!is_perspective(i3, i2));
  CHECK(is_perspective(i1, i1));  // reflexive
}
