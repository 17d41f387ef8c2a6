#include <algorithm>
#include <set>

#include "algwb/polynomials.hpp"
#include "algwb/tct.hpp"
#include "doctest.h"

using namespace algwb;

namespace {
Partition zero2() { return partition_equality(2); }
Partition one2() { return partition_full(2); }
}  // namespace

TEST_CASE("is_prime_pair") {
  CHECK(is_prime_pair(make_s2(), zero2(), one2()));
  auto z22 = direct_product({make_a2(), make_a2()});
  Partition eta1 = partition_from_labels({0, 0, 2, 2});
  CHECK(is_prime_pair(z22, partition_equality(4), eta1));
  CHECK(is_prime_pair(z22, eta1, partition_full(4)));
  CHECK(!is_prime_pair(z22, partition_equality(4), partition_full(4)));
}

TEST_CASE("minimal sets at desk scale") {
  auto ms = minimal_sets(make_s2(), zero2(), one2());
  REQUIRE(ms.size() == 1);
  CHECK(ms[0].elements == std::vector<Elem>{0, 1});
  CHECK(is_idempotent_map(ms[0].witness));

  auto ma = minimal_sets(make_a2(), zero2(), one2());
  REQUIRE(ma.size() == 1);
  CHECK(ma[0].elements == std::vector<Elem>{0, 1});

  CHECK_THROWS_AS(
      minimal_sets(direct_product({make_a2(), make_a2()}),
                   partition_equality(4), partition_full(4)),
      NotPrime);
}

TEST_CASE("minimal sets of A2xA2 above eta1") {
  auto z22 = direct_product({make_a2(), make_a2()});
  Partition eta1 = partition_from_labels({0, 0, 2, 2});
  auto ms = minimal_sets(z22, eta1, partition_full(4));
  // pol1 of the idempotent reduct of Z2^2 consists of translations and
  // constants, so the only non-collapsing images are the whole universe
  REQUIRE(ms.size() == 1);
  CHECK(ms[0].elements == std::vector<Elem>{0, 1, 2, 3});
}

TEST_CASE("trace structure and types of the fixtures") {
  auto s = minimal_sets(make_s2(), zero2(), one2());
  auto ts = trace_structure(make_s2(), zero2(), one2(), s[0]);
  CHECK(ts.traces == std::vector<std::vector<Elem>>{{0, 1}});
  CHECK(ts.subtraces == std::vector<std::pair<Elem, Elem>>{{0, 1}});
  CHECK(ts.type_label == 5);

  auto a = minimal_sets(make_a2(), zero2(), one2());
  CHECK(trace_structure(make_a2(), zero2(), one2(), a[0]).type_label == 2);

  auto m = minimal_sets(make_m2(), zero2(), one2());
  CHECK(trace_structure(make_m2(), zero2(), one2(), m[0]).type_label == 4);
}

TEST_CASE("interval_type acceptance triple") {
  CHECK(interval_type(make_s2(), zero2(), one2()) == 5);
  CHECK(interval_type(make_a2(), zero2(), one2()) == 2);
  CHECK(interval_type(make_m2(), zero2(), one2()) == 4);
}

TEST_CASE("interval types in A2xA2") {
  auto z22 = direct_product({make_a2(), make_a2()});
  Partition eta1 = partition_from_labels({0, 0, 2, 2});
  CHECK(interval_type(z22, partition_equality(4), eta1) == 2);
  CHECK(interval_type(z22, eta1, partition_full(4)) == 2);
}

TEST_CASE("type-1 labelling supports rejection") {
  CHECK(interval_type(make_set2(), zero2(), one2()) == 1);
}

TEST_CASE("pseudo meet and join") {
  auto s = minimal_sets(make_s2(), zero2(), one2());
  auto pm = pseudo_meet_join(make_s2(), zero2(), one2(), s[0]);
  CHECK(pm.one == 1);
  CHECK(pm.p == make_s2().ops[0].table);  // the meet itself
  CHECK(!pm.q.has_value());               // type 5

  auto m = minimal_sets(make_m2(), zero2(), one2());
  auto pmm = pseudo_meet_join(make_m2(), zero2(), one2(), m[0]);
  CHECK(pmm.one == 1);
  REQUIRE(pmm.q.has_value());
  // p = maj(x,y,0) = meet, q = maj(x,y,1) = join
  CHECK(pmm.p == std::vector<Elem>{0, 0, 0, 1});
  CHECK(*pmm.q == std::vector<Elem>{0, 1, 1, 1});

  auto a = minimal_sets(make_a2(), zero2(), one2());
  CHECK_THROWS_AS(pseudo_meet_join(make_a2(), zero2(), one2(), a[0]),
                  TypeMismatch);
}

TEST_CASE("z_set") {
  CHECK(z_set(make_s2(), zero2(), one2()) == std::vector<Elem>{0, 1});
  CHECK(z_set(make_a2(), zero2(), one2()) == std::vector<Elem>{0, 1});
  auto z22 = direct_product({make_a2(), make_a2()});
  Partition eta1 = partition_from_labels({0, 0, 2, 2});
  CHECK(z_set(z22, partition_equality(4), eta1) ==
        std::vector<Elem>{0, 1, 2, 3});
}

TEST_CASE("Lemma minimal-sets(5): beta from subtrace images") {
  // beta = symmetric-transitive closure of alpha + polynomial images of one
  // subtrace pair
  for (const auto& alg : {make_s2(), make_a2(), make_m2()}) {
    auto ms = minimal_sets(alg, zero2(), one2());
    auto ts = trace_structure(alg, zero2(), one2(), ms[0]);
    PolyClosure pc(alg, 1);
    for (auto [x, y] : ts.subtraces) {
      std::vector<std::pair<Elem, Elem>> pairs;
      for (const auto& f : pc.tables()) pairs.push_back({f[x], f[y]});
      auto closure = partition_from_pairs(alg.size, pairs);
      CHECK(closure == one2());
    }
  }
}

TEST_CASE("induced quotient clone on the S2 trace") {
  auto iq = induced_quotient_clone(make_s2(), zero2(), {0, 1}, 2);
  CHECK(iq.size == 2);
  bool meet = false, join = false;
  for (const auto& t : iq.tables) {
    if (t == std::vector<Elem>{0, 0, 0, 1}) meet = true;
    if (t == std::vector<Elem>{0, 1, 1, 1}) join = true;
  }
  CHECK(meet);
  CHECK(!join);
}
