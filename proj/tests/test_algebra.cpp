#include <algorithm>

#include "algwb/algebra.hpp"
#include "algwb/congruence.hpp"
#include "doctest.h"

using namespace algwb;

TEST_CASE("parse fixtures") {
  auto s2 = parse_algebra("algebra S2\nsize 2\nop meet 2\n0 0 0 1\nend\n");
  CHECK(s2.size == 2);
  CHECK(s2.ops.size() == 1);
  CHECK(s2.is_idempotent());
  CHECK(s2.same_tables(make_s2()));

  auto a2 = parse_algebra(
      "algebra A2\nsize 2\nop mal 3\n# x+y+z mod 2\n0 1 1 0 1 0 0 1\nend\n");
  CHECK(a2.same_tables(make_a2()));
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_algebra("algebra X\nsize 2\nop f 1\n0 2\nend\n"),
                  RangeError);
  CHECK_THROWS_AS(parse_algebra("algebra X\nsize 2\nop f 1\n0\nend\n"),
                  SyntaxError);
  // non-idempotent rejected unless overridden
  std::string neg = "algebra X\nsize 2\nop f 1\n1 0\nend\n";
  CHECK_THROWS_AS(parse_algebra(neg), NotIdempotent);
  CHECK_NOTHROW(parse_algebra(neg, true));
}

TEST_CASE("print/parse round-trip") {
  for (const auto& a : {make_s2(), make_a2(), make_m2()}) {
    auto b = parse_algebra(print_algebra(a));
    CHECK(b.same_tables(a));
    CHECK(b.name == a.name);
  }
}

TEST_CASE("sg_closure") {
  auto s2 = make_s2();
  CHECK(sg_closure(s2, {0}) == std::vector<Elem>{0});
  auto sq = direct_product({s2, s2});
  // {(0,1),(1,0)} closes to {(0,0),(0,1),(1,0)} under meet
  Elem e01 = product_encode({0, 1}, {2, 2});
  Elem e10 = product_encode({1, 0}, {2, 2});
  Elem e00 = product_encode({0, 0}, {2, 2});
  auto cl = sg_closure(sq, {e01, e10});
  std::vector<Elem> want{e00, e01, e10};
  std::sort(want.begin(), want.end());
  CHECK(cl == want);
  auto a2 = make_a2();
  CHECK(sg_closure(a2, {0, 1}) == std::vector<Elem>{0, 1});
}

TEST_CASE("sg_closure is a closure operator") {
  auto sq = direct_product({make_m2(), make_m2()});
  // spot-check monotone + idempotent + extensive on all singleton/pair seeds
  for (Elem x = 0; x < sq.size; ++x)
    for (Elem y = x; y < sq.size; ++y) {
      auto c = sg_closure(sq, {x, y});
      CHECK(std::binary_search(c.begin(), c.end(), x));
      CHECK(sg_closure(sq, c) == c);
    }
}

TEST_CASE("quotient") {
  auto s2 = make_s2();
  auto q1 = quotient(s2, partition_full(2));
  CHECK(q1.algebra.size == 1);
  auto q2 = quotient(s2, partition_equality(2));
  CHECK(q2.algebra.same_tables(s2));

  auto sq = direct_product({make_s2(), make_s2()});
  // kernel of first projection: blocks {00,01},{10,11}
  Partition eta1 = partition_from_labels({0, 0, 2, 2});
  auto q = quotient(sq, eta1);
  CHECK(q.algebra.size == 2);
  CHECK(q.algebra.ops[0].table == make_s2().ops[0].table);

  // a non-congruence partition of S2xS2: {00,11},{01},{10}
  Partition bad = partition_from_labels({0, 1, 2, 0});
  CHECK_THROWS_AS(quotient(sq, bad), NotACongruence);
}

TEST_CASE("restrict") {
  auto s2 = make_s2();
  auto r1 = restrict_algebra(s2, {1});
  CHECK(r1.algebra.size == 1);
  auto sq = direct_product({s2, s2});
  Elem e00 = 0, e01 = 1, e11 = 3;
  auto chain = restrict_algebra(sq, {e00, e01, e11});
  CHECK(chain.algebra.size == 3);
  // still a meet-semilattice chain: meet(1,2) = 1 means c ^ top layout kept
  CHECK(chain.algebra.ops[0].apply2(0, 2) == 0);
  CHECK(chain.algebra.ops[0].apply2(1, 2) == 1);
  Elem e10 = 2;
  CHECK_THROWS_AS(restrict_algebra(sq, {e01, e10}), NotClosed);
}

TEST_CASE("direct_product") {
  auto p = direct_product({make_s2(), make_s2()});
  CHECK(p.size == 4);
  CHECK(p.ops[0].apply2(1, 2) == 0);  // (0,1) meet (1,0) = (0,0)
  CHECK_THROWS_AS(direct_product({make_s2(), make_a2()}), SignatureMismatch);
  auto z22 = direct_product({make_a2(), make_a2()});
  CHECK(z22.size == 4);
  // (0,1) - (1,1) + (1,0) = (0,0)
  CHECK(z22.ops[0].apply3(1, 3, 2) == 0);
}

TEST_CASE("term_clone") {
  auto ts = term_clone(make_s2(), 2);
  // pi1, pi2, meet
  CHECK(ts.size() == 3);
  bool has_meet = false;
  for (const auto& t : ts) has_meet |= t.table == std::vector<Elem>{0, 0, 0, 1};
  CHECK(has_meet);

  auto t1 = term_clone(make_a2(), 1);
  CHECK(t1.size() == 1);
  CHECK(t1[0].table == std::vector<Elem>{0, 1});

  auto tm = term_clone(make_m2(), 3);
  bool has_maj = false;
  for (const auto& t : tm) has_maj |= t.table == make_m2().ops[0].table;
  CHECK(has_maj);
  CHECK(tm.size() >= 4);  // three projections + maj at least

  CHECK_THROWS_AS(term_clone(make_m2(), 3, 2), CapExceeded);
}

TEST_CASE("term_clone closed under recomposition") {
  auto a = make_m2();
  auto ts = term_clone(a, 2);
  for (const auto& f : ts)
    for (const auto& g : ts) {
      // maj(f, g, pi1) must be in the clone
      OpTable h;
      h.arity = 2;
      h.size = 2;
      h.table.resize(4);
      for (Elem x = 0; x < 2; ++x)
        for (Elem y = 0; y < 2; ++y)
          h.table[x * 2 + y] =
              a.ops[0].apply3(f.apply2(x, y), g.apply2(x, y), x);
      bool found = false;
      for (const auto& t : ts) found |= t.table == h.table;
      CHECK(found);
    }
}

TEST_CASE("subuniverses") {
  auto subs = all_subuniverses(make_s2());
  // {0}, {1}, {0,1}
  CHECK(subs.size() == 3);
  auto subs_a2 = all_subuniverses(make_a2());
  CHECK(subs_a2.size() == 3);
}

TEST_CASE("hs_class") {
  auto cls = hs_class(make_s2());
  // S2 and the one-element algebra
  CHECK(cls.members.size() == 2);
  auto cls_a2 = hs_class(make_a2());
  CHECK(cls_a2.members.size() == 2);
  FiniteAlgebra one;
  one.name = "one";
  one.size = 1;
  one.ops.push_back({"meet", 2, 1, {0}});
  auto cls1 = hs_class(one);
  CHECK(cls1.members.size() == 1);
}

TEST_CASE("hs_class members stay idempotent") {
  auto sq = direct_product({make_m2(), make_m2()});
  for (const auto& m : hs_class(sq).members) CHECK(m.is_idempotent());
}

TEST_CASE("canonical form identifies isomorphic relabelings") {
  // S2 with meet vs join are isomorphic via swapping 0,1
  FiniteAlgebra join;
  join.name = "J2";
  join.size = 2;
  join.ops.push_back({"meet", 2, 2, {0, 1, 1, 1}});
  CHECK(canonical_table_key(make_s2()) == canonical_table_key(join));
  CHECK(canonical_table_key(make_s2()) != canonical_table_key(make_set2()));
}
