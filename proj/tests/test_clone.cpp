#include "algwb/clone.hpp"
#include "algwb/algebra.hpp"
#include "doctest.h"

using namespace algwb;

TEST_CASE("value closure: binary terms of S2 at two points") {
  auto s2 = make_s2();
  ValueClosure vc(s2, 2, {{&s2, {0, 1}}, {&s2, {1, 0}}}, false);
  vc.run();
  // pi1 -> (0,1), pi2 -> (1,0), meet -> (0,0)
  CHECK(vc.size() == 3);
  CHECK(vc.find({0, 0}) >= 0);
  CHECK(vc.find({1, 1}) == -1);
}

TEST_CASE("value closure across two algebras") {
  auto a2 = make_a2();
  auto z22 = direct_product({make_a2(), make_a2()});
  ValueClosure vc(a2, 3, {{&a2, {0, 1, 1}}, {&z22, {1, 2, 3}}}, false);
  vc.run();
  // x+y+z on both coordinates: (0+1+1, 1+2+3 componentwise)
  // on z22: (0,1)-(1,0)+(1,1) = (0,0)... using codes 1,2,3
  int id = vc.find({0, 0});
  CHECK(id >= 0);
  CHECK(vc.eval_at(id, a2, {1, 1, 0}) == 0);
  auto table = vc.materialize(id, a2);
  CHECK(table.table == make_a2().ops[0].table);
}

TEST_CASE("term_exists") {
  auto m2 = make_m2();
  // majority values at the six mixed triples
  std::vector<EvalCoord> coords = {{&m2, {0, 0, 1}}, {&m2, {0, 1, 0}},
                                   {&m2, {1, 0, 0}}, {&m2, {1, 1, 0}},
                                   {&m2, {1, 0, 1}}, {&m2, {0, 1, 1}}};
  CHECK(term_exists(m2, 3, coords, {0, 0, 0, 1, 1, 1}));
  auto a2 = make_a2();
  std::vector<EvalCoord> c2 = {{&a2, {0, 0, 1}}, {&a2, {0, 1, 0}},
                               {&a2, {1, 0, 0}}, {&a2, {1, 1, 0}},
                               {&a2, {1, 0, 1}}, {&a2, {0, 1, 1}}};
  CHECK(!term_exists(a2, 3, c2, {0, 0, 0, 1, 1, 1}));
}

TEST_CASE("polynomial closure sizes") {
  PolyClosure p1(make_s2(), 1);
  CHECK(p1.size() == 3);  // id, const0, const1
  PolyClosure p2(make_a2(), 1);
  CHECK(p2.size() == 4);  // id, x+1, const0, const1
  bool has_flip = p2.find({1, 0}) >= 0;
  CHECK(has_flip);
  PolyClosure pk(make_s2(), 2);
  CHECK(pk.size() == 5);  // pi1, pi2, meet, const0, const1
}

TEST_CASE("polynomial closure is closed under basic-op recomposition") {
  auto a = make_m2();
  PolyClosure pc(a, 1);
  for (std::size_t i = 0; i < pc.size(); ++i)
    for (std::size_t j = 0; j < pc.size(); ++j)
      for (std::size_t k = 0; k < pc.size(); ++k) {
        UnaryMap h(2);
        for (Elem x = 0; x < 2; ++x)
          h[x] = a.ops[0].apply3(pc.table(i)[x], pc.table(j)[x],
                                 pc.table(k)[x]);
        CHECK(pc.find(h) >= 0);
      }
}

TEST_CASE("eval_with_seeds reproduces tables") {
  auto a2 = make_a2();
  PolyClosure pc(a2, 1);
  int flip = pc.find({1, 0});
  REQUIRE(flip >= 0);
  // seeds: variable value, then constants 0 and 1 of the algebra
  CHECK(pc.closure().eval_with_seeds(flip, a2, {0, 0, 1}) == 1);
  CHECK(pc.closure().eval_with_seeds(flip, a2, {1, 0, 1}) == 0);
}

TEST_CASE("idempotent_power") {
  CHECK(idempotent_power({1, 0}) == UnaryMap{0, 1});  // involution -> id
  CHECK(idempotent_power({0, 0}) == UnaryMap{0, 0});
  CHECK(idempotent_power({0, 1}) == UnaryMap{0, 1});
  // 3-cycle plus tail: f = (0->1,1->2,2->0,3->0); f^3 is identity on the cycle
  UnaryMap f{1, 2, 0, 0};
  auto g = idempotent_power(f);
  CHECK(is_idempotent_map(g));
  CHECK(compose(g, g) == g);
}

TEST_CASE("cap exceeded propagates") {
  auto m2 = make_m2();
  CHECK_THROWS_AS(PolyClosure(m2, 3, 3), CapExceeded);
}
