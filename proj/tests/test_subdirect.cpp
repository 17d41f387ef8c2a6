#include <algorithm>

#include "algwb/graph.hpp"
#include "algwb/subdirect.hpp"
#include "doctest.h"

using namespace algwb;

TEST_CASE("make_relation") {
  auto eq = make_relation({make_a2(), make_a2()}, {{0, 0}, {1, 1}});
  CHECK(eq.size() == 2);

  auto ord = make_relation({make_s2(), make_s2()}, {{0, 0}, {0, 1}, {1, 1}});
  CHECK(ord.size() == 3);  // closed under meet already

  CHECK_THROWS_AS(make_relation({make_s2(), make_s2()}, {{0, 1}}),
                  NotSubdirect);
  CHECK_THROWS_AS(make_relation({make_s2(), make_a2()}, {{0, 0}}),
                  SignatureMismatch);
  CHECK_THROWS_AS(make_relation({make_s2()}, {{2}}), RangeError);
}

TEST_CASE("relation algebra acts componentwise") {
  auto ord = make_relation({make_s2(), make_s2()}, {{0, 0}, {0, 1}, {1, 1}});
  // tuples sorted: (0,0) (0,1) (1,1); meet of (0,1),(1,1) = (0,1)
  CHECK(ord.alg.ops[0].apply2(1, 2) == 1);
  CHECK(ord.alg.ops[0].apply2(2, 2) == 2);
}

TEST_CASE("projection") {
  auto r = make_relation(
      {make_a2(), make_a2(), make_a2()},
      {{0, 0, 0}, {0, 1, 1}, {1, 0, 1}});  // x + y + z = 0
  CHECK(r.size() == 4);
  auto p = r.project({0, 1});
  CHECK(p.size() == 4);  // full square
  auto pm = r.projection_index_map(p, {0, 1});
  CHECK(pm.size() == 4);
}

TEST_CASE("coordinate_action") {
  auto eq = eq_relation(make_a2());
  // the flip on tuple indices acts as +1 on both coordinates
  UnaryMap flip{1, 0};
  auto a0 = coordinate_action(eq, flip, 0);
  CHECK(a0 == UnaryMap{1, 0});
}

TEST_CASE("link_structure") {
  auto eq = eq_relation(make_a2());
  auto ls = link_structure(eq);
  CHECK(ls.lnk1.is_equality());
  CHECK(ls.lnk2.is_equality());
  CHECK(!ls.linked);

  auto full = full_square(make_a2());
  auto ls2 = link_structure(full);
  CHECK(ls2.linked);

  auto ord = make_relation({make_s2(), make_s2()}, {{0, 0}, {0, 1}, {1, 1}});
  auto ls3 = link_structure(ord);
  CHECK(ls3.linked);
}

TEST_CASE("rectangularity checks") {
  auto ctx = ClassContext::for_factors({make_a2(), make_a2()});
  auto full = full_square(make_a2());
  auto v = rectangularity_check(full, ctx, {0, 1}, {0, 1}, RectMode::as_as);
  CHECK(v.holds);

  auto eq = eq_relation(make_a2());
  // B1 = {0}: as-component of its (trivial) link block; B2 = R[B1] = {0}
  auto v2 = rectangularity_check(eq, ctx, {0}, {0}, RectMode::as_umax);
  CHECK(v2.holds);
}

TEST_CASE("as_rect_check") {
  auto ctx = ClassContext::for_factors({make_a2(), make_a2()});
  auto eq = eq_relation(make_a2());
  CHECK(as_rect_check(eq, ctx, 0, 1).holds);
  auto full = full_square(make_a2());
  CHECK(as_rect_check(full, ctx, 0, 1).holds);

  auto ctx_s = ClassContext::for_factors({make_s2(), make_s2()});
  auto ord = make_relation({make_s2(), make_s2()}, {{0, 0}, {0, 1}, {1, 1}});
  // thin edge of S2 is 1 -> 0
  CHECK(as_rect_check(ord, ctx_s, 1, 0).holds);
  CHECK_THROWS_AS(as_rect_check(ord, ctx_s, 0, 1), HypothesisNotMet);
}

TEST_CASE("quasi2_check on the parity relation") {
  auto r = make_relation({make_a2(), make_a2(), make_a2()},
                         {{0, 0, 0}, {0, 1, 1}, {1, 0, 1}});
  auto ctx = ClassContext::for_factors({make_a2(), make_a2(), make_a2()});
  // a = (0,0,1) not in R; fixing X = {0,1} forces b = (0,0,0)
  auto res = quasi2_check(r, ctx, {0, 0, 1}, {0, 1});
  CHECK(res.holds);
  CHECK(res.witness == std::vector<Elem>{0, 0, 0});

  // a in R: witness may be a itself
  auto res2 = quasi2_check(r, ctx, {0, 1, 1}, {0, 1});
  CHECK(res2.holds);
  CHECK(res2.witness == std::vector<Elem>{0, 1, 1});
}

TEST_CASE("quasi2 guard") {
  auto ord = make_relation({make_s2(), make_s2()}, {{0, 0}, {0, 1}, {1, 1}});
  auto ctx = ClassContext::for_factors({make_s2(), make_s2()});
  // (1,0) fails the |J| = 2 hypothesis outright
  CHECK_THROWS_AS(quasi2_check(ord, ctx, {1, 0}, {0}), HypothesisNotMet);
}

TEST_CASE("as_square_witness") {
  auto ctx = ClassContext::for_factors({make_a2()});
  Partition skew = partition_from_labels({0, 1, 1, 0});
  auto [a, b] = as_square_witness(make_a2(), ctx, {0, 1}, skew);
  CHECK(a != b);
  CHECK(a == 0);
  CHECK(b == 1);

  auto [c, d] = as_square_witness(make_a2(), ctx, {0, 1},
                                  partition_equality(4));
  CHECK(c != d);

  auto [e, f] = as_square_witness(make_a2(), ctx, {0, 1}, partition_full(4));
  CHECK(e != f);
}
