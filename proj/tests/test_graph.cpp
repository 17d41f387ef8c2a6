#include <algorithm>

#include "algwb/graph.hpp"
#include "doctest.h"

using namespace algwb;

TEST_CASE("coloured_graph fixtures") {
  auto gs = coloured_graph(make_s2());
  REQUIRE(gs.edges.size() == 1);
  CHECK(gs.edges[0].colour == EdgeColour::semilattice);
  CHECK(gs.edges[0].theta.is_equality());

  auto ga = coloured_graph(make_a2());
  REQUIRE(ga.edges.size() == 1);
  CHECK(ga.edges[0].colour == EdgeColour::affine);
  CHECK(ga.edges[0].module.has_value());

  auto gm = coloured_graph(make_m2());
  REQUIRE(gm.edges.size() == 1);
  CHECK(gm.edges[0].colour == EdgeColour::majority);

  auto gu = coloured_graph(make_set2());
  REQUIRE(gu.edges.size() == 1);
  CHECK(gu.edges[0].colour == EdgeColour::unary);
}

TEST_CASE("smoothness and type-1") {
  CHECK(is_smooth(make_s2()));
  CHECK(is_smooth(make_m2()));
  CHECK(is_smooth(make_a2()));
  CHECK(omits_type_one(make_s2()));
  CHECK(omits_type_one(make_a2()));
  CHECK(omits_type_one(make_m2()));
  CHECK(!omits_type_one(make_set2()));
}

TEST_CASE("uniform ops on fixtures") {
  auto ctx_s = ClassContext::for_algebra(make_s2());
  auto f = ctx_s.op_f();
  // the only qualifying binary term is the meet
  CHECK(f.table_on(make_s2()).table == make_s2().ops[0].table);

  auto ctx_a = ClassContext::for_algebra(make_a2());
  auto h = ctx_a.op_h();
  CHECK(h.table_on(make_a2()).table == make_a2().ops[0].table);

  auto ctx_m = ClassContext::for_algebra(make_m2());
  auto g = ctx_m.op_g();
  CHECK(g.table_on(make_m2()).table == make_m2().ops[0].table);
  auto maj = ctx_m.op_maj();
  CHECK(maj.table_on(make_m2()).table == make_m2().ops[0].table);
}

TEST_CASE("good operation") {
  auto ctx = ClassContext::for_algebra(make_s2());
  auto mult = ctx.op_mult();
  auto t = mult.table_on(make_s2());
  // must be the meet: for every a, b either a = a*b or (a, a*b) thin sl
  CHECK(t.table == make_s2().ops[0].table);
}

TEST_CASE("thin edges of fixtures") {
  // with meet(0,1) = 0 the absorbing element is 0, so the thin
  // semilattice edge of S2 runs 1 -> 0
  auto ctx_s = ClassContext::for_algebra(make_s2());
  const auto& ts = ctx_s.thin_graph(make_s2());
  REQUIRE(ts.edges.size() == 1);
  CHECK(ts.edges[0].a == 1);
  CHECK(ts.edges[0].b == 0);
  CHECK(ts.edges[0].colour == EdgeColour::semilattice);

  auto ctx_a = ClassContext::for_algebra(make_a2());
  const auto& ta = ctx_a.thin_graph(make_a2());
  REQUIRE(ta.edges.size() == 2);
  CHECK(ta.edges[0].colour == EdgeColour::affine);
  CHECK(ta.edges[1].colour == EdgeColour::affine);

  auto ctx_m = ClassContext::for_algebra(make_m2());
  const auto& tm = ctx_m.thin_graph(make_m2());
  REQUIRE(tm.edges.size() == 2);
  CHECK(tm.edges[0].colour == EdgeColour::majority);
  CHECK(tm.edges[0].special);
  CHECK(tm.edges[1].special);
}

TEST_CASE("connectivity report") {
  auto ctx_s = ClassContext::for_algebra(make_s2());
  auto c = connectivity(ctx_s.thin_graph(make_s2()));
  CHECK(c.max_elems == std::vector<Elem>{0});
  CHECK(c.amax_elems == std::vector<Elem>{0});
  CHECK(c.umax_elems == std::vector<Elem>{0});
  CHECK(c.as_connectivity_undirected_ok);
  CHECK(c.as_connectivity_directed_ok);
  CHECK(c.unique_umax_component);

  auto ctx_a = ClassContext::for_algebra(make_a2());
  auto ca = connectivity(ctx_a.thin_graph(make_a2()));
  CHECK(ca.amax_elems == std::vector<Elem>{0, 1});
  CHECK(ca.umax_elems == std::vector<Elem>{0, 1});
  CHECK(ca.as_comps.size() == 1);

  FiniteAlgebra one;
  one.name = "one";
  one.size = 1;
  one.ops.push_back({"meet", 2, 1, {0}});
  auto ctx1 = ClassContext::for_algebra(one);
  auto c1 = connectivity(ctx1.thin_graph(one));
  CHECK(c1.max_elems == std::vector<Elem>{0});
}

TEST_CASE("thin edges survive into subalgebras and quotients") {
  // Lemma thin-properties(2) on the S2 x S2 square
  auto sq = direct_product({make_s2(), make_s2()});
  auto ctx = ClassContext::for_algebra(sq);
  const auto& g = ctx.thin_graph(sq);
  for (const auto& e : g.edges) {
    auto sub = sg_closure(sq, {e.a, e.b});
    auto rest = restrict_algebra(sq, sub);
    const auto& gsub = ctx.thin_graph(rest.algebra);
    CHECK(gsub.adj_asm[rest.index_of[e.a]][rest.index_of[e.b]]);
  }
}

TEST_CASE("special ops on fixtures") {
  auto ctx_a = ClassContext::for_algebra(make_a2());
  // 0 -> 1 is a thin affine edge of A2
  auto h_ab = ctx_a.special_h_ab(make_a2(), 0, 1);
  CHECK(h_ab.eval(make_a2(), {0, 0, 1}) == 1);
  CHECK(h_ab.table_on(make_a2()).table == make_a2().ops[0].table);

  auto ctx_m = ClassContext::for_algebra(make_m2());
  auto t_ab = ctx_m.special_t_ab(make_m2(), 0, 1);
  CHECK(t_ab.eval(make_m2(), {0, 1}) == 1);
}

TEST_CASE("components and maximality in subsets") {
  auto ctx = ClassContext::for_algebra(make_s2());
  const auto& g = ctx.thin_graph(make_s2());
  auto comps = components_in(g, PathKind::s, {0, 1});
  CHECK(comps.size() == 2);
  CHECK(max_in(g, PathKind::s, {0, 1}) == std::vector<Elem>{0});
  CHECK(max_in(g, PathKind::s, {1}) == std::vector<Elem>{1});
  CHECK(reaches_in(g, PathKind::s, {0, 1}, 1, 0));
  CHECK(!reaches_in(g, PathKind::s, {0, 1}, 0, 1));
}
