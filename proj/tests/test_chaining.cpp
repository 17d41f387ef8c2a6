#include <algorithm>

#include "algwb/chaining.hpp"
#include "doctest.h"

using namespace algwb;

TEST_CASE("t_set on the full Eq(A2) frame") {
  auto eq = eq_relation(make_a2());
  auto ctx = ClassContext::for_factors({make_a2()});
  auto env = make_env(eq, ctx, full_frame(eq));
  // all four unary polynomials preserve the full blocks
  CHECK(env.preserving.size() == 4);
  // T over factor 1, alpha = 0, pair (0,1): maps act on A2
  std::vector<UnaryMap> acts;
  for (const auto& f : env.preserving) acts.push_back(env.factor_action(f, 0));
  auto t = t_set(partition_equality(2), 0, 1, acts);
  // unordered pairs {0,1}, {0,0}, {1,1}
  CHECK(t.size() == 3);
  // constants only
  std::vector<UnaryMap> consts{{0, 0}, {1, 1}};
  auto t2 = t_set(partition_equality(2), 0, 1, consts);
  CHECK(t2 == std::vector<std::pair<Elem, Elem>>{{0, 0}, {1, 1}});
}

TEST_CASE("Lemma full-chaining instances") {
  auto ctx2 = ClassContext::for_factors({make_a2()});
  auto eq = eq_relation(make_a2());
  auto env = make_env(eq, ctx2, full_frame(eq));
  CHECK(is_chained(env).holds);

  auto ctx_s = ClassContext::for_factors({make_s2()});
  auto ord = make_relation({make_s2(), make_s2()}, {{0, 0}, {0, 1}, {1, 1}});
  auto env2 = make_env(ord, ctx_s, full_frame(ord));
  CHECK(is_chained(env2).holds);

  auto r3 = make_relation({make_a2(), make_a2(), make_a2()},
                          {{0, 0, 0}, {0, 1, 1}, {1, 0, 1}});
  auto env3 = make_env(r3, ctx2, full_frame(r3));
  CHECK(is_chained(env3).holds);
}

TEST_CASE("u-chained separates the polynomial sets") {
  // with constants only, the pair (0,1) of A2 is not chained
  auto eq = eq_relation(make_a2());
  auto ctx = ClassContext::for_factors({make_a2()});
  const ThinGraph& tg = ctx.thin_graph(make_a2());
  std::vector<UnaryMap> consts{{0, 0}, {1, 1}};
  auto v = is_u_chained(make_a2(), tg, partition_equality(2),
                        partition_full(2), consts, {0, 1});
  CHECK(!v.holds);
  std::vector<UnaryMap> all{{0, 1}, {1, 0}, {0, 0}, {1, 1}};
  auto v2 = is_u_chained(make_a2(), tg, partition_equality(2),
                         partition_full(2), all, {0, 1});
  CHECK(v2.holds);
  (void)eq;
}

TEST_CASE("collapsing search on Eq(A2)") {
  auto eq = eq_relation(make_a2());
  auto ctx = ClassContext::for_factors({make_a2()});
  auto env = make_env(eq, ctx, full_frame(eq));
  auto f = collapsing_search(env, 0, partition_equality(2),
                             CollapsingVariant::plain);
  CHECK(f == UnaryMap{0, 1});  // the identity

  CollapsingData data;
  data.fix_tuple = {0, 0};
  auto fe = collapsing_search(env, 0, partition_equality(2),
                              CollapsingVariant::e, data);
  CHECK(fe[eq.index_of({0, 0})] == eq.index_of({0, 0}));

  data.subtrace = {0, 1};
  data.fix_tuple = {0, 0};
  auto ff = collapsing_search(env, 0, partition_equality(2),
                              CollapsingVariant::f, data);
  CHECK(ff[eq.index_of({0, 0})] == eq.index_of({0, 0}));
}

TEST_CASE("collapsing hypothesis guard on Eq(S2)") {
  auto eq = eq_relation(make_s2());
  auto ctx = ClassContext::for_factors({make_s2()});
  auto env = make_env(eq, ctx, full_frame(eq));
  CHECK_THROWS_AS(collapsing_search(env, 0, partition_equality(2),
                                    CollapsingVariant::plain),
                  HypothesisNotMet);
}

TEST_CASE("polynomial closure") {
  auto eq = eq_relation(make_a2());
  auto ctx = ClassContext::for_factors({make_a2()});
  auto env = make_env(eq, ctx, full_frame(eq));
  // Lemma poly-closed(1): R is polynomially closed in R
  std::vector<int> all{0, 1};
  CHECK(is_poly_closed(env, all).holds);
  // {(0,0)} is a subalgebra; umax({t00}) = {t00}; generated sets stay inside
  std::vector<int> t00{eq.index_of({0, 0})};
  CHECK(is_poly_closed(env, t00).holds);
}

TEST_CASE("as-closed") {
  auto ctx = ClassContext::for_factors({make_a2()});
  const ThinGraph& ga = ctx.thin_graph(make_a2());
  CHECK(is_as_closed(ga, {0, 1}, {0, 1}).holds);
  CHECK(!is_as_closed(ga, {0, 1}, {0}).holds);
  auto ctx_s = ClassContext::for_factors({make_s2()});
  const ThinGraph& gs = ctx_s.thin_graph(make_s2());
  // 0 is the top of S2 under the meet, so {0} is as-closed
  CHECK(is_as_closed(gs, {0, 1}, {0}).holds);
  CHECK(!is_as_closed(gs, {0, 1}, {1}).holds);
}

TEST_CASE("congruence lemma on Eq(A2): option 2 with identity mapping") {
  auto eq = eq_relation(make_a2());
  auto ctx = ClassContext::for_factors({make_a2()});
  auto env = make_env(eq, ctx, full_frame(eq));
  std::vector<int> rp{0, 1};
  auto out = congruence_lemma_eval(env, rp);
  CHECK(out.option == 2);
  CHECK(out.eta == partition_equality(2));
  CHECK(out.beta_prime == partition_full(2));
  CHECK(out.phi == std::vector<std::pair<Elem, Elem>>{{0, 0}, {1, 1}});
}

TEST_CASE("congruence lemma on the full square: option 1") {
  auto sq = full_square(make_a2());
  auto ctx = ClassContext::for_factors({make_a2()});
  auto env = make_env(sq, ctx, full_frame(sq));
  std::vector<int> rp{0, 1, 2, 3};
  auto out = congruence_lemma_eval(env, rp);
  CHECK(out.option == 1);
}

TEST_CASE("relative symmetry guards") {
  auto eq = eq_relation(make_a2());
  auto ctx = ClassContext::for_factors({make_a2()});
  auto env = make_env(eq, ctx, full_frame(eq));
  PrimeInterval pi{partition_equality(2), partition_full(2)};
  // (0,1) of factor 1 cannot be separated from factor 2's interval in Eq(A2)
  CHECK_THROWS_AS(relative_symmetry_witness(env, 0, pi, 1, pi, 0, 1),
                  HypothesisNotMet);
}
