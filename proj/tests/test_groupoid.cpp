#include <map>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "typesemi/groupoid.hpp"
#include "typesemi/states.hpp"

using namespace typesemi;
using typesemi::testing::random_groupoid;
using typesemi::testing::random_mass;

namespace {

GroupoidModel model(std::vector<std::string> pts, std::vector<std::vector<std::pair<int, int>>> gens,
                    bool all_restrictions = false) {
  std::vector<std::string> names;
  std::vector<PartialBijection> bs;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    names.push_back("b" + std::to_string(i + 1));
    bs.push_back(from_pairs(static_cast<int>(pts.size()), gens[i]));
  }
  return close_inverse_semigroup(pts, names, bs, 200000, all_restrictions);
}

GroupoidModel swap12() { return model({"1", "2"}, {{{0, 1}}}); }
GroupoidModel pair2() { return model({"1", "2"}, {{{0, 1}, {1, 0}}}); }
GroupoidModel idempotents2() { return model({"1", "2"}, {}); }

LscFn fn(const GroupoidModel& g, std::vector<int> v) { return lsc_of(g, v); }

// Pointwise arrows of a BFunction, composed through the middle function.
BFunction compose_witnesses(const GroupoidModel& g, const BFunction& b1, const BFunction& b2) {
  std::map<int, std::vector<int>> into;  // middle point -> sources
  for (const auto& w : b1.terms)
    for (int x = 0; x < g.size(); ++x)
      if (w.map[x] >= 0) into[w.map[x]].push_back(x);
  BFunction out;
  for (const auto& w : b2.terms)
    for (int y = 0; y < g.size(); ++y)
      if (w.map[y] >= 0) {
        int x = into[y].back();
        into[y].pop_back();
        out.terms.push_back(from_pairs(g.size(), {{x, w.map[y]}}));
      }
  return out;
}

}  // namespace

TEST_CASE("partial bijections") {
  auto a = from_pairs(3, {{0, 1}, {1, 2}});
  CHECK(a.dom() == 0b011);
  CHECK(a.ran() == 0b110);
  CHECK(compose(inverse(a), a) == identity_on(3, 0b011));
  CHECK(compose(a, inverse(a)).is_idempotent());
  CHECK_FALSE(a.is_idempotent());
  CHECK(bijection_error(2, {{0, 1}, {0, 0}}).has_value());
  CHECK(bijection_error(2, {{0, 1}, {1, 1}}).has_value());
  CHECK_THROWS_AS(from_pairs(2, {{0, 2}}), InputError);
}

TEST_CASE("inverse semigroup closure examples") {
  auto g = swap12();
  // {}, id1, id2, id12, 1->2, 2->1
  CHECK(g.bisections.size() == 6);
  CHECK(g.contains(from_pairs(2, {{1, 0}})));
  CHECK(g.space.opens.size() == 4);
  for (const auto& w : idempotents2().bisections) CHECK(w.is_idempotent());
  CHECK(idempotents2().bisections.size() == 4);
  // S_3 from a transposition and a 3-cycle
  std::vector<std::vector<std::pair<int, int>>> s3{{{0, 1}, {1, 0}, {2, 2}}, {{0, 1}, {1, 2}, {2, 0}}};
  CHECK(model({"1", "2", "3"}, s3, true).bisections.size() == 34);  // every partial bijection
  CHECK(model({"1", "2", "3"}, s3).bisections.size() == 16);        // S_3, nine single arrows, empty
  CHECK_THROWS_AS(close_inverse_semigroup({"1", "2", "3"}, {"b"}, {from_pairs(3, {{0, 1}})}, 3), CapExceeded);
}

TEST_CASE("source and range counts") {
  auto g = pair2();
  BFunction b{{from_pairs(2, {{0, 1}})}};
  CHECK(s_star(g, b) == fn(g, {1, 0}));
  CHECK(r_star(g, b) == fn(g, {0, 1}));
  BFunction c{{from_pairs(2, {{0, 0}}), from_pairs(2, {{0, 1}})}};
  CHECK(s_star(g, c) == fn(g, {2, 0}));
  CHECK(r_star(g, c) == fn(g, {1, 1}));
  CHECK(s_star(g, BFunction{}).chain.empty());
}

TEST_CASE("sim_G examples") {
  auto g = swap12();
  auto j = sim_G(g, fn(g, {1, 0}), fn(g, {0, 1}));
  CHECK(j.verdict == Verdict::PROVED);
  CHECK_FALSE(verify_comparison(g, GroupoidClaim::SIM, fn(g, {1, 0}), fn(g, {0, 1}), j));
  auto p = pair2();
  auto jp = sim_G(p, fn(p, {2, 0}), fn(p, {1, 1}));
  CHECK(jp.verdict == Verdict::PROVED);
  CHECK(jp.certificates[0].terms.size() == 2);
  CHECK_FALSE(verify_comparison(p, GroupoidClaim::SIM, fn(p, {2, 0}), fn(p, {1, 1}), jp));
  auto e = idempotents2();
  auto je = sim_G(e, fn(e, {1, 0}), fn(e, {0, 1}));
  CHECK(je.verdict == Verdict::REFUTED);
  CHECK(je.orbit.has_value());
  CHECK_FALSE(verify_comparison(e, GroupoidClaim::SIM, fn(e, {1, 0}), fn(e, {0, 1}), je));
  // a tampered certificate is rejected
  jp.certificates[0].terms.pop_back();
  CHECK(verify_comparison(p, GroupoidClaim::SIM, fn(p, {2, 0}), fn(p, {1, 1}), jp).has_value());
  je.orbit = 0;
  CHECK(verify_comparison(e, GroupoidClaim::SIM, fn(e, {1, 0}), fn(e, {1, 0}), je).has_value());
}

TEST_CASE("precsim_B and the covering criterion on the worked examples") {
  auto g = swap12();
  auto f = fn(g, {1, 0}), h = fn(g, {1, 1});
  auto j = precsim_B(g, f, h);
  CHECK(j.verdict == Verdict::PROVED);
  CHECK_FALSE(verify_comparison(g, GroupoidClaim::PRECSIM, f, h, j));
  auto c = precsim_criterion(g, f.chain, h.chain);
  CHECK(c.verdict == Verdict::PROVED);
  CHECK_FALSE(check_covering_family(g, f.chain, h.chain, *c.family));

  auto e = idempotents2();
  auto a = fn(e, {1, 0}), b = fn(e, {0, 1});
  CHECK(precsim_B(e, a, b).verdict == Verdict::REFUTED);
  CHECK(precsim_criterion(e, a.chain, b.chain).verdict == Verdict::REFUTED);
  CHECK(precsim_B(e, a, fn(e, {1, 1})).verdict == Verdict::PROVED);  // pointwise below
  // no finite model doubles a nonzero function
  auto p = pair2();
  CHECK(precsim_B(p, fn(p, {2, 2}), fn(p, {1, 1})).verdict == Verdict::REFUTED);
}

TEST_CASE("exported presentations") {
  auto g = swap12();
  auto p = export_presentation(g);
  CHECK(p.generators == std::vector<std::string>{"U_1", "U_2", "U_1_2"});
  CHECK(p.relations.size() == 2);
  auto u1 = p.gen(0), u2 = p.gen(1), u12 = p.gen(2);
  CHECK(congruent(p, u1, u2).verdict == Verdict::PROVED);
  CHECK(congruent(p, u12, scale(2, u1)).verdict == Verdict::PROVED);
  CHECK(congruent(p, u12, u1).verdict == Verdict::REFUTED);

  auto e = export_presentation(idempotents2());
  CHECK(e.relations.size() == 1);
  CHECK(congruent(e, e.gen(0), e.gen(1)).verdict == Verdict::REFUTED);
  CHECK(leq(e, e.gen(0), e.gen(1)).verdict == Verdict::REFUTED);

  auto q = export_presentation(pair2());
  CHECK(congruent(q, q.gen(2), scale(2, q.gen(0))).verdict == Verdict::PROVED);
  CHECK(congruent(q, q.gen(1), q.gen(0)).verdict == Verdict::PROVED);
  CHECK(element_of(pair2(), fn(pair2(), {2, 1})) == Element{1, 0, 1});
}

TEST_CASE("orbits and sigma") {
  auto e = idempotents2();
  CHECK(e.orbit_count() == 2);
  CHECK(sigma_map(e, fn(e, {2, 1})) == std::vector<ExtQ>{ExtQ(2), ExtQ(1)});
  auto p = pair2();
  CHECK(sigma_map(p, fn(p, {1, 0})) == std::vector<ExtQ>{ExtQ(1)});
  auto g = swap12();
  CHECK(sigma_map(g, fn(g, {1, 1})) == std::vector<ExtQ>{ExtQ(2)});
}

TEST_CASE("invariant subsets and ideals") {
  auto two = model({"1", "2"}, {{{0, 0}}, {{1, 1}}});
  auto r = invariant_subsets_and_ideals(two);
  CHECK(r.invariant.size() == 4);
  CHECK(r.presentation_ideals == 4);
  CHECK(r.matches);
  CHECK_FALSE(r.minimal);

  auto p = invariant_subsets_and_ideals(pair2());
  CHECK(p.invariant.size() == 2);
  CHECK(p.presentation_ideals == 2);
  CHECK(p.minimal);
  REQUIRE(p.simple);
  CHECK(p.simple->verdict == Verdict::PROVED);

  auto three = model({"1", "2", "3"}, {{{0, 1}}});
  auto t = invariant_subsets_and_ideals(three);
  std::vector<PointSet> opens;
  for (const auto& inv : t.invariant) opens.push_back(inv.open);
  std::sort(opens.begin(), opens.end());
  CHECK(opens == std::vector<PointSet>{0, 0b011, 0b100, 0b111});
  CHECK(t.presentation_ideals == 4);
  CHECK(t.matches);
}

TEST_CASE("stabilisation") {
  auto e = idempotents2();
  auto s1 = stabilize(e, 1);
  CHECK(s1.model.size() == 2);
  CHECK(s1.model.orbit_count() == e.orbit_count());
  auto s2 = stabilize(e, 2);
  CHECK(s2.model.size() == 4);
  // 1_{U x {1}} ~ 1_{U x {2}} for U = {1,2}
  auto top = fn(s2.model, {1, 0, 1, 0}), bottom = fn(s2.model, {0, 1, 0, 1});
  auto j = sim_G(s2.model, top, bottom);
  CHECK(j.verdict == Verdict::PROVED);
  CHECK_FALSE(verify_comparison(s2.model, GroupoidClaim::SIM, top, bottom, j));
  CHECK(stabilize_forward(e, s2, fn(e, {1, 1})) == top);
  CHECK(stabilize_backward(e, s2, bottom) == fn(e, {1, 1}));
  CHECK_THROWS_AS(stabilize(e, 0), InputError);

  auto p = pair2();
  auto s3 = stabilize(p, 3);
  for (PointSet u = 1; u < 4; ++u)
    for (PointSet v = 1; v < 4; ++v) {
      auto f = indicator(p.space, u), h = indicator(p.space, v);
      CHECK(precsim_B(p, f, h).verdict ==
            precsim_B(s3.model, stabilize_forward(p, s3, f), stabilize_forward(p, s3, h)).verdict);
    }
}

TEST_CASE("restriction to invariant sets") {
  auto three = model({"1", "2", "3"}, {{{0, 1}}});
  CHECK_THROWS_AS(restrict_to_invariant(three, 0b001), InputError);
  auto same = restrict_to_invariant(three, 0);
  CHECK(same.bisections == three.bisections);
  auto none = restrict_to_invariant(three, 0b111);
  CHECK(export_presentation(none).size() == 0);

  auto rest = restrict_to_invariant(three, 0b100);
  CHECK(rest.size() == 2);
  auto p = export_presentation(three);
  std::vector<Element> ideal;
  ideal.push_back(element_of(three, indicator(three.space, 0b100)));
  auto qp = quotient_by_ideal(p, ideal);
  auto rp = export_presentation(rest);
  // V -> V minus the removed point
  auto shrink = [&](PointSet v) { return v & 0b011; };
  for (PointSet v = 1; v < 8; ++v)
    for (PointSet w = 1; w < 8; ++w) {
      auto a = leq(qp, element_of(three, indicator(three.space, v)), element_of(three, indicator(three.space, w)));
      Element rv = rp.zero(), rw = rp.zero();
      if (shrink(v)) rv = element_of(rest, indicator(rest.space, shrink(v)));
      if (shrink(w)) rw = element_of(rest, indicator(rest.space, shrink(w)));
      auto b = leq(rp, rv, rw);
      if (a.verdict != Verdict::UNKNOWN && b.verdict != Verdict::UNKNOWN) CHECK(a.verdict == b.verdict);
    }
}

TEST_CASE("invariant weights") {
  auto e = invariant_weight_cone(idempotents2());
  CHECK(e.rays.size() == 2);
  CHECK(e.rays_are_states);
  CHECK(e.lp_state_orbit_constant);
  auto p = invariant_weight_cone(pair2());
  REQUIRE(p.rays.size() == 1);
  CHECK(p.rays[0] == std::vector<Q>{1, 1});
  CHECK(p.rays_are_states);
  CHECK(p.lp_state_orbit_constant);
  CHECK(p.lp_states.size() == 1);
}

TEST_CASE("random models: comparison laws and cross-oracles") {
  std::mt19937 rng(7);
  int proved = 0;
  for (int t = 0; t < 150; ++t) {
    auto g = random_groupoid(rng, 4, 3);
    auto f = random_mass(rng, g, 2), h = random_mass(rng, g, 2), k = random_mass(rng, g, 1);
    auto j = precsim_B(g, f, h);
    REQUIRE(j.verdict != Verdict::UNKNOWN);
    CHECK_FALSE(verify_comparison(g, GroupoidClaim::PRECSIM, f, h, j));
    // independent covering criterion
    CHECK(precsim_criterion(g, f.chain, h.chain).verdict == j.verdict);
    // [f] <= [h] in S(G) by search over complements
    CHECK(type_leq_by_search(g, f, h) == j.verdict);
    // sums over orbits are monotone
    if (j.verdict == Verdict::PROVED) {
      ++proved;
      auto a = sigma_map(g, f), b = sigma_map(g, h);
      for (std::size_t o = 0; o < a.size(); ++o) CHECK(a[o] <= b[o]);
    }
    // compatibility with +
    auto jk = precsim_B(g, sum(g.space, f, k), sum(g.space, h, k));
    if (j.verdict == Verdict::PROVED) CHECK(jk.verdict == Verdict::PROVED);
    // sim: witnesses compose
    auto s1 = sim_G(g, f, h);
    CHECK_FALSE(verify_comparison(g, GroupoidClaim::SIM, f, h, s1));
    if (s1.verdict == Verdict::PROVED) {
      auto s2 = sim_G(g, h, f);
      REQUIRE(s2.verdict == Verdict::PROVED);
      auto back = compose_witnesses(g, s1.certificates[0], s2.certificates[0]);
      ComparisonJudgement c;
      c.verdict = Verdict::PROVED;
      c.witnesses = {f};
      c.certificates = {back};
      CHECK_FALSE(verify_comparison(g, GroupoidClaim::SIM, f, f, c));
    }
    // export agrees wherever it decides
    auto p = export_presentation(g);
    auto lj = leq(p, element_of(g, f), element_of(g, h));
    if (lj.verdict != Verdict::UNKNOWN) CHECK(lj.verdict == j.verdict);
  }
  CHECK(proved > 10);
}

TEST_CASE("basis independence: all restrictions or point restrictions only") {
  std::mt19937 a(11), b(11);
  for (int t = 0; t < 60; ++t) {
    auto g1 = random_groupoid(a, 3, 2, false);
    auto g2 = random_groupoid(b, 3, 2, true);
    REQUIRE(g1.generators == g2.generators);
    CHECK(g1.bisections.size() <= g2.bisections.size());
    for (PointSet u = 1; u <= g1.space.all(); ++u)
      for (PointSet v = 1; v <= g1.space.all(); ++v) {
        auto f = indicator(g1.space, u), h = indicator(g1.space, v);
        CHECK(precsim_B(g1, f, h).verdict == precsim_B(g2, f, h).verdict);
      }
  }
}

TEST_CASE("random models: ideals, weights, stabilisation") {
  std::mt19937 rng(13);
  for (int t = 0; t < 30; ++t) {
    auto g = random_groupoid(rng, 4, 3);
    auto r = invariant_subsets_and_ideals(g);
    CHECK(r.matches);
    CHECK(r.invariant.size() == r.presentation_ideals);
    if (r.minimal) CHECK(r.simple->verdict == Verdict::PROVED);
    auto c = invariant_weight_cone(g);
    CHECK(c.rays_are_states);
    CHECK(c.lp_state_orbit_constant);
  }
  for (int t = 0; t < 5; ++t) {
    auto g = random_groupoid(rng, 3, 2);
    auto st = stabilize(g, 2);
    for (int s = 0; s < 20; ++s) {
      auto f = random_mass(rng, st.model, 1), h = random_mass(rng, st.model, 1);
      auto up = precsim_B(st.model, f, h).verdict;
      auto down = precsim_B(g, stabilize_backward(g, st, f), stabilize_backward(g, st, h)).verdict;
      CHECK(up == down);
    }
  }
}
