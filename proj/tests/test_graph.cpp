#include <random>
#include <set>

#include "doctest.h"
#include "typesemi/graph.hpp"
#include "typesemi/lp.hpp"
#include "typesemi/states.hpp"

using namespace typesemi;

namespace {

// "u->w" per edge; edges are named e1, e2, ...
Graph make_graph(std::vector<std::string> vs, std::vector<std::pair<std::string, std::string>> es) {
  Graph g;
  for (auto& v : vs) g.add_vertex(v);
  int i = 1;
  for (auto& [s, r] : es) g.add_edge("e" + std::to_string(i++), g.vertex_index(s), g.vertex_index(r));
  return g;
}

Graph cuntz2() { return make_graph({"v"}, {{"v", "v"}, {"v", "v"}}); }
Graph loop1() { return make_graph({"v"}, {{"v", "v"}}); }
Graph two_loops() { return make_graph({"u", "w"}, {{"u", "u"}, {"w", "w"}}); }
Graph three_cycle() { return make_graph({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}, {"c", "a"}}); }

// Z/2 acting by a vertex involution and an edge involution, with g|_e = g.
SelfSimilarAction involution(const Graph& e, std::vector<int> vperm, std::vector<int> eperm) {
  SelfSimilarAction a;
  a.elements = {"1", "s"};
  a.mult = {{0, 1}, {1, 0}};
  std::vector<int> vid(e.vertex_count()), eid(e.edge_count());
  for (int i = 0; i < e.vertex_count(); ++i) vid[i] = i;
  for (int i = 0; i < e.edge_count(); ++i) eid[i] = i;
  a.vertex = {vid, vperm};
  a.edge = {eid, eperm};
  a.cocycle = {std::vector<int>(e.edge_count(), 0), std::vector<int>(e.edge_count(), 1)};
  return a;
}

SelfSimilarAction swap_loops(const Graph& e) { return involution(e, {1, 0}, {1, 0}); }

// Two copies of the Cuntz graph swapped freely.
Graph double_cuntz() { return make_graph({"u", "w"}, {{"u", "u"}, {"u", "u"}, {"w", "w"}, {"w", "w"}}); }
SelfSimilarAction swap_cuntz(const Graph& e) { return involution(e, {1, 0}, {2, 3, 0, 1}); }

VertexFn fn(std::vector<long> xs) {
  VertexFn f;
  for (long x : xs) f.emplace_back(x);
  return f;
}

// Random graph in which every vertex receives at least one edge.
Graph random_sourceless(std::mt19937& rng, int max_vertices, int extra_edges) {
  int n = std::uniform_int_distribution<int>(1, max_vertices)(rng);
  std::uniform_int_distribution<int> pick(0, n - 1);
  Graph g;
  for (int v = 0; v < n; ++v) g.add_vertex("v" + std::to_string(v));
  int k = 0;
  for (int v = 0; v < n; ++v) g.add_edge("e" + std::to_string(k++), pick(rng), v);
  int m = std::uniform_int_distribution<int>(0, extra_edges)(rng);
  for (int i = 0; i < m; ++i) g.add_edge("e" + std::to_string(k++), pick(rng), pick(rng));
  return g;
}

Graph random_graph(std::mt19937& rng, int max_vertices, int max_edges) {
  int n = std::uniform_int_distribution<int>(1, max_vertices)(rng);
  std::uniform_int_distribution<int> pick(0, n - 1);
  Graph g;
  for (int v = 0; v < n; ++v) g.add_vertex("v" + std::to_string(v));
  int m = std::uniform_int_distribution<int>(0, max_edges)(rng);
  for (int i = 0; i < m; ++i) g.add_edge("e" + std::to_string(i), pick(rng), pick(rng));
  return g;
}

// Random sourceless graph with a Z/2 symmetry: a vertex involution sigma and
// edges added in sigma-orbits.
std::pair<Graph, SelfSimilarAction> random_symmetric(std::mt19937& rng, int max_vertices, int extra) {
  int n = std::uniform_int_distribution<int>(1, max_vertices)(rng);
  std::vector<int> sigma(n);
  for (int v = 0; v < n; ++v) sigma[v] = v;
  for (int v = 0; v + 1 < n; v += 2)
    if (rng() % 2) std::swap(sigma[v], sigma[v + 1]);
  Graph g;
  for (int v = 0; v < n; ++v) g.add_vertex("v" + std::to_string(v));
  std::vector<int> eperm;
  std::uniform_int_distribution<int> pick(0, n - 1);
  auto add_orbit = [&](int s, int r) {
    int k = g.edge_count();
    g.add_edge("e" + std::to_string(k), s, r);
    if (sigma[s] == s && sigma[r] == r) {
      eperm.push_back(k);
      return;
    }
    g.add_edge("e" + std::to_string(k + 1), sigma[s], sigma[r]);
    eperm.push_back(k + 1);
    eperm.push_back(k);
  };
  for (int v = 0; v < n; ++v)
    if (sigma[v] >= v) add_orbit(pick(rng), v);
  int m = std::uniform_int_distribution<int>(0, extra)(rng);
  for (int i = 0; i < m; ++i) add_orbit(pick(rng), pick(rng));
  return {g, involution(g, sigma, eperm)};
}

// Theta^n f at v by walking every forward path of length n.
Z path_sum(const Graph& e, const VertexFn& f, int v, int n) {
  if (n == 0) return f[v];
  Z s = 0;
  for (int k = 0; k < e.edge_count(); ++k)
    if (e.src[k] == v) s += path_sum(e, f, e.rng[k], n - 1);
  return s;
}

// Transitive closure by Warshall, then "every vertex on a closed walk reaches everything".
bool cofinal_oracle(const Graph& e) {
  int n = e.vertex_count();
  std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
  for (int k = 0; k < e.edge_count(); ++k) r[e.src[k]][e.rng[k]] = true;
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (r[i][m] && r[m][j]) r[i][j] = true;
  for (int c = 0; c < n; ++c) {
    if (!r[c][c]) continue;
    for (int v = 0; v < n; ++v)
      if (v != c && !r[c][v]) return false;
  }
  return true;
}

// Is there a trace (identity everywhere outside free sources) with T(v) = 1?
bool trace_through(const Graph& e, int v, bool free_sources) {
  LinearProgram lp;
  lp.nvars = e.vertex_count();
  auto in = e.edges_into();
  for (int w = 0; w < e.vertex_count(); ++w) {
    if (free_sources && in[w].empty()) continue;
    std::vector<Q> row(lp.nvars, 0);
    row[w] += 1;
    for (int k : in[w]) row[e.src[k]] -= 1;
    lp.add(row, Rel::EQ, 0);
  }
  std::vector<Q> row(lp.nvars, 0);
  row[v] = 1;
  lp.add(row, Rel::EQ, 1);
  return solve_simplex(lp).status == LPStatus::FEASIBLE;
}

}  // namespace

TEST_CASE("theta pushes mass backwards along edges") {
  auto c = cuntz2();
  CHECK(theta(c, fn({1})) == fn({2}));
  CHECK(theta(c, fn({1}), 5) == fn({32}));
  auto t = three_cycle();  // a->b->c->a
  CHECK(theta(t, fn({0, 1, 0})) == fn({1, 0, 0}));
  CHECK(theta(t, fn({0, 1, 0}), 3) == fn({0, 1, 0}));
  auto s = make_graph({"x", "y"}, {{"x", "y"}});
  CHECK(theta(s, fn({3, 4})) == fn({4, 0}));
  CHECK(theta(s, fn({3, 4}), 2) == fn({0, 0}));
}

TEST_CASE("theta agrees with path enumeration and composes") {
  std::mt19937 rng(11);
  for (int it = 0; it < 200; ++it) {
    auto g = random_graph(rng, 5, 8);
    VertexFn f, h;
    for (int v = 0; v < g.vertex_count(); ++v) {
      f.emplace_back(static_cast<long>(rng() % 4));
      h.emplace_back(static_cast<long>(rng() % 4));
    }
    int n = static_cast<int>(rng() % 4);
    auto tf = theta(g, f, n);
    for (int v = 0; v < g.vertex_count(); ++v) CHECK(tf[v] == path_sum(g, f, v, n));
    CHECK(theta(g, theta(g, f, 1), n) == theta(g, f, n + 1));
    VertexFn sum(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) sum[i] = f[i] + h[i];
    auto a = theta(g, f, n), b = theta(g, h, n), ab = theta(g, sum, n);
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(ab[i] == a[i] + b[i]);
  }
}

TEST_CASE("theta equivalence examples") {
  auto c = cuntz2();
  auto j = sim_theta(c, fn({1}), fn({2}));
  CHECK(j.verdict == Verdict::PROVED);
  CHECK(j.p == 1);
  CHECK(j.q == 0);
  CHECK_FALSE(verify_sim_theta(c, fn({1}), fn({2}), j));

  auto l = loop1();
  auto r = sim_theta(l, fn({1}), fn({2}));
  REQUIRE(r.verdict == Verdict::REFUTED);
  CHECK_FALSE(verify_sim_theta(l, fn({1}), fn({2}), r));

  auto t = three_cycle();
  auto k = sim_theta(t, fn({1, 0, 0}), fn({0, 0, 1}));
  CHECK(k.verdict == Verdict::PROVED);
  CHECK_FALSE(verify_sim_theta(t, fn({1, 0, 0}), fn({0, 0, 1}), k));

  // A tampered certificate is caught.
  auto bad = j;
  bad.p = 2;
  CHECK(verify_sim_theta(c, fn({1}), fn({2}), bad));
}

TEST_CASE("dynamical subequivalence examples") {
  auto c = cuntz2();
  auto a = trivial_action(c);
  auto j = precsim_graph(c, a, fn({2}), fn({1}));
  CHECK(j.verdict == Verdict::PROVED);
  CHECK_FALSE(verify_precsim_graph(c, a, fn({2}), fn({1}), j));

  auto l = loop1();
  auto r = precsim_graph(l, trivial_action(l), fn({2}), fn({1}));
  REQUIRE(r.verdict == Verdict::REFUTED);
  CHECK_FALSE(verify_precsim_graph(l, trivial_action(l), fn({2}), fn({1}), r));

  auto tl = two_loops();
  auto sw = swap_loops(tl);
  auto m = precsim_graph(tl, sw, fn({1, 0}), fn({0, 1}));
  CHECK(m.verdict == Verdict::PROVED);
  CHECK_FALSE(verify_precsim_graph(tl, sw, fn({1, 0}), fn({0, 1}), m));
  // Without the symmetry the two loops are incomparable.
  auto n = precsim_graph(tl, trivial_action(tl), fn({1, 0}), fn({0, 1}));
  CHECK(n.verdict == Verdict::REFUTED);
  CHECK_FALSE(verify_precsim_graph(tl, trivial_action(tl), fn({1, 0}), fn({0, 1}), n));
  auto o = precsim_graph(tl, sw, fn({1, 1}), fn({1, 0}));
  CHECK(o.verdict == Verdict::REFUTED);
  CHECK_FALSE(verify_precsim_graph(tl, sw, fn({1, 1}), fn({1, 0}), o));

  auto bad = m;
  bad.pieces[0].element = 0;
  CHECK(verify_precsim_graph(tl, sw, fn({1, 0}), fn({0, 1}), bad));
}

TEST_CASE("quotient graphs and exported presentations") {
  auto tl = two_loops();
  auto q = quotient_graph(tl, swap_loops(tl));
  CHECK(q.graph.vertices == std::vector<std::string>{"u"});
  CHECK(q.graph.edge_count() == 1);
  CHECK(q.orbit_size == std::vector<int>{2});
  auto p = export_graph_presentation(tl, swap_loops(tl));
  CHECK(p.generators == std::vector<std::string>{"u"});
  REQUIRE(p.relations.size() == 1);
  CHECK(p.relations[0].lhs == Element{1});
  CHECK(p.relations[0].rhs == Element{1});

  auto dc = double_cuntz();
  auto p2 = export_graph_presentation(dc, swap_cuntz(dc));
  REQUIRE(p2.relations.size() == 1);
  CHECK(p2.relations[0].rhs == Element{2});
  CHECK(is_paradoxical(p2, p2.gen(0)).verdict == Verdict::PROVED);

  auto t = three_cycle();
  auto p3 = export_graph_presentation(t);
  CHECK(p3.size() == 3);
  CHECK(p3.relations.size() == 3);

  // Sources get no relation.
  auto s = make_graph({"x", "y"}, {{"x", "y"}});
  auto p4 = export_graph_presentation(s);
  REQUIRE(p4.relations.size() == 1);
  CHECK(p4.relations[0].lhs == p4.gen(1));
  CHECK(p4.relations[0].rhs == p4.gen(0));

  CHECK(class_element(q, fn({2, 3})) == Element{5});
}

TEST_CASE("broken actions are rejected with the failing law") {
  auto tl = two_loops();
  auto a = swap_loops(tl);
  CHECK(action_violations(tl, a).empty());
  a.cocycle[1][0] = 0;
  auto v = action_violations(tl, a);
  REQUIRE_FALSE(v.empty());
  CHECK(v[0].find("(gh)|_e = g|_{he} h|_e") != std::string::npos);
  CHECK_THROWS_WITH_AS(validate_action(tl, a), doctest::Contains("(gh)|_e = g|_{he} h|_e"), InputError);

  auto b = swap_loops(tl);
  b.edge[1] = {0, 1};  // edges no longer follow their vertices
  auto w = action_violations(tl, b);
  REQUIRE_FALSE(w.empty());
  bool names_range = false;
  for (auto& s : w) names_range = names_range || s.find("r(ge)") != std::string::npos;
  CHECK(names_range);

  auto c = swap_loops(tl);
  c.mult = {{0, 1}, {1, 1}};
  CHECK_FALSE(action_violations(tl, c).empty());

  std::mt19937 rng(5);
  for (int it = 0; it < 100; ++it) {
    auto [g, act] = random_symmetric(rng, 6, 6);
    CHECK(action_violations(g, act).empty());
  }
}

TEST_CASE("cycles and entrances") {
  auto t = three_cycle();
  auto cs = cycles_with_entrance(t);
  REQUIRE(cs.size() == 1);
  CHECK_FALSE(cs[0].entrance);
  CHECK(cs[0].edges.size() == 3);

  auto c = cuntz2();
  auto cc = cycles_with_entrance(c);
  CHECK(cc.size() == 2);
  for (auto& x : cc) CHECK(x.entrance == 0);

  std::mt19937 rng(21);
  for (int it = 0; it < 150; ++it) {
    auto g = random_graph(rng, 5, 7);
    auto in = g.edges_into();
    std::set<std::vector<int>> seen;
    for (auto& cy : cycles_with_entrance(g)) {
      std::size_t k = cy.edges.size();
      REQUIRE(k >= 1);
      std::set<int> vs;
      for (std::size_t i = 0; i < k; ++i) {
        CHECK(g.src[cy.edges[i]] == g.rng[cy.edges[(i + 1) % k]]);
        CHECK(cy.vertices[i] == g.rng[cy.edges[i]]);
        vs.insert(cy.vertices[i]);
      }
      CHECK(vs.size() == k);  // simple
      bool has = false;
      for (int v : cy.vertices) has = has || in[v].size() >= 2;
      CHECK(has == cy.entrance.has_value());
      auto rot = cy.edges;
      std::rotate(rot.begin(), std::min_element(rot.begin(), rot.end()), rot.end());
      CHECK(seen.insert(rot).second);
    }
  }
  CHECK_THROWS_AS(cycles_with_entrance(make_graph({"v"}, {{"v", "v"}, {"v", "v"}, {"v", "v"}}), 2), CapExceeded);
}

TEST_CASE("cofinality against transitive closure") {
  CHECK(is_cofinal(cuntz2()).cofinal);
  CHECK(is_cofinal(three_cycle()).cofinal);
  auto tl = two_loops();
  auto r = is_cofinal(tl);
  CHECK_FALSE(r.cofinal);
  REQUIRE(r.witness);
  CHECK_THROWS_AS(is_cofinal(make_graph({"x", "y"}, {{"x", "y"}, {"y", "y"}})), InputError);

  std::mt19937 rng(3);
  int cof = 0, simple_checked = 0;
  for (int it = 0; it < 300; ++it) {
    auto g = random_sourceless(rng, 6, 5);
    auto rep = is_cofinal(g);
    CHECK(rep.cofinal == cofinal_oracle(g));
    cof += rep.cofinal;
    if (rep.witness) {
      auto [c, v] = *rep.witness;
      CHECK(c != v);
    }
    // Cofinal graphs without sources export simple monoids.
    auto p = export_graph_presentation(g);
    auto s = is_simple(p);
    if (s.verdict != Verdict::UNKNOWN) {
      ++simple_checked;
      CHECK((s.verdict == Verdict::PROVED) == rep.cofinal);
    }
  }
  CHECK(cof > 20);
  CHECK(cof < 280);
  CHECK(simple_checked > 200);
}

TEST_CASE("trace cone examples and LP cross-check") {
  auto c = graph_trace_cone(cuntz2());
  CHECK_FALSE(c.nontrivial);
  CHECK(c.dimension == 0);
  auto two = graph_trace_cone(make_graph({"u", "w"}, {{"u", "w"}, {"w", "u"}}));
  REQUIRE(two.rays.size() == 1);
  CHECK(two.rays[0] == std::vector<Q>{1, 1});
  auto acyc = graph_trace_cone(make_graph({"u", "v", "w"}, {{"u", "w"}, {"v", "w"}}));
  CHECK(acyc.dimension == 2);
  CHECK(acyc.rays.size() == 2);
  // Without free sources the identity kills everything.
  CHECK_FALSE(graph_trace_cone(make_graph({"u", "v", "w"}, {{"u", "w"}, {"v", "w"}}), false).nontrivial);

  std::mt19937 rng(8);
  for (int it = 0; it < 200; ++it) {
    auto g = random_graph(rng, 5, 7);
    bool fs = rng() % 2;
    auto cone = graph_trace_cone(g, fs);
    std::vector<bool> covered(g.vertex_count(), false);
    for (auto& ray : cone.rays) {
      std::vector<ExtQ> t;
      for (auto& x : ray) t.emplace_back(x);
      CHECK_FALSE(check_graph_trace(g, t, fs));
      for (int v = 0; v < g.vertex_count(); ++v)
        if (ray[v] != 0) covered[v] = true;
    }
    for (int v = 0; v < g.vertex_count(); ++v) CHECK(covered[v] == trace_through(g, v, fs));
    CHECK(cone.dimension <= cone.rays.size());
  }
}

TEST_CASE("states on the exported monoid are traces") {
  std::mt19937 rng(17);
  int feasible = 0;
  for (int it = 0; it < 150; ++it) {
    auto g = random_sourceless(rng, 5, 4);
    auto p = export_graph_presentation(g);
    auto q = quotient_graph(g, trivial_action(g));
    for (int v = 0; v < g.vertex_count(); ++v) {
      auto st = find_state(p, p.gen(v));
      if (st.status != LPStatus::FEASIBLE) {
        CHECK_FALSE(trace_through(g, v, false));
        continue;
      }
      ++feasible;
      REQUIRE(st.state);
      auto t = lift_trace(q, st.state->values, false);
      CHECK_FALSE(check_graph_trace(g, t, false));
      CHECK(t[v] == ExtQ(1));
    }
    for (auto& ray : graph_trace_cone(g, false).rays) {
      StateVector s;
      for (auto& x : ray) s.values.emplace_back(x);
      CHECK_FALSE(check_state(p, s));
    }
  }
  CHECK(feasible > 20);
}

TEST_CASE("Gamma-traces against quotient traces") {
  auto tl = two_loops();
  auto sw = swap_loops(tl);
  auto conv = gamma_trace_convert(tl, sw, {ExtQ(1)});
  CHECK(conv.lifted == std::vector<ExtQ>{ExtQ(Q(1, 2)), ExtQ(Q(1, 2))});
  CHECK(conv.round_trip);
  CHECK(conv.lifted_is_gamma_trace);
  CHECK(conv.normalization_preserved);

  // Orbits of different sizes: a fixed, b and c swapped, b->a and c->a.
  auto g = make_graph({"a", "b", "c"}, {{"b", "b"}, {"c", "c"}, {"b", "a"}, {"c", "a"}});
  auto act = involution(g, {0, 2, 1}, {1, 0, 3, 2});
  REQUIRE(action_violations(g, act).empty());
  auto q = quotient_graph(g, act);
  std::vector<ExtQ> tq{ExtQ(2), ExtQ(1)};
  REQUIRE_FALSE(check_graph_trace(q.graph, tq, false));
  auto scaled = gamma_trace_convert(g, act, tq, true);
  CHECK(scaled.round_trip);
  CHECK_FALSE(scaled.lifted_is_gamma_trace);
  auto plain = gamma_trace_convert(g, act, tq, false);
  CHECK(plain.round_trip);
  CHECK(plain.lifted_is_gamma_trace);
  CHECK_FALSE(plain.normalization_preserved);

  // Unscaled lifting is a bijection on random symmetric graphs.
  std::mt19937 rng(4);
  for (int it = 0; it < 150; ++it) {
    auto [e, a] = random_symmetric(rng, 6, 4);
    auto qq = quotient_graph(e, a);
    for (auto& ray : graph_trace_cone(qq.graph, false).rays) {
      std::vector<ExtQ> t;
      for (auto& x : ray) t.emplace_back(x);
      auto cv = gamma_trace_convert(e, a, t, false);
      CHECK(cv.round_trip);
      CHECK(cv.lifted_is_gamma_trace);
    }
    for (auto& ray : graph_trace_cone(e, false).rays) {
      std::vector<ExtQ> t;
      for (auto& x : ray) t.emplace_back(x);
      if (!is_gamma_trace(e, a, t)) continue;
      auto pushed = push_trace(qq, t, false);
      CHECK_FALSE(check_graph_trace(qq.graph, pushed, false));
      CHECK(lift_trace(qq, pushed, false) == t);
    }
  }
}

TEST_CASE("dichotomy classification") {
  auto c = cuntz2();
  auto r = classify_dichotomy(c, trivial_action(c));
  CHECK(r.verdict == Dichotomy::PURELY_INFINITE);

  auto t = three_cycle();
  auto r3 = classify_dichotomy(t, trivial_action(t));
  CHECK(r3.verdict == Dichotomy::NOT_APPLICABLE);
  CHECK(r3.failed_precondition == "cycle without entrance");
  CHECK(r3.w_is_n);
  REQUIRE(r3.trace);
  CHECK_FALSE(check_graph_trace(t, *r3.trace, false));

  auto tl = two_loops();
  auto rs = classify_dichotomy(tl, swap_loops(tl));
  CHECK(rs.verdict == Dichotomy::NOT_APPLICABLE);
  CHECK(rs.failed_precondition == "cycle without entrance");
  CHECK(rs.w_is_n);
  auto rn = classify_dichotomy(tl, trivial_action(tl));
  CHECK(rn.failed_precondition == "not cofinal");

  auto dc = double_cuntz();
  CHECK(classify_dichotomy(dc, swap_cuntz(dc)).verdict == Dichotomy::PURELY_INFINITE);
  CHECK(classify_dichotomy(dc, trivial_action(dc)).failed_precondition == "not cofinal");

  auto s = make_graph({"x", "y"}, {{"x", "y"}, {"y", "y"}});
  CHECK(classify_dichotomy(s, trivial_action(s)).failed_precondition == "graph has sources");
}

TEST_CASE("purely infinite graphs have properly infinite generators") {
  std::mt19937 rng(29);
  int seen = 0;
  for (int it = 0; it < 300 && seen < 40; ++it) {
    auto [g, a] = random_symmetric(rng, 5, 5);
    auto r = classify_dichotomy(g, a);
    if (r.verdict != Dichotomy::PURELY_INFINITE) continue;
    ++seen;
    auto p = export_graph_presentation(g, a);
    for (std::size_t i = 0; i < p.size(); ++i) {
      auto j = is_properly_infinite(p, p.gen(i));
      CHECK(j.verdict == Verdict::PROVED);
      CHECK_FALSE(verify_judgement(p, {ClaimKind::PROPERLY_INFINITE, p.gen(i), p.gen(i)}, j));
    }
    CHECK(graph_trace_cone(r.quotient.graph, false).rays.empty());
  }
  CHECK(seen >= 10);
}

TEST_CASE("dynamical subequivalence agrees with the exported monoid") {
  std::mt19937 rng(31);
  int proved = 0, refuted = 0;
  for (int it = 0; it < 150; ++it) {
    auto [g, a] = random_symmetric(rng, 4, 3);
    VertexFn f, h;
    for (int v = 0; v < g.vertex_count(); ++v) {
      f.emplace_back(static_cast<long>(rng() % 3));
      h.emplace_back(static_cast<long>(rng() % 3));
    }
    GraphBudget b;
    b.depth = 4;
    auto j = precsim_graph(g, a, f, h, b);
    CHECK_FALSE(verify_precsim_graph(g, a, f, h, j));
    auto q = quotient_graph(g, a);
    auto p = export_graph_presentation(g, a);
    auto m = leq(p, class_element(q, f), class_element(q, h));
    if (j.verdict == Verdict::PROVED) {
      ++proved;
      CHECK(m.verdict != Verdict::REFUTED);
    }
    if (j.verdict == Verdict::REFUTED) {
      ++refuted;
      CHECK(m.verdict != Verdict::PROVED);
    }
  }
  CHECK(proved > 20);
  CHECK(refuted > 20);
}
