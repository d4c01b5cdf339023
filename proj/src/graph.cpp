#include "typesemi/graph.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "typesemi/states.hpp"

namespace typesemi {

int Graph::vertex_index(const std::string& name) const {
  for (int i = 0; i < vertex_count(); ++i)
    if (vertices[i] == name) return i;
  throw InputError("unknown vertex '" + name + "'");
}

int Graph::edge_index(const std::string& name) const {
  for (int i = 0; i < edge_count(); ++i)
    if (edge_names[i] == name) return i;
  throw InputError("unknown edge '" + name + "'");
}

std::vector<std::vector<int>> Graph::edges_into() const {
  std::vector<std::vector<int>> in(vertices.size());
  for (int e = 0; e < edge_count(); ++e) in[rng[e]].push_back(e);
  return in;
}

std::vector<int> Graph::sources() const {
  std::vector<bool> hit(vertices.size(), false);
  for (int r : rng) hit[r] = true;
  std::vector<int> out;
  for (int v = 0; v < vertex_count(); ++v)
    if (!hit[v]) out.push_back(v);
  return out;
}

void Graph::add_vertex(const std::string& name) {
  if (std::find(vertices.begin(), vertices.end(), name) != vertices.end())
    throw InputError("duplicate vertex '" + name + "'");
  vertices.push_back(name);
}

void Graph::add_edge(const std::string& name, int s, int r) {
  if (std::find(edge_names.begin(), edge_names.end(), name) != edge_names.end())
    throw InputError("duplicate edge '" + name + "'");
  if (s < 0 || r < 0 || s >= vertex_count() || r >= vertex_count())
    throw InputError("edge '" + name + "' has an endpoint outside the vertex set");
  edge_names.push_back(name);
  src.push_back(s);
  rng.push_back(r);
}

std::optional<std::string> Graph::validation_error() const {
  if (src.size() != rng.size() || src.size() != edge_names.size()) return "edge arrays differ in length";
  std::set<std::string> seen(vertices.begin(), vertices.end());
  if (seen.size() != vertices.size()) return "duplicate vertex name";
  std::set<std::string> es(edge_names.begin(), edge_names.end());
  if (es.size() != edge_names.size()) return "duplicate edge name";
  for (int e = 0; e < edge_count(); ++e)
    if (src[e] < 0 || rng[e] < 0 || src[e] >= vertex_count() || rng[e] >= vertex_count())
      return "edge '" + edge_names[e] + "' has an endpoint outside the vertex set";
  return std::nullopt;
}

VertexFn unit(const Graph& e, int v, long k) {
  VertexFn f(e.vertices.size(), 0);
  f.at(v) = k;
  return f;
}

VertexFn theta(const Graph& e, const VertexFn& f, int n) {
  if (f.size() != e.vertices.size()) throw InputError("vertex function has the wrong length");
  VertexFn cur = f;
  for (int i = 0; i < n; ++i) {
    VertexFn next(cur.size(), 0);
    for (int k = 0; k < e.edge_count(); ++k) next[e.src[k]] += cur[e.rng[k]];
    cur = std::move(next);
  }
  return cur;
}

int SelfSimilarAction::identity() const {
  for (int g = 0; g < order(); ++g) {
    bool ok = true;
    for (int h = 0; h < order() && ok; ++h) ok = mult[g][h] == h && mult[h][g] == h;
    if (ok) return g;
  }
  return -1;
}

SelfSimilarAction trivial_action(const Graph& e) {
  SelfSimilarAction a;
  a.elements = {"id"};
  a.mult = {{0}};
  std::vector<int> vs(e.vertices.size()), es(e.src.size());
  for (std::size_t i = 0; i < vs.size(); ++i) vs[i] = static_cast<int>(i);
  for (std::size_t i = 0; i < es.size(); ++i) es[i] = static_cast<int>(i);
  a.vertex = {vs};
  a.edge = {es};
  a.cocycle = {std::vector<int>(es.size(), 0)};
  return a;
}

namespace {

bool is_permutation_of(const std::vector<int>& p, int n) {
  if (static_cast<int>(p.size()) != n) return false;
  std::vector<bool> seen(n, false);
  for (int x : p) {
    if (x < 0 || x >= n || seen[x]) return false;
    seen[x] = true;
  }
  return true;
}

}  // namespace

std::vector<std::string> action_violations(const Graph& e, const SelfSimilarAction& a) {
  std::vector<std::string> out;
  const int n = a.order(), nv = e.vertex_count(), ne = e.edge_count();
  if (n == 0) return {"group has no elements"};
  auto sized = [&](const std::vector<std::vector<int>>& t, int cols, const char* what) {
    if (static_cast<int>(t.size()) != n) {
      out.push_back(std::string(what) + " table has the wrong number of rows");
      return false;
    }
    for (const auto& row : t)
      if (static_cast<int>(row.size()) != cols) {
        out.push_back(std::string(what) + " table has a row of the wrong length");
        return false;
      }
    return true;
  };
  if (!sized(a.mult, n, "multiplication") || !sized(a.vertex, nv, "vertex action") ||
      !sized(a.edge, ne, "edge action") || !sized(a.cocycle, ne, "cocycle"))
    return out;
  for (const auto& row : a.mult)
    for (int x : row)
      if (x < 0 || x >= n) return {"multiplication table entry outside the group"};
  for (const auto& row : a.cocycle)
    for (int x : row)
      if (x < 0 || x >= n) return {"cocycle entry outside the group"};
  const auto& g_ = a.elements;
  auto nm = [&](int g) { return g_[g]; };

  for (int g = 0; g < n; ++g) {
    if (!is_permutation_of(a.vertex[g], nv)) out.push_back("element " + nm(g) + " does not permute the vertices");
    if (!is_permutation_of(a.edge[g], ne)) out.push_back("element " + nm(g) + " does not permute the edges");
  }
  if (!out.empty()) return out;
  // Restriction laws first: they are the ones most often mistyped.
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      for (int k = 0; k < ne; ++k) {
        int he = a.edge[h][k];
        if (a.cocycle[a.mult[g][h]][k] != a.mult[a.cocycle[g][he]][a.cocycle[h][k]])
          out.push_back("(gh)|_e = g|_{he} h|_e fails for g=" + nm(g) + ", h=" + nm(h) + ", e=" + e.edge_names[k]);
      }
  for (int g = 0; g < n; ++g)
    for (int k = 0; k < ne; ++k) {
      int s = e.src[k];
      int lhs = a.vertex[a.cocycle[g][k]][s], rhs = a.vertex[g][s];
      if (lhs != rhs)
        out.push_back("g|_e s(e) = g s(e) fails for g=" + nm(g) + ", e=" + e.edge_names[k]);
    }
  for (int g = 0; g < n; ++g)
    for (int k = 0; k < ne; ++k) {
      int ge = a.edge[g][k];
      if (e.src[ge] != a.vertex[g][e.src[k]])
        out.push_back("s(ge) = g s(e) fails for g=" + nm(g) + ", e=" + e.edge_names[k]);
      if (e.rng[ge] != a.vertex[g][e.rng[k]])
        out.push_back("r(ge) = g r(e) fails for g=" + nm(g) + ", e=" + e.edge_names[k]);
    }
  int id = a.identity();
  if (id < 0) out.push_back("group has no identity");
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      for (int k = 0; k < n; ++k)
        if (a.mult[a.mult[g][h]][k] != a.mult[g][a.mult[h][k]])
          out.push_back("associativity fails for " + nm(g) + ", " + nm(h) + ", " + nm(k));
  if (id >= 0)
    for (int g = 0; g < n; ++g) {
      bool inv = false;
      for (int h = 0; h < n; ++h) inv = inv || (a.mult[g][h] == id && a.mult[h][g] == id);
      if (!inv) out.push_back("element " + nm(g) + " has no inverse");
    }
  if (id >= 0) {
    for (int v = 0; v < nv; ++v)
      if (a.vertex[id][v] != v) out.push_back("identity moves vertex " + e.vertices[v]);
    for (int k = 0; k < ne; ++k)
      if (a.edge[id][k] != k) out.push_back("identity moves edge " + e.edge_names[k]);
  }
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h) {
      int gh = a.mult[g][h];
      for (int v = 0; v < nv; ++v)
        if (a.vertex[gh][v] != a.vertex[g][a.vertex[h][v]])
          out.push_back("(gh)v = g(hv) fails for g=" + nm(g) + ", h=" + nm(h) + ", v=" + e.vertices[v]);
      for (int k = 0; k < ne; ++k)
        if (a.edge[gh][k] != a.edge[g][a.edge[h][k]])
          out.push_back("(gh)e = g(he) fails for g=" + nm(g) + ", h=" + nm(h) + ", e=" + e.edge_names[k]);
    }
  return out;
}

void validate_action(const Graph& e, const SelfSimilarAction& a) {
  auto v = action_violations(e, a);
  if (v.empty()) return;
  std::string msg = "invalid self-similar action: " + v[0];
  for (std::size_t i = 1; i < std::min<std::size_t>(v.size(), 3); ++i) msg += "; " + v[i];
  if (v.size() > 3) msg += "; and " + std::to_string(v.size() - 3) + " more";
  throw InputError(msg);
}

QuotientGraph quotient_graph(const Graph& e, const SelfSimilarAction& a) {
  validate_action(e, a);
  QuotientGraph q;
  const int nv = e.vertex_count();
  q.vertex_class.assign(nv, -1);
  for (int v = 0; v < nv; ++v) {
    if (q.vertex_class[v] >= 0) continue;
    int c = static_cast<int>(q.representative.size());
    std::set<int> orbit;
    for (int g = 0; g < a.order(); ++g) orbit.insert(a.vertex[g][v]);
    for (int w : orbit) q.vertex_class[w] = c;
    q.representative.push_back(v);  // v is the smallest unclassified index, hence the orbit minimum
    q.orbit_size.push_back(static_cast<int>(orbit.size()));
    q.graph.vertices.push_back(e.vertices[v]);
  }
  for (int k = 0; k < e.edge_count(); ++k) {
    int c = q.vertex_class[e.rng[k]];
    if (q.representative[c] != e.rng[k]) continue;
    q.graph.edge_names.push_back(e.edge_names[k]);
    q.graph.src.push_back(q.vertex_class[e.src[k]]);
    q.graph.rng.push_back(c);
    q.edge_origin.push_back(k);
  }
  return q;
}

namespace {

bool identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char ch : s)
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '.')) return false;
  return true;
}

MonoidPresentation presentation_of(const Graph& g) {
  MonoidPresentation p;
  bool plain = std::all_of(g.vertices.begin(), g.vertices.end(), identifier);
  for (int v = 0; v < g.vertex_count(); ++v) p.generators.push_back(plain ? g.vertices[v] : "v_" + std::to_string(v));
  auto in = g.edges_into();
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (in[v].empty()) continue;
    Relation r;
    r.kind = RelKind::EQ;
    r.lhs = p.gen(v);
    r.rhs = p.zero();
    for (int k : in[v]) r.rhs[g.src[k]] += 1;
    p.relations.push_back(std::move(r));
  }
  return p;
}

std::vector<ExtQ> to_ext(const std::vector<Q>& xs) {
  std::vector<ExtQ> out;
  for (const auto& x : xs) out.emplace_back(x);
  return out;
}

std::string vector_key(const VertexFn& f) {
  std::string s;
  for (const auto& x : f) s += x.get_str() + ",";
  return s;
}

bool leq_pointwise(const VertexFn& a, const VertexFn& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

void check_fn(const Graph& e, const VertexFn& f, const char* what) {
  if (f.size() != e.vertices.size()) throw InputError(std::string(what) + " has the wrong length");
  for (const auto& x : f)
    if (x < 0) throw InputError(std::string(what) + " has a negative entry");
}

}  // namespace

MonoidPresentation export_graph_presentation(const Graph& e, const SelfSimilarAction& a) {
  return presentation_of(quotient_graph(e, a).graph);
}

MonoidPresentation export_graph_presentation(const Graph& e) { return presentation_of(e); }

Element class_element(const QuotientGraph& q, const VertexFn& f) {
  Element x(q.representative.size(), 0);
  for (std::size_t v = 0; v < f.size(); ++v) {
    if (!f[v].fits_slong_p()) throw InputError("vertex function entry too large");
    x[q.vertex_class[v]] += f[v].get_si();
  }
  return x;
}

std::vector<Cycle> cycles_with_entrance(const Graph& e, std::size_t cap) {
  std::vector<Cycle> out;
  const int nv = e.vertex_count();
  std::vector<std::vector<int>> out_edges(nv);
  for (int k = 0; k < e.edge_count(); ++k) out_edges[e.src[k]].push_back(k);
  auto in = e.edges_into();
  // Simple cycles by forward DFS from their smallest vertex.
  for (int st = 0; st < nv; ++st) {
    std::vector<bool> on(nv, false);
    std::vector<int> path;  // edges in forward order
    std::function<void(int)> dfs = [&](int u) {
      for (int k : out_edges[u]) {
        int w = e.rng[k];
        if (w < st) continue;
        if (w == st) {
          path.push_back(k);
          Cycle c;
          // reverse so that s(e_i) = r(e_{i+1})
          c.edges.assign(path.rbegin(), path.rend());
          for (int x : c.edges) {
            c.vertices.push_back(e.rng[x]);
            if (!c.entrance && in[e.rng[x]].size() >= 2) c.entrance = e.rng[x];
          }
          out.push_back(std::move(c));
          path.pop_back();
          if (out.size() > cap) throw CapExceeded("cycle cap exceeded (" + std::to_string(cap) + ")");
          continue;
        }
        if (on[w]) continue;
        on[w] = true;
        path.push_back(k);
        dfs(w);
        path.pop_back();
        on[w] = false;
      }
    };
    on[st] = true;
    dfs(st);
  }
  return out;
}

CofinalityReport is_cofinal(const Graph& e) {
  auto srcs = e.sources();
  if (!srcs.empty()) {
    std::string names;
    for (int v : srcs) names += (names.empty() ? "" : ", ") + e.vertices[v];
    throw InputError("cofinality is only defined for graphs without sources; sources: " + names);
  }
  const int nv = e.vertex_count();
  std::vector<std::vector<int>> out_edges(nv);
  for (int k = 0; k < e.edge_count(); ++k) out_edges[e.src[k]].push_back(e.rng[k]);
  auto reach_from = [&](int u) {
    std::vector<bool> seen(nv, false);
    std::vector<int> stack{u};
    seen[u] = true;
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (int y : out_edges[x])
        if (!seen[y]) seen[y] = true, stack.push_back(y);
    }
    return seen;
  };
  CofinalityReport rep;
  rep.cofinal = true;
  for (int c = 0; c < nv; ++c) {
    bool cyclic = false;
    for (int y : out_edges[c]) {
      auto r = reach_from(y);
      if (r[c]) cyclic = true;
      if (cyclic) break;
    }
    if (!cyclic) continue;
    auto r = reach_from(c);
    for (int v = 0; v < nv; ++v)
      if (!r[v]) {
        rep.cofinal = false;
        rep.witness = std::make_pair(c, v);
        return rep;
      }
  }
  return rep;
}

namespace {

// Null space of the columns `cols` of m, by exact Gauss-Jordan elimination.
std::vector<std::vector<Q>> null_space(const std::vector<std::vector<Q>>& m, const std::vector<int>& cols) {
  const std::size_t rows = m.size(), n = cols.size();
  std::vector<std::vector<Q>> a(rows, std::vector<Q>(n));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i][j] = m[i][cols[j]];
  std::vector<int> pivot_col;
  std::size_t r = 0;
  for (std::size_t j = 0; j < n && r < rows; ++j) {
    std::size_t p = r;
    while (p < rows && a[p][j] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    Q inv = 1 / a[r][j];
    for (auto& x : a[r]) x *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][j] == 0) continue;
      Q f = a[i][j];
      for (std::size_t k = 0; k < n; ++k) a[i][k] -= f * a[r][k];
    }
    pivot_col.push_back(static_cast<int>(j));
    ++r;
  }
  std::vector<bool> is_pivot(n, false);
  for (int j : pivot_col) is_pivot[j] = true;
  std::vector<std::vector<Q>> basis;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Q> v(n, 0);
    v[f] = 1;
    for (std::size_t i = 0; i < pivot_col.size(); ++i) v[pivot_col[i]] = -a[i][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

std::size_t rank_of(std::vector<std::vector<Q>> a) {
  if (a.empty()) return 0;
  std::size_t rows = a.size(), n = a[0].size(), r = 0;
  for (std::size_t j = 0; j < n && r < rows; ++j) {
    std::size_t p = r;
    while (p < rows && a[p][j] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (a[i][j] == 0) continue;
      Q f = a[i][j] / a[r][j];
      for (std::size_t k = j; k < n; ++k) a[i][k] -= f * a[r][k];
    }
    ++r;
  }
  return r;
}

std::vector<Q> primitive(std::vector<Q> v) {
  Z den = 1, num = 0;
  for (auto& x : v) {
    x.canonicalize();
    if (x != 0) {
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
    }
  }
  for (auto& x : v) x *= den;
  for (auto& x : v) {
    Z n = x.get_num();
    mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), n.get_mpz_t());
  }
  if (num != 0)
    for (auto& x : v) x /= num;
  return v;
}

}  // namespace

TraceCone graph_trace_cone(const Graph& e, bool free_sources) {
  const int nv = e.vertex_count();
  if (nv > 18) throw InputError("trace cone enumeration supports at most 18 vertices");
  auto in = e.edges_into();
  std::vector<std::vector<Q>> m;
  for (int v = 0; v < nv; ++v) {
    if (free_sources && in[v].empty()) continue;
    std::vector<Q> row(nv, 0);
    row[v] += 1;
    for (int k : in[v]) row[e.src[k]] -= 1;
    m.push_back(std::move(row));
  }
  TraceCone cone;
  // An extreme ray of {x >= 0, Mx = 0} is the unique kernel direction of its support.
  for (std::uint32_t mask = 1; mask < (1u << nv); ++mask) {
    std::vector<int> cols;
    for (int v = 0; v < nv; ++v)
      if (mask & (1u << v)) cols.push_back(v);
    std::vector<std::vector<Q>> basis;
    if (m.empty()) {
      if (cols.size() != 1) continue;
      basis = {{Q(1)}};
    } else {
      basis = null_space(m, cols);
    }
    if (basis.size() != 1) continue;
    const auto& b = basis[0];
    int sign = 0;
    bool ok = true;
    for (const auto& x : b) {
      int s = sgn(x);
      if (s == 0 || (sign != 0 && s != sign)) {
        ok = false;
        break;
      }
      sign = s;
    }
    if (!ok) continue;
    std::vector<Q> ray(nv, 0);
    for (std::size_t j = 0; j < cols.size(); ++j) ray[cols[j]] = sign > 0 ? b[j] : Q(-b[j]);
    cone.rays.push_back(primitive(ray));
  }
  cone.dimension = rank_of(cone.rays);
  cone.nontrivial = !cone.rays.empty();
  return cone;
}

std::optional<std::string> check_graph_trace(const Graph& e, const std::vector<ExtQ>& t, bool free_sources) {
  if (t.size() != e.vertices.size()) return "trace has the wrong length";
  for (const auto& x : t)
    if (x.finite() && x.v < 0) return "trace has a negative value";
  auto in = e.edges_into();
  for (int v = 0; v < e.vertex_count(); ++v) {
    if (free_sources && in[v].empty()) continue;
    ExtQ s(0);
    for (int k : in[v]) s = s + t[e.src[k]];
    if (!(s == t[v])) return "trace identity fails at vertex " + e.vertices[v];
  }
  return std::nullopt;
}

ExtQ pair_trace(const std::vector<ExtQ>& t, const VertexFn& f) {
  ExtQ s(0);
  for (std::size_t v = 0; v < f.size(); ++v) {
    if (f[v] == 0) continue;
    if (t[v].inf) return ExtQ::infinity();
    s = s + ExtQ(Q(f[v]) * t[v].v);
  }
  return s;
}

namespace {

// Candidate invariants for separating f from g: extreme rays of the trace
// cone and {0, INF} traces from ideal closures on the presentation.
std::vector<std::vector<ExtQ>> candidate_traces(const Graph& e, const std::vector<Element>& ideals) {
  std::vector<std::vector<ExtQ>> out;
  if (e.vertex_count() <= 18)
    for (const auto& r : graph_trace_cone(e, false).rays) out.push_back(to_ext(r));
  auto p = export_graph_presentation(e);
  for (const auto& y : ideals) {
    auto st = zero_infinity_state(ideal_closure(p, y));
    out.push_back(st.values);
  }
  return out;
}

}  // namespace

ThetaJudgement sim_theta(const Graph& e, const VertexFn& f, const VertexFn& g, int depth) {
  check_fn(e, f, "f");
  check_fn(e, g, "g");
  ThetaJudgement j;
  std::vector<VertexFn> tf{f}, tg{g};
  for (int i = 1; i <= depth; ++i) {
    tf.push_back(theta(e, tf.back()));
    tg.push_back(theta(e, tg.back()));
  }
  for (int s = 0; s <= 2 * depth; ++s)
    for (int p = std::max(0, s - depth); p <= std::min(s, depth); ++p)
      if (tf[p] == tg[s - p]) {
        j.verdict = Verdict::PROVED;
        j.p = p;
        j.q = s - p;
        j.method = "theta-powers";
        return j;
      }
  QuotientGraph q;
  q.vertex_class.resize(f.size());
  for (std::size_t v = 0; v < f.size(); ++v) q.vertex_class[v] = static_cast<int>(v);
  q.representative = q.vertex_class;
  std::vector<Element> ideals{class_element(q, f), class_element(q, g)};
  for (const auto& t : candidate_traces(e, ideals)) {
    if (check_graph_trace(e, t, false)) continue;
    if (!(pair_trace(t, f) == pair_trace(t, g))) {
      j.verdict = Verdict::REFUTED;
      j.trace = t;
      j.method = "separating-trace";
      return j;
    }
  }
  j.method = "depth-exhausted";
  return j;
}

std::optional<std::string> verify_sim_theta(const Graph& e, const VertexFn& f, const VertexFn& g,
                                            const ThetaJudgement& j) {
  if (j.verdict == Verdict::PROVED) {
    if (j.p < 0 || j.q < 0) return "negative exponent";
    if (theta(e, f, j.p) != theta(e, g, j.q)) return "Theta powers differ";
    return std::nullopt;
  }
  if (j.verdict == Verdict::REFUTED) {
    if (!j.trace) return "refutation without a trace";
    if (auto err = check_graph_trace(e, *j.trace, false)) return *err;
    if (pair_trace(*j.trace, f) == pair_trace(*j.trace, g)) return "trace does not separate f and g";
    return std::nullopt;
  }
  return std::nullopt;
}

bool is_gamma_trace(const Graph& e, const SelfSimilarAction& a, const std::vector<ExtQ>& t) {
  if (check_graph_trace(e, t, false)) return false;
  for (int g = 0; g < a.order(); ++g)
    for (int v = 0; v < e.vertex_count(); ++v)
      if (!(t[a.vertex[g][v]] == t[v])) return false;
  return true;
}

std::vector<ExtQ> lift_trace(const QuotientGraph& q, const std::vector<ExtQ>& tq, bool scaled) {
  if (tq.size() != q.representative.size()) throw InputError("quotient trace has the wrong length");
  std::vector<ExtQ> t;
  for (int c : q.vertex_class) {
    ExtQ x = tq[c];
    if (scaled && x.finite()) x.v /= q.orbit_size[c];
    t.push_back(x);
  }
  return t;
}

std::vector<ExtQ> push_trace(const QuotientGraph& q, const std::vector<ExtQ>& t, bool scaled) {
  if (t.size() != q.vertex_class.size()) throw InputError("trace has the wrong length");
  std::vector<ExtQ> tq;
  for (std::size_t c = 0; c < q.representative.size(); ++c) {
    ExtQ x = t[q.representative[c]];
    if (scaled) x = static_cast<std::int64_t>(q.orbit_size[c]) * x;
    tq.push_back(x);
  }
  return tq;
}

TraceConversion gamma_trace_convert(const Graph& e, const SelfSimilarAction& a, const std::vector<ExtQ>& tq,
                                    bool scaled) {
  auto q = quotient_graph(e, a);
  TraceConversion c;
  c.lifted = lift_trace(q, tq, scaled);
  c.pushed_back = push_trace(q, c.lifted, scaled);
  c.round_trip = c.pushed_back == tq;
  c.lifted_is_gamma_trace = is_gamma_trace(e, a, c.lifted);
  ExtQ a_sum(0), b_sum(0);
  for (const auto& x : c.lifted) a_sum = a_sum + x;
  for (const auto& x : tq) b_sum = b_sum + x;
  c.normalization_preserved = a_sum == b_sum;
  return c;
}

namespace {

struct PieceSearch {
  const Graph& e;
  const SelfSimilarAction& a;
  std::vector<int> units;  // vertex per unit of mass of f
  // options[v]: distinct vectors Theta^p(1_{gv}) with their (g, p)
  std::vector<std::vector<std::pair<VertexFn, Piece>>> options;
  std::unordered_set<std::string> dead;
  std::size_t nodes = 0, cap;
  std::vector<Piece> chosen;

  bool run(std::size_t i, VertexFn& remaining) {
    if (i == units.size()) return true;
    if (++nodes > cap) throw CapExceeded("node cap");
    std::string key = std::to_string(i) + "|" + vector_key(remaining);
    if (dead.count(key)) return false;
    for (const auto& [vec, piece] : options[units[i]]) {
      if (!leq_pointwise(vec, remaining)) continue;
      for (std::size_t k = 0; k < vec.size(); ++k) remaining[k] -= vec[k];
      chosen.push_back(piece);
      bool ok = run(i + 1, remaining);
      for (std::size_t k = 0; k < vec.size(); ++k) remaining[k] += vec[k];
      if (ok) return true;
      chosen.pop_back();
    }
    dead.insert(key);
    return false;
  }
};

}  // namespace

GraphJudgement precsim_graph(const Graph& e, const SelfSimilarAction& a, const VertexFn& f, const VertexFn& g,
                             const GraphBudget& b) {
  validate_action(e, a);
  check_fn(e, f, "f");
  check_fn(e, g, "g");
  GraphJudgement j;
  PieceSearch s{e, a, {}, {}, {}, 0, b.node_cap, {}};
  for (int v = 0; v < e.vertex_count(); ++v)
    for (long k = 0; k < f[v].get_si(); ++k) s.units.push_back(v);
  s.options.resize(e.vertex_count());
  for (int v = 0; v < e.vertex_count(); ++v) {
    std::set<std::string> seen;
    for (int p = 0; p <= b.depth; ++p)
      for (int gr = 0; gr < a.order(); ++gr) {
        VertexFn vec = theta(e, unit(e, a.vertex[gr][v]), p);
        if (!seen.insert(vector_key(vec)).second) continue;
        s.options[v].push_back({vec, Piece{v, gr, p}});
      }
  }
  bool capped = false;
  VertexFn target = g;
  for (int q = 0; q <= b.depth; ++q) {
    if (q > 0) target = theta(e, target, 1);
    s.dead.clear();
    s.chosen.clear();
    VertexFn rem = target;
    try {
      if (s.run(0, rem)) {
        j.verdict = Verdict::PROVED;
        j.pieces = s.chosen;
        j.q = q;
        j.method = "theta-gamma-search";
        j.nodes = s.nodes;
        return j;
      }
    } catch (const CapExceeded&) {
      capped = true;
      break;
    }
  }
  j.nodes = s.nodes;
  // Refutation by a Gamma-invariant trace, lifted from E/Gamma without scaling.
  auto q = quotient_graph(e, a);
  auto p = presentation_of(q.graph);
  Element x = class_element(q, f), y = class_element(q, g);
  std::vector<std::vector<ExtQ>> cands;
  SearchBudget sb;
  sb.node_cap = b.node_cap;
  auto lj = leq(p, x, y, sb);
  for (const auto& st : lj.states) cands.push_back(st.values);
  for (const auto& t : candidate_traces(q.graph, {x, y})) cands.push_back(t);
  for (const auto& tq : cands) {
    if (tq.size() != q.representative.size()) continue;
    auto t = lift_trace(q, tq, false);
    if (!is_gamma_trace(e, a, t)) continue;
    if (pair_trace(t, g) < pair_trace(t, f)) {
      j.verdict = Verdict::REFUTED;
      j.trace = t;
      j.method = "gamma-trace";
      return j;
    }
  }
  j.method = capped ? "node-cap" : "depth-exhausted";
  return j;
}

std::optional<std::string> verify_precsim_graph(const Graph& e, const SelfSimilarAction& a, const VertexFn& f,
                                                const VertexFn& g, const GraphJudgement& j) {
  if (j.verdict == Verdict::PROVED) {
    VertexFn count(f.size(), 0), total(f.size(), 0);
    for (const auto& pc : j.pieces) {
      if (pc.vertex < 0 || pc.vertex >= e.vertex_count() || pc.element < 0 || pc.element >= a.order() ||
          pc.exponent < 0)
        return "piece out of range";
      count[pc.vertex] += 1;
      auto vec = theta(e, unit(e, a.vertex[pc.element][pc.vertex]), pc.exponent);
      for (std::size_t k = 0; k < vec.size(); ++k) total[k] += vec[k];
    }
    if (count != f) return "pieces do not decompose f";
    if (!leq_pointwise(total, theta(e, g, j.q))) return "pieces exceed Theta^q(g)";
    return std::nullopt;
  }
  if (j.verdict == Verdict::REFUTED) {
    if (!j.trace) return "refutation without a trace";
    if (!is_gamma_trace(e, a, *j.trace)) return "trace is not a Gamma-invariant trace";
    if (!(pair_trace(*j.trace, g) < pair_trace(*j.trace, f))) return "trace does not separate";
    return std::nullopt;
  }
  return std::nullopt;
}

std::string to_string(Dichotomy d) {
  switch (d) {
    case Dichotomy::PURELY_INFINITE: return "PURELY_INFINITE";
    case Dichotomy::STABLY_FINITE: return "STABLY_FINITE";
    default: return "NOT_APPLICABLE";
  }
}

DichotomyReport classify_dichotomy(const Graph& e, const SelfSimilarAction& a) {
  DichotomyReport r;
  r.quotient = quotient_graph(e, a);
  const Graph& qg = r.quotient.graph;
  r.note = "C*-simplicity is not decided; cofinality is checked on the quotient graph";
  auto srcs = qg.sources();
  if (!srcs.empty()) {
    r.failed_precondition = "graph has sources";
    r.witness = "source " + qg.vertices[srcs[0]];
    return r;
  }
  r.cofinality = is_cofinal(qg);
  if (!r.cofinality->cofinal) {
    r.failed_precondition = "not cofinal";
    auto [c, v] = *r.cofinality->witness;
    r.witness = "vertex " + qg.vertices[v] + " is not reachable from the cycle through " + qg.vertices[c];
    return r;
  }
  r.cycles = cycles_with_entrance(qg);
  for (const auto& c : r.cycles) {
    if (c.entrance) continue;
    r.failed_precondition = "cycle without entrance";
    std::string w;
    for (int k : c.edges) w += (w.empty() ? "" : " ") + qg.edge_names[k];
    r.witness = "cycle " + w + " has no entrance";
    auto p = presentation_of(qg);
    bool all_equal = true;
    for (std::size_t i = 1; i < p.size() && all_equal; ++i)
      all_equal = congruent(p, p.gen(0), p.gen(i)).verdict == Verdict::PROVED;
    auto st = find_state(p, p.gen(0));
    if (st.status == LPStatus::FEASIBLE && st.state) {
      bool finite = std::all_of(st.state->values.begin(), st.state->values.end(),
                                [](const ExtQ& x) { return x.finite(); });
      r.w_is_n = all_equal && finite;
      r.trace = lift_trace(r.quotient, st.state->values, false);
    }
    return r;
  }
  if (r.cycles.empty()) {
    // Not reachable for a finite graph without sources; kept for completeness.
    r.verdict = Dichotomy::STABLY_FINITE;
    auto cone = graph_trace_cone(qg, false);
    if (!cone.rays.empty()) r.trace = lift_trace(r.quotient, to_ext(cone.rays[0]), false);
    r.witness = "no cycles";
    return r;
  }
  r.verdict = Dichotomy::PURELY_INFINITE;
  const auto& c = r.cycles[0];
  std::string w;
  for (int k : c.edges) w += (w.empty() ? "" : " ") + qg.edge_names[k];
  r.witness = "every cycle has an entrance; e.g. " + w + " enters at " + qg.vertices[*c.entrance];
  return r;
}

}  // namespace typesemi
