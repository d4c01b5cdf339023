#include "typesemi/layered.hpp"

#include <map>
#include <set>

#include "typesemi/lp.hpp"

namespace typesemi {

std::optional<int> LayeredGraph::last_level() const {
  if (periodic()) return std::nullopt;
  return declared();
}

int LayeredGraph::template_of(int n) const {
  if (n < 1) throw InputError("levels start at 1");
  if (n <= declared()) return n - 1;
  if (!periodic()) throw InputError("level " + std::to_string(n) + " is past the last level");
  int start = declared() - period;
  return start + (n - 1 - start) % period;
}

const std::vector<LayeredGraph::Arrow>& LayeredGraph::block(int n) const {
  static const std::vector<Arrow> none;
  if (!periodic() && n >= declared()) return none;
  auto t = static_cast<std::size_t>(template_of(n));
  return t < blocks.size() ? blocks[t] : none;
}

const std::vector<LayeredGraph::Arrow>& LayeredGraph::within_level(int n) const {
  static const std::vector<Arrow> none;
  auto t = static_cast<std::size_t>(template_of(n));
  return t < within.size() ? within[t] : none;
}

int LayeredGraph::first_vertex(int n) const {
  int k = 0;
  for (int m = 1; m < n; ++m) k += static_cast<int>(level(m).size());
  return k;
}

Graph LayeredGraph::truncate(int depth) const {
  if (depth < 1) throw InputError("truncation depth must be at least 1");
  if (!periodic() && depth > declared())
    throw InputError("truncation depth " + std::to_string(depth) + " exceeds the " + std::to_string(declared()) +
                     " declared levels");
  Graph g;
  for (int n = 1; n <= depth; ++n)
    for (std::size_t i = 0; i < level(n).size(); ++i) g.add_vertex(vertex_name(n, static_cast<int>(i)));
  int k = 0;
  for (int n = 1; n < depth; ++n) {
    int here = first_vertex(n), above = first_vertex(n + 1);
    for (const auto& a : block(n)) g.add_edge("e" + std::to_string(++k), above + a.from, here + a.to);
    for (const auto& a : within_level(n)) g.add_edge("e" + std::to_string(++k), here + a.from, here + a.to);
  }
  return g;
}

std::optional<std::string> LayeredGraph::validation_error() const {
  if (levels.empty()) return "layered graph has no levels";
  if (period < 0 || period > declared()) return "period must be between 1 and the number of declared levels";
  if (blocks.size() > levels.size() || within.size() > levels.size()) return "block declared past the last level";
  for (std::size_t t = 0; t < levels.size(); ++t) {
    if (levels[t].empty()) return "level " + std::to_string(t + 1) + " is empty";
    std::set<std::string> names(levels[t].begin(), levels[t].end());
    if (names.size() != levels[t].size()) return "level " + std::to_string(t + 1) + " repeats a name";
  }
  if (!periodic() && blocks.size() == levels.size() && !blocks.back().empty())
    return "block " + std::to_string(declared()) + " points past the last level; declare a period or another level";
  for (int n = 1; n <= declared(); ++n) {
    bool has_above = periodic() || n < declared();
    if (!has_above) continue;
    const auto& up = level(n + 1);
    const auto& here = level(n);
    std::vector<bool> fed(here.size(), false);
    for (const auto& a : block(n)) {
      if (a.from < 0 || a.from >= static_cast<int>(up.size()) || a.to < 0 || a.to >= static_cast<int>(here.size()))
        return "block " + std::to_string(n) + " has an arrow outside its levels";
      fed[a.to] = true;
    }
    for (std::size_t i = 0; i < here.size(); ++i)
      if (!fed[i]) return "vertex " + vertex_name(n, static_cast<int>(i)) + " receives no edge from level " +
                          std::to_string(n + 1);
  }
  for (int n = 1; n <= declared(); ++n)
    for (const auto& a : within_level(n))
      if (a.from < 0 || a.to < 0 || a.from >= static_cast<int>(level(n).size()) ||
          a.to >= static_cast<int>(level(n).size()))
        return "edge inside level " + std::to_string(n) + " names an unknown vertex";
  return std::nullopt;
}

LayeredGraph drunken_graph() {
  LayeredGraph l;
  l.levels = {{"a", "b"}};
  l.blocks = {{{0, 0}, {1, 0}, {1, 1}}};
  l.within = {{{0, 1}}};
  l.period = 1;
  return l;
}

bool Interval::contains(const Interval& o) const {
  if (o.lo < lo) return false;
  if (!hi) return true;
  return o.hi && *o.hi <= *hi;
}

namespace {

// Rows: identity at every vertex of levels 1..d of truncate(d+1).
LinearProgram identity_system(const LayeredGraph& l, const Graph& g, int d) {
  LinearProgram lp;
  lp.nvars = static_cast<std::size_t>(g.vertex_count());
  auto in = g.edges_into();
  int limit = l.first_vertex(d + 1);
  for (int v = 0; v < limit; ++v) {
    std::vector<Q> row(lp.nvars, 0);
    row[v] += 1;
    for (int k : in[v]) row[g.src[k]] -= 1;
    lp.add(row, Rel::EQ, 0);
  }
  return lp;
}

}  // namespace

TraceEnclosure layered_trace_enclosure(const LayeredGraph& l, int depth) {
  if (auto err = l.validation_error()) throw InputError(*err);
  TraceEnclosure out;
  for (std::size_t i = 0; i < l.level(1).size(); ++i) out.vertices.push_back(l.vertex_name(1, static_cast<int>(i)));
  int max_depth = l.periodic() ? depth : std::min(depth, l.declared() - 1);
  for (int d = 1; d <= max_depth; ++d) {
    Graph g = l.truncate(d + 1);
    auto base = identity_system(l, g, d);
    // Faithful traces: every value at least 1 after scaling.
    auto strict = base;
    for (std::size_t v = 0; v < strict.nvars; ++v) {
      std::vector<Q> row(strict.nvars, 0);
      row[v] = 1;
      strict.add(row, Rel::GE, 1);
    }
    if (solve_simplex(strict, false).status != LPStatus::FEASIBLE) {
      out.infeasible_level = d;
      out.note = "no trace within depth " + std::to_string(d);
      break;
    }
    auto norm = base;
    std::vector<Q> row(norm.nvars, 0);
    row[0] = 1;
    norm.add(row, Rel::EQ, 1);
    EnclosureStep step;
    step.depth = d;
    for (std::size_t i = 0; i < out.vertices.size(); ++i) {
      Interval iv;
      auto lp = norm;
      lp.objective.assign(lp.nvars, 0);
      lp.objective[i] = 1;
      auto hi = solve_simplex(lp, false);
      if (hi.status == LPStatus::FEASIBLE) iv.hi = hi.value;
      lp.objective[i] = -1;
      auto lo = solve_simplex(lp, false);
      iv.lo = -lo.value;
      step.level1.push_back(iv);
    }
    if (!out.steps.empty())
      for (std::size_t i = 0; i < step.level1.size(); ++i)
        if (!out.steps.back().level1[i].contains(step.level1[i])) out.nested = false;
    out.steps.push_back(std::move(step));
  }
  return out;
}

QPhi phi_inverse() { return QPhi(-1, 1); }

DrunkenTrace drunken_trace(int n, const QPhi& a1) {
  if (n < 1) throw InputError("drunken trace needs n >= 1");
  DrunkenTrace t;
  QPhi b1 = QPhi::phi() * a1;
  t.a.push_back(a1);
  t.b.push_back(b1);
  for (int k = 1; k <= n; ++k) {
    QPhi bn = t.b.back() - t.a.back();
    QPhi an = t.a.back() - bn;
    t.a.push_back(an);
    t.b.push_back(bn);
  }
  // Identities on the expanded graph, not on the recurrences used above.
  auto l = drunken_graph();
  Graph g = l.truncate(n + 1);
  std::vector<QPhi> val(static_cast<std::size_t>(g.vertex_count()));
  for (int m = 1; m <= n + 1; ++m) {
    val[l.first_vertex(m)] = t.a[m - 1];
    val[l.first_vertex(m) + 1] = t.b[m - 1];
  }
  auto in = g.edges_into();
  t.identities_hold = true;
  for (int v = 0; v < l.first_vertex(n + 1); ++v) {
    QPhi s;
    for (int k : in[v]) s = s + val[g.src[k]];
    if (!(s == val[v])) t.identities_hold = false;
  }
  t.closed_forms_hold = true;
  for (int k = 1; k <= n; ++k) {
    auto f = [](unsigned i) { return QPhi(Q(fibonacci(i))); };
    QPhi an = f(2 * k + 1) * a1 - f(2 * k) * b1;
    QPhi bn = f(2 * k - 1) * b1 - f(2 * k) * a1;
    if (!(an == t.a[k]) || !(bn == t.b[k])) t.closed_forms_hold = false;
  }
  t.positive = true;
  for (std::size_t k = 0; k < t.a.size(); ++k)
    if (t.a[k].sign() <= 0 || t.b[k].sign() <= 0) t.positive = false;
  QPhi s, tail;
  for (std::size_t k = 0; k < t.a.size(); ++k) {
    s = s + t.a[k] + t.b[k];
    t.partial_sums.push_back(s);
    if (k > 0) tail = tail + t.a[k] + t.b[k];
    t.tail_sums.push_back(tail);
  }
  t.sums_increasing = true;
  for (std::size_t k = 1; k < t.partial_sums.size(); ++k)
    if (!(t.partial_sums[k - 1] < t.partial_sums[k])) t.sums_increasing = false;
  return t;
}

namespace {

using BoolMat = std::vector<std::vector<bool>>;

BoolMat product(const BoolMat& x, const BoolMat& y) {
  std::size_t r = x.size(), m = y.size(), c = y.empty() ? 0 : y[0].size();
  BoolMat z(r, std::vector<bool>(c, false));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t k = 0; k < m; ++k)
      if (x[i][k])
        for (std::size_t j = 0; j < c; ++j)
          if (y[k][j]) z[i][j] = true;
  return z;
}

BoolMat within_closure(const LayeredGraph& l, int n) {
  std::size_t s = l.level(n).size();
  BoolMat w(s, std::vector<bool>(s, false));
  for (std::size_t i = 0; i < s; ++i) w[i][i] = true;
  for (const auto& a : l.within_level(n)) w[a.from][a.to] = true;
  for (std::size_t m = 0; m < s; ++m)
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = 0; j < s; ++j)
        if (w[i][m] && w[m][j]) w[i][j] = true;
  return w;
}

// Reachability from level n+1 down to level n.
BoolMat step_down(const LayeredGraph& l, int n) {
  BoolMat b(l.level(n + 1).size(), std::vector<bool>(l.level(n).size(), false));
  for (const auto& a : l.block(n)) b[a.from][a.to] = true;
  return product(product(within_closure(l, n + 1), b), within_closure(l, n));
}

bool within_acyclic(const LayeredGraph& l) {
  for (int n = 1; n <= l.declared(); ++n) {
    auto w = within_closure(l, n);
    for (const auto& a : l.within_level(n))
      if (w[a.to][a.from]) return false;
  }
  return true;
}

bool all_true(const BoolMat& m) {
  for (const auto& r : m)
    for (bool x : r)
      if (!x) return false;
  return true;
}

std::string format_interval(const Interval& iv) {
  return "[" + to_string(iv.lo) + ", " + (iv.hi ? to_string(*iv.hi) : std::string("inf")) + "]";
}

}  // namespace

LayeredCofinality layered_cofinality(const LayeredGraph& l, int max_window) {
  LayeredCofinality c;
  if (!l.periodic()) {
    c.witness = "finite layered graph";
    return c;
  }
  c.established = true;
  for (int n = 1; n <= l.declared() + l.period; ++n) {
    BoolMat reach = step_down(l, n);
    int w = 1;
    while (!all_true(reach) && w < max_window) {
      ++w;
      reach = product(step_down(l, n + w - 1), reach);
    }
    if (!all_true(reach)) {
      c.established = false;
      c.witness = "level " + std::to_string(n) + " is not reached from every vertex of any level up to " +
                  std::to_string(n + max_window);
      return c;
    }
    c.window = std::max(c.window, w);
  }
  return c;
}

LayeredReport classify_layered(const LayeredGraph& l, int depth) {
  if (auto err = l.validation_error()) throw InputError(*err);
  LayeredReport r;
  r.note = "C*-simplicity is not decided; cofinality is checked on the repeating level structure";
  if (!l.periodic()) {
    r.failed_precondition = "graph has sources";
    r.witness = "the vertices of level " + std::to_string(l.declared()) + " receive no edges";
    return r;
  }
  r.acyclic = within_acyclic(l);
  if (!r.acyclic) {
    r.failed_precondition = "layered graph has cycles";
    r.witness = "edges inside a level close a cycle";
    return r;
  }
  r.cofinality = layered_cofinality(l);
  if (!r.cofinality.established) {
    r.failed_precondition = "cofinality not established";
    r.witness = r.cofinality.witness;
    return r;
  }
  r.enclosure = layered_trace_enclosure(l, depth);
  if (r.enclosure->infeasible_level) {
    r.failed_precondition = "no trace within depth";
    r.witness = r.enclosure->note;
    return r;
  }
  r.verdict = Dichotomy::STABLY_FINITE;
  std::string w = "acyclic; trace enclosure at depth " + std::to_string(depth) + ":";
  const auto& last = r.enclosure->steps.back();
  for (std::size_t i = 0; i < last.level1.size(); ++i)
    w += " " + r.enclosure->vertices[i] + " in " + format_interval(last.level1[i]);
  r.witness = w;
  return r;
}

}  // namespace typesemi
