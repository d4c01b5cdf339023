#include "typesemi/groupoid.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <unordered_set>

#include "typesemi/states.hpp"

namespace typesemi {

namespace {

bool has(PointSet s, int x) { return (s >> x) & 1u; }
bool subset(PointSet a, PointSet b) { return (a & ~b) == 0; }

std::vector<int> lowered(std::vector<int> v, PointSet s) {
  for (std::size_t x = 0; x < v.size(); ++x)
    if (has(s, static_cast<int>(x))) --v[x];
  return v;
}

PointSet positive(const std::vector<int>& v) {
  PointSet s = 0;
  for (std::size_t x = 0; x < v.size(); ++x)
    if (v[x] > 0) s |= PointSet{1} << x;
  return s;
}

std::string key_of(const std::vector<int>& a, const std::vector<int>& b) {
  std::string k;
  for (int v : a) k.push_back(static_cast<char>(v));
  k.push_back('|');
  for (int v : b) k.push_back(static_cast<char>(v));
  return k;
}

// One representative bisection per (source, range) pair, indexed by the source points.
struct Candidates {
  std::vector<std::vector<const PartialBijection*>> through;  // through[x]: x in the source
  explicit Candidates(const GroupoidModel& g) : through(static_cast<std::size_t>(g.size())) {
    std::set<std::pair<PointSet, PointSet>> seen;
    for (const auto& w : g.bisections) {
      PointSet d = w.dom();
      if (d == 0 || !seen.insert({d, w.ran()}).second) continue;
      for (int x = 0; x < g.size(); ++x)
        if (has(d, x)) through[x].push_back(&w);
    }
  }
};

}  // namespace

PointSet PartialBijection::dom() const {
  PointSet s = 0;
  for (std::size_t x = 0; x < map.size(); ++x)
    if (map[x] >= 0) s |= PointSet{1} << x;
  return s;
}

PointSet PartialBijection::ran() const {
  PointSet s = 0;
  for (int y : map)
    if (y >= 0) s |= PointSet{1} << y;
  return s;
}

bool PartialBijection::is_idempotent() const {
  for (std::size_t x = 0; x < map.size(); ++x)
    if (map[x] >= 0 && map[x] != static_cast<int>(x)) return false;
  return true;
}

PartialBijection compose(const PartialBijection& a, const PartialBijection& b) {
  PartialBijection c{std::vector<int>(b.map.size(), -1)};
  for (std::size_t x = 0; x < b.map.size(); ++x)
    if (b.map[x] >= 0) c.map[x] = a.map[static_cast<std::size_t>(b.map[x])];
  return c;
}

PartialBijection inverse(const PartialBijection& a) {
  PartialBijection c{std::vector<int>(a.map.size(), -1)};
  for (std::size_t x = 0; x < a.map.size(); ++x)
    if (a.map[x] >= 0) c.map[static_cast<std::size_t>(a.map[x])] = static_cast<int>(x);
  return c;
}

PartialBijection identity_on(int n, PointSet u) {
  PartialBijection c{std::vector<int>(static_cast<std::size_t>(n), -1)};
  for (int x = 0; x < n; ++x)
    if (has(u, x)) c.map[x] = x;
  return c;
}

std::optional<std::string> bijection_error(int n, const std::vector<std::pair<int, int>>& pairs) {
  std::vector<int> img(static_cast<std::size_t>(n), -1), pre(static_cast<std::size_t>(n), -1);
  for (auto [x, y] : pairs) {
    if (x < 0 || y < 0 || x >= n || y >= n) return "point out of range";
    if (img[x] >= 0 && img[x] != y) return "not functional at source point " + std::to_string(x);
    if (pre[y] >= 0 && pre[y] != x) return "not injective at target point " + std::to_string(y);
    img[x] = y;
    pre[y] = x;
  }
  return std::nullopt;
}

PartialBijection from_pairs(int n, const std::vector<std::pair<int, int>>& pairs) {
  if (auto e = bijection_error(n, pairs)) throw InputError("partial bijection: " + *e);
  PartialBijection b{std::vector<int>(static_cast<std::size_t>(n), -1)};
  for (auto [x, y] : pairs) b.map[x] = y;
  return b;
}

bool GroupoidModel::contains(const PartialBijection& b) const {
  return std::binary_search(bisections.begin(), bisections.end(), b);
}

std::vector<int> GroupoidModel::orbit_of() const {
  std::vector<int> parent(static_cast<std::size_t>(size()));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  for (const auto& b : generators)
    for (int x = 0; x < size(); ++x)
      if (b.map[x] >= 0) {
        int a = find(x), c = find(b.map[x]);
        if (a != c) parent[std::max(a, c)] = std::min(a, c);
      }
  std::vector<int> out(static_cast<std::size_t>(size())), label(static_cast<std::size_t>(size()), -1);
  int next = 0;
  for (int x = 0; x < size(); ++x) {
    int r = find(x);
    if (label[r] < 0) label[r] = next++;
    out[x] = label[r];
  }
  return out;
}

int GroupoidModel::orbit_count() const {
  auto o = orbit_of();
  return o.empty() ? 0 : *std::max_element(o.begin(), o.end()) + 1;
}

std::string GroupoidModel::format(const PartialBijection& b) const {
  std::string s;
  for (int x = 0; x < size(); ++x)
    if (b.map[x] >= 0) {
      if (!s.empty()) s += ", ";
      s += points[x] + "->" + points[b.map[x]];
    }
  return s.empty() ? "{}" : s;
}

GroupoidModel close_inverse_semigroup(std::vector<std::string> points, std::vector<std::string> names,
                                      std::vector<PartialBijection> generators, std::size_t cap,
                                      bool all_restrictions) {
  int n = static_cast<int>(points.size());
  if (n > 16) throw InputError("groupoid: at most 16 points");
  if (names.size() != generators.size()) throw InputError("groupoid: one name per bisection");
  for (const auto& b : generators) {
    if (static_cast<int>(b.map.size()) != n) throw InputError("groupoid: bisection on the wrong point set");
    std::vector<std::pair<int, int>> pairs;
    for (int x = 0; x < n; ++x)
      if (b.map[x] >= 0) pairs.push_back({x, b.map[x]});
    if (auto e = bijection_error(n, pairs)) throw InputError("groupoid: " + *e);
  }
  GroupoidModel g;
  g.space = discrete_space(points);
  g.points = std::move(points);
  g.generator_names = std::move(names);
  g.generators = std::move(generators);

  std::vector<PartialBijection> atoms;
  for (const auto& b : g.generators) {
    atoms.push_back(b);
    atoms.push_back(inverse(b));
  }
  atoms.push_back(identity_on(n, g.space.all()));
  for (int x = 0; x < n; ++x) atoms.push_back(identity_on(n, PointSet{1} << x));
  if (all_restrictions)
    for (PointSet u = 0; u <= g.space.all(); ++u) atoms.push_back(identity_on(n, u));

  // words in the atoms, grown by right multiplication
  std::set<PartialBijection> seen(atoms.begin(), atoms.end());
  std::deque<PartialBijection> todo(seen.begin(), seen.end());
  while (!todo.empty()) {
    auto w = todo.front();
    todo.pop_front();
    for (const auto& a : atoms) {
      auto c = compose(w, a);
      if (seen.insert(c).second) {
        if (seen.size() > cap) throw CapExceeded("inverse semigroup closure exceeded " + std::to_string(cap));
        todo.push_back(std::move(c));
      }
    }
  }
  g.bisections.assign(seen.begin(), seen.end());
  return g;
}

LscFn lsc_of(const GroupoidModel& g, const std::vector<int>& pointwise) { return from_values(g.space, pointwise); }

LscFn s_star(const GroupoidModel& g, const BFunction& b) {
  std::vector<PointSet> t;
  for (const auto& w : b.terms) t.push_back(w.dom());
  return normal_form(g.space, t);
}

LscFn r_star(const GroupoidModel& g, const BFunction& b) {
  std::vector<PointSet> t;
  for (const auto& w : b.terms) t.push_back(w.ran());
  return normal_form(g.space, t);
}

std::vector<ExtQ> sigma_map(const GroupoidModel& g, const LscFn& f) {
  auto orb = g.orbit_of();
  auto v = values(g.space, f);
  std::vector<ExtQ> out(static_cast<std::size_t>(g.orbit_count()), ExtQ(0));
  for (int x = 0; x < g.size(); ++x) out[orb[x]] = out[orb[x]] + ExtQ(static_cast<long>(v[x]));
  return out;
}

namespace {

// Orbit where the sums compare the wrong way: unequal (sim) or f larger (precsim).
std::optional<int> separating_orbit(const GroupoidModel& g, const LscFn& f, const LscFn& h, bool equality) {
  auto a = sigma_map(g, f), b = sigma_map(g, h);
  for (std::size_t o = 0; o < a.size(); ++o)
    if (equality ? !(a[o] == b[o]) : !(a[o] <= b[o])) return static_cast<int>(o);
  return std::nullopt;
}

// Backtracking over bisections covering the first point still owed.
// exact: the sources must use up `need` exactly; otherwise they only need to cover it.
struct MatchSearch {
  const GroupoidModel& g;
  Candidates cand;
  bool exact;
  std::size_t cap;
  std::size_t nodes = 0;
  bool capped = false;
  std::unordered_set<std::string> dead;
  std::vector<PartialBijection> chosen;

  MatchSearch(const GroupoidModel& gm, bool ex, std::size_t c) : g(gm), cand(gm), exact(ex), cap(c) {}

  bool run(std::vector<int> need, std::vector<int> room) {
    if (++nodes > cap) {
      capped = true;
      return false;
    }
    int x = -1;
    for (int p = 0; p < g.size(); ++p)
      if (need[p] > 0) {
        x = p;
        break;
      }
    if (x < 0) return !exact || positive(room) == 0;
    auto key = key_of(need, room);
    if (dead.count(key)) return false;
    PointSet owed = positive(need), free = positive(room);
    for (const auto* w : cand.through[x]) {
      if (!subset(w->ran(), free)) continue;
      if (exact && !subset(w->dom(), owed)) continue;
      auto n2 = lowered(need, w->dom());
      if (!exact)
        for (auto& v : n2) v = std::max(v, 0);
      chosen.push_back(*w);
      if (run(std::move(n2), lowered(room, w->ran()))) return true;
      chosen.pop_back();
      if (capped) return false;
    }
    dead.insert(key);
    return false;
  }
};

ComparisonJudgement compare(const GroupoidModel& g, const LscFn& f, const LscFn& h, bool exact,
                            const GroupoidBudget& b) {
  ComparisonJudgement j;
  MatchSearch s(g, exact, b.node_cap);
  bool found = s.run(values(g.space, f), values(g.space, h));
  j.nodes = s.nodes;
  if (found) {
    j.verdict = Verdict::PROVED;
    j.witnesses = {f};
    j.certificates = {BFunction{s.chosen}};
    j.method = "bisection-matching";
  } else if (s.capped) {
    j.verdict = Verdict::UNKNOWN;
    j.method = "node cap reached";
  } else {
    j.verdict = Verdict::REFUTED;
    j.orbit = separating_orbit(g, f, h, exact);
    j.method = j.orbit ? "orbit-sum" : "exhaustive-matching";
  }
  return j;
}

}  // namespace

ComparisonJudgement sim_G(const GroupoidModel& g, const LscFn& f, const LscFn& h, const GroupoidBudget& b) {
  return compare(g, f, h, true, b);
}

// The unit space is discrete, so f << f and k = f is the only way-below witness needed.
ComparisonJudgement precsim_B(const GroupoidModel& g, const LscFn& f, const LscFn& h, const GroupoidBudget& b) {
  return compare(g, f, h, false, b);
}

CriterionJudgement precsim_criterion(const GroupoidModel& g, const std::vector<PointSet>& us,
                                     const std::vector<PointSet>& vs, const GroupoidBudget& b) {
  CriterionJudgement out;
  std::vector<const PartialBijection*> pool;
  {
    std::set<std::pair<PointSet, PointSet>> seen;
    for (const auto& w : g.bisections)
      if (w.dom() != 0 && seen.insert({w.dom(), w.ran()}).second) pool.push_back(&w);
  }
  std::size_t n = us.size(), m = vs.size();
  std::vector<PointSet> covered(n, 0), used(m, 0);
  CoveringFamily fam;
  std::set<std::vector<PointSet>> dead;
  bool capped = false;
  std::function<bool()> rec = [&]() -> bool {
    if (++out.nodes > b.node_cap) {
      capped = true;
      return false;
    }
    std::size_t i = 0;
    while (i < n && subset(us[i], covered[i])) ++i;
    if (i == n) return true;
    std::vector<PointSet> key(covered);
    key.insert(key.end(), used.begin(), used.end());
    if (dead.count(key)) return false;
    int x = std::countr_zero(us[i] & ~covered[i]);
    for (const auto* w : pool) {
      if (!has(w->dom(), x)) continue;
      for (std::size_t j = 0; j < m; ++j) {
        if (!subset(w->ran(), vs[j] & ~used[j])) continue;
        PointSet c0 = covered[i], u0 = used[j];
        covered[i] |= w->dom() & us[i];
        used[j] |= w->ran();
        fam.bisections.push_back(*w);
        fam.alpha.push_back(static_cast<int>(i));
        fam.beta.push_back(static_cast<int>(j));
        if (rec()) return true;
        covered[i] = c0;
        used[j] = u0;
        fam.bisections.pop_back();
        fam.alpha.pop_back();
        fam.beta.pop_back();
        if (capped) return false;
      }
    }
    dead.insert(key);
    return false;
  };
  if (rec()) {
    out.verdict = Verdict::PROVED;
    out.family = fam;
  } else {
    out.verdict = capped ? Verdict::UNKNOWN : Verdict::REFUTED;
  }
  return out;
}

std::optional<std::string> check_covering_family(const GroupoidModel& g, const std::vector<PointSet>& us,
                                                 const std::vector<PointSet>& vs, const CoveringFamily& fam) {
  if (fam.alpha.size() != fam.bisections.size() || fam.beta.size() != fam.bisections.size())
    return "labels do not match the bisections";
  std::vector<PointSet> cov(us.size(), 0), used(vs.size(), 0);
  for (std::size_t a = 0; a < fam.bisections.size(); ++a) {
    const auto& w = fam.bisections[a];
    if (!g.contains(w)) return "bisection " + g.format(w) + " is not in B";
    int i = fam.alpha[a], j = fam.beta[a];
    if (i < 0 || j < 0 || static_cast<std::size_t>(i) >= us.size() || static_cast<std::size_t>(j) >= vs.size())
      return "label out of range";
    if (used[j] & w.ran()) return "ranges labelled " + std::to_string(j) + " overlap";
    if (!subset(w.ran(), vs[j])) return "range of " + g.format(w) + " leaves its target set";
    used[j] |= w.ran();
    cov[i] |= w.dom();
  }
  for (std::size_t i = 0; i < us.size(); ++i)
    if (!subset(us[i], cov[i])) return "source set " + std::to_string(i) + " not covered";
  return std::nullopt;
}

std::optional<std::string> verify_comparison(const GroupoidModel& g, GroupoidClaim kind, const LscFn& f,
                                             const LscFn& h, const ComparisonJudgement& j) {
  bool exact = kind == GroupoidClaim::SIM;
  if (j.verdict == Verdict::PROVED) {
    if (j.certificates.size() != j.witnesses.size() || j.certificates.empty()) return "no certificate";
    bool has_f = false;
    for (std::size_t i = 0; i < j.witnesses.size(); ++i) {
      const auto& k = j.witnesses[i];
      const auto& b = j.certificates[i];
      for (const auto& w : b.terms)
        if (!g.contains(w)) return "term " + g.format(w) + " is not in B";
      auto sv = values(g.space, s_star(g, b)), rv = values(g.space, r_star(g, b));
      auto kv = values(g.space, k), hv = values(g.space, h);
      for (int x = 0; x < g.size(); ++x) {
        if (exact ? sv[x] != kv[x] : sv[x] < kv[x]) return "source count wrong at " + g.points[x];
        if (exact ? rv[x] != hv[x] : rv[x] > hv[x]) return "range count wrong at " + g.points[x];
      }
      if (!way_below(g.space, k, f) && !exact) return "witness is not way below f";
      has_f |= k == f;
    }
    // f << f on a discrete space, so it dominates every other witness
    if (!has_f) return "f itself is not among the witnesses";
    return std::nullopt;
  }
  if (j.verdict == Verdict::REFUTED) {
    if (j.orbit) {
      auto a = sigma_map(g, f), b = sigma_map(g, h);
      auto o = static_cast<std::size_t>(*j.orbit);
      if (o >= a.size()) return "orbit out of range";
      if (exact ? a[o] == b[o] : a[o] <= b[o]) return "orbit sums do not separate";
      return std::nullopt;
    }
    // no invariant separates: fall back to the covering criterion
    auto c1 = precsim_criterion(g, f.chain, h.chain);
    if (c1.verdict == Verdict::REFUTED) return std::nullopt;
    if (exact && precsim_criterion(g, h.chain, f.chain).verdict == Verdict::REFUTED) return std::nullopt;
    return "refutation not confirmed by the covering criterion";
  }
  return std::nullopt;
}

Verdict type_leq_by_search(const GroupoidModel& g, const LscFn& f, const LscFn& h, const GroupoidBudget& b) {
  auto fv = values(g.space, f), hv = values(g.space, h);
  int d = std::accumulate(hv.begin(), hv.end(), 0) - std::accumulate(fv.begin(), fv.end(), 0);
  if (d < 0) return Verdict::REFUTED;
  bool unknown = false;
  std::vector<int> e(static_cast<std::size_t>(g.size()), 0);
  std::function<bool(int, int)> rec = [&](int x, int left) -> bool {
    if (x == g.size() - 1) {
      e[x] = left;
      std::vector<int> sum(fv);
      for (int p = 0; p < g.size(); ++p) sum[p] += e[p];
      auto r = sim_G(g, lsc_of(g, sum), h, b).verdict;
      unknown |= r == Verdict::UNKNOWN;
      return r == Verdict::PROVED;
    }
    for (int v = 0; v <= left; ++v) {
      e[x] = v;
      if (rec(x + 1, left - v)) return true;
    }
    return false;
  };
  if (rec(0, d)) return Verdict::PROVED;
  return unknown ? Verdict::UNKNOWN : Verdict::REFUTED;
}

std::string open_generator_name(const GroupoidModel& g, PointSet u) {
  bool plain = true;
  for (const auto& p : g.points)
    for (char c : p)
      if (!std::isalnum(static_cast<unsigned char>(c))) plain = false;
  if (!plain) return "U" + std::to_string(u);
  std::string s = "U";
  for (int x = 0; x < g.size(); ++x)
    if (has(u, x)) s += "_" + g.points[x];
  return s;
}

MonoidPresentation export_presentation(const GroupoidModel& g) {
  MonoidPresentation p;
  PointSet all = g.space.all();
  for (PointSet u = 1; u <= all; ++u) p.generators.push_back(open_generator_name(g, u));
  auto gen = [&](PointSet u) { return p.gen(static_cast<std::size_t>(u - 1)); };
  for (PointSet u = 1; u <= all; ++u) {
    if (std::popcount(u) < 2) continue;
    PointSet x = u & (~u + 1);
    p.relations.push_back({gen(u), add(gen(u & ~x), gen(x)), RelKind::EQ});
  }
  std::set<std::pair<PointSet, PointSet>> done;
  for (const auto& w : g.bisections) {
    PointSet d = w.dom(), r = w.ran();
    if (d == 0 || d == r || !done.insert({std::min(d, r), std::max(d, r)}).second) continue;
    p.relations.push_back({gen(d), gen(r), RelKind::EQ});
  }
  return p;
}

Element element_of(const GroupoidModel& g, const LscFn& f) {
  Element e(static_cast<std::size_t>(g.space.all()), 0);
  for (auto u : f.chain) ++e[static_cast<std::size_t>(u - 1)];
  return e;
}

IdealReport invariant_subsets_and_ideals(const GroupoidModel& g, std::size_t cap) {
  IdealReport rep;
  auto orb = g.orbit_of();
  int k = g.orbit_count();
  if (k > 20) throw InputError("groupoid: too many orbits to enumerate invariant sets");
  std::vector<PointSet> orbit_set(static_cast<std::size_t>(k), 0);
  for (int x = 0; x < g.size(); ++x) orbit_set[orb[x]] |= PointSet{1} << x;
  auto p = export_presentation(g);
  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    InvariantIdeal inv;
    for (int o = 0; o < k; ++o)
      if ((mask >> o) & 1u) inv.open |= orbit_set[o];
    Element y = p.zero();
    for (PointSet v = inv.open; v; v = (v - 1) & inv.open) {
      inv.ideal_generators.push_back(p.gen(static_cast<std::size_t>(v - 1)));
      y = add(y, inv.ideal_generators.back());
    }
    inv.generators_in_ideal = ideal_closure(p, y).in;
    rep.invariant.push_back(std::move(inv));
  }
  // every order ideal is generated by the generators it contains
  std::set<std::vector<bool>> ideals;
  std::deque<std::vector<bool>> todo;
  auto push = [&](const Element& y) {
    auto c = ideal_closure(p, y).in;
    if (ideals.insert(c).second) todo.push_back(c);
  };
  push(p.zero());
  rep.saturated = true;
  while (!todo.empty()) {
    if (ideals.size() > cap) {
      rep.saturated = false;
      break;
    }
    auto s = todo.front();
    todo.pop_front();
    Element base = p.zero();
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s[i]) base = add(base, p.gen(i));
    for (std::size_t i = 0; i < s.size(); ++i)
      if (!s[i]) push(add(base, p.gen(i)));
  }
  rep.presentation_ideals = ideals.size();
  std::set<std::vector<bool>> from_opens;
  for (const auto& inv : rep.invariant) from_opens.insert(inv.generators_in_ideal);
  rep.matches = rep.saturated && from_opens.size() == rep.invariant.size() && from_opens == ideals;
  rep.minimal = k == 1;
  if (rep.minimal) rep.simple = is_simple(p);
  return rep;
}

Stabilization stabilize(const GroupoidModel& g, int n) {
  if (n < 1) throw InputError("stabilize: n must be at least 1");
  int sz = g.size();
  std::vector<std::string> pts;
  for (int x = 0; x < sz; ++x)
    for (int k = 1; k <= n; ++k) pts.push_back(g.points[x] + "." + std::to_string(k));
  auto idx = [n](int x, int k) { return x * n + (k - 1); };
  std::vector<std::string> names;
  std::vector<PartialBijection> gens;
  std::vector<PartialBijection> base = g.generators;
  std::vector<std::string> base_names = g.generator_names;
  base.push_back(identity_on(sz, g.space.all()));
  base_names.push_back("id");
  for (std::size_t b = 0; b < base.size(); ++b)
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) {
        PartialBijection w{std::vector<int>(static_cast<std::size_t>(sz * n), -1)};
        for (int x = 0; x < sz; ++x)
          if (base[b].map[x] >= 0) w.map[idx(x, j)] = idx(base[b].map[x], i);
        gens.push_back(w);
        names.push_back(base_names[b] + "@" + std::to_string(i) + std::to_string(j));
      }
  return Stabilization{close_inverse_semigroup(pts, names, gens), n};
}

LscFn stabilize_forward(const GroupoidModel& g, const Stabilization& st, const LscFn& f) {
  auto v = values(g.space, f);
  std::vector<int> w(static_cast<std::size_t>(st.model.size()), 0);
  for (int x = 0; x < g.size(); ++x) w[x * st.n] = v[x];
  return lsc_of(st.model, w);
}

LscFn stabilize_backward(const GroupoidModel& g, const Stabilization& st, const LscFn& f) {
  auto v = values(st.model.space, f);
  std::vector<int> w(static_cast<std::size_t>(g.size()), 0);
  for (int x = 0; x < g.size(); ++x)
    for (int k = 0; k < st.n; ++k) w[x] += v[x * st.n + k];
  return lsc_of(g, w);
}

GroupoidModel restrict_to_invariant(const GroupoidModel& g, PointSet u) {
  auto orb = g.orbit_of();
  for (int x = 0; x < g.size(); ++x)
    for (int y = 0; y < g.size(); ++y)
      if (orb[x] == orb[y] && has(u, x) != has(u, y))
        throw InputError("restrict: " + g.space.format(u) + " is not invariant");
  std::vector<int> newidx(static_cast<std::size_t>(g.size()), -1);
  std::vector<std::string> pts;
  for (int x = 0; x < g.size(); ++x)
    if (!has(u, x)) {
      newidx[x] = static_cast<int>(pts.size());
      pts.push_back(g.points[x]);
    }
  std::vector<PartialBijection> gens;
  for (const auto& b : g.generators) {
    PartialBijection w{std::vector<int>(pts.size(), -1)};
    for (int x = 0; x < g.size(); ++x)
      if (newidx[x] >= 0 && b.map[x] >= 0) w.map[newidx[x]] = newidx[b.map[x]];
    gens.push_back(w);
  }
  return close_inverse_semigroup(pts, g.generator_names, gens);
}

WeightCone invariant_weight_cone(const GroupoidModel& g) {
  WeightCone c;
  auto orb = g.orbit_of();
  int k = g.orbit_count();
  auto p = export_presentation(g);
  auto state_of = [&](const std::vector<Q>& w) {
    StateVector s;
    for (PointSet u = 1; u <= g.space.all(); ++u) {
      Q t = 0;
      for (int x = 0; x < g.size(); ++x)
        if (has(u, x)) t += w[x];
      s.values.push_back(ExtQ(t));
    }
    return s;
  };
  c.rays_are_states = true;
  for (int o = 0; o < k; ++o) {
    std::vector<Q> w(static_cast<std::size_t>(g.size()), Q(0));
    for (int x = 0; x < g.size(); ++x)
      if (orb[x] == o) w[x] = 1;
    c.rays_are_states &= !check_state(p, state_of(w)).has_value();
    c.rays.push_back(w);
  }
  c.lp_state_orbit_constant = true;
  for (int o = 0; o < k; ++o) {
    int x0 = static_cast<int>(std::find(orb.begin(), orb.end(), o) - orb.begin());
    auto out = find_state(p, p.gen(static_cast<std::size_t>((PointSet{1} << x0) - 1)));
    if (out.status != LPStatus::FEASIBLE || !out.state) {
      c.lp_state_orbit_constant = false;
      continue;
    }
    const auto& s = *out.state;
    for (int x = 0; x < g.size(); ++x)
      for (int y = 0; y < g.size(); ++y)
        if (orb[x] == orb[y] && !(s.values[(PointSet{1} << x) - 1] == s.values[(PointSet{1} << y) - 1]))
          c.lp_state_orbit_constant = false;
    c.lp_states.push_back(s);
  }
  return c;
}

}  // namespace typesemi
