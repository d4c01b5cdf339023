#include "typesemi/lsc.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>

#include "typesemi/lp.hpp"

namespace typesemi {

namespace {

bool has(PointSet s, int x) { return (s >> x) & 1u; }
bool subset(PointSet a, PointSet b) { return (a & ~b) == 0; }

}  // namespace

PointSet FiniteSpace::all() const { return size() == 64 ? ~PointSet{0} : (PointSet{1} << size()) - 1; }

bool FiniteSpace::in_lattice(PointSet s) const { return std::binary_search(opens.begin(), opens.end(), s); }

bool FiniteSpace::is_open(PointSet s) const { return s == all() || in_lattice(s); }

bool FiniteSpace::is_closed(PointSet s) const { return is_open(all() & ~s); }

PointSet FiniteSpace::interior(PointSet s) const {
  if (s == all()) return s;
  PointSet best = 0;
  for (auto u : opens)
    if (subset(u, s)) best |= u;  // O is union closed
  return best;
}

PointSet FiniteSpace::closure(PointSet s) const { return all() & ~interior(all() & ~s); }

PointSet FiniteSpace::neighbourhood(int x) const {
  PointSet n = all();
  for (auto u : opens)
    if (has(u, x)) n &= u;
  return n;
}

bool FiniteSpace::regular() const {
  for (auto u : opens)
    if (!is_closed(u)) return false;
  return true;
}

int FiniteSpace::index_of(const std::string& name) const {
  for (int i = 0; i < size(); ++i)
    if (points[i] == name) return i;
  throw InputError("unknown point '" + name + "'");
}

PointSet FiniteSpace::parse_set(const std::vector<std::string>& names) const {
  PointSet s = 0;
  for (const auto& n : names) s |= PointSet{1} << index_of(n);
  return s;
}

std::string FiniteSpace::format(PointSet s) const {
  std::string out = "{";
  bool first = true;
  for (int x = 0; x < size(); ++x)
    if (has(s, x)) {
      if (!first) out += ",";
      out += points[x];
      first = false;
    }
  return out + "}";
}

std::optional<std::string> FiniteSpace::validation_error() const {
  if (size() > 64) return "at most 64 points are supported";
  std::set<std::string> seen;
  for (const auto& p : points)
    if (!seen.insert(p).second) return "duplicate point '" + p + "'";
  if (!std::is_sorted(opens.begin(), opens.end()) ||
      std::adjacent_find(opens.begin(), opens.end()) != opens.end())
    return "open family must be sorted and duplicate free";
  if (!in_lattice(0)) return "the empty set must be open";
  for (auto u : opens) {
    if (!subset(u, all())) return "open set mentions an unknown point";
    for (auto v : opens) {
      if (!in_lattice(u | v)) return "opens not closed under union: " + format(u) + ", " + format(v);
      if (!in_lattice(u & v)) return "opens not closed under intersection: " + format(u) + ", " + format(v);
    }
  }
  return std::nullopt;
}

void FiniteSpace::validate() const {
  if (auto e = validation_error()) throw InputError("invalid finite space: " + *e);
}

FiniteSpace make_space(std::vector<std::string> points, const std::vector<PointSet>& generators) {
  FiniteSpace sp;
  sp.points = std::move(points);
  std::set<PointSet> fam(generators.begin(), generators.end());
  fam.insert(0);
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<PointSet> cur(fam.begin(), fam.end());
    for (auto a : cur)
      for (auto b : cur) {
        grew |= fam.insert(a | b).second;
        grew |= fam.insert(a & b).second;
      }
  }
  sp.opens.assign(fam.begin(), fam.end());
  sp.validate();
  return sp;
}

FiniteSpace discrete_space(std::vector<std::string> points) {
  if (points.size() > 16) throw InputError("discrete space: at most 16 points");
  FiniteSpace sp;
  sp.points = std::move(points);
  for (PointSet u = 0; u <= sp.all(); ++u) sp.opens.push_back(u);
  return sp;
}

std::vector<int> values_of_terms(const FiniteSpace& sp, const std::vector<PointSet>& terms) {
  std::vector<int> v(static_cast<std::size_t>(sp.size()), 0);
  for (auto t : terms)
    for (int x = 0; x < sp.size(); ++x)
      if (has(t, x)) ++v[x];
  return v;
}

std::vector<int> values(const FiniteSpace& sp, const LscFn& f) { return values_of_terms(sp, f.chain); }

LscFn from_values(const FiniteSpace& sp, const std::vector<int>& v) {
  LscFn f;
  int top = v.empty() ? 0 : *std::max_element(v.begin(), v.end());
  for (int k = 1; k <= top; ++k) {
    PointSet level = 0;
    for (int x = 0; x < sp.size(); ++x)
      if (v[x] >= k) level |= PointSet{1} << x;
    if (!sp.in_lattice(level)) throw InputError("level set " + sp.format(level) + " is not in the lattice");
    f.chain.push_back(level);
  }
  return f;
}

LscFn normal_form(const FiniteSpace& sp, const std::vector<PointSet>& terms) {
  for (auto t : terms)
    if (!sp.in_lattice(t)) throw InputError("term " + sp.format(t) + " is not in the lattice");
  return from_values(sp, values_of_terms(sp, terms));
}

LscFn indicator(const FiniteSpace& sp, PointSet u) { return normal_form(sp, {u}); }

LscFn join(const FiniteSpace& sp, const LscFn& f, const LscFn& g) {
  LscFn h;
  for (std::size_t k = 0; k < std::max(f.chain.size(), g.chain.size()); ++k)
    h.chain.push_back((k < f.chain.size() ? f.chain[k] : 0) | (k < g.chain.size() ? g.chain[k] : 0));
  (void)sp;
  return h;
}

LscFn meet(const FiniteSpace& sp, const LscFn& f, const LscFn& g) {
  LscFn h;
  for (std::size_t k = 0; k < std::min(f.chain.size(), g.chain.size()); ++k) {
    PointSet s = f.chain[k] & g.chain[k];
    if (s == 0) break;
    h.chain.push_back(s);
  }
  (void)sp;
  return h;
}

LscFn sum(const FiniteSpace& sp, const LscFn& f, const LscFn& g) {
  auto terms = f.chain;
  terms.insert(terms.end(), g.chain.begin(), g.chain.end());
  return normal_form(sp, terms);
}

bool leq(const FiniteSpace& sp, const LscFn& f, const LscFn& g) {
  auto a = values(sp, f), b = values(sp, g);
  for (int x = 0; x < sp.size(); ++x)
    if (a[x] > b[x]) return false;
  return true;
}

std::string format(const FiniteSpace& sp, const LscFn& f) {
  if (f.chain.empty()) return "0";
  std::string out;
  for (auto u : f.chain) {
    if (!out.empty()) out += " + ";
    out += "1" + sp.format(u);
  }
  return out;
}

std::vector<int> closure_values(const FiniteSpace& sp, const LscFn& g) {
  std::vector<PointSet> closed;
  for (auto u : g.chain) closed.push_back(sp.closure(u));
  return values_of_terms(sp, closed);
}

bool way_below(const FiniteSpace& sp, const LscFn& g, const LscFn& f, const Compactness& compact) {
  auto cg = closure_values(sp, g);
  auto fv = values(sp, f);
  for (int x = 0; x < sp.size(); ++x)
    if (cg[x] > fv[x]) return false;
  if (compact) {
    PointSet support = g.chain.empty() ? 0 : sp.closure(g.chain.front());
    if (!compact(support)) return false;
  }
  return true;
}

std::optional<std::string> check_decomposition(const FiniteSpace& sp, const std::vector<PointSet>& ks,
                                               const std::vector<PointSet>& vs, const CoverMatrix& w) {
  if (w.size() != ks.size()) return "cover matrix has wrong number of rows";
  for (std::size_t i = 0; i < ks.size(); ++i) {
    if (w[i].size() != vs.size()) return "cover matrix row has wrong length";
    PointSet cover = 0;
    for (std::size_t j = 0; j < vs.size(); ++j) {
      if (!sp.in_lattice(w[i][j])) return "W[" + std::to_string(i) + "][" + std::to_string(j) + "] not in the lattice";
      cover |= w[i][j];
    }
    if (!subset(ks[i], cover)) return "K[" + std::to_string(i) + "] is not covered";
  }
  for (std::size_t j = 0; j < vs.size(); ++j) {
    PointSet used = 0;
    for (std::size_t i = 0; i < ks.size(); ++i) {
      PointSet c = sp.closure(w[i][j]);
      if (c & used) return "closures in column " + std::to_string(j) + " overlap";
      if (!subset(c, vs[j])) return "closure of W[" + std::to_string(i) + "][" + std::to_string(j) + "] leaves V";
      used |= c;
    }
  }
  return std::nullopt;
}

CoverMatrix decompose(const FiniteSpace& sp, const std::vector<PointSet>& ks, const std::vector<PointSet>& vs) {
  for (auto k : ks)
    if (!sp.is_closed(k)) throw InputError("K set " + sp.format(k) + " is not closed");
  for (auto v : vs)
    if (!sp.is_open(v)) throw InputError("V set " + sp.format(v) + " is not open");
  {
    auto a = values_of_terms(sp, ks), b = values_of_terms(sp, vs);
    for (int x = 0; x < sp.size(); ++x)
      if (a[x] > b[x]) throw InputError("sum 1_K exceeds sum 1_V at point " + sp.points[x]);
  }
  std::size_t n = ks.size();
  CoverMatrix w(n, std::vector<PointSet>(vs.size(), 0));
  std::vector<PointSet> cur = ks;
  for (std::size_t m = vs.size(); m > 0; --m) {
    std::size_t last = m - 1;
    // zero set of sum 1_V - sum 1_K over the first m opens, split by index sets (I, J)
    std::map<std::pair<std::uint64_t, std::uint64_t>, PointSet> strata;
    for (int x = 0; x < sp.size(); ++x) {
      std::uint64_t imask = 0, jmask = 0;
      for (std::size_t i = 0; i < n; ++i)
        if (has(cur[i], x)) imask |= std::uint64_t{1} << i;
      for (std::size_t j = 0; j < m; ++j)
        if (has(vs[j], x)) jmask |= std::uint64_t{1} << j;
      if (std::popcount(imask) != std::popcount(jmask) || jmask == 0) continue;
      if (!((jmask >> last) & 1u)) continue;  // only strata inside V_last feed this column
      strata[{imask, jmask}] |= PointSet{1} << x;
    }
    PointSet used = 0;
    for (const auto& [key, pts] : strata) {
      auto [imask, jmask] = key;
      PointSet vj = sp.all();
      for (std::size_t j = 0; j < m; ++j)
        if ((jmask >> j) & 1u) vj &= vs[j];
      PointSet nb = 0;
      for (int x = 0; x < sp.size(); ++x)
        if (has(pts, x)) nb |= sp.neighbourhood(x) & vj;
      PointSet c = sp.closure(nb);
      if (!subset(c, vs[last]) || (c & used))
        throw SeparationError("cannot separate the strata inside " + sp.format(vs[last]) +
                              " (space is not regular near " + sp.format(pts) + ")");
      used |= c;
      // order preserving bijection I -> J sends the largest i in I to last = max J
      std::size_t i = static_cast<std::size_t>(63 - std::countl_zero(imask));
      w[i][last] |= nb;
    }
    for (std::size_t i = 0; i < n; ++i) cur[i] &= ~w[i][last];
  }
  for (auto k : cur)
    if (k != 0) throw SeparationError("decomposition left points uncovered");
  if (auto e = check_decomposition(sp, ks, vs, w)) throw SeparationError("decomposition check failed: " + *e);
  return w;
}

WayBelowSplit split_way_below(const FiniteSpace& sp, const LscFn& k, const LscFn& f, const LscFn& g) {
  auto fg = sum(sp, f, g);
  if (!way_below(sp, k, fg)) throw InputError("premise k << f + g fails");
  std::vector<PointSet> ks;
  for (auto u : k.chain) ks.push_back(sp.closure(u));
  std::vector<PointSet> vs = f.chain;
  vs.insert(vs.end(), g.chain.begin(), g.chain.end());
  WayBelowSplit r;
  r.cover = decompose(sp, ks, vs);
  std::vector<PointSet> t1, t2;
  for (std::size_t j = 0; j < vs.size(); ++j)
    for (std::size_t i = 0; i < ks.size(); ++i) (j < f.chain.size() ? t1 : t2).push_back(r.cover[i][j]);
  r.k1 = normal_form(sp, t1);
  r.k2 = normal_form(sp, t2);
  auto both = sum(sp, r.k1, r.k2);
  if (!way_below(sp, r.k1, f) || !way_below(sp, r.k2, g) || !way_below(sp, k, both) || !way_below(sp, both, fg))
    throw SeparationError("split does not satisfy the way-below relations");
  return r;
}

LscFn interpolate(const FiniteSpace& sp, const LscFn& f, const LscFn& g) {
  if (!way_below(sp, f, g)) throw InputError("premise f << g fails");
  auto s = split_way_below(sp, f, g, LscFn{});
  if (!way_below(sp, f, s.k1) || !way_below(sp, s.k1, g)) throw SeparationError("interpolant check failed");
  return s.k1;
}

DimensionReport extend_dimension_function(const FiniteSpace& sp, const std::vector<ExtQ>& nu) {
  if (nu.size() != sp.opens.size()) throw InputError("one value per open set is required");
  DimensionReport r;
  auto val = [&](PointSet s) { return nu[std::lower_bound(sp.opens.begin(), sp.opens.end(), s) - sp.opens.begin()]; };
  auto fail = [&](const std::string& msg) {
    if (!r.violation) r.violation = msg;
  };
  if (!(val(0) == ExtQ(0))) {
    r.empty_is_zero = false;
    fail("nu(empty) must be 0");
  }
  for (auto a : sp.opens)
    for (auto b : sp.opens) {
      if (subset(a, b) && !(val(a) <= val(b))) {
        r.monotone = false;
        fail("not monotone: " + sp.format(a) + " inside " + sp.format(b));
      }
      ExtQ s = val(a) + val(b);
      bool ok = (a & b) ? val(a | b) <= s : val(a | b) == s;
      if (!ok) {
        r.subadditive = false;
        fail(std::string((a & b) ? "not subadditive" : "not additive on disjoint sets") + ": " + sp.format(a) +
             ", " + sp.format(b));
      }
    }
  for (auto v : sp.opens) {
    ExtQ best(0);
    for (auto u : sp.opens)
      if (subset(sp.closure(u), v) && best <= val(u)) best = val(u);
    if (!(best == val(v))) r.regular = false;
  }
  if (r.violation) return r;

  // atoms: points of the union of O grouped by membership pattern
  std::map<std::vector<bool>, PointSet> by_pattern;
  for (int x = 0; x < sp.size(); ++x) {
    std::vector<bool> pat;
    bool covered = false;
    for (auto u : sp.opens) {
      pat.push_back(has(u, x));
      covered |= has(u, x);
    }
    if (covered) by_pattern[pat] |= PointSet{1} << x;
  }
  for (const auto& [pat, s] : by_pattern) r.atoms.push_back(s);
  std::sort(r.atoms.begin(), r.atoms.end());
  std::size_t na = r.atoms.size();
  std::vector<bool> finite(na, false);
  for (auto v : sp.opens)
    if (!val(v).inf)
      for (std::size_t a = 0; a < na; ++a)
        if (subset(r.atoms[a], v)) finite[a] = true;
  std::vector<ExtQ> ext(na, ExtQ(0));
  bool inf_unique = true;
  for (auto v : sp.opens) {
    if (!val(v).inf) continue;
    int free = 0;
    for (std::size_t a = 0; a < na; ++a)
      if (subset(r.atoms[a], v) && !finite[a]) ++free;
    if (free == 0) {
      r.violation = "no additive extension: nu(" + sp.format(v) + ") is infinite but every atom inside is finite";
      return r;
    }
    if (free > 1) inf_unique = false;
  }
  for (std::size_t a = 0; a < na; ++a)
    if (!finite[a]) ext[a] = ExtQ::infinity();
  std::vector<std::size_t> var;  // atom per LP variable
  std::vector<int> slot(na, -1);
  for (std::size_t a = 0; a < na; ++a)
    if (finite[a]) {
      slot[a] = static_cast<int>(var.size());
      var.push_back(a);
    }
  LinearProgram lp;
  lp.nvars = var.size();
  for (auto v : sp.opens) {
    if (val(v).inf) continue;
    std::vector<Q> row(var.size(), 0);
    for (std::size_t a = 0; a < na; ++a)
      if (slot[a] >= 0 && subset(r.atoms[a], v)) row[static_cast<std::size_t>(slot[a])] = 1;
    lp.add(row, Rel::EQ, val(v).v);
  }
  auto res = solve_simplex(lp);
  if (res.status != LPStatus::FEASIBLE) {
    r.violation = "no additive extension to the generated set algebra (nu is not modular on O)";
    return r;
  }
  for (std::size_t k = 0; k < var.size(); ++k) ext[var[k]] = ExtQ(res.x[k]);
  r.unique = inf_unique;
  for (std::size_t k = 0; k < var.size() && r.unique; ++k) {
    auto up = lp, down = lp;
    up.objective.assign(var.size(), 0);
    up.objective[k] = 1;
    down.objective.assign(var.size(), 0);
    down.objective[k] = -1;
    auto hi = solve_simplex(up, false), lo = solve_simplex(down, false);
    if (hi.status != LPStatus::FEASIBLE || lo.status != LPStatus::FEASIBLE || hi.value != -lo.value) r.unique = false;
  }
  r.extension = ext;
  if (!r.regular) r.note = "nu is not regular: some nu(V) exceeds the sup over opens with closure inside V";
  return r;
}

}  // namespace typesemi
