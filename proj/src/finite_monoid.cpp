#include "typesemi/finite_monoid.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <set>

#include "typesemi/states.hpp"

namespace typesemi {

int FiniteMonoid::index_of(const std::string& name) const {
  for (int i = 0; i < size(); ++i)
    if (names[i] == name) return i;
  throw InputError("unknown element '" + name + "'");
}

int FiniteMonoid::multiple(std::int64_t n, int x) const { return multiples(*this, x).at(n); }

std::optional<std::string> FiniteMonoid::validation_error() const {
  int n = size();
  if (n == 0) return "empty element list";
  if (zero < 0 || zero >= n) return "zero index out of range";
  std::set<std::string> seen;
  for (const auto& s : names)
    if (!seen.insert(s).second) return "duplicate element name '" + s + "'";
  if (static_cast<int>(table.size()) != n) return "addition table has wrong number of rows";
  if (static_cast<int>(order.size()) != n) return "order matrix has wrong number of rows";
  for (int a = 0; a < n; ++a) {
    if (static_cast<int>(table[a].size()) != n) return "addition table row " + names[a] + " has wrong length";
    if (static_cast<int>(order[a].size()) != n) return "order matrix row " + names[a] + " has wrong length";
    for (int b = 0; b < n; ++b)
      if (table[a][b] < 0 || table[a][b] >= n) return "addition table entry out of range";
  }
  for (int a = 0; a < n; ++a) {
    if (table[zero][a] != a) return "zero is not neutral for " + names[a];
    for (int b = 0; b < n; ++b) {
      if (table[a][b] != table[b][a]) return "addition not commutative at " + names[a] + ", " + names[b];
      for (int c = 0; c < n; ++c)
        if (table[table[a][b]][c] != table[a][table[b][c]])
          return "addition not associative at " + names[a] + ", " + names[b] + ", " + names[c];
    }
  }
  for (int a = 0; a < n; ++a) {
    if (!order[a][a]) return "order not reflexive at " + names[a];
    if (!order[zero][a]) return "0 <= " + names[a] + " fails";
    for (int b = 0; b < n; ++b) {
      if (!order[a][b]) continue;
      for (int c = 0; c < n; ++c) {
        if (order[b][c] && !order[a][c])
          return "order not transitive at " + names[a] + ", " + names[b] + ", " + names[c];
        if (!order[table[a][c]][table[b][c]])
          return "order not translation invariant: " + names[a] + " <= " + names[b] + " but not after adding " +
                 names[c];
      }
    }
  }
  return std::nullopt;
}

void FiniteMonoid::validate() const {
  if (auto e = validation_error()) throw InputError("invalid finite monoid: " + *e);
}

int Multiples::at(std::int64_t k) const {
  if (k < 0) throw InputError("negative multiple");
  if (k < static_cast<std::int64_t>(seq.size())) return seq[static_cast<std::size_t>(k)];
  return seq[static_cast<std::size_t>(preperiod + (k - preperiod) % period)];
}

Multiples multiples(const FiniteMonoid& m, int x) {
  Multiples r;
  std::vector<int> first(static_cast<std::size_t>(m.size()), -1);
  int cur = m.zero;
  for (int k = 0;; ++k) {
    if (first[cur] >= 0) {
      r.preperiod = first[cur];
      r.period = k - first[cur];
      return r;
    }
    first[cur] = k;
    r.seq.push_back(cur);
    cur = m.sum(cur, x);
  }
}

std::string generator_name(const FiniteMonoid& m, int x) {
  const auto& s = m.names[x];
  bool ident = !s.empty() && (std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_');
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') ident = false;
  return ident ? s : "e_" + std::to_string(x);
}

namespace {

std::vector<int> nonzero_elements(const FiniteMonoid& m) {
  std::vector<int> out;
  for (int i = 0; i < m.size(); ++i)
    if (i != m.zero) out.push_back(i);
  return out;
}

}  // namespace

Element element_of(const FiniteMonoid& m, int x) {
  auto nz = nonzero_elements(m);
  Element e(nz.size(), 0);
  for (std::size_t i = 0; i < nz.size(); ++i)
    if (nz[i] == x) e[i] = 1;
  return e;
}

MonoidPresentation export_presentation(const FiniteMonoid& m) {
  MonoidPresentation p;
  for (int x : nonzero_elements(m)) p.generators.push_back(generator_name(m, x));
  for (int a = 0; a < m.size(); ++a)
    for (int b = a; b < m.size(); ++b) {
      if (a == m.zero || b == m.zero) continue;
      p.relations.push_back({add(element_of(m, a), element_of(m, b)), element_of(m, m.sum(a, b)), RelKind::EQ});
    }
  for (int a = 0; a < m.size(); ++a)
    for (int b = 0; b < m.size(); ++b)
      if (a != b && a != m.zero && m.le(a, b))
        p.relations.push_back({element_of(m, a), element_of(m, b), RelKind::LEQ});
  p.validate();
  return p;
}

std::vector<ExtQ> state_on_elements(const FiniteMonoid& m, const StateVector& s) {
  auto nz = nonzero_elements(m);
  std::vector<ExtQ> v(static_cast<std::size_t>(m.size()), ExtQ(0));
  for (std::size_t i = 0; i < nz.size(); ++i) v[nz[i]] = s.values.at(i);
  return v;
}

std::optional<std::string> check_finite_state(const FiniteMonoid& m, const std::vector<ExtQ>& v) {
  if (static_cast<int>(v.size()) != m.size()) return "state has wrong length";
  if (!(v[m.zero] == ExtQ(0))) return "state is nonzero at 0";
  for (int a = 0; a < m.size(); ++a) {
    if (!v[a].inf && v[a].v < 0) return "negative state value at " + m.names[a];
    for (int b = 0; b < m.size(); ++b) {
      if (!(v[a] + v[b] == v[m.sum(a, b)])) return "state not additive at " + m.names[a] + " + " + m.names[b];
      if (m.le(a, b) && !(v[a] <= v[b])) return "state not monotone at " + m.names[a] + " <= " + m.names[b];
    }
  }
  return std::nullopt;
}

bool in_ideal(const FiniteMonoid& m, int x, int y) {
  for (int v : multiples(m, y).seq)
    if (m.le(x, v)) return true;
  return false;
}

std::vector<int> ideal_of(const FiniteMonoid& m, int y) {
  std::vector<int> out;
  for (int x = 0; x < m.size(); ++x)
    if (in_ideal(m, x, y)) out.push_back(x);
  return out;
}

std::int64_t stable_domination_multiplier(const FiniteMonoid& m, int x, int y) {
  auto mx = multiples(m, x), my = multiples(m, y);
  std::int64_t start = std::max(mx.preperiod, my.preperiod);
  std::int64_t window = std::lcm<std::int64_t>(mx.period, my.period);
  for (std::int64_t n = 1; n <= start + window + 1; ++n)
    if (m.le(mx.at(n + 1), my.at(n))) return n;
  return 0;
}

bool is_infinite(const FiniteMonoid& m, int x) {
  if (x == m.zero) return false;
  for (int z = 0; z < m.size(); ++z)
    if (z != m.zero && m.le(m.sum(x, z), x)) return true;
  return false;
}

bool is_properly_infinite(const FiniteMonoid& m, int x) { return x != m.zero && m.le(m.sum(x, x), x); }

bool is_paradoxical(const FiniteMonoid& m, int x) {
  return x != m.zero && stable_domination_multiplier(m, x, x) > 0;
}

bool is_order_unit(const FiniteMonoid& m, int y) {
  if (y == m.zero) return false;
  for (int x = 0; x < m.size(); ++x)
    if (!in_ideal(m, x, y)) return false;
  return true;
}

bool is_simple(const FiniteMonoid& m) {
  for (int y = 0; y < m.size(); ++y)
    if (y != m.zero && !is_order_unit(m, y)) return false;
  return true;
}

bool is_conical(const FiniteMonoid& m) {
  for (int x = 0; x < m.size(); ++x)
    if (x != m.zero && m.le(x, m.zero)) return false;
  return true;
}

bool is_ideal(const FiniteMonoid& m, const std::vector<bool>& s) {
  if (!s[m.zero]) return false;
  for (int a = 0; a < m.size(); ++a) {
    if (!s[a]) continue;
    for (int b = 0; b < m.size(); ++b) {
      if (s[b] && !s[m.sum(a, b)]) return false;
      if (m.le(b, a) && !s[b]) return false;
    }
  }
  return true;
}

std::vector<std::vector<bool>> all_ideals(const FiniteMonoid& m) {
  std::vector<std::vector<bool>> out;
  int n = m.size();
  if (n > 20) throw InputError("too many elements to enumerate ideals");
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::vector<bool> s(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) s[i] = (mask >> i) & 1u;
    if (is_ideal(m, s)) out.push_back(s);
  }
  return out;
}

FiniteQuotient quotient(const FiniteMonoid& m, const std::vector<bool>& ideal) {
  int n = m.size();
  auto related = [&](int x, int y) {
    for (int a = 0; a < n; ++a)
      if (ideal[a])
        for (int b = 0; b < n; ++b)
          if (ideal[b] && m.sum(x, a) == m.sum(y, b)) return true;
    return false;
  };
  FiniteQuotient q;
  q.class_of.assign(static_cast<std::size_t>(n), -1);
  std::vector<int> rep;
  for (int x = 0; x < n; ++x) {
    for (std::size_t c = 0; c < rep.size(); ++c)
      if (related(x, rep[c])) {
        q.class_of[x] = static_cast<int>(c);
        break;
      }
    if (q.class_of[x] < 0) {
      q.class_of[x] = static_cast<int>(rep.size());
      rep.push_back(x);
    }
  }
  int k = static_cast<int>(rep.size());
  auto& qm = q.monoid;
  qm.zero = q.class_of[m.zero];
  qm.table.assign(k, std::vector<int>(k));
  qm.order.assign(k, std::vector<bool>(k, false));
  for (int c = 0; c < k; ++c) {
    qm.names.push_back("[" + m.names[rep[c]] + "]");
    for (int d = 0; d < k; ++d) {
      qm.table[c][d] = q.class_of[m.sum(rep[c], rep[d])];
      bool le = false;
      for (int a = 0; a < n && !le; ++a)
        if (ideal[a])
          for (int b = 0; b < n && !le; ++b)
            if (ideal[b] && m.le(m.sum(rep[c], a), m.sum(rep[d], b))) le = true;
      qm.order[c][d] = le;
    }
  }
  return q;
}

namespace {

std::optional<std::vector<ExtQ>> state_with_unit(const FiniteMonoid& m, int y) {
  auto p = export_presentation(m);
  auto o = find_state(p, element_of(m, y));
  if (o.status != LPStatus::FEASIBLE || !o.state) return std::nullopt;
  return state_on_elements(m, *o.state);
}

std::vector<ExtQ> zero_infinity_on(const FiniteMonoid& m, int y) {
  std::vector<ExtQ> v(static_cast<std::size_t>(m.size()), ExtQ::infinity());
  for (int x : ideal_of(m, y)) v[x] = ExtQ(0);
  return v;
}

void require_nonzero(const FiniteMonoid& m, int x) {
  if (x < 0 || x >= m.size()) throw InputError("element index out of range");
  if (x == m.zero) throw InputError("element must be nonzero");
}

}  // namespace

FiniteJudgement decide_paradoxical(const FiniteMonoid& m, int x) {
  require_nonzero(m, x);
  FiniteJudgement j;
  auto n = stable_domination_multiplier(m, x, x);
  if (n > 0) {
    j.verdict = Verdict::PROVED;
    j.multiplier = n;
    j.witness = {m.multiple(n + 1, x), m.multiple(n, x)};
    j.method = "table";
    return j;
  }
  j.verdict = Verdict::REFUTED;
  j.state = state_with_unit(m, x);
  j.method = j.state ? "state" : "table-exhaustive";
  return j;
}

FiniteJudgement decide_properly_infinite(const FiniteMonoid& m, int x) {
  require_nonzero(m, x);
  FiniteJudgement j;
  j.verdict = is_properly_infinite(m, x) ? Verdict::PROVED : Verdict::REFUTED;
  j.multiplier = 1;
  j.witness = {m.sum(x, x), x};
  j.method = "table";
  return j;
}

FiniteJudgement decide_stably_dominated(const FiniteMonoid& m, int x, int y) {
  FiniteJudgement j;
  auto n = stable_domination_multiplier(m, x, y);
  if (n > 0) {
    j.verdict = Verdict::PROVED;
    j.multiplier = n;
    j.witness = {m.multiple(n + 1, x), m.multiple(n, y)};
    j.method = "table";
    return j;
  }
  j.verdict = Verdict::REFUTED;
  j.method = "table-exhaustive";
  if (!in_ideal(m, x, y)) {
    j.state = zero_infinity_on(m, y);
    j.method = "state";
  } else if (y != m.zero) {
    auto p = export_presentation(m);
    auto o = sup_state_value(p, element_of(m, x), element_of(m, y));
    if (o.status == LPStatus::FEASIBLE && o.state && o.optimum >= 1) {
      j.state = state_on_elements(m, *o.state);
      j.method = "state";
    }
  }
  return j;
}

FiniteJudgement decide_simple(const FiniteMonoid& m) {
  FiniteJudgement j;
  j.method = "table";
  for (int y = 0; y < m.size(); ++y) {
    if (y == m.zero) continue;
    for (int x = 0; x < m.size(); ++x)
      if (!in_ideal(m, x, y)) {
        j.verdict = Verdict::REFUTED;
        j.witness = {y, x};
        j.state = zero_infinity_on(m, y);
        j.method = "state";
        return j;
      }
  }
  j.verdict = Verdict::PROVED;
  return j;
}

FiniteJudgement decide_leq(const FiniteMonoid& m, int x, int y) {
  FiniteJudgement j;
  j.verdict = m.le(x, y) ? Verdict::PROVED : Verdict::REFUTED;
  j.witness = {x, y};
  j.method = "table";
  return j;
}

std::optional<std::string> verify_finite(const FiniteMonoid& m, ClaimKind kind, int x, int y,
                                         const FiniteJudgement& j) {
  if (auto e = m.validation_error()) return "invalid monoid: " + *e;
  if (j.verdict == Verdict::UNKNOWN) return std::nullopt;
  if (j.state)
    if (auto e = check_finite_state(m, *j.state)) return "attached state: " + *e;
  const auto& st = j.state;
  switch (kind) {
    case ClaimKind::LEQ:
      if (m.le(x, y) != (j.verdict == Verdict::PROVED)) return "order table disagrees";
      return std::nullopt;
    case ClaimKind::PROPERLY_INFINITE:
      if (x == m.zero) return "zero element";
      if (m.le(m.sum(x, x), x) != (j.verdict == Verdict::PROVED)) return "order table disagrees";
      return std::nullopt;
    case ClaimKind::PARADOXICAL:
      y = x;
      if (x == m.zero) return "zero element";
      [[fallthrough]];
    case ClaimKind::STABLY_DOMINATED:
      if (j.verdict == Verdict::PROVED) {
        if (j.multiplier < 1) return "multiplier must be positive";
        if (!m.le(m.multiple(j.multiplier + 1, x), m.multiple(j.multiplier, y)))
          return "(n+1)x <= n y fails in the table";
        return std::nullopt;
      }
      if (st) {
        const auto& vx = (*st)[x];
        const auto& vy = (*st)[y];
        if (vy.inf) return "state is infinite on y";
        if (vx.inf) return std::nullopt;
        if (vy.v > 0 && vx.v >= vy.v) return std::nullopt;
        return "state does not separate";
      }
      if (stable_domination_multiplier(m, x, y) != 0) return "table shows stable domination";
      return std::nullopt;
    case ClaimKind::SIMPLE:
      if (j.verdict == Verdict::PROVED) return is_simple(m) ? std::nullopt : std::optional<std::string>("not simple");
      if (j.witness.size() != 2 || j.witness[0] == m.zero) return "refutation needs a nonzero y and some x";
      if (st) {
        if ((*st)[j.witness[0]].inf || !(*st)[j.witness[1]].inf) return "state does not separate x from <y>";
        return std::nullopt;
      }
      return in_ideal(m, j.witness[1], j.witness[0]) ? std::optional<std::string>("x lies in <y>") : std::nullopt;
    default:
      return "claim kind not supported on explicit monoids";
  }
}

InfinitenessIdeal compute_infiniteness_ideal(const FiniteMonoid& m, int y) {
  InfinitenessIdeal r;
  r.y = y;
  std::vector<bool> in(static_cast<std::size_t>(m.size()), false);
  for (int z = 0; z < m.size(); ++z)
    if (m.le(m.sum(y, z), y)) {
      in[z] = true;
      r.members.push_back(z);
    }
  r.ideal = is_ideal(m, in);
  r.inside_span = std::all_of(r.members.begin(), r.members.end(), [&](int z) { return in_ideal(m, z, y); });
  r.premise = y != m.zero || is_conical(m);
  bool nonzero = r.members.size() > 1 || (r.members.size() == 1 && r.members[0] != m.zero);
  r.infinite_iff_nonzero = is_infinite(m, y) == nonzero;
  auto span = ideal_of(m, y);
  bool span_nonzero = span.size() > 1 || (span.size() == 1 && span[0] != m.zero);
  r.proper_iff_equals_span = is_properly_infinite(m, y) == (span == r.members && span_nonzero);
  if (r.ideal) {
    auto q = quotient(m, in);
    r.image_finite_in_quotient = !is_infinite(q.monoid, q.class_of[y]);
  }
  return r;
}

WitnessedCheck check_plain_paradoxes(const FiniteMonoid& m) {
  for (int x = 0; x < m.size(); ++x)
    if (is_paradoxical(m, x) && !is_properly_infinite(m, x)) return {false, x};
  return {true, std::nullopt};
}

WitnessedCheck check_purely_infinite(const FiniteMonoid& m) {
  if (m.size() == 1) return {false, std::nullopt};
  for (int x = 0; x < m.size(); ++x)
    if (x != m.zero && !is_properly_infinite(m, x)) return {false, x};
  return {true, std::nullopt};
}

std::vector<PropertyCheck> check_monoid_properties(const FiniteMonoid& m) {
  std::vector<PropertyCheck> out;
  auto fail = [](PropertyCheck& c, const std::string& d) {
    if (c.holds) c.detail = d;
    c.holds = false;
  };
  int n = m.size();
  bool conical = is_conical(m);
  bool simple = is_simple(m);

  {
    PropertyCheck c{"infiniteness ideal is an ideal inside <y>", true, true, ""};
    PropertyCheck d{"infiniteness ideal detects (proper) infiniteness and quotient finiteness", true, true, ""};
    for (int y = 0; y < n; ++y) {
      auto r = compute_infiniteness_ideal(m, y);
      if (!r.ideal || !r.inside_span) fail(c, "y = " + m.names[y]);
      if (r.premise && (!r.infinite_iff_nonzero || !r.proper_iff_equals_span || !r.image_finite_in_quotient))
        fail(d, "y = " + m.names[y]);
    }
    out.push_back(c);
    out.push_back(d);
  }
  {
    PropertyCheck c{"simple monoids: every element finite or properly infinite", simple, true, ""};
    if (simple)
      for (int x = 0; x < n; ++x)
        if (is_infinite(m, x) && !is_properly_infinite(m, x)) fail(c, "x = " + m.names[x]);
    out.push_back(c);
  }
  {
    PropertyCheck c{"properly infinite iff <y> is the down-set of y iff infinite in every quotient missing y", true,
                    true, ""};
    auto ideals = all_ideals(m);
    for (int y = 0; y < n; ++y) {
      if (y == m.zero) continue;
      bool pi = is_properly_infinite(m, y);
      bool downset = true;
      for (int x = 0; x < n; ++x)
        if (in_ideal(m, x, y) != m.le(x, y)) downset = false;
      bool residual = true;
      for (const auto& I : ideals) {
        if (I[y]) continue;
        auto q = quotient(m, I);
        if (!is_infinite(q.monoid, q.class_of[y])) residual = false;
      }
      if (pi != downset || pi != residual) fail(c, "y = " + m.names[y]);
    }
    out.push_back(c);
  }
  {
    // The converse needs conicality: z <= 0 with z != 0 is never an order unit.
    PropertyCheck c{"simple and purely infinite implies ordered quotient is {0} or {0,inf}", n > 1, true, ""};
    PropertyCheck d{"conical: ordered quotient {0} or {0,inf} implies simple and purely infinite", n > 1 && conical,
                    true, ""};
    if (n > 1) {
      // classes of mutual comparability
      std::vector<int> cls(static_cast<std::size_t>(n), -1);
      std::vector<int> reps;
      for (int x = 0; x < n; ++x) {
        for (std::size_t k = 0; k < reps.size() && cls[x] < 0; ++k)
          if (m.le(x, reps[k]) && m.le(reps[k], x)) cls[x] = static_cast<int>(k);
        if (cls[x] < 0) {
          cls[x] = static_cast<int>(reps.size());
          reps.push_back(x);
        }
      }
      // reps[0] is the class of zero
      bool small = reps.size() == 1 || (reps.size() == 2 && cls[m.sum(reps[1], reps[1])] == 1);
      bool lhs = simple && check_purely_infinite(m).holds;
      if (lhs && !small) fail(c, "simple and purely infinite with a larger ordered quotient");
      if (conical && small && !lhs) fail(d, "small ordered quotient but not simple and purely infinite");
    }
    out.push_back(c);
    out.push_back(d);
  }
  {
    PropertyCheck c{"properly infinite elements are paradoxical", true, true, ""};
    PropertyCheck d{"y paradoxical iff <y> equals the set stably dominated by y", true, true, ""};
    PropertyCheck e{"conical: paradoxical iff some multiple is properly infinite", conical, true, ""};
    for (int y = 0; y < n; ++y) {
      if (y == m.zero) continue;
      bool par = is_paradoxical(m, y);
      if (is_properly_infinite(m, y) && !par) fail(c, "y = " + m.names[y]);
      bool same = true;
      for (int x = 0; x < n; ++x)
        if (in_ideal(m, x, y) != (stable_domination_multiplier(m, x, y) > 0)) same = false;
      if (par != same) fail(d, "y = " + m.names[y]);
      if (conical) {
        bool some = false;
        auto mult = multiples(m, y);
        for (std::size_t k = 1; k < mult.seq.size(); ++k)
          if (is_properly_infinite(m, mult.seq[k])) some = true;
        if (par != some) fail(e, "y = " + m.names[y]);
      }
    }
    out.push_back(c);
    out.push_back(d);
    out.push_back(e);
  }
  return out;
}

PropertyCheck check_state_dichotomy(const FiniteMonoid& m) {
  PropertyCheck c{"exactly one of paradoxical or a normalized state", true, true, ""};
  auto p = export_presentation(m);
  for (int y = 0; y < m.size(); ++y) {
    if (y == m.zero) continue;
    bool par = is_paradoxical(m, y);
    auto o = find_state(p, element_of(m, y));
    bool state = o.status == LPStatus::FEASIBLE;
    if (auto e = verify_state_outcome(p, element_of(m, y), o)) {
      c.holds = false;
      c.detail = "y = " + m.names[y] + ": " + *e;
      return c;
    }
    if (state) {
      if (auto e = check_finite_state(m, state_on_elements(m, *o.state))) {
        c.holds = false;
        c.detail = "y = " + m.names[y] + ": " + *e;
        return c;
      }
    }
    if (par == state) {
      c.holds = false;
      c.detail = "y = " + m.names[y] + (par ? ": both hold" : ": neither holds");
      return c;
    }
  }
  return c;
}

PropertyCheck check_stable_domination_criterion(const FiniteMonoid& m) {
  PropertyCheck c{"stable domination iff in the ideal with every normalized state smaller", true, true, ""};
  auto p = export_presentation(m);
  for (int y = 0; y < m.size(); ++y) {
    if (y == m.zero) continue;
    for (int x = 0; x < m.size(); ++x) {
      bool lhs = stable_domination_multiplier(m, x, y) > 0;
      bool rhs = false;
      if (in_ideal(m, x, y)) {
        auto o = sup_state_value(p, element_of(m, x), element_of(m, y));
        auto ex = element_of(m, x);
        if (auto e = verify_state_outcome(p, element_of(m, y), o, &ex)) {
          c.holds = false;
          c.detail = *e;
          return c;
        }
        if (o.status == LPStatus::INFEASIBLE) rhs = true;
        else if (o.status == LPStatus::FEASIBLE) rhs = o.optimum < 1;
      }
      if (lhs != rhs) {
        c.holds = false;
        c.detail = "x = " + m.names[x] + ", y = " + m.names[y];
        return c;
      }
    }
  }
  return c;
}

namespace {

using Table = std::vector<int>;  // row-major n*n

bool assoc_ok(const Table& t, int n) {
  for (int a = 1; a < n; ++a)
    for (int b = 1; b < n; ++b) {
      int ab = t[a * n + b];
      if (ab < 0) continue;
      for (int c = 1; c < n; ++c) {
        int bc = t[b * n + c];
        if (bc < 0) continue;
        int l = t[ab * n + c], r = t[a * n + bc];
        if (l >= 0 && r >= 0 && l != r) return false;
      }
    }
  return true;
}

void commutative_tables(int n, std::vector<Table>& out) {
  Table t(static_cast<std::size_t>(n * n), -1);
  for (int a = 0; a < n; ++a) t[a] = t[a * n] = a;
  std::vector<std::pair<int, int>> cells;
  for (int a = 1; a < n; ++a)
    for (int b = a; b < n; ++b) cells.push_back({a, b});
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == cells.size()) {
      out.push_back(t);
      return;
    }
    auto [a, b] = cells[i];
    for (int v = 0; v < n; ++v) {
      t[a * n + b] = t[b * n + a] = v;
      if (assoc_ok(t, n)) rec(i + 1);
    }
    t[a * n + b] = t[b * n + a] = -1;
  };
  rec(0);
}

Table canonical(const Table& t, int n) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  Table best;
  do {
    // perm maps old -> new; element 0 stays fixed
    Table u(t.size());
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) u[perm[a] * n + perm[b]] = perm[t[a * n + b]];
    if (best.empty() || u < best) best = u;
  } while (std::next_permutation(perm.begin() + 1, perm.end()));
  return best;
}

// Compatible preorders by include/exclude search over the pairs, closing after each inclusion.
void preorders(const FiniteMonoid& base, const std::function<bool(const FiniteMonoid&)>& visit, std::size_t& count,
               bool& stop) {
  int n = base.size();
  using Rel = std::vector<std::uint32_t>;  // row bitsets: bit b of rel[a] means a <= b
  auto close = [&](Rel r) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          if (!((r[a] >> b) & 1u)) continue;
          std::uint32_t add = r[b] & ~r[a];
          if (add) {
            r[a] |= add;
            changed = true;
          }
          for (int c = 0; c < n; ++c) {
            int ac = base.sum(a, c), bc = base.sum(b, c);
            if (!((r[ac] >> bc) & 1u)) {
              r[ac] |= 1u << bc;
              changed = true;
            }
          }
        }
    }
    return r;
  };
  Rel start(static_cast<std::size_t>(n), 0);
  for (int a = 0; a < n; ++a) start[a] |= 1u << a;
  for (int b = 0; b < n; ++b) start[base.zero] |= 1u << b;
  start = close(start);
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b && a != base.zero) pairs.push_back({a, b});
  Rel excluded(static_cast<std::size_t>(n), 0);
  FiniteMonoid m = base;
  std::function<void(std::size_t, const Rel&)> rec = [&](std::size_t i, const Rel& cur) {
    if (stop) return;
    if (i == pairs.size()) {
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) m.order[a][b] = (cur[a] >> b) & 1u;
      ++count;
      if (!visit(m)) stop = true;
      return;
    }
    auto [a, b] = pairs[i];
    if ((cur[a] >> b) & 1u) {
      rec(i + 1, cur);
      return;
    }
    excluded[a] |= 1u << b;
    rec(i + 1, cur);
    excluded[a] &= ~(1u << b);
    Rel next = cur;
    next[a] |= 1u << b;
    next = close(next);
    for (int k = 0; k < n; ++k)
      if (next[k] & excluded[k]) return;
    rec(i + 1, next);
  };
  rec(0, start);
}

}  // namespace

EnumerationStats enumerate_finite_monoids(int max_size, const std::function<bool(const FiniteMonoid&)>& visit,
                                          bool with_preorders) {
  if (max_size < 1 || max_size > 7) throw InputError("enumeration size must be between 1 and 7");
  EnumerationStats stats;
  bool stop = false;
  for (int n = 1; n <= max_size && !stop; ++n) {
    std::vector<Table> raw;
    commutative_tables(n, raw);
    std::set<Table> seen;
    for (const auto& t : raw) seen.insert(canonical(t, n));
    for (const auto& t : seen) {
      if (stop) break;
      ++stats.monoids;
      FiniteMonoid m;
      m.zero = 0;
      for (int i = 0; i < n; ++i) m.names.push_back(i == 0 ? "0" : "x" + std::to_string(i));
      m.table.assign(n, std::vector<int>(n));
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) m.table[a][b] = t[a * n + b];
      m.order.assign(n, std::vector<bool>(n, false));
      if (with_preorders) {
        preorders(m, visit, stats.instances, stop);
      } else {
        // algebraic preorder: a <= b iff a + c = b for some c
        for (int a = 0; a < n; ++a)
          for (int c = 0; c < n; ++c) m.order[a][m.sum(a, c)] = true;
        for (int k = 0; k < n; ++k)
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
              if (m.order[a][k] && m.order[k][b]) m.order[a][b] = true;
        ++stats.instances;
        if (!visit(m)) stop = true;
      }
    }
  }
  return stats;
}

FiniteMonoid named_finite_monoid(const std::string& name) {
  FiniteMonoid m;
  if (name == "zero-one-inf") {
    m.names = {"0", "1", "inf"};
    m.table = {{0, 1, 2}, {1, 2, 2}, {2, 2, 2}};
    m.order = {{true, true, true}, {false, true, true}, {false, false, true}};
  } else if (name == "zero-inf") {
    m.names = {"0", "inf"};
    m.table = {{0, 1}, {1, 1}};
    m.order = {{true, true}, {false, true}};
  } else if (name.rfind("truncated:", 0) == 0) {
    int cap = std::stoi(name.substr(10));
    if (cap < 1 || cap > 64) throw InputError("truncation cap out of range");
    for (int i = 0; i <= cap; ++i) m.names.push_back(std::to_string(i));
    m.table.assign(cap + 1, std::vector<int>(cap + 1));
    m.order.assign(cap + 1, std::vector<bool>(cap + 1));
    for (int a = 0; a <= cap; ++a)
      for (int b = 0; b <= cap; ++b) {
        m.table[a][b] = std::min(a + b, cap);
        m.order[a][b] = a <= b;
      }
  } else {
    throw InputError("unknown named monoid '" + name + "'");
  }
  m.zero = 0;
  m.validate();
  return m;
}

}  // namespace typesemi
