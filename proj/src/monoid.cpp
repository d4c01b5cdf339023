#include "typesemi/monoid.hpp"

#include "typesemi/lp.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <sstream>
#include <unordered_map>

namespace typesemi {

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("coefficient overflow");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("coefficient overflow");
  return r;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

Element add(const Element& a, const Element& b) {
  Element r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = checked_add(a[i], b[i]);
  return r;
}

Element sub(const Element& a, const Element& b) {
  Element r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    r[i] = a[i] - b[i];
    if (r[i] < 0) throw std::logic_error("negative coefficient in subtraction");
  }
  return r;
}

Element scale(std::int64_t k, const Element& a) {
  Element r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = checked_mul(k, a[i]);
  return r;
}

bool dominated(const Element& a, const Element& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

bool is_zero(const Element& a) {
  return std::all_of(a.begin(), a.end(), [](std::int64_t v) { return v == 0; });
}

std::vector<std::size_t> support(const Element& a) {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0) s.push_back(i);
  return s;
}

std::size_t MonoidPresentation::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < generators.size(); ++i)
    if (generators[i] == name) return i;
  throw InputError("undeclared generator '" + name + "'");
}

Element MonoidPresentation::gen(std::size_t i) const {
  Element e = zero();
  e.at(i) = 1;
  return e;
}

Element MonoidPresentation::parse(const std::string& text) const {
  Element e = zero();
  std::string t = trim(text);
  if (t.empty()) throw InputError("empty element");
  if (t.back() == '+') throw InputError("malformed element '" + text + "'");
  std::stringstream ss(t);
  std::string term;
  while (std::getline(ss, term, '+')) {
    term = trim(term);
    if (term.empty()) throw InputError("malformed element '" + text + "'");
    std::int64_t k = 1;
    std::string name = term;
    auto star = term.find('*');
    if (star != std::string::npos) {
      std::string num = trim(term.substr(0, star));
      name = trim(term.substr(star + 1));
      if (num.empty() || !std::all_of(num.begin(), num.end(), ::isdigit))
        throw InputError("malformed coefficient in '" + term + "'");
      k = std::stoll(num);
    } else if (std::all_of(term.begin(), term.end(), ::isdigit)) {
      if (std::stoll(term) != 0) throw InputError("bare number '" + term + "' (only 0 allowed)");
      continue;
    }
    std::size_t i = index_of(name);
    e[i] = checked_add(e[i], k);
  }
  return e;
}

std::string MonoidPresentation::format(const Element& e) const {
  std::string out;
  for (std::size_t i = 0; i < e.size(); ++i) {
    if (e[i] == 0) continue;
    if (!out.empty()) out += " + ";
    if (e[i] != 1) out += std::to_string(e[i]) + "*";
    out += generators[i];
  }
  return out.empty() ? "0" : out;
}

void MonoidPresentation::check_element(const Element& e) const {
  if (e.size() != size()) throw InputError("element width does not match generator count");
  for (auto v : e)
    if (v < 0) throw InputError("negative coefficient");
}

void MonoidPresentation::validate() const {
  for (std::size_t i = 0; i < generators.size(); ++i)
    for (std::size_t j = i + 1; j < generators.size(); ++j)
      if (generators[i] == generators[j]) throw InputError("duplicate generator '" + generators[i] + "'");
  for (const auto& r : relations) {
    check_element(r.lhs);
    check_element(r.rhs);
  }
}

Relation parse_relation(const MonoidPresentation& p, const std::string& line) {
  Relation r;
  auto le = line.find("<=");
  auto eq = line.find("==");
  if ((le == std::string::npos) == (eq == std::string::npos))
    throw InputError("relation needs exactly one of '<=' or '==': '" + line + "'");
  auto pos = le != std::string::npos ? le : eq;
  r.kind = le != std::string::npos ? RelKind::LEQ : RelKind::EQ;
  r.lhs = p.parse(line.substr(0, pos));
  r.rhs = p.parse(line.substr(pos + 2));
  return r;
}

MonoidPresentation make_presentation(std::vector<std::string> gens, const std::vector<std::string>& rels) {
  MonoidPresentation p;
  p.generators = std::move(gens);
  for (const auto& l : rels) p.relations.push_back(parse_relation(p, l));
  p.validate();
  return p;
}

std::vector<DirectedRelation> directed(const MonoidPresentation& p) {
  std::vector<DirectedRelation> out;
  for (std::size_t i = 0; i < p.relations.size(); ++i) {
    const auto& r = p.relations[i];
    out.push_back({r.lhs, r.rhs, i, false});
    if (r.kind == RelKind::EQ) out.push_back({r.rhs, r.lhs, i, true});
  }
  return out;
}

std::optional<std::string> replay(const MonoidPresentation& p, const Derivation& d) {
  if (d.start.size() != p.size() || d.end.size() != p.size()) return "element width mismatch";
  Element cur = d.start;
  for (std::size_t k = 0; k < d.steps.size(); ++k) {
    const Step& s = d.steps[k];
    if (s.kind == Step::Kind::Add) {
      if (s.added.size() != p.size()) return "step " + std::to_string(k) + ": bad width";
      for (auto v : s.added)
        if (v < 0) return "step " + std::to_string(k) + ": negative addition";
      cur = add(cur, s.added);
      continue;
    }
    if (s.rel >= p.relations.size()) return "step " + std::to_string(k) + ": no such relation";
    const Relation& r = p.relations[s.rel];
    if (s.reverse && r.kind != RelKind::EQ) return "step " + std::to_string(k) + ": reversed inequality";
    const Element& from = s.reverse ? r.rhs : r.lhs;
    const Element& to = s.reverse ? r.lhs : r.rhs;
    if (s.context.size() != p.size()) return "step " + std::to_string(k) + ": bad context";
    if (add(from, s.context) != cur) return "step " + std::to_string(k) + ": current value is not lhs + context";
    cur = add(to, s.context);
  }
  if (cur != d.end) return "derivation ends at " + p.format(cur) + ", claimed " + p.format(d.end);
  return std::nullopt;
}

Derivation shifted(const Derivation& d, const Element& z) {
  Derivation r = d;
  r.start = add(r.start, z);
  r.end = add(r.end, z);
  for (auto& s : r.steps)
    if (s.kind == Step::Kind::Rel) s.context = add(s.context, z);
  return r;
}

DerivationBuilder::DerivationBuilder(const MonoidPresentation& p, Element start) : p_(p), cur_(std::move(start)) {
  d_.start = cur_;
}

void DerivationBuilder::add(const Element& z) {
  if (is_zero(z)) return;
  Step s;
  s.kind = Step::Kind::Add;
  s.added = z;
  d_.steps.push_back(s);
  cur_ = typesemi::add(cur_, z);
}

void DerivationBuilder::apply(const DirectedRelation& r) {
  Step s;
  s.kind = Step::Kind::Rel;
  s.rel = r.rel;
  s.reverse = r.reverse;
  s.context = sub(cur_, r.from);
  d_.steps.push_back(s);
  cur_ = typesemi::add(r.to, s.context);
}

void DerivationBuilder::append(const Derivation& subd) {
  Element ctx = sub(cur_, subd.start);
  for (const auto& st : subd.steps) {
    Step s = st;
    if (s.kind == Step::Kind::Rel) s.context = typesemi::add(s.context, ctx);
    d_.steps.push_back(s);
  }
  cur_ = typesemi::add(subd.end, ctx);
}

Derivation DerivationBuilder::finish() const {
  Derivation d = d_;
  d.end = cur_;
  return d;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::PROVED: return "PROVED";
    case Verdict::REFUTED: return "REFUTED";
    case Verdict::UNKNOWN: return "UNKNOWN";
  }
  return "?";
}

std::string to_string(ClaimKind k) {
  switch (k) {
    case ClaimKind::LEQ: return "leq";
    case ClaimKind::IDEAL: return "ideal";
    case ClaimKind::STABLY_DOMINATED: return "stably-dominated";
    case ClaimKind::PARADOXICAL: return "paradoxical";
    case ClaimKind::PROPERLY_INFINITE: return "properly-infinite";
    case ClaimKind::ORDER_UNIT: return "order-unit";
    case ClaimKind::SIMPLE: return "simple";
  }
  return "?";
}

ExtQ evaluate(const StateVector& s, const Element& e) {
  ExtQ r(0);
  for (std::size_t i = 0; i < e.size(); ++i)
    if (e[i] != 0) r = r + e[i] * s.values.at(i);
  return r;
}

std::optional<std::string> check_state(const MonoidPresentation& p, const StateVector& s) {
  if (s.values.size() != p.size()) return "state width mismatch";
  for (const auto& v : s.values)
    if (!v.inf && v.v < 0) return "negative state value";
  for (std::size_t i = 0; i < p.relations.size(); ++i) {
    const auto& r = p.relations[i];
    ExtQ l = evaluate(s, r.lhs), h = evaluate(s, r.rhs);
    if (!(l <= h)) return "relation " + std::to_string(i) + " violated";
    if (r.kind == RelKind::EQ && !(h <= l)) return "relation " + std::to_string(i) + " violated (reverse)";
  }
  return std::nullopt;
}

namespace {

bool is_multiple_of(const Element& e, const Element& y, std::int64_t& m) {
  // e == m*y for some m >= 0
  if (is_zero(y)) {
    m = 0;
    return is_zero(e);
  }
  std::optional<std::int64_t> k;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] == 0) {
      if (e[i] != 0) return false;
      continue;
    }
    if (e[i] % y[i] != 0) return false;
    std::int64_t q = e[i] / y[i];
    if (k && *k != q) return false;
    k = q;
  }
  m = k.value_or(0);
  return true;
}

const ExtQ kZero(0);

}  // namespace

std::optional<std::string> verify_judgement(const MonoidPresentation& p, const Claim& c, const Judgement& j) {
  if (j.verdict == Verdict::UNKNOWN) return std::nullopt;
  auto need_one_derivation = [&](const Element& from, const Element& to) -> std::optional<std::string> {
    if (j.derivations.size() != 1) return "expected exactly one derivation";
    const auto& d = j.derivations[0];
    if (d.start != from) return "derivation starts at " + p.format(d.start) + ", expected " + p.format(from);
    if (d.end != to) return "derivation ends at " + p.format(d.end) + ", expected " + p.format(to);
    return replay(p, d);
  };
  auto need_state = [&]() -> std::optional<std::string> {
    if (j.states.empty()) return "missing state";
    for (const auto& s : j.states)
      if (auto e = check_state(p, s)) return e;
    return std::nullopt;
  };
  const Element& x = c.x;
  const Element& y = c.y;
  switch (c.kind) {
    case ClaimKind::LEQ:
    case ClaimKind::PROPERLY_INFINITE: {
      Element a = c.kind == ClaimKind::LEQ ? x : scale(2, x);
      Element b = c.kind == ClaimKind::LEQ ? y : x;
      if (j.verdict == Verdict::PROVED) return need_one_derivation(a, b);
      if (auto e = need_state()) return e;
      const auto& s = j.states[0];
      if (!(evaluate(s, b) < evaluate(s, a))) return "state does not separate";
      return std::nullopt;
    }
    case ClaimKind::IDEAL: {
      if (j.verdict == Verdict::PROVED) {
        if (j.multiplier < 0) return "negative multiplier";
        return need_one_derivation(x, scale(j.multiplier, y));
      }
      if (auto e = need_state()) return e;
      const auto& s = j.states[0];
      if (!evaluate(s, y).finite() || evaluate(s, x).finite()) return "state does not separate the ideal";
      return std::nullopt;
    }
    case ClaimKind::STABLY_DOMINATED:
    case ClaimKind::PARADOXICAL: {
      const Element& yy = c.kind == ClaimKind::PARADOXICAL ? x : y;
      if (j.verdict == Verdict::PROVED) {
        if (j.multiplier < 1) return "multiplier must be at least 1";
        return need_one_derivation(scale(j.multiplier + 1, x), scale(j.multiplier, yy));
      }
      if (auto e = need_state()) return e;
      const auto& s = j.states[0];
      ExtQ vx = evaluate(s, x), vy = evaluate(s, yy);
      if (!vy.finite()) return "state is infinite on the dominating element";
      if (!(kZero < vx) || !(vy <= vx)) return "state does not refute stable domination";
      return std::nullopt;
    }
    case ClaimKind::ORDER_UNIT: {
      if (j.verdict == Verdict::PROVED) {
        if (j.derivations.size() != p.size()) return "expected one derivation per generator";
        for (std::size_t g = 0; g < p.size(); ++g) {
          const auto& d = j.derivations[g];
          std::int64_t m;
          if (d.start != p.gen(g) || !is_multiple_of(d.end, y, m)) return "derivation " + std::to_string(g) + " has wrong ends";
          if (auto e = replay(p, d)) return e;
        }
        return std::nullopt;
      }
      if (auto e = need_state()) return e;
      const auto& s = j.states[0];
      if (!evaluate(s, y).finite()) return "state infinite on y";
      for (std::size_t g = 0; g < p.size(); ++g)
        if (!s.values[g].finite()) return std::nullopt;
      return "no generator outside <y>";
    }
    case ClaimKind::SIMPLE: {
      if (j.verdict == Verdict::PROVED) {
        std::size_t k = 0;
        for (std::size_t g = 0; g < p.size(); ++g) {
          if (k >= j.derivations.size()) return "certificate too short";
          const auto& d0 = j.derivations[k];
          if (d0.start == p.gen(g) && is_zero(d0.end)) {
            if (auto e = replay(p, d0)) return e;
            ++k;
            continue;
          }
          for (std::size_t h = 0; h < p.size(); ++h, ++k) {
            if (k >= j.derivations.size()) return "certificate too short";
            const auto& d = j.derivations[k];
            std::int64_t m;
            if (d.start != p.gen(h) || !is_multiple_of(d.end, p.gen(g), m)) return "derivation has wrong ends";
            if (auto e = replay(p, d)) return e;
          }
        }
        if (k != j.derivations.size()) return "certificate too long";
        return std::nullopt;
      }
      if (j.states.size() != 2) return "expected two states";
      if (auto e = need_state()) return e;
      const auto& s1 = j.states[0];
      const auto& s2 = j.states[1];
      bool gap = std::any_of(s1.values.begin(), s1.values.end(), [](const ExtQ& v) { return v.inf; });
      if (!gap) return "first state is finite everywhere";
      for (std::size_t g = 0; g < p.size(); ++g)
        if (s1.values[g].finite() && kZero < s2.values[g]) return std::nullopt;
      return "no nonzero generator with a proper ideal";
    }
  }
  return "unknown claim";
}

IdealClosure ideal_closure(const MonoidPresentation& p, const Element& y) {
  IdealClosure c;
  c.in.assign(p.size(), false);
  c.via.assign(p.size(), -1);
  for (auto g : support(y)) {
    c.in[g] = true;
    c.order.push_back(g);
  }
  auto dr = directed(p);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t r = 0; r < dr.size(); ++r) {
      bool inside = true;
      for (auto g : support(dr[r].to))
        if (!c.in[g]) inside = false;
      if (!inside) continue;
      for (auto g : support(dr[r].from))
        if (!c.in[g]) {
          c.in[g] = true;
          c.via[g] = static_cast<int>(r);
          c.order.push_back(g);
          changed = true;
        }
    }
  }
  return c;
}

StateVector zero_infinity_state(const IdealClosure& c) {
  StateVector s;
  for (bool b : c.in) s.values.push_back(b ? ExtQ(0) : ExtQ::infinity());
  return s;
}

Derivation ideal_derivation(const MonoidPresentation& p, const IdealClosure& c, const Element& x, const Element& y,
                            std::int64_t& m) {
  auto dr = directed(p);
  // per-generator derivations g <= mult[g] * y, built in closure order
  std::vector<std::optional<Derivation>> per(p.size());
  std::vector<std::int64_t> mult(p.size(), 0);
  for (auto g : c.order) {
    DerivationBuilder b(p, p.gen(g));
    if (c.via[g] < 0) {
      b.add(sub(y, p.gen(g)));
      mult[g] = 1;
    } else {
      const auto& r = dr[static_cast<std::size_t>(c.via[g])];
      b.add(sub(r.from, p.gen(g)));
      b.apply(r);
      std::int64_t total = 0;
      for (auto h : support(r.to)) {
        for (std::int64_t k = 0; k < r.to[h]; ++k) b.append(*per[h]);
        total = checked_add(total, checked_mul(r.to[h], mult[h]));
      }
      mult[g] = total;
    }
    per[g] = b.finish();
  }
  DerivationBuilder b(p, x);
  m = 0;
  for (auto g : support(x)) {
    if (!c.in[g]) throw std::logic_error("element outside the ideal closure");
    for (std::int64_t k = 0; k < x[g]; ++k) b.append(*per[g]);
    m = checked_add(m, checked_mul(x[g], mult[g]));
  }
  if (is_zero(y)) m = 0;
  return b.finish();
}

namespace {

std::string key_of(const Element& e) {
  std::string k(e.size() * 2, '\0');
  for (std::size_t i = 0; i < e.size(); ++i) {
    auto v = static_cast<std::uint16_t>(e[i]);
    k[2 * i] = static_cast<char>(v & 0xff);
    k[2 * i + 1] = static_cast<char>(v >> 8);
  }
  return k;
}

std::int64_t effective_cap(const SearchBudget& b, const Element& x, const Element& y) {
  std::int64_t cap = b.coeff_cap;
  for (auto v : x) cap = std::max(cap, v);
  for (auto v : y) cap = std::max(cap, v);
  if (cap > 60000) throw InputError("coefficient cap too large for search");
  return cap;
}

struct SearchNode {
  Element e;
  std::int64_t parent;
  int move;  // >= 0 directed relation, < 0 add generator (-1 - g)
};

Derivation rebuild(const MonoidPresentation& p, const std::vector<DirectedRelation>& dr,
                   const std::vector<SearchNode>& nodes, std::size_t at, const Element& goal) {
  std::vector<std::size_t> path;
  for (std::int64_t i = static_cast<std::int64_t>(at); i >= 0; i = nodes[static_cast<std::size_t>(i)].parent)
    path.push_back(static_cast<std::size_t>(i));
  std::reverse(path.begin(), path.end());
  DerivationBuilder b(p, nodes[path[0]].e);
  for (std::size_t k = 1; k < path.size(); ++k) {
    int mv = nodes[path[k]].move;
    if (mv >= 0) b.apply(dr[static_cast<std::size_t>(mv)]);
    else b.add(p.gen(static_cast<std::size_t>(-1 - mv)));
  }
  b.add(sub(goal, b.current()));
  return b.finish();
}

// Generic breadth-first search. `accept` decides goal states; `adds` lists
// generators that may be added.
Judgement bfs(const MonoidPresentation& p, const Element& x, const Element& goal, const SearchBudget& budget,
              std::int64_t cap, const std::vector<DirectedRelation>& dr, const std::vector<std::size_t>& adds,
              bool exact_goal) {
  Judgement j;
  j.budget.budget = budget;
  j.method = exact_goal ? "bfs-exact" : "bfs";
  std::vector<SearchNode> nodes;
  std::unordered_map<std::string, std::size_t> seen;
  nodes.push_back({x, -1, 0});
  seen.emplace(key_of(x), 0);
  auto reached = [&](const Element& e) { return exact_goal ? e == goal : dominated(e, goal); };
  if (reached(x)) {
    j.verdict = Verdict::PROVED;
    j.derivations.push_back(rebuild(p, dr, nodes, 0, goal));
    j.budget.nodes = 1;
    return j;
  }
  bool truncated = false;
  for (std::size_t head = 0; head < nodes.size(); ++head) {
    auto try_push = [&](Element e, int move) -> bool {
      for (auto v : e)
        if (v > cap) {
          truncated = true;
          return false;
        }
      auto [it, fresh] = seen.emplace(key_of(e), nodes.size());
      if (!fresh) return false;
      nodes.push_back({std::move(e), static_cast<std::int64_t>(head), move});
      return reached(nodes.back().e);
    };
    const Element cur = nodes[head].e;
    for (std::size_t r = 0; r < dr.size(); ++r) {
      if (!dominated(dr[r].from, cur)) continue;
      Element nxt = add(sub(cur, dr[r].from), dr[r].to);
      if (try_push(std::move(nxt), static_cast<int>(r))) {
        j.verdict = Verdict::PROVED;
        j.derivations.push_back(rebuild(p, dr, nodes, nodes.size() - 1, goal));
        j.budget.nodes = nodes.size();
        return j;
      }
    }
    for (auto g : adds) {
      Element nxt = cur;
      nxt[g] += 1;
      if (try_push(std::move(nxt), -1 - static_cast<int>(g))) {
        j.verdict = Verdict::PROVED;
        j.derivations.push_back(rebuild(p, dr, nodes, nodes.size() - 1, goal));
        j.budget.nodes = nodes.size();
        return j;
      }
    }
    if (nodes.size() > budget.node_cap) {
      j.budget.nodes = nodes.size();
      j.budget.reason = "node cap reached";
      return j;
    }
  }
  j.budget.nodes = nodes.size();
  j.budget.cap_complete = true;
  j.budget.reason = truncated ? "reachable set saturated below the coefficient cap" : "reachable set saturated";
  return j;
}

}  // namespace

Judgement leq_search(const MonoidPresentation& p, const Element& x, const Element& y, const SearchBudget& b) {
  auto dr = directed(p);
  std::vector<bool> mark(p.size(), false);
  for (const auto& r : dr)
    for (auto g : support(r.from)) mark[g] = true;
  std::vector<std::size_t> adds;
  for (std::size_t g = 0; g < p.size(); ++g)
    if (mark[g]) adds.push_back(g);
  return bfs(p, x, y, b, effective_cap(b, x, y), dr, adds, false);
}

Judgement brute_force_leq_oracle(const MonoidPresentation& p, const Element& x, const Element& y,
                                 const SearchBudget& b) {
  p.check_element(x);
  p.check_element(y);
  auto dr = directed(p);
  std::vector<std::size_t> adds(p.size());
  for (std::size_t g = 0; g < p.size(); ++g) adds[g] = g;
  return bfs(p, x, y, b, effective_cap(b, x, y), dr, adds, true);
}

namespace {

// Maximize nu(x) - nu(y) over states finite on the closure of y, normalized
// by sum nu <= 1. A positive optimum is a separating state.
std::optional<StateVector> separating_state(const MonoidPresentation& p, const IdealClosure& c, const Element& x,
                                            const Element& y) {
  std::vector<std::size_t> vars;
  std::vector<int> slot(p.size(), -1);
  for (std::size_t g = 0; g < p.size(); ++g)
    if (c.in[g]) {
      slot[g] = static_cast<int>(vars.size());
      vars.push_back(g);
    }
  if (vars.empty()) return std::nullopt;
  LinearProgram lp;
  lp.nvars = vars.size();
  auto row_of = [&](const Element& e) {
    std::vector<Q> a(vars.size(), Q(0));
    for (auto g : support(e)) a[static_cast<std::size_t>(slot[g])] += static_cast<long>(e[g]);
    return a;
  };
  for (const auto& r : directed(p)) {
    bool inside = true;
    for (auto g : support(r.to))
      if (!c.in[g]) inside = false;
    if (!inside) continue;
    auto a = row_of(r.from);
    auto bto = row_of(r.to);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= bto[i];
    lp.add(a, Rel::LE, 0);
  }
  lp.add(std::vector<Q>(vars.size(), Q(1)), Rel::LE, 1);
  auto ox = row_of(x), oy = row_of(y);
  lp.objective.resize(vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) lp.objective[i] = ox[i] - oy[i];
  auto res = solve_simplex(lp, false);
  if (res.status != LPStatus::FEASIBLE || res.value <= 0) return std::nullopt;
  StateVector s;
  s.values.assign(p.size(), ExtQ::infinity());
  for (std::size_t i = 0; i < vars.size(); ++i) s.values[vars[i]] = ExtQ(res.x[i]);
  return s;
}

bool inside(const IdealClosure& c, const Element& x) {
  for (auto g : support(x))
    if (!c.in[g]) return false;
  return true;
}

}  // namespace

Judgement leq(const MonoidPresentation& p, const Element& x, const Element& y, const SearchBudget& b) {
  p.check_element(x);
  p.check_element(y);
  auto c = ideal_closure(p, y);
  Judgement j;
  j.budget.budget = b;
  if (!inside(c, x)) {
    j.verdict = Verdict::REFUTED;
    j.states.push_back(zero_infinity_state(c));
    j.method = "ideal-closure";
    return j;
  }
  if (auto s = separating_state(p, c, x, y)) {
    j.verdict = Verdict::REFUTED;
    j.states.push_back(*s);
    j.method = "state-lp";
    return j;
  }
  return leq_search(p, x, y, b);
}

Judgement ideal_membership(const MonoidPresentation& p, const Element& x, const Element& y, const SearchBudget& b) {
  p.check_element(x);
  p.check_element(y);
  auto c = ideal_closure(p, y);
  Judgement j;
  j.budget.budget = b;
  j.method = "ideal-closure";
  if (!inside(c, x)) {
    j.verdict = Verdict::REFUTED;
    j.states.push_back(zero_infinity_state(c));
    return j;
  }
  std::int64_t m = 0;
  j.derivations.push_back(ideal_derivation(p, c, x, y, m));
  j.verdict = Verdict::PROVED;
  j.multiplier = m;
  // the derivation ends at m*y by construction
  j.derivations[0].end = scale(m, y);
  return j;
}

Judgement is_properly_infinite(const MonoidPresentation& p, const Element& x, const SearchBudget& b) {
  p.check_element(x);
  if (is_zero(x)) throw InputError("x must be nonzero");
  return leq(p, scale(2, x), x, b);
}

Judgement is_order_unit(const MonoidPresentation& p, const Element& y, const SearchBudget& b) {
  p.check_element(y);
  if (is_zero(y)) throw InputError("y must be nonzero");
  auto c = ideal_closure(p, y);
  Judgement j;
  j.budget.budget = b;
  j.method = "ideal-closure";
  if (!std::all_of(c.in.begin(), c.in.end(), [](bool v) { return v; })) {
    j.verdict = Verdict::REFUTED;
    j.states.push_back(zero_infinity_state(c));
    return j;
  }
  j.verdict = Verdict::PROVED;
  for (std::size_t g = 0; g < p.size(); ++g) {
    std::int64_t m;
    j.derivations.push_back(ideal_derivation(p, c, p.gen(g), y, m));
    j.multiplier = std::max(j.multiplier, m);
  }
  return j;
}

Judgement is_simple(const MonoidPresentation& p, const SearchBudget& b) {
  Judgement j;
  j.budget.budget = b;
  j.method = "ideal-closure";
  auto zero = ideal_closure(p, p.zero());
  for (std::size_t g = 0; g < p.size(); ++g) {
    if (zero.in[g]) {
      std::int64_t m;
      j.derivations.push_back(ideal_derivation(p, zero, p.gen(g), p.zero(), m));
      continue;
    }
    auto c = ideal_closure(p, p.gen(g));
    if (!std::all_of(c.in.begin(), c.in.end(), [](bool v) { return v; })) {
      j.derivations.clear();
      j.verdict = Verdict::REFUTED;
      j.states = {zero_infinity_state(c), zero_infinity_state(zero)};
      return j;
    }
    for (std::size_t h = 0; h < p.size(); ++h) {
      std::int64_t m;
      j.derivations.push_back(ideal_derivation(p, c, p.gen(h), p.gen(g), m));
    }
  }
  j.verdict = Verdict::PROVED;
  return j;
}

MonoidPresentation quotient_by_ideal(const MonoidPresentation& p, const std::vector<Element>& ideal_gens) {
  if (ideal_gens.empty()) throw InputError("ideal generator list is empty");
  MonoidPresentation q = p;
  for (const auto& g : ideal_gens) {
    p.check_element(g);
    q.relations.push_back({g, p.zero(), RelKind::EQ});
  }
  return q;
}

namespace {

// Diagonalizes the relation-difference matrix by unimodular row and column
// operations, returning the column transform V and the diagonal.
void diagonalize(std::vector<std::vector<Z>> a, std::size_t cols, std::vector<std::vector<Z>>& v, std::vector<Z>& diag) {
  std::size_t rows = a.size();
  v.assign(cols, std::vector<Z>(cols, Z(0)));
  for (std::size_t i = 0; i < cols; ++i) v[i][i] = 1;
  diag.assign(cols, Z(0));
  auto col_op = [&](std::size_t dst, std::size_t src, const Z& q) {  // col dst -= q * col src
    for (std::size_t i = 0; i < rows; ++i) a[i][dst] -= q * a[i][src];
    for (std::size_t i = 0; i < cols; ++i) v[i][dst] -= q * v[i][src];
  };
  auto col_swap = [&](std::size_t x, std::size_t y) {
    for (std::size_t i = 0; i < rows; ++i) std::swap(a[i][x], a[i][y]);
    for (std::size_t i = 0; i < cols; ++i) std::swap(v[i][x], v[i][y]);
  };
  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    for (;;) {
      std::optional<std::pair<std::size_t, std::size_t>> piv;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j)
          if (a[i][j] != 0 && (!piv || abs(a[i][j]) < abs(a[piv->first][piv->second]))) piv = {i, j};
      if (!piv) return;
      std::swap(a[t], a[piv->first]);
      col_swap(t, piv->second);
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a[i][t] == 0) continue;
        Z q = a[i][t] / a[t][t];
        for (std::size_t j = 0; j < cols; ++j) a[i][j] -= q * a[t][j];
        if (a[i][t] != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a[t][j] == 0) continue;
        Z q = a[t][j] / a[t][t];
        col_op(j, t, q);
        if (a[t][j] != 0) clean = false;
      }
      if (clean) break;
    }
    diag[t] = abs(a[t][t]);
  }
}

}  // namespace

CongruenceJudgement congruent(const MonoidPresentation& p, const Element& x, const Element& y, const SearchBudget& b) {
  p.check_element(x);
  p.check_element(y);
  CongruenceJudgement j;
  j.budget.budget = b;
  std::vector<Relation> eqs;
  for (const auto& r : p.relations)
    if (r.kind == RelKind::EQ) eqs.push_back(r);
  // integer invariant from the lattice spanned by lhs - rhs
  {
    std::size_t k = p.size();
    std::vector<std::vector<Z>> m;
    for (const auto& r : eqs) {
      std::vector<Z> row(k);
      for (std::size_t g = 0; g < k; ++g) row[g] = Z(static_cast<long>(r.lhs[g] - r.rhs[g]));
      m.push_back(row);
    }
    std::vector<std::vector<Z>> v;
    std::vector<Z> diag;
    diagonalize(m, k, v, diag);
    for (std::size_t i = 0; i < k; ++i) {
      Z w = 0;
      for (std::size_t g = 0; g < k; ++g) w += Z(static_cast<long>(x[g] - y[g])) * v[g][i];
      bool separates = diag[i] == 0 ? w != 0 : (diag[i] != 1 && w % diag[i] != 0);
      if (separates) {
        CongruenceInvariant inv;
        for (std::size_t g = 0; g < k; ++g) inv.phi.push_back(v[g][i]);
        inv.modulus = diag[i];
        j.verdict = Verdict::REFUTED;
        j.invariant = inv;
        return j;
      }
    }
  }
  // rewrite search over the congruence class of x
  std::vector<DirectedRelation> dr;
  for (std::size_t i = 0; i < p.relations.size(); ++i) {
    const auto& r = p.relations[i];
    if (r.kind != RelKind::EQ) continue;
    dr.push_back({r.lhs, r.rhs, i, false});
    dr.push_back({r.rhs, r.lhs, i, true});
  }
  Judgement s = bfs(p, x, y, b, effective_cap(b, x, y), dr, {}, true);
  j.budget = s.budget;
  if (s.verdict == Verdict::PROVED) {
    j.verdict = Verdict::PROVED;
    j.derivation = s.derivations[0];
  } else if (s.budget.cap_complete && s.budget.reason == "reachable set saturated") {
    j.verdict = Verdict::REFUTED;
    j.class_size = s.budget.nodes;
  }
  return j;
}

std::optional<std::string> verify_congruence(const MonoidPresentation& p, const Element& x, const Element& y,
                                             const CongruenceJudgement& j) {
  if (j.verdict == Verdict::UNKNOWN) return std::nullopt;
  if (j.verdict == Verdict::PROVED) {
    if (!j.derivation) return "missing derivation";
    const auto& d = *j.derivation;
    if (d.start != x || d.end != y) return "derivation has wrong ends";
    for (const auto& s : d.steps) {
      if (s.kind != Step::Kind::Rel) return "congruence derivations may not add elements";
      if (p.relations.at(s.rel).kind != RelKind::EQ) return "congruence derivations use equalities only";
    }
    return replay(p, d);
  }
  if (j.invariant) {
    const auto& inv = *j.invariant;
    auto value = [&](const Element& e) {
      Z s = 0;
      for (std::size_t g = 0; g < e.size(); ++g) s += inv.phi[g] * Z(static_cast<long>(e[g]));
      return s;
    };
    auto same = [&](const Z& a, const Z& b) { return inv.modulus == 0 ? a == b : (a - b) % inv.modulus == 0; };
    for (const auto& r : p.relations)
      if (r.kind == RelKind::EQ && !same(value(r.lhs), value(r.rhs))) return "invariant breaks a relation";
    if (same(value(x), value(y))) return "invariant does not separate";
    return std::nullopt;
  }
  // saturated class: recompute it without any cap and check y is absent
  std::vector<DirectedRelation> dr;
  for (std::size_t i = 0; i < p.relations.size(); ++i) {
    const auto& r = p.relations[i];
    if (r.kind != RelKind::EQ) continue;
    dr.push_back({r.lhs, r.rhs, i, false});
    dr.push_back({r.rhs, r.lhs, i, true});
  }
  std::map<Element, bool> seen{{x, true}};
  std::deque<Element> q{x};
  while (!q.empty()) {
    Element cur = q.front();
    q.pop_front();
    if (cur == y) return "y lies in the class of x";
    for (const auto& r : dr) {
      if (!dominated(r.from, cur)) continue;
      Element n = add(sub(cur, r.from), r.to);
      if (seen.emplace(n, true).second) {
        if (seen.size() > j.class_size) return "class is larger than claimed";
        q.push_back(n);
      }
    }
  }
  return std::nullopt;
}

}  // namespace typesemi
