#include "typesemi/states.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <functional>
#include <tuple>

namespace typesemi {

StateSystem build_state_system(const MonoidPresentation& p, const Element& y) {
  StateSystem s;
  s.closure = ideal_closure(p, y);
  s.slot.assign(p.size(), -1);
  for (std::size_t g = 0; g < p.size(); ++g)
    if (s.closure.in[g]) {
      s.slot[g] = static_cast<int>(s.vars.size());
      s.vars.push_back(g);
    }
  s.lp.nvars = s.vars.size();
  auto dr = directed(p);
  for (std::size_t r = 0; r < dr.size(); ++r) {
    bool inside = true;
    for (auto g : support(dr[r].to))
      if (!s.closure.in[g]) inside = false;
    if (!inside) continue;
    std::vector<Q> a(s.vars.size(), Q(0));
    for (auto g : support(dr[r].from)) a[static_cast<std::size_t>(s.slot[g])] += static_cast<long>(dr[r].from[g]);
    for (auto g : support(dr[r].to)) a[static_cast<std::size_t>(s.slot[g])] -= static_cast<long>(dr[r].to[g]);
    s.lp.add(a, Rel::LE, 0);
    s.row_rel.push_back(r);
  }
  std::vector<Q> a(s.vars.size(), Q(0));
  for (auto g : support(y)) a[static_cast<std::size_t>(s.slot[g])] += static_cast<long>(y[g]);
  s.lp.add(a, Rel::EQ, 1);
  return s;
}

namespace {

StateVector state_from(const MonoidPresentation& p, const StateSystem& s, const std::vector<Q>& xs) {
  StateVector v;
  v.values.assign(p.size(), ExtQ::infinity());
  for (std::size_t i = 0; i < s.vars.size(); ++i) v.values[s.vars[i]] = ExtQ(xs[i]);
  return v;
}

std::vector<Q> objective_of(const StateSystem& s, const Element& x) {
  std::vector<Q> c(s.vars.size(), Q(0));
  for (auto g : support(x)) c[static_cast<std::size_t>(s.slot[g])] += static_cast<long>(x[g]);
  return c;
}

bool inside(const IdealClosure& c, const Element& x) {
  for (auto g : support(x))
    if (!c.in[g]) return false;
  return true;
}

// Integer multipliers for the relation rows and the normalization row.
struct Scaled {
  std::vector<std::int64_t> rel;  // per row
  std::int64_t norm = 0;
};

Scaled scale_certificate(const std::vector<Q>& y) {
  Z l = lcm_of_denominators(y);
  Scaled s;
  for (std::size_t i = 0; i + 1 < y.size(); ++i) {
    Q v = y[i] * l;
    if (!v.get_num().fits_slong_p()) throw std::overflow_error("certificate too large");
    s.rel.push_back(v.get_num().get_si());
  }
  Q v = y.back() * l;
  if (!v.get_num().fits_slong_p()) throw std::overflow_error("certificate too large");
  s.norm = v.get_num().get_si();
  return s;
}

// From R + base <= ..., builds the derivation  R + base  ->  L + extra  ->  R + extra
// where L = sum mult_r from_r, R = sum mult_r to_r, and `extra` completes L.
Derivation relation_cycle(const MonoidPresentation& p, const std::vector<DirectedRelation>& dr,
                          const StateSystem& s, const Scaled& sc, const Element& base, const Element& extra,
                          Element& r_out) {
  Element L = p.zero(), R = p.zero();
  for (std::size_t i = 0; i < sc.rel.size(); ++i) {
    if (sc.rel[i] == 0) continue;
    L = add(L, scale(sc.rel[i], dr[s.row_rel[i]].from));
    R = add(R, scale(sc.rel[i], dr[s.row_rel[i]].to));
  }
  r_out = R;
  DerivationBuilder b(p, add(R, base));
  b.add(sub(add(L, extra), b.current()));
  for (std::size_t i = 0; i < sc.rel.size(); ++i)
    for (std::int64_t k = 0; k < sc.rel[i]; ++k) b.apply(dr[s.row_rel[i]]);
  return b.finish();
}

// (n+1) x <= n x from a Farkas certificate of the system nu(x) = 1.
Judgement paradox_from_farkas(const MonoidPresentation& p, const StateSystem& s, const std::vector<Q>& farkas,
                              const Element& x) {
  auto dr = directed(p);
  Scaled sc = scale_certificate(farkas);
  std::int64_t m = -sc.norm;
  if (m <= 0) throw std::logic_error("Farkas certificate has the wrong sign");
  Element R;
  // R + m x <= R
  Derivation cycle = relation_cycle(p, dr, s, sc, scale(m, x), p.zero(), R);
  std::int64_t k = 0;
  Derivation to_x = ideal_derivation(p, s.closure, R, x, k);
  std::int64_t j = std::max<std::int64_t>((k + 1 + m - 1) / m, (2 + m - 1) / m);
  std::int64_t N = j * m;
  DerivationBuilder b(p, scale(N, x));
  b.add(R);
  for (std::int64_t i = 0; i < j; ++i) b.append(cycle);
  b.append(to_x);
  b.add(scale(N - 1 - k, x));
  Judgement res;
  res.verdict = Verdict::PROVED;
  res.multiplier = N - 1;
  res.derivations.push_back(b.finish());
  res.method = "farkas-construction";
  return res;
}

// (n+1) x <= n y from the dual of the sup program with optimum < 1.
Judgement domination_from_dual(const MonoidPresentation& p, const StateSystem& s, const std::vector<Q>& dual,
                               const Element& x, const Element& y) {
  auto dr = directed(p);
  Scaled sc = scale_certificate(dual);
  Z l = lcm_of_denominators(dual);
  if (!l.fits_slong_p()) throw std::overflow_error("certificate too large");
  std::int64_t D = l.get_si();
  std::int64_t M = sc.norm;
  if (M < 0 || M >= D) throw std::logic_error("dual certificate does not show domination");
  Element R;
  // R + D x <= R + M y
  Derivation cycle = relation_cycle(p, dr, s, sc, scale(D, x), scale(M, y), R);
  std::int64_t k = 0;
  Derivation to_y = ideal_derivation(p, s.closure, R, y, k);
  std::int64_t gap = D - M;
  std::int64_t j = std::max<std::int64_t>((k + 1 + gap - 1) / gap, (2 + D - 1) / D);
  std::int64_t N = j * D;
  DerivationBuilder b(p, scale(N, x));
  b.add(R);
  for (std::int64_t i = 0; i < j; ++i) b.append(cycle);
  b.append(to_y);
  b.add(sub(scale(N - 1, y), b.current()));
  Judgement res;
  res.verdict = Verdict::PROVED;
  res.multiplier = N - 1;
  res.derivations.push_back(b.finish());
  res.method = "dual-construction";
  return res;
}

Judgement search_stable(const MonoidPresentation& p, const Element& x, const Element& y, const SearchBudget& b) {
  SearchBudget small = b;
  small.node_cap = std::min<std::size_t>(b.node_cap, 5000);
  for (int n = 1; n <= b.n_max; ++n) {
    Judgement j = leq_search(p, scale(n + 1, x), scale(n, y), small);
    if (j.verdict == Verdict::PROVED) {
      j.multiplier = n;
      j.method = "bfs";
      return j;
    }
  }
  return Judgement{};
}

Judgement paradox_of(const MonoidPresentation& p, const Element& x, const SearchBudget& b, const StateSystem& s,
                     const LPResult& r) {
  Judgement j = search_stable(p, x, x, b);
  if (j.verdict == Verdict::PROVED) return j;
  return paradox_from_farkas(p, s, r.farkas, x);
}

}  // namespace

LPOutcome find_state(const MonoidPresentation& p, const Element& y) {
  p.check_element(y);
  if (p.size() == 0) throw InputError("presentation has no generators");
  if (is_zero(y)) throw InputError("y must be nonzero");
  StateSystem s = build_state_system(p, y);
  LPOutcome o;
  o.forced_finite = s.vars;
  auto r = solve_simplex(s.lp);
  o.status = r.status;
  if (r.status == LPStatus::FEASIBLE) {
    o.state = state_from(p, s, r.x);
    o.optimum = 0;
  } else {
    o.certificate = r.farkas;
    o.note = "nu(y) = 1 is infeasible: y is paradoxical";
  }
  return o;
}

LPOutcome sup_state_value(const MonoidPresentation& p, const Element& x, const Element& y) {
  p.check_element(x);
  p.check_element(y);
  if (is_zero(y)) throw InputError("y must be nonzero");
  StateSystem s = build_state_system(p, y);
  LPOutcome o;
  o.forced_finite = s.vars;
  if (!inside(s.closure, x)) {
    o.status = LPStatus::UNBOUNDED;
    o.note = "x lies outside the ideal of y: sup = INF";
    StateVector v = zero_infinity_state(s.closure);
    o.state = v;
    auto f = solve_simplex(s.lp);
    if (f.status == LPStatus::FEASIBLE) o.state = state_from(p, s, f.x);
    return o;
  }
  s.lp.objective = objective_of(s, x);
  auto r = solve_simplex(s.lp);
  o.status = r.status;
  if (r.status == LPStatus::FEASIBLE) {
    o.optimum = r.value;
    o.state = state_from(p, s, r.x);
    o.certificate = r.dual;
  } else if (r.status == LPStatus::INFEASIBLE) {
    o.certificate = r.farkas;
    o.note = "nu(y) = 1 is infeasible: y is paradoxical";
  }
  return o;
}

std::optional<std::string> verify_state_outcome(const MonoidPresentation& p, const Element& y, const LPOutcome& o,
                                                const Element* x) {
  StateSystem s = build_state_system(p, y);
  if (x && !inside(s.closure, *x)) {
    if (o.status != LPStatus::UNBOUNDED) return "x outside the ideal must report UNBOUNDED";
    // a state finite on y and infinite on x
    if (!o.state) return "missing state";
    if (auto e = check_state(p, *o.state)) return e;
    if (!evaluate(*o.state, y).finite() || evaluate(*o.state, *x).finite()) return "state does not witness INF";
    return std::nullopt;
  }
  if (o.status == LPStatus::INFEASIBLE) {
    if (!check_farkas(s.lp, o.certificate)) return "Farkas certificate rejected";
    return std::nullopt;
  }
  if (o.status != LPStatus::FEASIBLE || !o.state) return "unexpected status";
  if (auto e = check_state(p, *o.state)) return e;
  if (!(evaluate(*o.state, y) == ExtQ(1))) return "state is not normalized at y";
  if (x) {
    if (!(evaluate(*o.state, *x) == ExtQ(o.optimum))) return "state does not attain the optimum";
    s.lp.objective = objective_of(s, *x);
    if (!check_dual(s.lp, o.certificate, o.optimum)) return "dual certificate rejected";
  }
  return std::nullopt;
}

Judgement rordam_tarski(const MonoidPresentation& p, const Element& x, const Element& y, const SearchBudget& b) {
  p.check_element(x);
  p.check_element(y);
  if (is_zero(y)) throw InputError("y must be nonzero");
  StateSystem s = build_state_system(p, y);
  Judgement j;
  j.budget.budget = b;
  if (!inside(s.closure, x)) {
    j.verdict = Verdict::REFUTED;
    j.states.push_back(zero_infinity_state(s.closure));
    j.method = "ideal-closure";
    return j;
  }
  if (is_zero(x)) {
    // (n+1) 0 <= n y trivially
    j.verdict = Verdict::PROVED;
    j.multiplier = 1;
    DerivationBuilder d(p, p.zero());
    d.add(y);
    j.derivations.push_back(d.finish());
    j.method = "trivial";
    return j;
  }
  s.lp.objective = objective_of(s, x);
  auto r = solve_simplex(s.lp);
  if (r.status == LPStatus::FEASIBLE && r.value >= 1) {
    j.verdict = Verdict::REFUTED;
    j.states.push_back(state_from(p, s, r.x));
    j.method = "sup-lp";
    return j;
  }
  Judgement fast = search_stable(p, x, y, b);
  if (fast.verdict == Verdict::PROVED) {
    fast.budget.budget = b;
    return fast;
  }
  if (r.status == LPStatus::FEASIBLE) {
    Judgement c = domination_from_dual(p, s, r.dual, x, y);
    c.budget.budget = b;
    return c;
  }
  // y is paradoxical: (p+1) y <= p y, and x <= k y
  Judgement py = paradox_of(p, y, b, s, r);
  const Derivation& step = py.derivations[0];
  std::int64_t n = py.multiplier;
  std::int64_t k = 0;
  Derivation xy = ideal_derivation(p, s.closure, x, y, k);
  DerivationBuilder d(p, scale(n + 1, x));
  for (std::int64_t i = 0; i <= n; ++i) d.append(xy);
  if (k == 0) {
    d.add(scale(n + 1, y));
    k = 1;
  }
  for (std::int64_t c = (n + 1) * k; c > n; --c) d.append(step);
  j.verdict = Verdict::PROVED;
  j.multiplier = n;
  j.derivations.push_back(d.finish());
  j.method = "paradoxical-dominant";
  return j;
}

Judgement is_stably_dominated(const MonoidPresentation& p, const Element& x, const Element& y, const SearchBudget& b) {
  return rordam_tarski(p, x, y, b);
}

Judgement is_paradoxical(const MonoidPresentation& p, const Element& x, const SearchBudget& b) {
  p.check_element(x);
  if (is_zero(x)) throw InputError("x must be nonzero");
  StateSystem s = build_state_system(p, x);
  auto r = solve_simplex(s.lp);
  Judgement j;
  if (r.status == LPStatus::FEASIBLE) {
    j.verdict = Verdict::REFUTED;
    j.states.push_back(state_from(p, s, r.x));
    j.method = "state-lp";
  } else {
    j = paradox_of(p, x, b, s, r);
  }
  j.budget.budget = b;
  return j;
}

Judgement has_nontrivial_state(const MonoidPresentation& p, const SearchBudget& b) {
  Judgement j;
  j.budget.budget = b;
  for (std::size_t g = 0; g < p.size(); ++g) {
    auto o = find_state(p, p.gen(g));
    if (o.status == LPStatus::FEASIBLE) {
      j.verdict = Verdict::PROVED;
      j.states = {*o.state};
      j.derivations.clear();
      j.method = "state-lp";
      return j;
    }
  }
  for (std::size_t g = 0; g < p.size(); ++g) {
    Judgement pg = is_paradoxical(p, p.gen(g), b);
    if (pg.verdict != Verdict::PROVED) return Judgement{};
    j.derivations.push_back(pg.derivations[0]);
  }
  j.verdict = Verdict::REFUTED;
  j.method = "every-generator-paradoxical";
  return j;
}

std::optional<std::string> verify_nontrivial_state(const MonoidPresentation& p, const Judgement& j) {
  if (j.verdict == Verdict::PROVED) {
    if (j.states.size() != 1) return "expected one state";
    if (auto e = check_state(p, j.states[0])) return e;
    for (const auto& v : j.states[0].values)
      if (v.finite() && v.v > 0) return std::nullopt;
    return "state is trivial";
  }
  if (j.verdict == Verdict::REFUTED) {
    if (j.derivations.size() != p.size()) return "expected one paradox per generator";
    for (std::size_t g = 0; g < p.size(); ++g) {
      const auto& d = j.derivations[g];
      std::int64_t n = d.end[g];
      if (n < 1 || d.end != scale(n, p.gen(g)) || d.start != scale(n + 1, p.gen(g)))
        return "derivation " + std::to_string(g) + " is not a paradox";
      if (auto e = replay(p, d)) return e;
    }
  }
  return std::nullopt;
}

ExtensionResult extend_state_stepwise(const MonoidPresentation& p, const std::vector<Element>& s0, const Element& x,
                                   const Element& y, const ExtensionCaps& caps) {
  for (const auto& e : s0) p.check_element(e);
  if (std::find(s0.begin(), s0.end(), y) == s0.end()) throw InputError("y must belong to s0");
  if (std::find(s0.begin(), s0.end(), x) == s0.end()) throw InputError("x must belong to s0");
  auto cl = ideal_closure(p, y);
  for (const auto& e : s0)
    if (!inside(cl, e)) throw InputError("every element of s0 must lie in <y>");

  ExtensionResult res;
  res.domain.push_back(y);
  res.values.push_back(Q(1));
  res.witnesses.push_back(std::nullopt);

  // multiplicity vectors over t elements with total at most cap
  auto multisets = [](std::size_t t, int cap) {
    std::vector<std::vector<std::int64_t>> out;
    std::vector<std::int64_t> cur(t, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
      if (i == t) {
        out.push_back(cur);
        return;
      }
      for (int v = 0; v <= left; ++v) {
        cur[i] = v;
        rec(i + 1, left - v);
      }
      cur[i] = 0;
    };
    rec(0, cap);
    return out;
  };
  auto combine = [&](const std::vector<std::int64_t>& mult) {
    Element e = p.zero();
    for (std::size_t i = 0; i < mult.size(); ++i) e = add(e, scale(mult[i], res.domain[i]));
    return e;
  };
  auto value_of = [&](const std::vector<std::int64_t>& mult) {
    Q v = 0;
    for (std::size_t i = 0; i < mult.size(); ++i) v += res.values[i] * static_cast<long>(mult[i]);
    return v;
  };

  for (const auto& u : s0) {
    if (std::find(res.domain.begin(), res.domain.end(), u) != res.domain.end()) continue;
    auto ms = multisets(res.domain.size(), caps.pq_max);
    struct Cand {
      Q z;
      std::int64_t k;
      std::size_t ia, ib;
    };
    std::vector<Cand> cands;
    for (std::size_t ia = 0; ia < ms.size(); ++ia)
      for (std::size_t ib = 0; ib < ms.size(); ++ib)
        for (std::int64_t k = 1; k <= caps.k_max; ++k) {
          Q z = (value_of(ms[ib]) - value_of(ms[ia])) / Q(static_cast<long>(k));
          cands.push_back({z, k, ia, ib});
        }
    std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
      return std::tie(a.z, a.k, a.ia, a.ib) < std::tie(b.z, b.k, b.ia, b.ib);
    });
    std::optional<ExtensionCertificate> found;
    for (const auto& c : cands) {
      ++res.candidates_tested;
      Element lhs = add(combine(ms[c.ia]), scale(c.k, u));
      Element rhs = combine(ms[c.ib]);
      Judgement j = leq(p, lhs, rhs, caps.budget);
      if (j.verdict != Verdict::PROVED) continue;
      ExtensionCertificate cert;
      cert.a = ms[c.ia];
      cert.b = ms[c.ib];
      cert.k = c.k;
      cert.value = c.z;
      cert.derivation = j.derivations[0];
      found = cert;
      break;
    }
    if (!found) {
      res.violations.push_back("no certificate for " + p.format(u) + " within the enumeration caps");
      return res;
    }
    if (found->value < 0) res.paradox_evidence = true;
    res.domain.push_back(u);
    res.values.push_back(found->value);
    res.witnesses.push_back(found);
  }

  // order check: sum x_i <= sum y_j implies sum nu(x_i) <= sum nu(y_j)
  auto small = multisets(res.domain.size(), caps.check_multiplicity);
  for (const auto& a : small)
    for (const auto& b2 : small) {
      if (a == b2) continue;
      Judgement j = leq(p, combine(a), combine(b2), caps.budget);
      if (j.verdict == Verdict::PROVED && value_of(a) > value_of(b2))
        res.violations.push_back("order violated: " + p.format(combine(a)) + " <= " + p.format(combine(b2)));
    }

  // infimum formula for x
  {
    struct Cand {
      Q z;
      std::int64_t k, pp, q;
    };
    std::vector<Cand> cands;
    for (std::int64_t pp = 0; pp <= caps.pq_max; ++pp)
      for (std::int64_t q = 0; q <= caps.pq_max; ++q)
        for (std::int64_t k = 1; k <= caps.k_max; ++k) cands.push_back({Q(pp - q, k), k, pp, q});
    std::stable_sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
      return std::tie(a.z, a.k, a.pp, a.q) < std::tie(b.z, b.k, b.pp, b.q);
    });
    for (const auto& c : cands) {
      Judgement j = leq(p, add(scale(c.q, y), scale(c.k, x)), scale(c.pp, y), caps.budget);
      if (j.verdict == Verdict::PROVED) {
        res.x_formula = c.z;
        break;
      }
    }
    std::size_t ix = static_cast<std::size_t>(std::find(res.domain.begin(), res.domain.end(), x) - res.domain.begin());
    if (res.x_formula && *res.x_formula != res.values[ix])
      res.violations.push_back("infimum formula for x gives " + to_string(*res.x_formula) + ", extension gives " +
                               to_string(res.values[ix]));
  }
  return res;
}

}  // namespace typesemi
