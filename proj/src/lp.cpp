#include "typesemi/lp.hpp"

#include <algorithm>
#include <map>
#include <optional>

namespace typesemi {

std::string to_string(LPStatus s) {
  switch (s) {
    case LPStatus::FEASIBLE: return "FEASIBLE";
    case LPStatus::INFEASIBLE: return "INFEASIBLE";
    case LPStatus::UNBOUNDED: return "UNBOUNDED";
  }
  return "?";
}

namespace {

struct Tableau {
  std::size_t ncols = 0;                 // structural + slack + artificial
  std::vector<std::vector<Q>> t;         // each row has ncols + 1 entries
  std::vector<std::size_t> basis;
  std::size_t pivots = 0;

  void pivot(std::size_t r, std::size_t c) {
    ++pivots;
    Q inv = 1 / t[r][c];
    for (auto& v : t[r]) v *= inv;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (i == r || t[i][c] == 0) continue;
      Q f = t[i][c];
      for (std::size_t j = 0; j <= ncols; ++j)
        if (t[r][j] != 0) t[i][j] -= f * t[r][j];
    }
    basis[r] = c;
  }

  // Bland's rule. Returns the entering column of an unbounded direction, or
  // nullopt at optimum.
  std::optional<std::size_t> maximize(const std::vector<Q>& cost, const std::vector<bool>& allowed) {
    for (;;) {
      std::vector<bool> is_basic(ncols, false);
      for (auto b : basis) is_basic[b] = true;
      std::optional<std::size_t> enter;
      for (std::size_t j = 0; j < ncols && !enter; ++j) {
        if (!allowed[j] || is_basic[j]) continue;
        Q r = cost[j];
        for (std::size_t i = 0; i < t.size(); ++i)
          if (t[i][j] != 0) r -= cost[basis[i]] * t[i][j];
        if (r > 0) enter = j;
      }
      if (!enter) return std::nullopt;
      std::size_t c = *enter;
      std::optional<std::size_t> leave;
      Q best;
      for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i][c] <= 0) continue;
        Q ratio = t[i][ncols] / t[i][c];
        if (!leave || ratio < best || (ratio == best && basis[i] < basis[*leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (!leave) return c;
      pivot(*leave, c);
    }
  }
};

LPResult core_solve(const LinearProgram& lp) {
  const std::size_t n = lp.nvars;
  const std::size_t m = lp.rows.size();
  std::vector<std::vector<Q>> a(m);
  std::vector<Rel> rel(m);
  std::vector<Q> b(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& row = lp.rows[i];
    if (row.a.size() != n) throw std::invalid_argument("constraint width mismatch");
    a[i] = row.a;
    rel[i] = row.rel;
    b[i] = row.b;
    if (b[i] < 0) {
      for (auto& v : a[i]) v = -v;
      b[i] = -b[i];
      if (rel[i] == Rel::LE) rel[i] = Rel::GE;
      else if (rel[i] == Rel::GE) rel[i] = Rel::LE;
    }
  }
  std::size_t nslack = 0, nart = 0;
  for (auto r : rel) {
    if (r != Rel::EQ) ++nslack;
    if (r != Rel::LE) ++nart;
  }
  Tableau T;
  T.ncols = n + nslack + nart;
  T.t.assign(m, std::vector<Q>(T.ncols + 1, Q(0)));
  T.basis.assign(m, 0);
  std::vector<bool> artificial(T.ncols, false);
  std::size_t s = n, art = n + nslack;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) T.t[i][j] = a[i][j];
    T.t[i][T.ncols] = b[i];
    if (rel[i] == Rel::LE) {
      T.t[i][s] = 1;
      T.basis[i] = s++;
    } else {
      if (rel[i] == Rel::GE) T.t[i][s++] = -1;
      T.t[i][art] = 1;
      artificial[art] = true;
      T.basis[i] = art++;
    }
  }
  LPResult res;
  if (nart > 0) {
    std::vector<Q> cost(T.ncols, Q(0));
    for (std::size_t j = 0; j < T.ncols; ++j)
      if (artificial[j]) cost[j] = -1;
    std::vector<bool> allowed(T.ncols, true);
    T.maximize(cost, allowed);
    Q infeas = 0;
    for (std::size_t i = 0; i < m; ++i)
      if (artificial[T.basis[i]]) infeas += T.t[i][T.ncols];
    if (infeas > 0) {
      res.status = LPStatus::INFEASIBLE;
      res.pivots = T.pivots;
      return res;
    }
    // drive remaining artificials out of the basis, dropping redundant rows
    for (std::size_t i = 0; i < T.t.size();) {
      if (!artificial[T.basis[i]]) {
        ++i;
        continue;
      }
      std::optional<std::size_t> col;
      for (std::size_t j = 0; j < T.ncols && !col; ++j)
        if (!artificial[j] && T.t[i][j] != 0) col = j;
      if (col) {
        T.pivot(i, *col);
        ++i;
      } else {
        T.t.erase(T.t.begin() + static_cast<long>(i));
        T.basis.erase(T.basis.begin() + static_cast<long>(i));
      }
    }
  }
  std::vector<Q> cost(T.ncols, Q(0));
  for (std::size_t j = 0; j < n && j < lp.objective.size(); ++j) cost[j] = lp.objective[j];
  std::vector<bool> allowed(T.ncols, true);
  for (std::size_t j = 0; j < T.ncols; ++j)
    if (artificial[j]) allowed[j] = false;
  auto unb = T.maximize(cost, allowed);
  res.pivots = T.pivots;
  if (unb) {
    res.status = LPStatus::UNBOUNDED;
    res.ray.assign(n, Q(0));
    if (*unb < n) res.ray[*unb] = 1;
    for (std::size_t i = 0; i < T.t.size(); ++i)
      if (T.basis[i] < n) res.ray[T.basis[i]] = -T.t[i][*unb];
    return res;
  }
  res.status = LPStatus::FEASIBLE;
  res.x.assign(n, Q(0));
  for (std::size_t i = 0; i < T.t.size(); ++i)
    if (T.basis[i] < n) res.x[T.basis[i]] = T.t[i][T.ncols];
  res.value = 0;
  for (std::size_t j = 0; j < n && j < lp.objective.size(); ++j) res.value += lp.objective[j] * res.x[j];
  return res;
}

// Variables of the alternative/dual systems: one per LE or GE row, two per EQ
// row. Maps u back to y with the sign pattern of the rows.
struct SignedVars {
  std::vector<std::pair<std::size_t, int>> cols;  // (row, sign)
  explicit SignedVars(const LinearProgram& lp) {
    for (std::size_t i = 0; i < lp.rows.size(); ++i) {
      switch (lp.rows[i].rel) {
        case Rel::LE: cols.push_back({i, +1}); break;
        case Rel::GE: cols.push_back({i, -1}); break;
        case Rel::EQ:
          cols.push_back({i, +1});
          cols.push_back({i, -1});
          break;
      }
    }
  }
  std::vector<Q> to_y(const std::vector<Q>& u, std::size_t m) const {
    std::vector<Q> y(m, Q(0));
    for (std::size_t k = 0; k < cols.size(); ++k) y[cols[k].first] += cols[k].second * u[k];
    return y;
  }
};

}  // namespace

LPResult solve_simplex(const LinearProgram& lp, bool with_certificates) {
  LPResult res = core_solve(lp);
  if (!with_certificates) return res;
  SignedVars sv(lp);
  const std::size_t m = lp.rows.size();
  if (res.status == LPStatus::INFEASIBLE) {
    LinearProgram alt;
    alt.nvars = sv.cols.size();
    for (std::size_t j = 0; j < lp.nvars; ++j) {
      std::vector<Q> row(alt.nvars, Q(0));
      for (std::size_t k = 0; k < sv.cols.size(); ++k)
        row[k] = sv.cols[k].second * lp.rows[sv.cols[k].first].a[j];
      alt.add(row, Rel::GE, 0);
    }
    std::vector<Q> brow(alt.nvars, Q(0));
    for (std::size_t k = 0; k < sv.cols.size(); ++k) brow[k] = sv.cols[k].second * lp.rows[sv.cols[k].first].b;
    alt.add(brow, Rel::LE, -1);
    LPResult f = core_solve(alt);
    if (f.status != LPStatus::FEASIBLE) throw std::logic_error("Farkas system unexpectedly infeasible");
    res.farkas = sv.to_y(f.x, m);
  } else if (res.status == LPStatus::FEASIBLE) {
    LinearProgram dual;
    dual.nvars = sv.cols.size();
    for (std::size_t j = 0; j < lp.nvars; ++j) {
      std::vector<Q> row(dual.nvars, Q(0));
      for (std::size_t k = 0; k < sv.cols.size(); ++k)
        row[k] = sv.cols[k].second * lp.rows[sv.cols[k].first].a[j];
      Q c = j < lp.objective.size() ? lp.objective[j] : Q(0);
      dual.add(row, Rel::GE, c);
    }
    dual.objective.assign(dual.nvars, Q(0));
    for (std::size_t k = 0; k < sv.cols.size(); ++k)
      dual.objective[k] = -(sv.cols[k].second * lp.rows[sv.cols[k].first].b);
    LPResult d = core_solve(dual);
    if (d.status != LPStatus::FEASIBLE || -d.value != res.value)
      throw std::logic_error("dual program disagrees with primal optimum");
    res.dual = sv.to_y(d.x, m);
  }
  return res;
}

bool check_point(const LinearProgram& lp, const std::vector<Q>& x) {
  if (x.size() != lp.nvars) return false;
  for (const auto& v : x)
    if (v < 0) return false;
  for (const auto& r : lp.rows) {
    Q s = 0;
    for (std::size_t j = 0; j < lp.nvars; ++j) s += r.a[j] * x[j];
    if (r.rel == Rel::LE && s > r.b) return false;
    if (r.rel == Rel::GE && s < r.b) return false;
    if (r.rel == Rel::EQ && s != r.b) return false;
  }
  return true;
}

static bool signs_ok(const LinearProgram& lp, const std::vector<Q>& y) {
  if (y.size() != lp.rows.size()) return false;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (lp.rows[i].rel == Rel::LE && y[i] < 0) return false;
    if (lp.rows[i].rel == Rel::GE && y[i] > 0) return false;
  }
  return true;
}

bool check_farkas(const LinearProgram& lp, const std::vector<Q>& y) {
  if (!signs_ok(lp, y)) return false;
  for (std::size_t j = 0; j < lp.nvars; ++j) {
    Q s = 0;
    for (std::size_t i = 0; i < y.size(); ++i) s += y[i] * lp.rows[i].a[j];
    if (s < 0) return false;
  }
  Q s = 0;
  for (std::size_t i = 0; i < y.size(); ++i) s += y[i] * lp.rows[i].b;
  return s < 0;
}

bool check_dual(const LinearProgram& lp, const std::vector<Q>& y, const Q& value) {
  if (!signs_ok(lp, y)) return false;
  for (std::size_t j = 0; j < lp.nvars; ++j) {
    Q s = 0;
    for (std::size_t i = 0; i < y.size(); ++i) s += y[i] * lp.rows[i].a[j];
    Q c = j < lp.objective.size() ? lp.objective[j] : Q(0);
    if (s < c) return false;
  }
  Q s = 0;
  for (std::size_t i = 0; i < y.size(); ++i) s += y[i] * lp.rows[i].b;
  return s == value;
}

bool check_ray(const LinearProgram& lp, const std::vector<Q>& d) {
  if (d.size() != lp.nvars) return false;
  for (const auto& v : d)
    if (v < 0) return false;
  for (const auto& r : lp.rows) {
    Q s = 0;
    for (std::size_t j = 0; j < lp.nvars; ++j) s += r.a[j] * d[j];
    if (r.rel == Rel::LE && s > 0) return false;
    if (r.rel == Rel::GE && s < 0) return false;
    if (r.rel == Rel::EQ && s != 0) return false;
  }
  Q s = 0;
  for (std::size_t j = 0; j < lp.nvars && j < lp.objective.size(); ++j) s += lp.objective[j] * d[j];
  return s > 0;
}

bool check_result(const LinearProgram& lp, const LPResult& r) {
  switch (r.status) {
    case LPStatus::FEASIBLE: {
      if (!check_point(lp, r.x)) return false;
      Q v = 0;
      for (std::size_t j = 0; j < lp.nvars && j < lp.objective.size(); ++j) v += lp.objective[j] * r.x[j];
      return v == r.value && check_dual(lp, r.dual, r.value);
    }
    case LPStatus::INFEASIBLE: return check_farkas(lp, r.farkas);
    case LPStatus::UNBOUNDED: return check_ray(lp, r.ray);
  }
  return false;
}

namespace {

// Scales a row so its first nonzero coefficient has absolute value one; used
// for duplicate detection.
HalfSpace normalized(const HalfSpace& h) {
  HalfSpace n = h;
  for (const auto& v : h.a) {
    if (v != 0) {
      Q s = abs(v);
      for (auto& c : n.a) c /= s;
      n.b /= s;
      break;
    }
  }
  return n;
}

struct RowLess {
  bool operator()(const HalfSpace& x, const HalfSpace& y) const {
    for (std::size_t i = 0; i < x.a.size(); ++i) {
      int c = cmp(x.a[i], y.a[i]);
      if (c != 0) return c < 0;
    }
    return cmp(x.b, y.b) < 0;
  }
};

std::vector<HalfSpace> dedupe(const std::vector<HalfSpace>& rows) {
  // for identical left-hand sides keep the tightest bound
  std::map<std::vector<Q>, Q, bool (*)(const std::vector<Q>&, const std::vector<Q>&)> best(
      [](const std::vector<Q>& x, const std::vector<Q>& y) {
        for (std::size_t i = 0; i < x.size(); ++i) {
          int c = cmp(x[i], y[i]);
          if (c != 0) return c < 0;
        }
        return false;
      });
  std::vector<HalfSpace> trivial;
  for (const auto& r : rows) {
    auto n = normalized(r);
    bool zero = std::all_of(n.a.begin(), n.a.end(), [](const Q& v) { return v == 0; });
    if (zero) {
      if (n.b < 0) trivial.push_back(n);
      continue;
    }
    auto it = best.find(n.a);
    if (it == best.end()) best.emplace(n.a, n.b);
    else if (n.b < it->second) it->second = n.b;
  }
  std::vector<HalfSpace> out = trivial;
  for (auto& [a, b] : best) out.push_back({a, b});
  return out;
}

}  // namespace

std::vector<HalfSpace> fm_eliminate(const std::vector<HalfSpace>& sys, std::size_t k) {
  std::vector<HalfSpace> pos, neg, out;
  for (const auto& h : sys) {
    if (h.a[k] > 0) pos.push_back(h);
    else if (h.a[k] < 0) neg.push_back(h);
    else out.push_back(h);
  }
  for (const auto& p : pos)
    for (const auto& q : neg) {
      Q fp = -q.a[k], fq = p.a[k];
      HalfSpace c;
      c.a.resize(p.a.size());
      for (std::size_t i = 0; i < p.a.size(); ++i) c.a[i] = fp * p.a[i] + fq * q.a[i];
      c.a[k] = 0;
      c.b = fp * p.b + fq * q.b;
      out.push_back(std::move(c));
    }
  return dedupe(out);
}

bool fm_contradiction(const std::vector<HalfSpace>& sys) {
  for (const auto& h : sys) {
    bool zero = std::all_of(h.a.begin(), h.a.end(), [](const Q& v) { return v == 0; });
    if (zero && h.b < 0) return true;
  }
  return false;
}

LPResult solve_fourier_motzkin(const LinearProgram& lp) {
  const std::size_t n = lp.nvars;
  const std::size_t t = n;  // objective variable
  std::vector<HalfSpace> sys;
  auto push = [&](std::vector<Q> a, Q b) { sys.push_back({std::move(a), std::move(b)}); };
  for (const auto& r : lp.rows) {
    std::vector<Q> a(n + 1, Q(0));
    for (std::size_t j = 0; j < n; ++j) a[j] = r.a[j];
    if (r.rel != Rel::GE) push(a, r.b);
    if (r.rel != Rel::LE) {
      for (auto& v : a) v = -v;
      push(a, -r.b);
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<Q> a(n + 1, Q(0));
    a[j] = -1;
    push(a, 0);
  }
  {
    std::vector<Q> a(n + 1, Q(0));
    a[t] = 1;
    for (std::size_t j = 0; j < n && j < lp.objective.size(); ++j) a[j] = -lp.objective[j];
    push(a, 0);
    for (auto& v : a) v = -v;
    push(a, 0);
  }
  sys = dedupe(sys);
  for (std::size_t j = 0; j < n; ++j) sys = fm_eliminate(sys, j);
  LPResult res;
  if (fm_contradiction(sys)) {
    res.status = LPStatus::INFEASIBLE;
    return res;
  }
  std::optional<Q> upper, lower;
  for (const auto& h : sys) {
    if (h.a[t] > 0) {
      Q u = h.b / h.a[t];
      if (!upper || u < *upper) upper = u;
    } else if (h.a[t] < 0) {
      Q l = h.b / h.a[t];
      if (!lower || l > *lower) lower = l;
    }
  }
  if (upper && lower && *lower > *upper) {
    res.status = LPStatus::INFEASIBLE;
    return res;
  }
  if (!upper) {
    res.status = LPStatus::UNBOUNDED;
    return res;
  }
  res.status = LPStatus::FEASIBLE;
  res.value = *upper;
  return res;
}

}  // namespace typesemi
