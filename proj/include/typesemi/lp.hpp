#pragma once
#include <string>
#include <vector>

#include "typesemi/rational.hpp"

namespace typesemi {

enum class Rel { LE, GE, EQ };

struct Constraint {
  std::vector<Q> a;
  Rel rel = Rel::LE;
  Q b = 0;
};

// maximize objective . x  subject to rows, x >= 0
struct LinearProgram {
  std::size_t nvars = 0;
  std::vector<Constraint> rows;
  std::vector<Q> objective;  // empty = pure feasibility

  void add(std::vector<Q> a, Rel rel, Q b) { rows.push_back({std::move(a), rel, std::move(b)}); }
};

enum class LPStatus { FEASIBLE, INFEASIBLE, UNBOUNDED };
std::string to_string(LPStatus s);

struct LPResult {
  LPStatus status = LPStatus::INFEASIBLE;
  Q value = 0;             // optimum when FEASIBLE
  std::vector<Q> x;        // optimal point
  std::vector<Q> dual;     // optimality certificate (one entry per row)
  std::vector<Q> farkas;   // infeasibility certificate
  std::vector<Q> ray;      // unboundedness certificate
  std::size_t pivots = 0;
};

// Exact two-phase simplex with Bland's rule. Certificates are attached when
// with_certificates is set.
LPResult solve_simplex(const LinearProgram& lp, bool with_certificates = true);

// Independent exact backend by Fourier-Motzkin elimination. Only status and
// optimum are reported. Meant for small programs (a handful of variables).
LPResult solve_fourier_motzkin(const LinearProgram& lp);

bool check_point(const LinearProgram& lp, const std::vector<Q>& x);
// y has the right signs, y^T A >= 0 and y^T b < 0
bool check_farkas(const LinearProgram& lp, const std::vector<Q>& y);
// y has the right signs, y^T A >= c and y^T b == value
bool check_dual(const LinearProgram& lp, const std::vector<Q>& y, const Q& value);
bool check_ray(const LinearProgram& lp, const std::vector<Q>& d);
// Replays whichever certificate matches r.status.
bool check_result(const LinearProgram& lp, const LPResult& r);

// Inequalities a.x <= b over n variables, used by projection code.
struct HalfSpace {
  std::vector<Q> a;
  Q b;
};
// Eliminates variable k from the system (Fourier-Motzkin step) and drops
// duplicates. Variable k keeps its slot with coefficient zero.
std::vector<HalfSpace> fm_eliminate(const std::vector<HalfSpace>& sys, std::size_t k);
// True when some row reads 0 <= b with b < 0.
bool fm_contradiction(const std::vector<HalfSpace>& sys);

}  // namespace typesemi
