#pragma once
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "typesemi/monoid.hpp"

namespace typesemi {

// Explicit monoid: addition table plus preorder matrix, validated eagerly.
struct FiniteMonoid {
  std::vector<std::string> names;
  std::vector<std::vector<int>> table;   // table[a][b] = a + b
  int zero = 0;
  std::vector<std::vector<bool>> order;  // order[a][b]: a <= b

  int size() const { return static_cast<int>(names.size()); }
  int sum(int a, int b) const { return table[a][b]; }
  bool le(int a, int b) const { return order[a][b]; }
  int index_of(const std::string& name) const;
  int multiple(std::int64_t n, int x) const;

  std::optional<std::string> validation_error() const;
  void validate() const;  // throws InputError
};

// 0, x, 2x, ... is eventually periodic: k*x = seq[k] for k < preperiod + period,
// afterwards k*x = seq[preperiod + (k - preperiod) % period].
struct Multiples {
  std::vector<int> seq;
  int preperiod = 0;
  int period = 1;
  int at(std::int64_t k) const;
};
Multiples multiples(const FiniteMonoid& m, int x);

// Generators are the nonzero elements; relations are the addition table
// (as equalities) and the order matrix. The presented preorder is the table's.
MonoidPresentation export_presentation(const FiniteMonoid& m);
Element element_of(const FiniteMonoid& m, int x);  // over export_presentation generators
std::string generator_name(const FiniteMonoid& m, int x);

// Values per element; checks additivity on the table and monotonicity.
std::optional<std::string> check_finite_state(const FiniteMonoid& m, const std::vector<ExtQ>& values);
std::vector<ExtQ> state_on_elements(const FiniteMonoid& m, const StateVector& s);

// Exact table decisions.
bool in_ideal(const FiniteMonoid& m, int x, int y);  // x <= n y for some n
std::vector<int> ideal_of(const FiniteMonoid& m, int y);
// smallest n >= 1 with (n+1)x <= n y, 0 if none
std::int64_t stable_domination_multiplier(const FiniteMonoid& m, int x, int y);
bool is_infinite(const FiniteMonoid& m, int x);
bool is_properly_infinite(const FiniteMonoid& m, int x);
bool is_paradoxical(const FiniteMonoid& m, int x);
bool is_order_unit(const FiniteMonoid& m, int y);
bool is_simple(const FiniteMonoid& m);
bool is_conical(const FiniteMonoid& m);
bool is_ideal(const FiniteMonoid& m, const std::vector<bool>& set);
std::vector<std::vector<bool>> all_ideals(const FiniteMonoid& m);

// S/I: x ~ y iff x + a = y + b with a, b in I. class_of maps elements to classes.
struct FiniteQuotient {
  FiniteMonoid monoid;
  std::vector<int> class_of;
};
FiniteQuotient quotient(const FiniteMonoid& m, const std::vector<bool>& ideal);

// Judgements on explicit monoids. Table facts are replayed by re-reading the
// table; attached states are checked against the table.
struct FiniteJudgement {
  Verdict verdict = Verdict::UNKNOWN;
  std::int64_t multiplier = 0;
  std::vector<int> witness;
  std::optional<std::vector<ExtQ>> state;
  std::string method;
};
FiniteJudgement decide_paradoxical(const FiniteMonoid& m, int x);
FiniteJudgement decide_properly_infinite(const FiniteMonoid& m, int x);
FiniteJudgement decide_stably_dominated(const FiniteMonoid& m, int x, int y);
FiniteJudgement decide_simple(const FiniteMonoid& m);
FiniteJudgement decide_leq(const FiniteMonoid& m, int x, int y);
std::optional<std::string> verify_finite(const FiniteMonoid& m, ClaimKind kind, int x, int y, const FiniteJudgement& j);

struct InfinitenessIdeal {
  int y = 0;
  std::vector<int> members;
  bool ideal = false;            // contains 0, closed under + and downward closed
  bool inside_span = false;      // contained in <y>
  bool premise = false;          // y != 0 or conical
  bool infinite_iff_nonzero = false;
  bool proper_iff_equals_span = false;
  bool image_finite_in_quotient = false;
};
InfinitenessIdeal compute_infiniteness_ideal(const FiniteMonoid& m, int y);

struct WitnessedCheck {
  bool holds = false;
  std::optional<int> witness;  // violating element when !holds
};
WitnessedCheck check_plain_paradoxes(const FiniteMonoid& m);
WitnessedCheck check_purely_infinite(const FiniteMonoid& m);

// Exhaustive structural checks; each entry names the property and the first failure.
struct PropertyCheck {
  std::string name;
  bool applicable = true;
  bool holds = true;
  std::string detail;
};
std::vector<PropertyCheck> check_monoid_properties(const FiniteMonoid& m);

// For every nonzero y exactly one of: y paradoxical (table), a state with
// nu(y) = 1 (exact LP on the exported presentation).
PropertyCheck check_state_dichotomy(const FiniteMonoid& m);
// For all x and nonzero y: x <_s y (table) iff x in <y> and every state with
// nu(y) = 1 has nu(x) < 1 (sup LP on the exported presentation).
PropertyCheck check_stable_domination_criterion(const FiniteMonoid& m);

// Every commutative monoid with at most max_size elements up to isomorphism,
// each with every compatible preorder (reflexive, transitive, translation
// invariant, 0 below everything). Visitor returns false to stop.
struct EnumerationStats {
  std::size_t monoids = 0;
  std::size_t instances = 0;
};
EnumerationStats enumerate_finite_monoids(int max_size, const std::function<bool(const FiniteMonoid&)>& visit,
                                          bool with_preorders = true);

// A few named examples: "zero-one-inf", "zero-inf", "truncated:N".
FiniteMonoid named_finite_monoid(const std::string& name);

}  // namespace typesemi
