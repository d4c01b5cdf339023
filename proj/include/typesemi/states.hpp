#pragma once
#include <optional>
#include <string>
#include <vector>

#include "typesemi/lp.hpp"
#include "typesemi/monoid.hpp"

namespace typesemi {

// Constraint system for states normalized by nu(y) = 1. Variables are the
// generators of the ideal closure of y; the others are INF.
struct StateSystem {
  IdealClosure closure;
  std::vector<std::size_t> vars;
  std::vector<int> slot;
  std::vector<std::size_t> row_rel;  // directed relation per row; the last row is nu(y) = 1
  LinearProgram lp;
};
StateSystem build_state_system(const MonoidPresentation& p, const Element& y);

struct LPOutcome {
  LPStatus status = LPStatus::INFEASIBLE;
  Q optimum = 0;
  std::optional<StateVector> state;
  std::vector<Q> certificate;               // Farkas multipliers, or dual values at optimum
  std::vector<std::size_t> forced_finite;   // generators of the ideal closure
  std::vector<std::size_t> budget_ambiguous;  // always empty: the closure is exact
  std::string note;
};

LPOutcome find_state(const MonoidPresentation& p, const Element& y);
LPOutcome sup_state_value(const MonoidPresentation& p, const Element& x, const Element& y);
// Replays an outcome: FEASIBLE states satisfy every relation and nu(y) = 1,
// INFEASIBLE outcomes carry a valid Farkas certificate for the system.
// With x given, the outcome is read as a sup_state_value result.
std::optional<std::string> verify_state_outcome(const MonoidPresentation& p, const Element& y, const LPOutcome& o,
                                                const Element* x = nullptr);

// x <_s y, decided exactly: constructive derivations from LP duals on the
// proving side, states on the refuting side.
Judgement rordam_tarski(const MonoidPresentation& p, const Element& x, const Element& y, const SearchBudget& b = {});
Judgement has_nontrivial_state(const MonoidPresentation& p, const SearchBudget& b = {});
std::optional<std::string> verify_nontrivial_state(const MonoidPresentation& p, const Judgement& j);

struct ExtensionCaps {
  int pq_max = 16;
  int k_max = 8;
  int check_multiplicity = 2;
  SearchBudget budget{8, 32, 20000};
};

struct ExtensionCertificate {
  std::vector<std::int64_t> a, b;  // multiplicities over the current domain
  std::int64_t k = 1;
  Q value = 0;
  Derivation derivation;           // sum a + k u <= sum b
};

struct ExtensionResult {
  std::vector<Element> domain;
  std::vector<Q> values;
  std::vector<std::optional<ExtensionCertificate>> witnesses;  // per domain element (nullopt for y)
  std::optional<Q> x_formula;   // inf (p-q)/k over q y + k x <= p y found by enumeration
  std::vector<std::string> violations;
  bool paradox_evidence = false;
  std::size_t candidates_tested = 0;
};

ExtensionResult extend_state_stepwise(const MonoidPresentation& p, const std::vector<Element>& s0, const Element& x,
                                   const Element& y, const ExtensionCaps& caps = {});

}  // namespace typesemi
