#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "typesemi/rational.hpp"

namespace typesemi {

// Dense coefficient vector over the generators of a presentation.
using Element = std::vector<std::int64_t>;

Element add(const Element& a, const Element& b);
Element sub(const Element& a, const Element& b);  // requires b <= a componentwise
Element scale(std::int64_t k, const Element& a);
bool dominated(const Element& a, const Element& b);  // a <= b componentwise
bool is_zero(const Element& a);
std::vector<std::size_t> support(const Element& a);

enum class RelKind { LEQ, EQ };

struct Relation {
  Element lhs, rhs;
  RelKind kind = RelKind::LEQ;
};

struct MonoidPresentation {
  std::vector<std::string> generators;
  std::vector<Relation> relations;

  std::size_t size() const { return generators.size(); }
  std::size_t index_of(const std::string& name) const;  // throws InputError
  Element zero() const { return Element(size(), 0); }
  Element gen(std::size_t i) const;
  // "2*a + b", "0"
  Element parse(const std::string& text) const;
  std::string format(const Element& e) const;
  void validate() const;
  void check_element(const Element& e) const;
};

// Relation lines "2*a + b <= c" or "v == 2*v".
Relation parse_relation(const MonoidPresentation& p, const std::string& line);
MonoidPresentation make_presentation(std::vector<std::string> gens, const std::vector<std::string>& rels);

// An EQ relation contributes both directions; `reverse` marks rhs -> lhs.
struct DirectedRelation {
  Element from, to;
  std::size_t rel = 0;
  bool reverse = false;
};
std::vector<DirectedRelation> directed(const MonoidPresentation& p);

struct SearchBudget {
  int n_max = 8;
  int coeff_cap = 32;
  std::size_t node_cap = 1000000;
};

struct Step {
  enum class Kind { Rel, Add } kind = Kind::Add;
  std::size_t rel = 0;
  bool reverse = false;
  Element context;  // for Rel: current = lhs + context
  Element added;    // for Add
};

struct Derivation {
  Element start;
  std::vector<Step> steps;
  Element end;
};

// nullopt when every step replays and the final value is `end`.
std::optional<std::string> replay(const MonoidPresentation& p, const Derivation& d);
Derivation shifted(const Derivation& d, const Element& z);

class DerivationBuilder {
 public:
  DerivationBuilder(const MonoidPresentation& p, Element start);
  void add(const Element& z);
  void apply(const DirectedRelation& r);  // rewrites one copy of r.from
  void append(const Derivation& sub);     // sub.start must be <= current
  const Element& current() const { return cur_; }
  Derivation finish() const;

 private:
  const MonoidPresentation& p_;
  Derivation d_;
  Element cur_;
};

enum class Verdict { PROVED, REFUTED, UNKNOWN };
std::string to_string(Verdict v);

struct StateVector {
  std::vector<ExtQ> values;
};
ExtQ evaluate(const StateVector& s, const Element& e);
// nullopt when nu(lhs) <= nu(rhs) holds for every relation (both ways for EQ).
std::optional<std::string> check_state(const MonoidPresentation& p, const StateVector& s);

struct BudgetReport {
  SearchBudget budget;
  std::size_t nodes = 0;
  bool cap_complete = false;
  std::string reason;
};

struct Judgement {
  Verdict verdict = Verdict::UNKNOWN;
  std::vector<Derivation> derivations;
  std::vector<StateVector> states;
  std::int64_t multiplier = 0;
  BudgetReport budget;
  std::string method;
};

enum class ClaimKind { LEQ, IDEAL, STABLY_DOMINATED, PARADOXICAL, PROPERLY_INFINITE, ORDER_UNIT, SIMPLE };
std::string to_string(ClaimKind k);

struct Claim {
  ClaimKind kind = ClaimKind::LEQ;
  Element x, y;
};

// Independent replay of a judgement's certificate against its claim.
std::optional<std::string> verify_judgement(const MonoidPresentation& p, const Claim& c, const Judgement& j);

// Generators forced into <y>: the least set containing supp(y) and closed
// under "supp(to) inside => supp(from) inside" for every directed relation.
// Exactly <y> intersected with the generators.
struct IdealClosure {
  std::vector<bool> in;
  std::vector<int> via;  // directed relation index that pulled the generator in, -1 for supp(y)
  std::vector<std::size_t> order;
};
IdealClosure ideal_closure(const MonoidPresentation& p, const Element& y);
// The {0, INF} state: 0 on the closure, INF elsewhere.
StateVector zero_infinity_state(const IdealClosure& c);
// Derivation x <= m*y for x supported in the closure of y; returns m via out param.
Derivation ideal_derivation(const MonoidPresentation& p, const IdealClosure& c, const Element& x, const Element& y,
                            std::int64_t& m);

Judgement leq(const MonoidPresentation& p, const Element& x, const Element& y, const SearchBudget& b = {});
// Breadth-first search only (no closure or state analysis).
Judgement leq_search(const MonoidPresentation& p, const Element& x, const Element& y, const SearchBudget& b);
Judgement brute_force_leq_oracle(const MonoidPresentation& p, const Element& x, const Element& y,
                                 const SearchBudget& b);
Judgement ideal_membership(const MonoidPresentation& p, const Element& x, const Element& y,
                           const SearchBudget& b = {});
Judgement is_paradoxical(const MonoidPresentation& p, const Element& x, const SearchBudget& b = {});
Judgement is_properly_infinite(const MonoidPresentation& p, const Element& x, const SearchBudget& b = {});
Judgement is_stably_dominated(const MonoidPresentation& p, const Element& x, const Element& y,
                              const SearchBudget& b = {});
Judgement is_order_unit(const MonoidPresentation& p, const Element& y, const SearchBudget& b = {});
Judgement is_simple(const MonoidPresentation& p, const SearchBudget& b = {});
MonoidPresentation quotient_by_ideal(const MonoidPresentation& p, const std::vector<Element>& ideal_gens);

// Word problem for the congruence generated by the EQ relations: decides
// x = y in the monoid (not the preorder). PROVED carries a rewrite
// derivation; REFUTED carries either a saturated class or an integer
// invariant phi with phi(lhs) = phi(rhs) mod m for all relations.
struct CongruenceInvariant {
  std::vector<Z> phi;
  Z modulus;  // 0 means an integer-valued invariant
};
struct CongruenceJudgement {
  Verdict verdict = Verdict::UNKNOWN;
  std::optional<Derivation> derivation;
  std::optional<CongruenceInvariant> invariant;
  std::size_t class_size = 0;  // set when the class of x saturated
  BudgetReport budget;
};
CongruenceJudgement congruent(const MonoidPresentation& p, const Element& x, const Element& y,
                              const SearchBudget& b = {});
std::optional<std::string> verify_congruence(const MonoidPresentation& p, const Element& x, const Element& y,
                                             const CongruenceJudgement& j);

}  // namespace typesemi
