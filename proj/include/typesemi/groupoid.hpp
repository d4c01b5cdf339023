#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "typesemi/lsc.hpp"
#include "typesemi/monoid.hpp"

namespace typesemi {

// Partial bijection of {0..n-1}; map[x] = image or -1.
struct PartialBijection {
  std::vector<int> map;

  PointSet dom() const;
  PointSet ran() const;
  bool is_idempotent() const;  // identity on its domain
  bool operator==(const PartialBijection&) const = default;
  auto operator<=>(const PartialBijection&) const = default;
};
PartialBijection compose(const PartialBijection& a, const PartialBijection& b);  // a after b
PartialBijection inverse(const PartialBijection& a);
PartialBijection identity_on(int n, PointSet u);
// nullopt when functional and injective on n points
std::optional<std::string> bijection_error(int n, const std::vector<std::pair<int, int>>& pairs);
PartialBijection from_pairs(int n, const std::vector<std::pair<int, int>>& pairs);

// The unit space of a finite groupoid is discrete, so the model always
// contains the identity on X and on every point; O is then every subset.
struct GroupoidModel {
  std::vector<std::string> points;
  std::vector<std::string> generator_names;
  std::vector<PartialBijection> generators;
  std::vector<PartialBijection> bisections;  // sorted inverse semigroup B
  FiniteSpace space;                         // O

  int size() const { return static_cast<int>(points.size()); }
  bool contains(const PartialBijection& b) const;
  std::vector<int> orbit_of() const;  // orbit index per point, numbered by first point
  int orbit_count() const;
  std::string format(const PartialBijection& b) const;
};

// all_restrictions adds the identity on every subset (every restriction of every
// member then lies in B); by default only the point identities are added.
GroupoidModel close_inverse_semigroup(std::vector<std::string> points, std::vector<std::string> names,
                                      std::vector<PartialBijection> generators, std::size_t cap = 200000,
                                      bool all_restrictions = false);

// b = sum of 1_W over a multiset of bisections.
struct BFunction {
  std::vector<PartialBijection> terms;
};
LscFn s_star(const GroupoidModel& g, const BFunction& b);
LscFn r_star(const GroupoidModel& g, const BFunction& b);
LscFn lsc_of(const GroupoidModel& g, const std::vector<int>& pointwise);

struct GroupoidBudget {
  std::size_t node_cap = 2000000;
};

// PROVED: one b per way-below witness k (for sim, a single b with k = f).
// REFUTED: an orbit where the sums compare the wrong way, or the exhaustive
// search when no orbit separates.
struct ComparisonJudgement {
  Verdict verdict = Verdict::UNKNOWN;
  std::vector<LscFn> witnesses;
  std::vector<BFunction> certificates;
  std::optional<int> orbit;  // refuting orbit, by index
  std::string method;
  std::size_t nodes = 0;
};
ComparisonJudgement sim_G(const GroupoidModel& g, const LscFn& f, const LscFn& h, const GroupoidBudget& b = {});
ComparisonJudgement precsim_B(const GroupoidModel& g, const LscFn& f, const LscFn& h, const GroupoidBudget& b = {});

// Covering form: for compact K_i inside U_i (finite spaces: K_i = U_i) bisections
// B_a labelled (alpha, beta) with K_i covered by the sources labelled i and
// the ranges labelled j pairwise disjoint inside V_j.
struct CoveringFamily {
  std::vector<PartialBijection> bisections;
  std::vector<int> alpha, beta;
};
struct CriterionJudgement {
  Verdict verdict = Verdict::UNKNOWN;
  std::optional<CoveringFamily> family;
  std::size_t nodes = 0;
};
CriterionJudgement precsim_criterion(const GroupoidModel& g, const std::vector<PointSet>& us,
                                     const std::vector<PointSet>& vs, const GroupoidBudget& b = {});
std::optional<std::string> check_covering_family(const GroupoidModel& g, const std::vector<PointSet>& us,
                                                 const std::vector<PointSet>& vs, const CoveringFamily& fam);

enum class GroupoidClaim { SIM, PRECSIM };
std::optional<std::string> verify_comparison(const GroupoidModel& g, GroupoidClaim kind, const LscFn& f,
                                             const LscFn& h, const ComparisonJudgement& j);

// [f] <= [h] in S(G): f + e ~ h for some e, by exhaustive search over e.
Verdict type_leq_by_search(const GroupoidModel& g, const LscFn& f, const LscFn& h, const GroupoidBudget& b = {});

// Generators are the nonempty members of O; relations 1_U = 1_{U - x} + 1_{x}
// for x the first point of U, and 1_{s(W)} = 1_{r(W)} for W in B.
MonoidPresentation export_presentation(const GroupoidModel& g);
Element element_of(const GroupoidModel& g, const LscFn& f);
std::string open_generator_name(const GroupoidModel& g, PointSet u);

// Sum of f over each orbit.
std::vector<ExtQ> sigma_map(const GroupoidModel& g, const LscFn& f);

struct InvariantIdeal {
  PointSet open = 0;
  std::vector<Element> ideal_generators;  // 1_V for nonempty V inside the open set
  std::vector<bool> generators_in_ideal;  // closure in the exported presentation
};
struct IdealReport {
  std::vector<InvariantIdeal> invariant;
  std::size_t presentation_ideals = 0;  // ideals of the exported presentation
  bool saturated = false;               // enumeration finished within the cap
  bool matches = false;                 // invariant opens give exactly the enumerated ideals, injectively
  bool minimal = false;                 // single orbit
  std::optional<Judgement> simple;      // is_simple on the export, for minimal models
};
IdealReport invariant_subsets_and_ideals(const GroupoidModel& g, std::size_t cap = 100000);

// Product with the pair groupoid on {1..n}: generators b x e_ij.
struct Stabilization {
  GroupoidModel model;
  int n = 1;
};
Stabilization stabilize(const GroupoidModel& g, int n);
LscFn stabilize_forward(const GroupoidModel& g, const Stabilization& st, const LscFn& f);  // f x 1_{(1,1)}
LscFn stabilize_backward(const GroupoidModel& g, const Stabilization& st, const LscFn& f);  // sum over the layers

GroupoidModel restrict_to_invariant(const GroupoidModel& g, PointSet u);

struct WeightCone {
  std::vector<std::vector<Q>> rays;  // orbit indicators as point weights
  bool rays_are_states = false;      // each ray is a state on the export
  bool lp_state_orbit_constant = false;
  std::vector<StateVector> lp_states;  // find_state at one point of each orbit, on the export
};
WeightCone invariant_weight_cone(const GroupoidModel& g);

}  // namespace typesemi
