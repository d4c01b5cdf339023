#pragma once
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "typesemi/rational.hpp"

namespace typesemi {

using PointSet = std::uint64_t;  // bit x set iff point x is in the set

// Finite space with a lattice O of open sets (closed under union and
// intersection, containing the empty set). The topology is O plus the whole space.
struct FiniteSpace {
  std::vector<std::string> points;
  std::vector<PointSet> opens;  // sorted, duplicate free

  int size() const { return static_cast<int>(points.size()); }
  PointSet all() const;
  bool in_lattice(PointSet s) const;
  bool is_open(PointSet s) const;  // in the topology
  bool is_closed(PointSet s) const;
  PointSet interior(PointSet s) const;
  PointSet closure(PointSet s) const;
  PointSet neighbourhood(int x) const;  // smallest open set containing x
  // every open set is closed, i.e. the space is a partition topology
  bool regular() const;

  int index_of(const std::string& name) const;
  PointSet parse_set(const std::vector<std::string>& names) const;
  std::string format(PointSet s) const;

  std::optional<std::string> validation_error() const;
  void validate() const;
};

// Closes the given family under union and intersection and adds the empty set.
FiniteSpace make_space(std::vector<std::string> points, const std::vector<PointSet>& generators);

// Every subset open; at most 16 points.
FiniteSpace discrete_space(std::vector<std::string> points);

// Separation needed by a construction is missing in a non-regular space.
struct SeparationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// f = sum of 1_{U_k} for a decreasing chain of nonempty members of O.
struct LscFn {
  std::vector<PointSet> chain;
  bool operator==(const LscFn&) const = default;
};

std::vector<int> values(const FiniteSpace& sp, const LscFn& f);
std::vector<int> values_of_terms(const FiniteSpace& sp, const std::vector<PointSet>& terms);
// Level sets of a pointwise function; throws if one is not in O.
LscFn from_values(const FiniteSpace& sp, const std::vector<int>& v);
LscFn normal_form(const FiniteSpace& sp, const std::vector<PointSet>& terms);
LscFn indicator(const FiniteSpace& sp, PointSet u);
LscFn join(const FiniteSpace& sp, const LscFn& f, const LscFn& g);
LscFn meet(const FiniteSpace& sp, const LscFn& f, const LscFn& g);
LscFn sum(const FiniteSpace& sp, const LscFn& f, const LscFn& g);
bool leq(const FiniteSpace& sp, const LscFn& f, const LscFn& g);
std::string format(const FiniteSpace& sp, const LscFn& f);

// Upper semicontinuous closure: sum of the indicators of the closed chain members.
std::vector<int> closure_values(const FiniteSpace& sp, const LscFn& g);

using Compactness = std::function<bool(PointSet)>;
// cl g <= f pointwise and the support of cl g compact (always, unless a predicate says otherwise).
bool way_below(const FiniteSpace& sp, const LscFn& g, const LscFn& f, const Compactness& compact = nullptr);

// W[i][j] in O with K_i inside the union over j of W[i][j], and for each j
// the closures of W[0][j], ..., W[n-1][j] pairwise disjoint inside V_j.
using CoverMatrix = std::vector<std::vector<PointSet>>;
std::optional<std::string> check_decomposition(const FiniteSpace& sp, const std::vector<PointSet>& ks,
                                               const std::vector<PointSet>& vs, const CoverMatrix& w);
// Induction on the number of open sets: peel the zero set of sum 1_V - sum 1_K stratum by stratum.
// Throws InputError when sum 1_K <= sum 1_V fails, SeparationError when the space cannot separate the strata.
CoverMatrix decompose(const FiniteSpace& sp, const std::vector<PointSet>& ks, const std::vector<PointSet>& vs);

struct WayBelowSplit {
  LscFn k1, k2;
  CoverMatrix cover;
};
// k << f + g gives k1 << f, k2 << g with k << k1 + k2 << f + g.
WayBelowSplit split_way_below(const FiniteSpace& sp, const LscFn& k, const LscFn& f, const LscFn& g);
// f << g gives h with f << h << g.
LscFn interpolate(const FiniteSpace& sp, const LscFn& f, const LscFn& g);

// Dimension function nu on O (values indexed like sp.opens): axioms, regularity,
// and additive extension to the atoms of the set algebra generated by O.
struct DimensionReport {
  bool empty_is_zero = true;
  bool monotone = true;
  bool subadditive = true;  // with equality on disjoint pairs
  std::optional<std::string> violation;  // first axiom failure
  bool regular = true;                   // nu(V) = sup nu(U) over U in O with cl U inside V
  std::vector<PointSet> atoms;
  std::optional<std::vector<ExtQ>> extension;  // measure of each atom
  bool unique = false;
  std::string note;
};
DimensionReport extend_dimension_function(const FiniteSpace& sp, const std::vector<ExtQ>& nu);

}  // namespace typesemi
