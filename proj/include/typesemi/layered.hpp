#pragma once
#include <optional>
#include <string>
#include <vector>

#include "typesemi/graph.hpp"
#include "typesemi/rational.hpp"

namespace typesemi {

// Infinite graph built from level templates. Level n holds copies x_n of the
// names in its template. Block n carries edges from level n+1 to level n,
// `within` n carries edges inside level n. With a period p, levels and blocks
// beyond the declared ones repeat the last p templates; without one the graph
// stops at the last declared level, whose vertices are then sources.
struct LayeredGraph {
  struct Arrow {
    int from = 0, to = 0;  // template indices
  };
  std::vector<std::vector<std::string>> levels;  // templates for levels 1..L
  std::vector<std::vector<Arrow>> blocks;        // blocks[n-1]: level n+1 -> level n
  std::vector<std::vector<Arrow>> within;        // within[n-1]: level n -> level n
  int period = 0;

  int declared() const { return static_cast<int>(levels.size()); }
  bool periodic() const { return period > 0; }
  std::optional<int> last_level() const;  // nullopt when periodic
  int template_of(int n) const;           // 0-based index into levels for level n >= 1
  const std::vector<std::string>& level(int n) const { return levels[template_of(n)]; }
  const std::vector<Arrow>& block(int n) const;   // empty past the last level
  const std::vector<Arrow>& within_level(int n) const;
  std::string vertex_name(int n, int i) const { return level(n)[i] + "_" + std::to_string(n); }
  // Levels 1..depth; identities are kept at levels 1..depth-1, so the
  // vertices of level `depth` are free sources.
  Graph truncate(int depth) const;
  int first_vertex(int n) const;  // index of level n's first vertex inside truncate(...)
  std::optional<std::string> validation_error() const;
};

// Level 1: a, b. Edges a_{n+1} -> a_n, b_{n+1} -> a_n, b_{n+1} -> b_n and a_n -> b_n,
// so T(a_n) = T(a_{n+1}) + T(b_{n+1}) and T(b_n) = T(a_n) + T(b_{n+1}).
LayeredGraph drunken_graph();

struct Interval {
  Q lo;
  std::optional<Q> hi;  // nullopt: unbounded
  bool contains(const Interval& o) const;
};

// Values of the level-1 vertices over all traces normalised at the first
// level-1 vertex, when the trace identity is imposed up to level d.
struct EnclosureStep {
  int depth = 0;
  std::vector<Interval> level1;
};
struct TraceEnclosure {
  std::vector<std::string> vertices;  // level-1 names
  std::vector<EnclosureStep> steps;
  bool nested = true;
  std::optional<int> infeasible_level;  // first level at which no faithful trace survives
  std::string note;
};
TraceEnclosure layered_trace_enclosure(const LayeredGraph& l, int depth);

// Exact trace of the drunken graph in Q(phi), levels 1..n+1.
struct DrunkenTrace {
  std::vector<QPhi> a, b;             // a[k] = a_{k+1}
  std::vector<QPhi> partial_sums;     // sum over levels 1..k+1 of a + b
  std::vector<QPhi> tail_sums;        // sum over levels 2..k+1 of a + b
  bool identities_hold = false;       // checked on the expanded graph
  bool closed_forms_hold = false;     // Fibonacci expressions in a_1, b_1
  bool positive = false;
  bool sums_increasing = false;
};
QPhi phi_inverse();
DrunkenTrace drunken_trace(int n, const QPhi& a1 = phi_inverse());

// For a periodic layered graph without cycles: some window w with every
// level-(n+w) vertex reaching every level-n vertex, for every n.
struct LayeredCofinality {
  bool established = false;
  int window = 0;
  std::string witness;
};
LayeredCofinality layered_cofinality(const LayeredGraph& l, int max_window = 32);

struct LayeredReport {
  Dichotomy verdict = Dichotomy::NOT_APPLICABLE;
  bool acyclic = false;
  LayeredCofinality cofinality;
  std::optional<TraceEnclosure> enclosure;
  std::string failed_precondition;
  std::string witness;
  std::string note;
};
LayeredReport classify_layered(const LayeredGraph& l, int depth = 10);

}  // namespace typesemi
