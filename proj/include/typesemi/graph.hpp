#pragma once
#include <optional>
#include <string>
#include <vector>

#include "typesemi/monoid.hpp"
#include "typesemi/rational.hpp"

namespace typesemi {

// Directed graph. Paths e1 e2 ... compose with s(e_i) = r(e_{i+1}); a source
// is a vertex that receives no edge.
struct Graph {
  std::vector<std::string> vertices;
  std::vector<std::string> edge_names;
  std::vector<int> src, rng;  // s(e), r(e)

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int edge_count() const { return static_cast<int>(src.size()); }
  int vertex_index(const std::string& name) const;  // throws InputError
  int edge_index(const std::string& name) const;
  std::vector<std::vector<int>> edges_into() const;
  std::vector<int> sources() const;
  void add_vertex(const std::string& name);
  void add_edge(const std::string& name, int s, int r);
  std::optional<std::string> validation_error() const;
};

using VertexFn = std::vector<Z>;
VertexFn unit(const Graph& e, int v, long k = 1);
// Theta^n(f)(v) = sum over paths of length n with source v of f(range)
VertexFn theta(const Graph& e, const VertexFn& f, int n = 1);

// Finite group acting by graph automorphisms with a restriction cocycle g|_e.
struct SelfSimilarAction {
  std::vector<std::string> elements;
  std::vector<std::vector<int>> mult;      // mult[g][h] = gh
  std::vector<std::vector<int>> vertex;    // vertex[g][v] = g.v
  std::vector<std::vector<int>> edge;      // edge[g][e] = g.e
  std::vector<std::vector<int>> cocycle;   // cocycle[g][e] = g|_e
  int identity() const;                    // -1 when none
  int order() const { return static_cast<int>(elements.size()); }
};
SelfSimilarAction trivial_action(const Graph& e);
// Every violated law instance, each naming its law.
std::vector<std::string> action_violations(const Graph& e, const SelfSimilarAction& a);
void validate_action(const Graph& e, const SelfSimilarAction& a);  // throws InputError with the first violations

// E/Gamma: vertices are orbits; the edges into [w] are the edges of E into the
// representative w (smallest index of the orbit), with source [s(e)].
struct QuotientGraph {
  Graph graph;
  std::vector<int> vertex_class;  // per vertex of E
  std::vector<int> representative;  // per class
  std::vector<int> orbit_size;      // per class
  std::vector<int> edge_origin;     // quotient edge -> edge of E
};
QuotientGraph quotient_graph(const Graph& e, const SelfSimilarAction& a);

// Generators are the vertices of E/Gamma, one relation w == sum of s(e) per vertex receiving edges.
MonoidPresentation export_graph_presentation(const Graph& e, const SelfSimilarAction& a);
MonoidPresentation export_graph_presentation(const Graph& e);
Element class_element(const QuotientGraph& q, const VertexFn& f);  // sum of f over each orbit

struct Cycle {
  std::vector<int> edges;     // e1 ... ek with s(e_i) = r(e_{i+1}) cyclically
  std::vector<int> vertices;  // r(e1), ..., r(ek)
  std::optional<int> entrance;  // a vertex on the cycle receiving two or more edges
};
std::vector<Cycle> cycles_with_entrance(const Graph& e, std::size_t cap = 10000);

// Every vertex is reachable, following edges from source to range, from every
// strongly connected component that contains a cycle.
struct CofinalityReport {
  bool cofinal = false;
  std::optional<std::pair<int, int>> witness;  // (vertex of a cyclic component, unreachable vertex)
};
CofinalityReport is_cofinal(const Graph& e);  // throws InputError when E has sources

// T >= 0 with T(v) = sum over edges into v of T(s(e)). With free_sources the
// identity is only imposed at vertices that receive edges.
struct TraceCone {
  std::vector<std::vector<Q>> rays;  // extreme rays, scaled to coprime integers
  std::size_t dimension = 0;
  bool nontrivial = false;
};
TraceCone graph_trace_cone(const Graph& e, bool free_sources = true);
std::optional<std::string> check_graph_trace(const Graph& e, const std::vector<ExtQ>& t, bool free_sources = false);
ExtQ pair_trace(const std::vector<ExtQ>& t, const VertexFn& f);

struct ThetaJudgement {
  Verdict verdict = Verdict::UNKNOWN;
  int p = 0, q = 0;  // Theta^p(f) = Theta^q(g)
  std::optional<std::vector<ExtQ>> trace;  // separating invariant trace
  std::string method;
};
ThetaJudgement sim_theta(const Graph& e, const VertexFn& f, const VertexFn& g, int depth = 8);
std::optional<std::string> verify_sim_theta(const Graph& e, const VertexFn& f, const VertexFn& g,
                                            const ThetaJudgement& j);

// Unit mass at v, moved by a group element, then pushed p times through Theta.
struct Piece {
  int vertex = 0, element = 0, exponent = 0;
};
struct GraphJudgement {
  Verdict verdict = Verdict::UNKNOWN;
  std::vector<Piece> pieces;  // sum of Theta^p(1_{gv}) <= Theta^q(g)
  int q = 0;
  std::optional<std::vector<ExtQ>> trace;  // Gamma-invariant trace with T.f > T.g
  std::string method;
  std::size_t nodes = 0;
};
struct GraphBudget {
  int depth = 6;
  std::size_t node_cap = 200000;
};
GraphJudgement precsim_graph(const Graph& e, const SelfSimilarAction& a, const VertexFn& f, const VertexFn& g,
                             const GraphBudget& b = {});
std::optional<std::string> verify_precsim_graph(const Graph& e, const SelfSimilarAction& a, const VertexFn& f,
                                                const VertexFn& g, const GraphJudgement& j);

// Gamma-traces on E against traces on E/Gamma.
bool is_gamma_trace(const Graph& e, const SelfSimilarAction& a, const std::vector<ExtQ>& t);
// scaled: T(v) = [T]([v]) / |Gamma v|; otherwise T(v) = [T]([v])
std::vector<ExtQ> lift_trace(const QuotientGraph& q, const std::vector<ExtQ>& tq, bool scaled);
std::vector<ExtQ> push_trace(const QuotientGraph& q, const std::vector<ExtQ>& t, bool scaled);
struct TraceConversion {
  std::vector<ExtQ> lifted, pushed_back;
  bool round_trip = false;
  bool lifted_is_gamma_trace = false;
  bool normalization_preserved = false;  // total mass is kept
};
TraceConversion gamma_trace_convert(const Graph& e, const SelfSimilarAction& a, const std::vector<ExtQ>& tq,
                                    bool scaled = true);

enum class Dichotomy { PURELY_INFINITE, STABLY_FINITE, NOT_APPLICABLE };
std::string to_string(Dichotomy d);

struct DichotomyReport {
  QuotientGraph quotient;
  std::optional<CofinalityReport> cofinality;
  std::vector<Cycle> cycles;
  Dichotomy verdict = Dichotomy::NOT_APPLICABLE;
  std::string witness;
  std::string failed_precondition;
  bool w_is_n = false;  // exported monoid is N: all generators equal and a finite state exists
  std::optional<std::vector<ExtQ>> trace;
  std::string note;
};
DichotomyReport classify_dichotomy(const Graph& e, const SelfSimilarAction& a);

}  // namespace typesemi
