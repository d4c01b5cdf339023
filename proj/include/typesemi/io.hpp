#pragma once
#include <optional>
#include <string>

#include "typesemi/finite_monoid.hpp"
#include "typesemi/graph.hpp"
#include "typesemi/groupoid.hpp"
#include "typesemi/layered.hpp"
#include "typesemi/lsc.hpp"
#include "typesemi/monoid.hpp"

namespace typesemi {

// Input error pinned to a position; the message reads "origin:line:column: what".
struct ParseError : InputError {
  int line = 0, column = 0;
  ParseError(const std::string& origin, int line, int column, const std::string& what);
};

enum class InputKind { MONOID, FINITE_MONOID, GRAPH, ACTION, GROUPOID, LAYERED, SPACE };
std::string to_string(InputKind k);

// Files start with "kind: <monoid|finite-monoid|graph|action|groupoid|layered|space>"
// followed by [section] blocks; '#' starts a comment. A graph file may carry
// the action sections too, an action file must.
struct ParsedInput {
  InputKind kind = InputKind::MONOID;
  std::optional<MonoidPresentation> monoid;
  std::optional<FiniteMonoid> finite;
  std::optional<Graph> graph;
  std::optional<SelfSimilarAction> action;
  std::optional<GroupoidModel> groupoid;
  std::optional<LayeredGraph> layered;
  std::optional<FiniteSpace> space;
};

ParsedInput parse_text(const std::string& text, const std::string& origin = "<input>");
ParsedInput parse_file(const std::string& path);  // throws InputError when unreadable
std::string read_file(const std::string& path);

// 64-bit FNV-1a of the bytes, as 16 hex digits.
std::string digest(const std::string& bytes);

// "2*u + w" over vertex names.
VertexFn parse_vertex_fn(const Graph& g, const std::string& text);
// "p=1, q=2" pointwise values; missing points are 0.
std::vector<int> parse_pointwise(const std::vector<std::string>& points, const std::string& text);
// "{p,q} {r}" or "p q" as one set.
std::vector<PointSet> parse_sets(const FiniteSpace& sp, const std::string& text);

}  // namespace typesemi
