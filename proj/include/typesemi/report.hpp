#pragma once
#include <optional>
#include <string>

#include "json.hpp"
#include "typesemi/finite_monoid.hpp"
#include "typesemi/graph.hpp"
#include "typesemi/groupoid.hpp"
#include "typesemi/layered.hpp"
#include "typesemi/monoid.hpp"
#include "typesemi/states.hpp"

namespace typesemi {

// Insertion-ordered so that dumps are byte-identical across runs.
using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

// Exact numbers travel as strings: "p/q", "inf", "p/q+r/s*phi".
Json to_json(const Q& q);
Json to_json(const ExtQ& q);
Json to_json(const QPhi& q);
Q q_from_json(const Json& j);
ExtQ ext_from_json(const Json& j);
Json ext_vector(const std::vector<ExtQ>& xs);
std::vector<ExtQ> ext_vector_from_json(const Json& j);
Json q_vector(const std::vector<Q>& xs);
std::vector<Q> q_vector_from_json(const Json& j);

Verdict verdict_from_string(const std::string& s);

Json to_json(const Derivation& d, const MonoidPresentation& p);
Derivation derivation_from_json(const Json& j);
Json to_json(const Judgement& j, const MonoidPresentation& p);
Judgement judgement_from_json(const Json& j);
Json to_json(const LPOutcome& o, const MonoidPresentation& p);
LPOutcome lp_outcome_from_json(const Json& j);
Json to_json(const FiniteJudgement& j, const FiniteMonoid& m);
FiniteJudgement finite_judgement_from_json(const Json& j, const FiniteMonoid& m);
Json to_json(const CongruenceJudgement& j, const MonoidPresentation& p);

Json to_json(const PartialBijection& b);
PartialBijection bijection_from_json(const Json& j);
Json to_json(const LscFn& f, const FiniteSpace& sp);
LscFn lsc_from_json(const Json& j);
Json to_json(const ComparisonJudgement& j, const GroupoidModel& g);
ComparisonJudgement comparison_from_json(const Json& j);

Json to_json(const ThetaJudgement& j);
ThetaJudgement theta_from_json(const Json& j);
Json to_json(const GraphJudgement& j);
GraphJudgement graph_judgement_from_json(const Json& j);
Json to_json(const Cycle& c, const Graph& g);
Json to_json(const TraceEnclosure& e);
Json to_json(const DichotomyReport& r);

// Flattened "path: value" lines, one per leaf.
std::string render_human(const Json& report);

}  // namespace typesemi
