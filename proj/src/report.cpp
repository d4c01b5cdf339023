#include "typesemi/report.hpp"

#include <sstream>

namespace typesemi {

Json to_json(const Q& q) { return to_string(q); }
Json to_json(const ExtQ& q) { return to_string(q); }
Json to_json(const QPhi& q) { return to_string(q); }

Q q_from_json(const Json& j) { return parse_rational(j.get<std::string>()); }
ExtQ ext_from_json(const Json& j) { return parse_ext(j.get<std::string>()); }

Json ext_vector(const std::vector<ExtQ>& xs) {
  Json a = Json::array();
  for (const auto& x : xs) a.push_back(to_json(x));
  return a;
}

std::vector<ExtQ> ext_vector_from_json(const Json& j) {
  std::vector<ExtQ> out;
  for (const auto& x : j) out.push_back(ext_from_json(x));
  return out;
}

Json q_vector(const std::vector<Q>& xs) {
  Json a = Json::array();
  for (const auto& x : xs) a.push_back(to_json(x));
  return a;
}

std::vector<Q> q_vector_from_json(const Json& j) {
  std::vector<Q> out;
  for (const auto& x : j) out.push_back(q_from_json(x));
  return out;
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "PROVED") return Verdict::PROVED;
  if (s == "REFUTED") return Verdict::REFUTED;
  if (s == "UNKNOWN") return Verdict::UNKNOWN;
  throw InputError("unknown verdict '" + s + "'");
}

namespace {

Json element_json(const Element& e) {
  Json a = Json::array();
  for (auto x : e) a.push_back(x);
  return a;
}

Element element_from(const Json& j) { return j.get<std::vector<std::int64_t>>(); }

}  // namespace

Json to_json(const Derivation& d, const MonoidPresentation& p) {
  Json j;
  j["start"] = element_json(d.start);
  j["end"] = element_json(d.end);
  j["text"] = p.format(d.start) + " <= " + p.format(d.end);
  Json steps = Json::array();
  for (const auto& s : d.steps) {
    Json x;
    if (s.kind == Step::Kind::Rel) {
      x["kind"] = "rel";
      x["rel"] = s.rel;
      x["reverse"] = s.reverse;
      x["context"] = element_json(s.context);
    } else {
      x["kind"] = "add";
      x["added"] = element_json(s.added);
    }
    steps.push_back(x);
  }
  j["steps"] = steps;
  return j;
}

Derivation derivation_from_json(const Json& j) {
  Derivation d;
  d.start = element_from(j.at("start"));
  d.end = element_from(j.at("end"));
  for (const auto& x : j.at("steps")) {
    Step s;
    if (x.at("kind") == "rel") {
      s.kind = Step::Kind::Rel;
      s.rel = x.at("rel").get<std::size_t>();
      s.reverse = x.at("reverse").get<bool>();
      s.context = element_from(x.at("context"));
    } else {
      s.kind = Step::Kind::Add;
      s.added = element_from(x.at("added"));
    }
    d.steps.push_back(std::move(s));
  }
  return d;
}

Json to_json(const Judgement& j, const MonoidPresentation& p) {
  Json o;
  o["verdict"] = to_string(j.verdict);
  o["method"] = j.method;
  o["multiplier"] = j.multiplier;
  Json ds = Json::array();
  for (const auto& d : j.derivations) ds.push_back(to_json(d, p));
  o["derivations"] = ds;
  Json ss = Json::array();
  for (const auto& s : j.states) {
    Json x;
    for (std::size_t i = 0; i < p.size(); ++i) x[p.generators[i]] = to_json(s.values[i]);
    ss.push_back(x);
  }
  o["states"] = ss;
  Json b;
  b["n_max"] = j.budget.budget.n_max;
  b["coeff_cap"] = j.budget.budget.coeff_cap;
  b["node_cap"] = j.budget.budget.node_cap;
  b["nodes"] = j.budget.nodes;
  b["cap_complete"] = j.budget.cap_complete;
  b["reason"] = j.budget.reason;
  o["budget"] = b;
  return o;
}

Judgement judgement_from_json(const Json& o) {
  Judgement j;
  j.verdict = verdict_from_string(o.at("verdict").get<std::string>());
  j.method = o.at("method").get<std::string>();
  j.multiplier = o.at("multiplier").get<std::int64_t>();
  for (const auto& d : o.at("derivations")) j.derivations.push_back(derivation_from_json(d));
  for (const auto& s : o.at("states")) {
    StateVector sv;
    for (const auto& [k, v] : s.items()) sv.values.push_back(ext_from_json(v));
    j.states.push_back(sv);
  }
  const auto& b = o.at("budget");
  j.budget.budget.n_max = b.at("n_max").get<int>();
  j.budget.budget.coeff_cap = b.at("coeff_cap").get<int>();
  j.budget.budget.node_cap = b.at("node_cap").get<std::size_t>();
  j.budget.nodes = b.at("nodes").get<std::size_t>();
  j.budget.cap_complete = b.at("cap_complete").get<bool>();
  j.budget.reason = b.at("reason").get<std::string>();
  return j;
}

Json to_json(const LPOutcome& o, const MonoidPresentation& p) {
  Json j;
  j["status"] = to_string(o.status);
  j["optimum"] = to_json(o.optimum);
  if (o.state) {
    Json s;
    for (std::size_t i = 0; i < p.size(); ++i) s[p.generators[i]] = to_json(o.state->values[i]);
    j["state"] = s;
  }
  j["certificate"] = q_vector(o.certificate);
  j["forced_finite"] = o.forced_finite;
  j["note"] = o.note;
  return j;
}

LPOutcome lp_outcome_from_json(const Json& j) {
  LPOutcome o;
  auto st = j.at("status").get<std::string>();
  o.status = st == "FEASIBLE" ? LPStatus::FEASIBLE : st == "UNBOUNDED" ? LPStatus::UNBOUNDED : LPStatus::INFEASIBLE;
  o.optimum = q_from_json(j.at("optimum"));
  if (j.contains("state")) {
    StateVector sv;
    for (const auto& [k, v] : j.at("state").items()) sv.values.push_back(ext_from_json(v));
    o.state = sv;
  }
  o.certificate = q_vector_from_json(j.at("certificate"));
  o.forced_finite = j.at("forced_finite").get<std::vector<std::size_t>>();
  o.note = j.at("note").get<std::string>();
  return o;
}

Json to_json(const FiniteJudgement& j, const FiniteMonoid& m) {
  Json o;
  o["verdict"] = to_string(j.verdict);
  o["method"] = j.method;
  o["multiplier"] = j.multiplier;
  Json w = Json::array();
  for (int x : j.witness) w.push_back(m.names.at(x));
  o["witness"] = w;
  if (j.state) {
    Json s;
    for (int i = 0; i < m.size(); ++i) s[m.names[i]] = to_json((*j.state)[i]);
    o["state"] = s;
  }
  return o;
}

FiniteJudgement finite_judgement_from_json(const Json& o, const FiniteMonoid& m) {
  FiniteJudgement j;
  j.verdict = verdict_from_string(o.at("verdict").get<std::string>());
  j.method = o.at("method").get<std::string>();
  j.multiplier = o.at("multiplier").get<std::int64_t>();
  for (const auto& w : o.at("witness")) j.witness.push_back(m.index_of(w.get<std::string>()));
  if (o.contains("state")) {
    std::vector<ExtQ> s;
    for (const auto& [k, v] : o.at("state").items()) s.push_back(ext_from_json(v));
    j.state = s;
  }
  return j;
}

Json to_json(const CongruenceJudgement& j, const MonoidPresentation& p) {
  Json o;
  o["verdict"] = to_string(j.verdict);
  if (j.derivation) o["derivation"] = to_json(*j.derivation, p);
  if (j.invariant) {
    Json phi = Json::array();
    for (const auto& z : j.invariant->phi) phi.push_back(z.get_str());
    o["invariant"] = {{"phi", phi}, {"modulus", j.invariant->modulus.get_str()}};
  }
  o["class_size"] = j.class_size;
  return o;
}

Json to_json(const PartialBijection& b) { return b.map; }
PartialBijection bijection_from_json(const Json& j) { return PartialBijection{j.get<std::vector<int>>()}; }

Json to_json(const LscFn& f, const FiniteSpace& sp) {
  Json j;
  j["chain"] = f.chain;
  j["text"] = format(sp, f);
  return j;
}

LscFn lsc_from_json(const Json& j) { return LscFn{j.at("chain").get<std::vector<PointSet>>()}; }

Json to_json(const ComparisonJudgement& j, const GroupoidModel& g) {
  Json o;
  o["verdict"] = to_string(j.verdict);
  o["method"] = j.method;
  o["nodes"] = j.nodes;
  Json ws = Json::array();
  for (const auto& w : j.witnesses) ws.push_back(to_json(w, g.space));
  o["witnesses"] = ws;
  Json cs = Json::array();
  for (const auto& b : j.certificates) {
    Json terms = Json::array();
    for (const auto& t : b.terms) terms.push_back({{"map", to_json(t)}, {"text", g.format(t)}});
    cs.push_back(terms);
  }
  o["certificates"] = cs;
  if (j.orbit) o["orbit"] = *j.orbit;
  return o;
}

ComparisonJudgement comparison_from_json(const Json& o) {
  ComparisonJudgement j;
  j.verdict = verdict_from_string(o.at("verdict").get<std::string>());
  j.method = o.at("method").get<std::string>();
  j.nodes = o.at("nodes").get<std::size_t>();
  for (const auto& w : o.at("witnesses")) j.witnesses.push_back(lsc_from_json(w));
  for (const auto& c : o.at("certificates")) {
    BFunction b;
    for (const auto& t : c) b.terms.push_back(bijection_from_json(t.at("map")));
    j.certificates.push_back(b);
  }
  if (o.contains("orbit")) j.orbit = o.at("orbit").get<int>();
  return j;
}

Json to_json(const ThetaJudgement& j) {
  Json o;
  o["verdict"] = to_string(j.verdict);
  o["method"] = j.method;
  o["p"] = j.p;
  o["q"] = j.q;
  if (j.trace) o["trace"] = ext_vector(*j.trace);
  return o;
}

ThetaJudgement theta_from_json(const Json& o) {
  ThetaJudgement j;
  j.verdict = verdict_from_string(o.at("verdict").get<std::string>());
  j.method = o.at("method").get<std::string>();
  j.p = o.at("p").get<int>();
  j.q = o.at("q").get<int>();
  if (o.contains("trace")) j.trace = ext_vector_from_json(o.at("trace"));
  return j;
}

Json to_json(const GraphJudgement& j) {
  Json o;
  o["verdict"] = to_string(j.verdict);
  o["method"] = j.method;
  o["nodes"] = j.nodes;
  o["q"] = j.q;
  Json ps = Json::array();
  for (const auto& p : j.pieces) ps.push_back({{"vertex", p.vertex}, {"element", p.element}, {"exponent", p.exponent}});
  o["pieces"] = ps;
  if (j.trace) o["trace"] = ext_vector(*j.trace);
  return o;
}

GraphJudgement graph_judgement_from_json(const Json& o) {
  GraphJudgement j;
  j.verdict = verdict_from_string(o.at("verdict").get<std::string>());
  j.method = o.at("method").get<std::string>();
  j.nodes = o.at("nodes").get<std::size_t>();
  j.q = o.at("q").get<int>();
  for (const auto& p : o.at("pieces"))
    j.pieces.push_back(Piece{p.at("vertex").get<int>(), p.at("element").get<int>(), p.at("exponent").get<int>()});
  if (o.contains("trace")) j.trace = ext_vector_from_json(o.at("trace"));
  return j;
}

Json to_json(const Cycle& c, const Graph& g) {
  Json o;
  Json es = Json::array();
  for (int e : c.edges) es.push_back(g.edge_names[e]);
  o["edges"] = es;
  if (c.entrance)
    o["entrance"] = g.vertices[*c.entrance];
  else
    o["entrance"] = nullptr;
  return o;
}

Json to_json(const TraceEnclosure& e) {
  Json o;
  o["vertices"] = e.vertices;
  o["nested"] = e.nested;
  if (e.infeasible_level) o["infeasible_level"] = *e.infeasible_level;
  if (!e.note.empty()) o["note"] = e.note;
  Json steps = Json::array();
  for (const auto& s : e.steps) {
    Json x;
    x["depth"] = s.depth;
    Json ivs = Json::array();
    for (const auto& iv : s.level1) {
      Json y;
      y["lo"] = to_json(iv.lo);
      y["hi"] = iv.hi ? to_json(*iv.hi) : Json("inf");
      y["width"] = iv.hi ? to_json(Q(*iv.hi - iv.lo)) : Json("inf");
      ivs.push_back(y);
    }
    x["intervals"] = ivs;
    steps.push_back(x);
  }
  o["steps"] = steps;
  return o;
}

Json to_json(const DichotomyReport& r) {
  const Graph& q = r.quotient.graph;
  Json o;
  o["verdict"] = to_string(r.verdict);
  o["quotient"] = {{"vertices", q.vertices}, {"edges", q.edge_count()}, {"orbit_sizes", r.quotient.orbit_size}};
  if (r.cofinality) {
    Json c;
    c["cofinal"] = r.cofinality->cofinal;
    if (r.cofinality->witness)
      c["witness"] = {q.vertices[r.cofinality->witness->first], q.vertices[r.cofinality->witness->second]};
    o["cofinality"] = c;
  }
  Json cs = Json::array();
  for (const auto& c : r.cycles) cs.push_back(to_json(c, q));
  o["cycles"] = cs;
  o["witness"] = r.witness;
  if (!r.failed_precondition.empty()) o["failed_precondition"] = r.failed_precondition;
  o["w_is_n"] = r.w_is_n;
  if (r.trace) o["trace"] = ext_vector(*r.trace);
  o["note"] = r.note;
  return o;
}

namespace {

void flatten(const Json& j, const std::string& path, std::ostringstream& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, path.empty() ? k : path + "." + k, out);
    return;
  }
  if (j.is_array()) {
    bool scalars = std::all_of(j.begin(), j.end(), [](const Json& x) { return x.is_primitive(); });
    if (scalars && j.size() <= 16) {
      out << path << ": [";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out << ", ";
        out << (j[i].is_string() ? j[i].get<std::string>() : j[i].dump());
      }
      out << "]\n";
      return;
    }
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "[" + std::to_string(i) + "]", out);
    return;
  }
  out << path << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
}

}  // namespace

std::string render_human(const Json& report) {
  std::ostringstream out;
  flatten(report, "", out);
  return out.str();
}

}  // namespace typesemi
