#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "typesemi/io.hpp"

namespace typesemi::cli {

namespace {

struct Loaded {
  ParsedInput in;
  std::string digest;
};

Loaded load(const std::string& input) {
  if (input == "drunken") {
    ParsedInput p;
    p.kind = InputKind::LAYERED;
    p.layered = drunken_graph();
    return {p, "builtin:drunken"};
  }
  std::string text = read_file(input);
  return {parse_text(text, input), digest(text)};
}

std::optional<std::string> arg(const Invocation& inv, const std::string& key) {
  auto it = inv.args.find(key);
  if (it == inv.args.end()) return std::nullopt;
  return it->second;
}

std::string need(const Invocation& inv, const std::string& key) {
  auto v = arg(inv, key);
  if (!v) throw InputError(inv.command + " needs --" + key);
  return *v;
}

bool flag(const Invocation& inv, const std::string& key) { return arg(inv, key).value_or("") == "true"; }

int depth_or(const Invocation& inv, int fallback) {
  return inv.budgets.depth > 0 ? inv.budgets.depth : fallback;
}

SearchBudget search_budget(const Budgets& b) { return {b.n_max, b.coeff_cap, b.node_cap}; }

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    auto a = item.find_first_not_of(" \t");
    if (a == std::string::npos) continue;
    out.push_back(item.substr(a, item.find_last_not_of(" \t") - a + 1));
  }
  return out;
}

void require_kind(const Invocation& inv, const ParsedInput& in, std::initializer_list<InputKind> kinds) {
  for (auto k : kinds)
    if (in.kind == k) return;
  throw InputError(inv.command + " cannot take a " + to_string(in.kind) + " input");
}

std::string format_relation(const MonoidPresentation& p, const Relation& r) {
  return p.format(r.lhs) + (r.kind == RelKind::EQ ? " == " : " <= ") + p.format(r.rhs);
}

Json presentation_json(const MonoidPresentation& p) {
  Json j;
  j["generators"] = p.generators;
  Json rels = Json::array();
  for (const auto& r : p.relations) rels.push_back(format_relation(p, r));
  j["relations"] = rels;
  return j;
}

// Presentation-level view of a monoid or finite-monoid input.
struct MonoidView {
  MonoidPresentation p;
  std::optional<FiniteMonoid> finite;
  Element element(const std::string& text) const {
    if (finite) return element_of(*finite, finite->index_of(text));
    return p.parse(text);
  }
};

MonoidView monoid_view(const Invocation& inv, const ParsedInput& in) {
  require_kind(inv, in, {InputKind::MONOID, InputKind::FINITE_MONOID});
  MonoidView v;
  if (in.finite) {
    v.finite = *in.finite;
    v.p = export_presentation(*in.finite);
  } else {
    v.p = *in.monoid;
  }
  return v;
}

// ---- monoid claims ------------------------------------------------------

struct MonoidClaim {
  ClaimKind kind;
  std::string x, y;  // element texts, empty when unused
};

MonoidClaim monoid_claim(const Invocation& inv) {
  const std::string op = inv.command.substr(inv.command.find(' ') + 1);
  if (op == "leq") return {ClaimKind::LEQ, need(inv, "x"), need(inv, "y")};
  if (op == "paradoxical") return {ClaimKind::PARADOXICAL, need(inv, "elem"), ""};
  if (op == "proper-inf") return {ClaimKind::PROPERLY_INFINITE, need(inv, "elem"), ""};
  if (op == "simple") return {ClaimKind::SIMPLE, "", ""};
  if (op == "rordam-tarski") return {ClaimKind::STABLY_DOMINATED, need(inv, "x"), need(inv, "y")};
  throw InputError("unknown monoid claim " + op);
}

Analysis monoid_judgement(const Invocation& inv, const ParsedInput& in) {
  auto c = monoid_claim(inv);
  Analysis a;
  if (in.kind == InputKind::FINITE_MONOID && c.kind != ClaimKind::STABLY_DOMINATED) {
    const auto& m = *in.finite;
    int x = c.x.empty() ? m.zero : m.index_of(c.x);
    int y = c.y.empty() ? m.zero : m.index_of(c.y);
    FiniteJudgement j;
    switch (c.kind) {
      case ClaimKind::LEQ: j = decide_leq(m, x, y); break;
      case ClaimKind::PARADOXICAL: j = decide_paradoxical(m, x); break;
      case ClaimKind::PROPERLY_INFINITE: j = decide_properly_infinite(m, x); break;
      default: j = decide_simple(m); break;
    }
    a.verdict = to_string(j.verdict);
    a.certificate = to_json(j, m);
    return a;
  }
  auto v = monoid_view(inv, in);
  Element x = c.x.empty() ? v.p.zero() : v.element(c.x);
  Element y = c.y.empty() ? v.p.zero() : v.element(c.y);
  auto b = search_budget(inv.budgets);
  Judgement j;
  switch (c.kind) {
    case ClaimKind::LEQ: j = leq(v.p, x, y, b); break;
    case ClaimKind::PARADOXICAL: j = is_paradoxical(v.p, x, b); break;
    case ClaimKind::PROPERLY_INFINITE: j = is_properly_infinite(v.p, x, b); break;
    case ClaimKind::STABLY_DOMINATED: j = rordam_tarski(v.p, x, y, b); break;
    default: j = is_simple(v.p, b); break;
  }
  a.verdict = to_string(j.verdict);
  a.certificate = to_json(j, v.p);
  return a;
}

std::optional<std::string> replay_monoid_judgement(const Invocation& inv, const ParsedInput& in, const Json& cert) {
  auto c = monoid_claim(inv);
  if (in.kind == InputKind::FINITE_MONOID && c.kind != ClaimKind::STABLY_DOMINATED) {
    const auto& m = *in.finite;
    int x = c.x.empty() ? m.zero : m.index_of(c.x);
    int y = c.y.empty() ? m.zero : m.index_of(c.y);
    return verify_finite(m, c.kind, x, y, finite_judgement_from_json(cert, m));
  }
  auto v = monoid_view(inv, in);
  Claim claim{c.kind, c.x.empty() ? v.p.zero() : v.element(c.x), c.y.empty() ? v.p.zero() : v.element(c.y)};
  return verify_judgement(v.p, claim, judgement_from_json(cert));
}

Analysis monoid_quotient(const Invocation& inv, const ParsedInput& in) {
  auto gens = split_list(need(inv, "ideal"));
  if (gens.empty()) throw InputError("--ideal needs at least one element");
  Analysis a;
  a.verdict = "COMPUTED";
  if (in.kind == InputKind::FINITE_MONOID) {
    const auto& m = *in.finite;
    int s = m.zero;
    for (const auto& g : gens) s = m.sum(s, m.index_of(g));
    std::vector<bool> ideal(m.size(), false);
    for (int x : ideal_of(m, s)) ideal[x] = true;
    auto fq = quotient(m, ideal);
    Json classes = Json::array();
    for (int c = 0; c < fq.monoid.size(); ++c) {
      Json members = Json::array();
      for (int x = 0; x < m.size(); ++x)
        if (fq.class_of[x] == c) members.push_back(m.names[x]);
      classes.push_back(members);
    }
    a.certificate["classes"] = classes;
    a.certificate["table"] = fq.monoid.table;
    return a;
  }
  require_kind(inv, in, {InputKind::MONOID});
  const auto& p = *in.monoid;
  std::vector<Element> els;
  for (const auto& g : gens) els.push_back(p.parse(g));
  a.certificate = presentation_json(quotient_by_ideal(p, els));
  return a;
}

// ---- states -------------------------------------------------------------

Analysis state_op(const Invocation& inv, const ParsedInput& in) {
  auto v = monoid_view(inv, in);
  const std::string op = inv.command.substr(6);
  Analysis a;
  if (op == "find") {
    auto o = find_state(v.p, v.element(need(inv, "y")));
    a.verdict = to_string(o.status);
    a.certificate = to_json(o, v.p);
  } else if (op == "sup") {
    auto o = sup_state_value(v.p, v.element(need(inv, "x")), v.element(need(inv, "y")));
    a.verdict = to_string(o.status);
    a.certificate = to_json(o, v.p);
  } else if (op == "rordam-tarski") {
    return monoid_judgement(inv, in);
  } else {
    std::vector<Element> s0;
    for (const auto& t : split_list(need(inv, "domain"))) s0.push_back(v.element(t));
    ExtensionCaps caps;
    caps.budget = {inv.budgets.n_max, inv.budgets.coeff_cap, std::min<std::size_t>(inv.budgets.node_cap, 20000)};
    auto r = extend_state_stepwise(v.p, s0, v.element(need(inv, "x")), v.element(need(inv, "y")), caps);
    Json dom = Json::array(), wit = Json::array();
    for (std::size_t i = 0; i < r.domain.size(); ++i) {
      dom.push_back(v.p.format(r.domain[i]));
      if (!r.witnesses[i]) {
        wit.push_back(nullptr);
        continue;
      }
      const auto& w = *r.witnesses[i];
      Json wj;
      wj["a"] = w.a;
      wj["b"] = w.b;
      wj["k"] = w.k;
      wj["value"] = to_json(w.value);
      wj["derivation"] = to_json(w.derivation, v.p);
      wit.push_back(wj);
    }
    a.certificate["domain"] = dom;
    a.certificate["values"] = q_vector(r.values);
    a.certificate["x_formula"] = r.x_formula ? to_json(*r.x_formula) : Json(nullptr);
    a.certificate["witnesses"] = wit;
    a.certificate["violations"] = r.violations;
    a.certificate["paradox_evidence"] = r.paradox_evidence;
    a.certificate["candidates_tested"] = r.candidates_tested;
    a.verdict = r.violations.empty() ? "COMPUTED" : "VIOLATION";
  }
  return a;
}

std::optional<std::string> replay_state(const Invocation& inv, const ParsedInput& in, const Json& cert) {
  auto v = monoid_view(inv, in);
  const std::string op = inv.command.substr(6);
  if (op == "find") return verify_state_outcome(v.p, v.element(need(inv, "y")), lp_outcome_from_json(cert));
  if (op == "sup") {
    Element x = v.element(need(inv, "x"));
    return verify_state_outcome(v.p, v.element(need(inv, "y")), lp_outcome_from_json(cert), &x);
  }
  if (op == "rordam-tarski") return replay_monoid_judgement(inv, in, cert);
  for (const auto& w : cert.at("witnesses")) {
    if (w.is_null()) continue;
    if (auto e = replay(v.p, derivation_from_json(w.at("derivation")))) return "extension witness: " + *e;
  }
  return std::nullopt;
}

// ---- lattice ------------------------------------------------------------

const FiniteSpace& space_of(const Invocation& inv, const ParsedInput& in) {
  require_kind(inv, in, {InputKind::SPACE});
  return *in.space;
}

Analysis lattice_op(const Invocation& inv, const ParsedInput& in) {
  const auto& sp = space_of(inv, in);
  Analysis a;
  if (inv.command == "lattice decompose") {
    auto ks = parse_sets(sp, need(inv, "k"));
    auto vs = parse_sets(sp, need(inv, "v"));
    try {
      auto w = decompose(sp, ks, vs);
      Json rows = Json::array();
      for (const auto& row : w) {
        Json r = Json::array();
        for (auto s : row) r.push_back(sp.format(s));
        rows.push_back(r);
      }
      a.verdict = "PROVED";
      a.certificate["cover"] = rows;
      a.certificate["masks"] = w;
    } catch (const SeparationError& e) {
      a.verdict = "UNKNOWN";
      a.certificate["reason"] = e.what();
    }
    return a;
  }
  auto g = from_values(sp, parse_pointwise(sp.points, need(inv, "g")));
  auto f = from_values(sp, parse_pointwise(sp.points, need(inv, "f")));
  bool wb = way_below(sp, g, f);
  a.verdict = wb ? "TRUE" : "FALSE";
  a.certificate["g"] = to_json(g, sp);
  a.certificate["f"] = to_json(f, sp);
  if (wb) a.certificate["interpolant"] = to_json(interpolate(sp, g, f), sp);
  return a;
}

std::optional<std::string> replay_lattice(const Invocation& inv, const ParsedInput& in, const Json& cert) {
  const auto& sp = space_of(inv, in);
  if (inv.command == "lattice decompose") {
    if (!cert.contains("masks")) return std::nullopt;
    return check_decomposition(sp, parse_sets(sp, need(inv, "k")), parse_sets(sp, need(inv, "v")),
                               cert.at("masks").get<CoverMatrix>());
  }
  if (!cert.contains("interpolant")) return std::nullopt;
  auto g = lsc_from_json(cert.at("g")), f = lsc_from_json(cert.at("f")), h = lsc_from_json(cert.at("interpolant"));
  if (!way_below(sp, g, h) || !way_below(sp, h, f)) return "interpolant is not strictly between g and f";
  return std::nullopt;
}

// ---- groupoid -----------------------------------------------------------

const GroupoidModel& groupoid_of(const Invocation& inv, const ParsedInput& in) {
  require_kind(inv, in, {InputKind::GROUPOID});
  return *in.groupoid;
}

LscFn groupoid_fn(const GroupoidModel& g, const std::string& text) {
  return lsc_of(g, parse_pointwise(g.points, text));
}

GroupoidClaim relation_of(const Invocation& inv) {
  auto r = arg(inv, "relation").value_or("precsim");
  if (r == "precsim") return GroupoidClaim::PRECSIM;
  if (r == "sim") return GroupoidClaim::SIM;
  throw InputError("--relation must be precsim or sim");
}

ComparisonJudgement compare(const GroupoidModel& g, GroupoidClaim kind, const LscFn& f, const LscFn& h,
                            const Budgets& b) {
  GroupoidBudget gb{b.node_cap};
  return kind == GroupoidClaim::SIM ? sim_G(g, f, h, gb) : precsim_B(g, f, h, gb);
}

Analysis groupoid_op(const Invocation& inv, const ParsedInput& in) {
  const auto& g = groupoid_of(inv, in);
  const std::string op = inv.command.substr(9);
  Analysis a;
  if (op == "typesemigroup") {
    auto f = groupoid_fn(g, need(inv, "f")), h = groupoid_fn(g, need(inv, "g"));
    auto cj = compare(g, relation_of(inv), f, h, inv.budgets);
    a.verdict = to_string(cj.verdict);
    a.certificate = to_json(cj, g);
    a.certificate["sigma_f"] = ext_vector(sigma_map(g, f));
    a.certificate["sigma_g"] = ext_vector(sigma_map(g, h));
  } else if (op == "ideals") {
    auto r = invariant_subsets_and_ideals(g);
    Json opens = Json::array();
    for (const auto& i : r.invariant) opens.push_back(g.space.format(i.open));
    a.certificate["invariant_opens"] = opens;
    a.certificate["presentation_ideals"] = r.presentation_ideals;
    a.certificate["saturated"] = r.saturated;
    a.certificate["matches"] = r.matches;
    a.certificate["minimal"] = r.minimal;
    if (r.simple) a.certificate["simple"] = to_json(*r.simple, export_presentation(g));
    a.verdict = !r.saturated ? "UNKNOWN" : r.matches ? "PROVED" : "REFUTED";
  } else if (op == "sigma") {
    auto orbit = g.orbit_of();
    Json orbits = Json::array();
    for (int o = 0; o < g.orbit_count(); ++o) {
      Json pts = Json::array();
      for (int x = 0; x < g.size(); ++x)
        if (orbit[x] == o) pts.push_back(g.points[x]);
      orbits.push_back(pts);
    }
    a.verdict = "COMPUTED";
    a.certificate["orbits"] = orbits;
    a.certificate["sigma"] = ext_vector(sigma_map(g, groupoid_fn(g, need(inv, "f"))));
  } else {
    int n = std::stoi(arg(inv, "n").value_or("2"));
    if (n < 1 || n > 6) throw InputError("--n must lie in 1..6");
    auto st = stabilize(g, n);
    a.certificate["n"] = n;
    a.certificate["points"] = st.model.size();
    a.certificate["bisections"] = st.model.bisections.size();
    a.verdict = "COMPUTED";
    if (arg(inv, "f") || arg(inv, "g")) {
      auto f = groupoid_fn(g, need(inv, "f")), h = groupoid_fn(g, need(inv, "g"));
      auto before = compare(g, GroupoidClaim::PRECSIM, f, h, inv.budgets);
      auto after = compare(st.model, GroupoidClaim::PRECSIM, stabilize_forward(g, st, f), stabilize_forward(g, st, h),
                           inv.budgets);
      a.certificate["original"] = to_json(before, g);
      a.certificate["stabilized"] = to_json(after, st.model);
      if (before.verdict == Verdict::UNKNOWN || after.verdict == Verdict::UNKNOWN)
        a.verdict = "UNKNOWN";
      else
        a.verdict = before.verdict == after.verdict ? "PROVED" : "REFUTED";
    }
  }
  return a;
}

std::optional<std::string> replay_groupoid(const Invocation& inv, const ParsedInput& in, const Json& cert) {
  const auto& g = groupoid_of(inv, in);
  const std::string op = inv.command.substr(9);
  if (op == "typesemigroup") {
    auto f = groupoid_fn(g, need(inv, "f")), h = groupoid_fn(g, need(inv, "g"));
    return verify_comparison(g, relation_of(inv), f, h, comparison_from_json(cert));
  }
  if (op == "ideals" && cert.contains("simple"))
    return verify_judgement(export_presentation(g), Claim{ClaimKind::SIMPLE, {}, {}}, judgement_from_json(cert["simple"]));
  if (op == "stabilize" && cert.contains("original")) {
    auto st = stabilize(g, cert.at("n").get<int>());
    auto f = groupoid_fn(g, need(inv, "f")), h = groupoid_fn(g, need(inv, "g"));
    if (auto e = verify_comparison(g, GroupoidClaim::PRECSIM, f, h, comparison_from_json(cert["original"])))
      return "original: " + *e;
    if (auto e = verify_comparison(st.model, GroupoidClaim::PRECSIM, stabilize_forward(g, st, f),
                                   stabilize_forward(g, st, h), comparison_from_json(cert["stabilized"])))
      return "stabilized: " + *e;
  }
  return std::nullopt;
}

// ---- graphs -------------------------------------------------------------

SelfSimilarAction action_of(const ParsedInput& in) { return in.action ? *in.action : trivial_action(*in.graph); }

Json vertex_fn_json(const Graph& e, const VertexFn& f) {
  Json j = Json::object();
  for (int v = 0; v < e.vertex_count(); ++v) j[e.vertices[v]] = f[v].get_str();
  return j;
}

Json edges_json(const Graph& e) {
  Json a = Json::array();
  for (int i = 0; i < e.edge_count(); ++i)
    a.push_back(e.edge_names[i] + ": " + e.vertices[e.src[i]] + " -> " + e.vertices[e.rng[i]]);
  return a;
}

Json layered_json(const LayeredReport& r) {
  Json j;
  j["acyclic"] = r.acyclic;
  j["cofinality"] = {{"established", r.cofinality.established},
                     {"window", r.cofinality.window},
                     {"witness", r.cofinality.witness}};
  if (r.enclosure) j["enclosure"] = to_json(*r.enclosure);
  j["failed_precondition"] = r.failed_precondition;
  j["witness"] = r.witness;
  j["note"] = r.note;
  return j;
}

Analysis graph_op(const Invocation& inv, const ParsedInput& in) {
  const std::string op = inv.command.substr(6);
  Analysis a;
  if (in.kind == InputKind::LAYERED) {
    const auto& l = *in.layered;
    if (op == "classify") {
      auto r = classify_layered(l, depth_or(inv, 10));
      a.verdict = to_string(r.verdict);
      a.certificate = layered_json(r);
    } else if (op == "trace") {
      int d = depth_or(inv, 10);
      auto enc = layered_trace_enclosure(l, d);
      a.verdict = enc.infeasible_level ? "NO_TRACE" : "ENCLOSED";
      a.certificate = to_json(enc);
      if (inv.input == "drunken") {
        auto t = drunken_trace(1);
        a.certificate["exact"] = {{"a_1", to_json(t.a[0])},
                                  {"b_1", to_json(t.b[0])},
                                  {"width_bound", to_json(Q(1) / Q(fibonacci(2 * d) * fibonacci(2 * d - 1)))}};
      }
    } else if (op == "cofinal") {
      auto c = layered_cofinality(l);
      a.verdict = c.established ? "TRUE" : "UNKNOWN";
      a.certificate = {{"window", c.window}, {"witness", c.witness}};
    } else {
      throw InputError(inv.command + " needs a finite graph; layered inputs support classify, trace and cofinal");
    }
    return a;
  }
  require_kind(inv, in, {InputKind::GRAPH, InputKind::ACTION});
  const Graph& e = *in.graph;
  if (op == "theta") {
    auto f = parse_vertex_fn(e, need(inv, "f"));
    if (arg(inv, "g")) {
      auto g = parse_vertex_fn(e, need(inv, "g"));
      if (flag(inv, "precsim")) {
        auto j = precsim_graph(e, action_of(in), f, g, {depth_or(inv, 6), inv.budgets.node_cap});
        a.verdict = to_string(j.verdict);
        a.certificate = to_json(j);
      } else {
        auto j = sim_theta(e, f, g, depth_or(inv, 8));
        a.verdict = to_string(j.verdict);
        a.certificate = to_json(j);
      }
    } else {
      int n = std::stoi(arg(inv, "n").value_or("1"));
      if (n < 0 || n > 64) throw InputError("--n must lie in 0..64");
      a.verdict = "COMPUTED";
      a.certificate["power"] = n;
      a.certificate["values"] = vertex_fn_json(e, theta(e, f, n));
    }
  } else if (op == "classify") {
    auto r = classify_dichotomy(e, action_of(in));
    a.verdict = to_string(r.verdict);
    a.certificate = to_json(r);
  } else if (op == "trace") {
    bool free = !flag(inv, "strict-sources");
    auto cone = graph_trace_cone(e, free);
    Json rays = Json::array();
    for (const auto& r : cone.rays) rays.push_back(q_vector(r));
    a.verdict = cone.nontrivial ? "NONTRIVIAL" : "TRIVIAL";
    a.certificate["vertices"] = e.vertices;
    a.certificate["free_sources"] = free;
    a.certificate["dimension"] = cone.dimension;
    a.certificate["rays"] = rays;
  } else if (op == "quotient") {
    auto q = quotient_graph(e, action_of(in));
    a.verdict = "COMPUTED";
    a.certificate["vertices"] = q.graph.vertices;
    a.certificate["edges"] = edges_json(q.graph);
    a.certificate["orbit_size"] = q.orbit_size;
    a.certificate["presentation"] = presentation_json(export_graph_presentation(e, action_of(in)));
  } else if (op == "cofinal") {
    auto c = is_cofinal(e);
    a.verdict = c.cofinal ? "TRUE" : "FALSE";
    a.certificate = Json::object();
    if (c.witness)
      a.certificate["unreachable"] = {{"from", e.vertices[c.witness->first]}, {"to", e.vertices[c.witness->second]}};
  }
  return a;
}

std::optional<std::string> replay_graph(const Invocation& inv, const ParsedInput& in, const Json& cert) {
  const std::string op = inv.command.substr(6);
  if (in.kind == InputKind::LAYERED) {
    if (op == "trace" && cert.contains("exact") && !cert.at("steps").empty()) {
      // the exact ratio b_1 / a_1 = phi must sit in the deepest interval
      const auto& last = cert.at("steps").back().at("intervals").at(1);
      QPhi phi = QPhi::phi();
      if (phi < QPhi(q_from_json(last.at("lo")))) return "exact trace below the enclosure";
      if (last.at("hi") != "inf" && QPhi(q_from_json(last.at("hi"))) < phi) return "exact trace above the enclosure";
    }
    return std::nullopt;
  }
  const Graph& e = *in.graph;
  if (op == "theta" && arg(inv, "g")) {
    auto f = parse_vertex_fn(e, need(inv, "f")), g = parse_vertex_fn(e, need(inv, "g"));
    if (flag(inv, "precsim")) return verify_precsim_graph(e, action_of(in), f, g, graph_judgement_from_json(cert));
    return verify_sim_theta(e, f, g, theta_from_json(cert));
  }
  if (op == "trace") {
    for (const auto& r : cert.at("rays")) {
      std::vector<ExtQ> t;
      for (const auto& x : q_vector_from_json(r)) t.push_back(x);
      if (auto err = check_graph_trace(e, t, cert.at("free_sources").get<bool>())) return "ray: " + *err;
    }
  }
  if (op == "classify" && cert.contains("trace") && !cert["trace"].is_null()) {
    if (auto err = check_graph_trace(e, ext_vector_from_json(cert["trace"]), false)) return "trace: " + *err;
  }
  return std::nullopt;
}

// ---- dispatch -----------------------------------------------------------

std::string family(const std::string& command) { return command.substr(0, command.find(' ')); }

std::optional<std::string> replay_certificate(const Invocation& inv, const ParsedInput& in, const Json& cert) {
  const auto fam = family(inv.command);
  if (inv.command == "monoid quotient") return std::nullopt;
  if (fam == "monoid") return replay_monoid_judgement(inv, in, cert);
  if (fam == "state") return replay_state(inv, in, cert);
  if (fam == "lattice") return replay_lattice(inv, in, cert);
  if (fam == "groupoid") return replay_groupoid(inv, in, cert);
  if (fam == "graph") return replay_graph(inv, in, cert);
  return "unknown operation " + inv.command;
}

Json budgets_json(const Budgets& b) {
  Json j;
  j["n_max"] = b.n_max;
  j["coeff_cap"] = b.coeff_cap;
  j["node_cap"] = b.node_cap;
  if (b.depth > 0) j["depth"] = b.depth;
  return j;
}

}  // namespace

Analysis analyse(const Invocation& inv) {
  auto loaded = load(inv.input);
  const auto& in = loaded.in;
  const auto fam = family(inv.command);
  Analysis a;
  if (inv.command == "monoid quotient")
    a = monoid_quotient(inv, in);
  else if (fam == "monoid")
    a = monoid_judgement(inv, in);
  else if (fam == "state")
    a = state_op(inv, in);
  else if (fam == "lattice")
    a = lattice_op(inv, in);
  else if (fam == "groupoid")
    a = groupoid_op(inv, in);
  else if (fam == "graph")
    a = graph_op(inv, in);
  else
    throw InputError("unknown operation " + inv.command);
  a.digest = loaded.digest;
  return a;
}

Json make_report(const Invocation& inv, const Analysis& a) {
  Json r;
  r["tool"] = "typesemi";
  r["version"] = kToolVersion;
  r["operation"] = inv.command;
  r["input"] = inv.input;
  r["input_digest"] = a.digest;
  Json args = Json::object();
  for (const auto& [k, v] : inv.args) args[k] = v;
  r["args"] = args;
  r["verdict"] = a.verdict;
  r["certificate"] = a.certificate;
  r["budgets"] = budgets_json(inv.budgets);
  return r;
}

Invocation invocation_from_report(const Json& report) {
  Invocation inv;
  inv.command = report.at("operation").get<std::string>();
  inv.input = report.at("input").get<std::string>();
  for (const auto& [k, v] : report.at("args").items()) inv.args[k] = v.get<std::string>();
  const auto& b = report.at("budgets");
  inv.budgets.n_max = b.at("n_max").get<int>();
  inv.budgets.coeff_cap = b.at("coeff_cap").get<int>();
  inv.budgets.node_cap = b.at("node_cap").get<std::size_t>();
  inv.budgets.depth = b.contains("depth") ? b.at("depth").get<int>() : -1;
  return inv;
}

Replay verify_report(const Json& report) {
  try {
    auto inv = invocation_from_report(report);
    auto loaded = load(inv.input);
    if (loaded.digest != report.at("input_digest").get<std::string>())
      return {false, "input digest mismatch: the input changed since the report was written"};
    const auto& cert = report.at("certificate");
    if (auto e = replay_certificate(inv, loaded.in, cert)) return {false, "certificate rejected: " + *e};
    auto again = analyse(inv);
    if (again.verdict != report.at("verdict").get<std::string>() || again.certificate.dump() != cert.dump())
      return {false, "re-running the operation gives a different report"};
    return {true, report.at("verdict").get<std::string>()};
  } catch (const std::exception& e) {
    return {false, std::string("malformed report: ") + e.what()};
  }
}

namespace {

// Every key of `want` must be present in `got` with an equal value; objects recurse.
bool matches(const Json& got, const Json& want, std::string& where) {
  if (want.is_object()) {
    if (!got.is_object()) return false;
    for (const auto& [k, v] : want.items()) {
      if (!got.contains(k)) {
        where = k + " missing";
        return false;
      }
      if (!matches(got.at(k), v, where)) {
        where = k + (where.empty() ? "" : "." + where);
        return false;
      }
    }
    return true;
  }
  if (got != want) {
    where = "";
    return false;
  }
  return true;
}

Element random_element(std::mt19937_64& rng, std::size_t n, int cap) {
  std::uniform_int_distribution<int> d(0, cap);
  Element e(n, 0);
  for (auto& x : e) x = d(rng);
  return e;
}

// Random presentations: paradoxical and state-feasible never hold together,
// and both certificates replay.
int property_suite(std::uint64_t seed, int count, std::ostream& out) {
  std::mt19937_64 rng(seed);
  int failures = 0;
  for (int i = 0; i < count; ++i) {
    std::size_t n = 1 + rng() % 3;
    MonoidPresentation p;
    for (std::size_t g = 0; g < n; ++g) p.generators.push_back(std::string(1, static_cast<char>('a' + g)));
    std::size_t rels = rng() % 4;
    for (std::size_t r = 0; r < rels; ++r) {
      Relation rel{random_element(rng, n, 3), random_element(rng, n, 3), rng() % 2 ? RelKind::EQ : RelKind::LEQ};
      p.relations.push_back(rel);
    }
    Element x = random_element(rng, n, 2);
    if (is_zero(x)) x[0] = 1;
    auto par = is_paradoxical(p, x, SearchBudget{6, 12, 20000});
    auto st = find_state(p, x);
    std::string why;
    if (par.verdict == Verdict::PROVED && st.status == LPStatus::FEASIBLE)
      why = "paradoxical and state-feasible at once";
    else if (auto e = verify_judgement(p, Claim{ClaimKind::PARADOXICAL, x, {}}, par))
      why = "paradox certificate: " + *e;
    else if (auto e2 = verify_state_outcome(p, x, st))
      why = "state certificate: " + *e2;
    if (!why.empty()) {
      ++failures;
      out << "FAIL property case " << i << ": " << why << "\n";
    }
  }
  out << (failures ? "FAIL" : "PASS") << " property suite (seed " << seed << ", " << count << " presentations)\n";
  return failures;
}

int corpus_run(const std::string& dir, std::uint64_t seed, std::ostream& out, std::ostream& err) {
  namespace fs = std::filesystem;
  Json manifest;
  try {
    manifest = Json::parse(read_file((fs::path(dir) / "manifest.json").string()));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  std::vector<Json> cases(manifest.at("cases").begin(), manifest.at("cases").end());
  std::sort(cases.begin(), cases.end(), [](const Json& a, const Json& b) {
    return a.at("name").get<std::string>() < b.at("name").get<std::string>();
  });
  int failures = 0;
  for (const auto& c : cases) {
    const auto name = c.at("name").get<std::string>();
    Invocation inv;
    inv.command = c.at("command").get<std::string>();
    auto input = c.at("input").get<std::string>();
    inv.input = input == "drunken" ? input : (fs::path(dir) / input).string();
    if (c.contains("args"))
      for (const auto& [k, v] : c["args"].items()) inv.args[k] = v.get<std::string>();
    if (c.contains("depth")) inv.budgets.depth = c["depth"].get<int>();
    std::string problem;
    try {
      auto report = make_report(inv, analyse(inv));
      std::string where;
      if (!matches(report, c.at("expect"), where))
        problem = "expected " + c.at("expect").dump() + " (at " + where + "), got verdict " +
                  report["verdict"].get<std::string>();
      else if (auto r = verify_report(report); !r.accepted)
        problem = "replay: " + r.detail;
      if (problem.empty()) out << "PASS " << name << ": " << report["verdict"].get<std::string>() << "\n";
    } catch (const std::exception& e) {
      problem = std::string("error: ") + e.what();
    }
    if (!problem.empty()) {
      ++failures;
      out << "FAIL " << name << ": " << problem << "\n";
    }
  }
  failures += property_suite(seed, 50, out);
  out << (failures ? "corpus FAILED" : "corpus ok") << " (" << cases.size() << " cases)\n";
  return failures ? 3 : 0;
}

struct Leaf {
  std::string command;
  std::vector<std::string> options;  // valued options
  std::vector<std::string> flags;
};

const std::vector<Leaf>& leaves() {
  static const std::vector<Leaf> all = {
      {"monoid leq", {"x", "y"}, {}},
      {"monoid paradoxical", {"elem"}, {}},
      {"monoid proper-inf", {"elem"}, {}},
      {"monoid simple", {}, {}},
      {"monoid quotient", {"ideal"}, {}},
      {"state find", {"y"}, {}},
      {"state sup", {"x", "y"}, {}},
      {"state rordam-tarski", {"x", "y"}, {}},
      {"state extend", {"domain", "x", "y"}, {}},
      {"lattice decompose", {"k", "v"}, {}},
      {"lattice waybelow", {"g", "f"}, {}},
      {"groupoid typesemigroup", {"f", "g", "relation"}, {}},
      {"groupoid ideals", {}, {}},
      {"groupoid sigma", {"f"}, {}},
      {"groupoid stabilize", {"n", "f", "g"}, {}},
      {"graph theta", {"f", "g", "n"}, {"precsim"}},
      {"graph classify", {}, {}},
      {"graph trace", {}, {"strict-sources"}},
      {"graph quotient", {}, {}},
      {"graph cofinal", {}, {}},
  };
  return all;
}

}  // namespace

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact decisions on type semigroups, groupoid models and graph actions"};
  app.name("typesemi");
  app.require_subcommand(1);
  app.fallthrough();

  Budgets budgets;
  std::string format = "human";
  std::uint64_t seed = 1;
  bool unknown_ok = false, timing = false;
  app.add_option("--budget-n", budgets.n_max, "largest multiple n tried by searches")->check(CLI::Range(1, 64));
  app.add_option("--budget-coeff", budgets.coeff_cap, "coefficient cap for searched elements")
      ->check(CLI::Range(1, 1 << 20));
  app.add_option("--budget-nodes", budgets.node_cap, "node cap for searches")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 40));
  app.add_option("--depth", budgets.depth, "depth for graph searches and enclosures")->check(CLI::Range(1, 200));
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"human", "json"}));
  app.add_option("--seed", seed, "seed for the property suite");
  app.add_flag("--unknown-ok", unknown_ok, "exit 0 on UNKNOWN verdicts");
  app.add_flag("--timing", timing, "include wall-clock time in the report");

  std::map<std::string, CLI::App*> groups;
  std::map<CLI::App*, std::string> leaf_of;
  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, std::map<std::string, bool>> flags;
  std::map<std::string, std::string> inputs;

  for (const auto& l : leaves()) {
    auto fam = family(l.command);
    auto& grp = groups[fam];
    if (!grp) {
      grp = app.add_subcommand(fam, fam + " operations");
      grp->require_subcommand(1);
      grp->fallthrough();
    }
    auto* sub = grp->add_subcommand(l.command.substr(fam.size() + 1));
    sub->fallthrough();
    leaf_of[sub] = l.command;
    sub->add_option("input", inputs[l.command], "input file (graph operations also take 'drunken')")->required();
    for (const auto& o : l.options) sub->add_option("--" + o, values[l.command][o]);
    for (const auto& f : l.flags) sub->add_flag("--" + f, flags[l.command][f]);
  }
  auto* corpus = app.add_subcommand("corpus", "bundled regression corpus");
  corpus->require_subcommand(1);
  corpus->fallthrough();
  auto* corpus_run_cmd = corpus->add_subcommand("run", "run every manifest case and replay its certificate");
  corpus_run_cmd->fallthrough();
  std::string dir = "corpus";
  corpus_run_cmd->add_option("--dir", dir, "corpus directory holding manifest.json");
  auto* verify = app.add_subcommand("verify", "replay the certificate of a JSON report");
  verify->fallthrough();
  std::string report_path;
  verify->add_option("report", report_path, "report file written with --format json")->required();

  std::vector<std::string> rev(argv.rbegin(), argv.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  if (corpus_run_cmd->parsed()) return corpus_run(dir, seed, out, err);
  if (verify->parsed()) {
    Json report;
    try {
      report = Json::parse(read_file(report_path));
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return 1;
    }
    auto r = verify_report(report);
    out << (r.accepted ? "ACCEPTED " : "REJECTED ") << r.detail << "\n";
    return r.accepted ? 0 : 3;
  }

  Invocation inv;
  for (const auto& [sub, command] : leaf_of) {
    if (!sub->parsed()) continue;
    inv.command = command;
    inv.input = inputs[command];
    for (const auto& [k, v] : values[command])
      if (sub->count("--" + k)) inv.args[k] = v;
    for (const auto& [k, v] : flags[command])
      if (v) inv.args[k] = "true";
  }
  inv.budgets = budgets;

  Json report;
  try {
    auto t0 = std::chrono::steady_clock::now();
    auto a = analyse(inv);
    auto t1 = std::chrono::steady_clock::now();
    report = make_report(inv, a);
    if (timing)
      report["timing_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << "\n";
    return unknown_ok ? 0 : 2;
  }
  out << (format == "json" ? report.dump(2) + "\n" : render_human(report));
  if (report["verdict"] == "UNKNOWN") return unknown_ok ? 0 : 2;
  return 0;
}

}  // namespace typesemi::cli
