#include "typesemi/io.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace typesemi {

ParseError::ParseError(const std::string& origin, int l, int c, const std::string& what)
    : InputError(origin + ":" + std::to_string(l) + ":" + std::to_string(c) + ": " + what), line(l), column(c) {}

std::string to_string(InputKind k) {
  switch (k) {
    case InputKind::MONOID: return "monoid";
    case InputKind::FINITE_MONOID: return "finite-monoid";
    case InputKind::GRAPH: return "graph";
    case InputKind::ACTION: return "action";
    case InputKind::GROUPOID: return "groupoid";
    case InputKind::LAYERED: return "layered";
    default: return "space";
  }
}

namespace {

struct Line {
  std::string text;
  int line = 0, col = 1;  // col of text[0]
};

struct Section {
  std::string name;
  std::vector<std::string> args;
  int line = 0, col = 1;
  std::vector<Line> lines;
};

std::string trim(const std::string& s, std::size_t* lead = nullptr) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  if (lead) *lead = a;
  return s.substr(a, b - a);
}

// Splits on commas, keeping each piece's column.
std::vector<Line> split_commas(const Line& l) {
  std::vector<Line> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= l.text.size(); ++i) {
    if (i < l.text.size() && l.text[i] != ',') continue;
    std::size_t lead = 0;
    std::string piece = trim(l.text.substr(start, i - start), &lead);
    if (!piece.empty()) out.push_back({piece, l.line, l.col + static_cast<int>(start + lead)});
    start = i + 1;
  }
  return out;
}

std::vector<Line> tokens(const Line& l) {
  std::vector<Line> out;
  std::size_t i = 0;
  while (i < l.text.size()) {
    while (i < l.text.size() && (std::isspace(static_cast<unsigned char>(l.text[i])) || l.text[i] == ',')) ++i;
    std::size_t j = i;
    while (j < l.text.size() && !std::isspace(static_cast<unsigned char>(l.text[j])) && l.text[j] != ',') ++j;
    if (j > i) out.push_back({l.text.substr(i, j - i), l.line, l.col + static_cast<int>(i)});
    i = j;
  }
  return out;
}

class Reader {
 public:
  Reader(const std::string& text, std::string origin) : origin_(std::move(origin)) {
    std::istringstream in(text);
    std::string raw;
    int n = 0;
    Section* cur = nullptr;
    bool have_kind = false;
    while (std::getline(in, raw)) {
      ++n;
      if (auto h = raw.find('#'); h != std::string::npos) raw = raw.substr(0, h);
      std::size_t lead = 0;
      std::string t = trim(raw, &lead);
      if (t.empty()) continue;
      int col = static_cast<int>(lead) + 1;
      if (!have_kind) {
        if (t.rfind("kind:", 0) != 0) throw error(n, col, "expected a 'kind: ...' header");
        kind_ = trim(t.substr(5));
        kind_line_ = n;
        have_kind = true;
        continue;
      }
      if (t[0] == '[') {
        auto close = t.find(']');
        if (close == std::string::npos) throw error(n, col, "unterminated section header");
        Section s;
        std::istringstream hs(t.substr(1, close - 1));
        hs >> s.name;
        for (std::string a; hs >> a;) s.args.push_back(a);
        if (s.name.empty()) throw error(n, col, "empty section header");
        s.line = n;
        s.col = col;
        std::size_t rest_lead = 0;
        std::string rest = trim(t.substr(close + 1), &rest_lead);
        if (!rest.empty()) s.lines.push_back({rest, n, col + static_cast<int>(close + 1 + rest_lead)});
        sections_.push_back(std::move(s));
        cur = &sections_.back();
        continue;
      }
      if (!cur) throw error(n, col, "content before the first [section]");
      cur->lines.push_back({t, n, col});
    }
    if (!have_kind) throw error(1, 1, "empty input: expected a 'kind: ...' header");
  }

  ParseError error(int line, int col, const std::string& what) const { return ParseError(origin_, line, col, what); }
  ParseError error(const Line& l, const std::string& what) const { return error(l.line, l.col, what); }
  ParseError error(const Section& s, const std::string& what) const { return error(s.line, s.col, what); }

  const std::string& kind() const { return kind_; }
  int kind_line() const { return kind_line_; }
  const std::vector<Section>& sections() const { return sections_; }

  const Section* find(const std::string& name) const {
    const Section* hit = nullptr;
    for (const auto& s : sections_)
      if (s.name == name && s.args.empty()) {
        if (hit) throw error(s, "section [" + name + "] appears twice");
        hit = &s;
      }
    return hit;
  }
  const Section& need(const std::string& name) const {
    if (auto s = find(name)) return *s;
    throw error(kind_line_, 1, "missing section [" + name + "]");
  }
  void only(const std::set<std::string>& allowed) const {
    for (const auto& s : sections_)
      if (!allowed.count(s.name)) throw error(s, "unexpected section [" + s.name + "] in a " + kind_ + " file");
  }

  std::vector<Line> section_tokens(const Section& s) const {
    std::vector<Line> out;
    for (const auto& l : s.lines)
      for (auto& t : tokens(l)) out.push_back(t);
    return out;
  }

 private:
  std::string origin_, kind_;
  int kind_line_ = 1;
  std::vector<Section> sections_;
};

std::vector<std::string> names_of(const Reader& r, const Section& s, const char* what) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& t : r.section_tokens(s)) {
    if (!seen.insert(t.text).second) throw r.error(t, std::string("duplicate ") + what + " '" + t.text + "'");
    out.push_back(t.text);
  }
  return out;
}

int lookup(const Reader& r, const Line& at, const std::vector<std::string>& names, const std::string& name,
           const char* what) {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  throw r.error(at, std::string("unknown ") + what + " '" + name + "'");
}

// "x -> y" or "x->y"
std::pair<Line, Line> arrow(const Reader& r, const Line& l) {
  auto pos = l.text.find("->");
  if (pos == std::string::npos) throw r.error(l, "expected 'x -> y'");
  std::size_t la = 0, lb = 0;
  std::string a = trim(l.text.substr(0, pos), &la), b = trim(l.text.substr(pos + 2), &lb);
  if (a.empty() || b.empty()) throw r.error(l, "expected 'x -> y'");
  return {Line{a, l.line, l.col + static_cast<int>(la)}, Line{b, l.line, l.col + static_cast<int>(pos + 2 + lb)}};
}

// "name: rest"
std::pair<Line, Line> labelled(const Reader& r, const Line& l) {
  auto pos = l.text.find(':');
  if (pos == std::string::npos) throw r.error(l, "expected 'name: ...'");
  std::size_t la = 0, lb = 0;
  std::string a = trim(l.text.substr(0, pos), &la), b = trim(l.text.substr(pos + 1), &lb);
  if (a.empty()) throw r.error(l, "missing name before ':'");
  return {Line{a, l.line, l.col + static_cast<int>(la)}, Line{b, l.line, l.col + static_cast<int>(pos + 1 + lb)}};
}

int parse_int(const Reader& r, const Line& l) {
  try {
    std::size_t used = 0;
    int v = std::stoi(l.text, &used);
    if (used != l.text.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::logic_error&) {
    throw r.error(l, "expected an integer, got '" + l.text + "'");
  }
}

MonoidPresentation read_monoid(const Reader& r) {
  r.only({"generators", "relations"});
  MonoidPresentation p;
  p.generators = names_of(r, r.need("generators"), "generator");
  if (auto rel = r.find("relations"))
    for (const auto& l : rel->lines) {
      try {
        p.relations.push_back(parse_relation(p, l.text));
      } catch (const InputError& e) {
        throw r.error(l, e.what());
      }
    }
  try {
    p.validate();
  } catch (const InputError& e) {
    throw r.error(r.kind_line(), 1, e.what());
  }
  return p;
}

FiniteMonoid read_finite(const Reader& r) {
  r.only({"elements", "add", "leq"});
  FiniteMonoid m;
  const auto& es = r.need("elements");
  m.names = names_of(r, es, "element");
  const int n = m.size();
  if (n == 0) throw r.error(es, "no elements");
  m.zero = 0;
  for (int i = 0; i < n; ++i)
    if (m.names[i] == "0") m.zero = i;
  const auto& add = r.need("add");
  if (static_cast<int>(add.lines.size()) != n)
    throw r.error(add, "[add] needs " + std::to_string(n) + " rows, found " + std::to_string(add.lines.size()));
  for (const auto& l : add.lines) {
    auto ts = tokens(l);
    if (static_cast<int>(ts.size()) != n) throw r.error(l, "row needs " + std::to_string(n) + " entries");
    std::vector<int> row;
    for (auto& t : ts) row.push_back(lookup(r, t, m.names, t.text, "element"));
    m.table.push_back(row);
  }
  if (auto leq = r.find("leq")) {
    if (static_cast<int>(leq->lines.size()) != n) throw r.error(*leq, "[leq] needs " + std::to_string(n) + " rows");
    for (const auto& l : leq->lines) {
      auto ts = tokens(l);
      if (static_cast<int>(ts.size()) != n) throw r.error(l, "row needs " + std::to_string(n) + " entries");
      std::vector<bool> row;
      for (auto& t : ts) {
        if (t.text != "0" && t.text != "1") throw r.error(t, "expected 0 or 1");
        row.push_back(t.text == "1");
      }
      m.order.push_back(row);
    }
  } else {
    // algebraic preorder: a <= b iff a + c = b for some c
    m.order.assign(n, std::vector<bool>(n, false));
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < n; ++c) m.order[a][m.table[a][c]] = true;
  }
  if (auto err = m.validation_error()) throw r.error(es, *err);
  return m;
}

Graph read_graph(const Reader& r) {
  Graph g;
  const auto& vs = r.need("vertices");
  for (const auto& t : r.section_tokens(vs)) {
    if (std::find(g.vertices.begin(), g.vertices.end(), t.text) != g.vertices.end())
      throw r.error(t, "duplicate vertex '" + t.text + "'");
    g.vertices.push_back(t.text);
  }
  if (auto es = r.find("edges"))
    for (const auto& l : es->lines)
      for (const auto& item : split_commas(l)) {
        auto [name, rest] = labelled(r, item);
        auto [s, t] = arrow(r, rest);
        int si = lookup(r, s, g.vertices, s.text, "vertex"), ti = lookup(r, t, g.vertices, t.text, "vertex");
        if (std::find(g.edge_names.begin(), g.edge_names.end(), name.text) != g.edge_names.end())
          throw r.error(name, "duplicate edge '" + name.text + "'");
        g.add_edge(name.text, si, ti);
      }
  return g;
}

SelfSimilarAction read_action(const Reader& r, const Graph& g) {
  SelfSimilarAction a;
  const auto& gs = r.need("group");
  a.elements = names_of(r, gs, "group element");
  const int n = a.order();
  if (n == 0) throw r.error(gs, "empty group");
  const auto& mult = r.need("mult");
  if (static_cast<int>(mult.lines.size()) != n) throw r.error(mult, "[mult] needs " + std::to_string(n) + " rows");
  for (const auto& l : mult.lines) {
    auto ts = tokens(l);
    if (static_cast<int>(ts.size()) != n) throw r.error(l, "row needs " + std::to_string(n) + " entries");
    std::vector<int> row;
    for (auto& t : ts) row.push_back(lookup(r, t, a.elements, t.text, "group element"));
    a.mult.push_back(row);
  }
  const int nv = g.vertex_count(), ne = g.edge_count();
  a.vertex.assign(n, {});
  a.edge.assign(n, {});
  a.cocycle.assign(n, {});
  for (int x = 0; x < n; ++x) {
    for (int v = 0; v < nv; ++v) a.vertex[x].push_back(v);
    for (int e = 0; e < ne; ++e) a.edge[x].push_back(e);
    a.cocycle[x].assign(ne, x);  // default g|_e = g
  }
  auto maps = [&](const char* sec, const std::vector<std::string>& names, const char* what,
                  std::vector<std::vector<int>>& table) {
    auto s = r.find(sec);
    if (!s) return;
    for (const auto& l : s->lines) {
      auto [el, rest] = labelled(r, l);
      int x = lookup(r, el, a.elements, el.text, "group element");
      for (const auto& item : split_commas(rest)) {
        auto [u, w] = arrow(r, item);
        table[x][lookup(r, u, names, u.text, what)] = lookup(r, w, names, w.text, what);
      }
    }
  };
  maps("vact", g.vertices, "vertex", a.vertex);
  maps("eact", g.edge_names, "edge", a.edge);
  if (auto s = r.find("cocycle"))
    for (const auto& l : s->lines)
      for (const auto& item : split_commas(l)) {
        auto eq = item.text.find('=');
        auto bar = item.text.find('|');
        if (eq == std::string::npos || bar == std::string::npos || bar > eq) throw r.error(item, "expected 'g|e = h'");
        Line gl{trim(item.text.substr(0, bar)), item.line, item.col};
        Line el{trim(item.text.substr(bar + 1, eq - bar - 1)), item.line, item.col + static_cast<int>(bar + 1)};
        Line hl{trim(item.text.substr(eq + 1)), item.line, item.col + static_cast<int>(eq + 1)};
        int x = lookup(r, gl, a.elements, gl.text, "group element");
        int e = lookup(r, el, g.edge_names, el.text, "edge");
        a.cocycle[x][e] = lookup(r, hl, a.elements, hl.text, "group element");
      }
  auto v = action_violations(g, a);
  if (!v.empty()) {
    std::string msg = "invalid self-similar action: " + v[0];
    for (std::size_t i = 1; i < std::min<std::size_t>(v.size(), 3); ++i) msg += "; " + v[i];
    throw r.error(gs, msg);
  }
  return a;
}

GroupoidModel read_groupoid(const Reader& r) {
  r.only({"points", "bisections", "options"});
  const auto& ps = r.need("points");
  auto points = names_of(r, ps, "point");
  if (points.size() > 16) throw r.error(ps, "at most 16 points");
  std::vector<std::string> names;
  std::vector<PartialBijection> gens;
  if (auto bs = r.find("bisections"))
    for (const auto& l : bs->lines) {
      auto [name, rest] = labelled(r, l);
      std::vector<std::pair<int, int>> pairs;
      for (const auto& item : split_commas(rest)) {
        auto [x, y] = arrow(r, item);
        pairs.push_back({lookup(r, x, points, x.text, "point"), lookup(r, y, points, y.text, "point")});
      }
      if (auto err = bijection_error(static_cast<int>(points.size()), pairs)) throw r.error(l, *err);
      if (std::find(names.begin(), names.end(), name.text) != names.end())
        throw r.error(name, "duplicate bisection '" + name.text + "'");
      names.push_back(name.text);
      gens.push_back(from_pairs(static_cast<int>(points.size()), pairs));
    }
  bool all = false;
  if (auto o = r.find("options"))
    for (const auto& t : r.section_tokens(*o)) {
      if (t.text == "all-restrictions")
        all = true;
      else
        throw r.error(t, "unknown option '" + t.text + "'");
    }
  try {
    return close_inverse_semigroup(points, names, gens, 200000, all);
  } catch (const CapExceeded& e) {
    throw r.error(ps, e.what());
  }
}

LayeredGraph read_layered(const Reader& r) {
  LayeredGraph l;
  std::map<int, const Section*> levels, blocks, within;
  const Section* period = nullptr;
  for (const auto& s : r.sections()) {
    if (s.name == "period") {
      if (period) throw r.error(s, "[period] appears twice");
      period = &s;
      continue;
    }
    std::map<int, const Section*>* into = s.name == "level" ? &levels
                                          : s.name == "block" ? &blocks
                                          : s.name == "within" ? &within
                                                               : nullptr;
    if (!into) throw r.error(s, "unexpected section [" + s.name + "] in a layered file");
    if (s.args.size() != 1) throw r.error(s, "[" + s.name + " n] needs a level number");
    int n = parse_int(r, Line{s.args[0], s.line, s.col});
    if (n < 1) throw r.error(s, "levels start at 1");
    if (!into->emplace(n, &s).second) throw r.error(s, "[" + s.name + " " + s.args[0] + "] appears twice");
  }
  if (levels.empty()) throw r.error(r.kind_line(), 1, "no [level n] sections");
  int count = static_cast<int>(levels.size());
  if (levels.rbegin()->first != count) throw r.error(*levels.rbegin()->second, "levels must be numbered 1, 2, ...");
  for (auto& [n, s] : levels) {
    l.levels.push_back(names_of(r, *s, "vertex"));
    if (l.levels.back().empty()) throw r.error(*s, "empty level");
  }
  if (period) {
    Line pl;
    if (period->args.size() == 1)
      pl = Line{period->args[0], period->line, period->col};
    else if (period->args.empty() && period->lines.size() == 1)
      pl = period->lines[0];
    else
      throw r.error(*period, "expected [period p]");
    l.period = parse_int(r, pl);
    if (l.period < 1 || l.period > count) throw r.error(pl, "period must be between 1 and the number of levels");
  }
  auto read_arrows = [&](const std::map<int, const Section*>& m, bool across,
                         std::vector<std::vector<LayeredGraph::Arrow>>& out) {
    out.assign(count, {});
    for (auto& [n, s] : m) {
      if (n > count) throw r.error(*s, "refers to an undeclared level");
      if (across && !l.periodic() && n >= count) throw r.error(*s, "block past the last level; declare a period");
      const auto& here = l.levels[n - 1];
      const auto& from = across ? l.levels[l.template_of(n + 1)] : here;
      for (const auto& line : s->lines)
        for (const auto& item : split_commas(line)) {
          auto [x, y] = arrow(r, item);
          out[n - 1].push_back({lookup(r, x, from, x.text, "vertex"), lookup(r, y, here, y.text, "vertex")});
        }
    }
  };
  read_arrows(blocks, true, l.blocks);
  read_arrows(within, false, l.within);
  if (auto err = l.validation_error()) throw r.error(*levels.begin()->second, *err);
  return l;
}

FiniteSpace read_space(const Reader& r) {
  r.only({"points", "opens"});
  auto points = names_of(r, r.need("points"), "point");
  if (points.empty() || points.size() > 16) throw r.error(r.need("points"), "a space needs 1 to 16 points");
  FiniteSpace tmp;
  tmp.points = points;
  std::vector<PointSet> gens;
  if (auto o = r.find("opens"))
    for (const auto& l : o->lines) {
      try {
        for (auto s : parse_sets(tmp, l.text)) gens.push_back(s);
      } catch (const InputError& e) {
        throw r.error(l, e.what());
      }
    }
  return make_space(points, gens);
}

}  // namespace

ParsedInput parse_text(const std::string& text, const std::string& origin) {
  Reader r(text, origin);
  ParsedInput in;
  const auto& k = r.kind();
  if (k == "monoid") {
    in.kind = InputKind::MONOID;
    in.monoid = read_monoid(r);
  } else if (k == "finite-monoid") {
    in.kind = InputKind::FINITE_MONOID;
    in.finite = read_finite(r);
  } else if (k == "graph" || k == "action") {
    in.kind = k == "graph" ? InputKind::GRAPH : InputKind::ACTION;
    r.only({"vertices", "edges", "group", "mult", "vact", "eact", "cocycle"});
    in.graph = read_graph(r);
    if (in.kind == InputKind::ACTION || r.find("group")) in.action = read_action(r, *in.graph);
  } else if (k == "groupoid") {
    in.kind = InputKind::GROUPOID;
    in.groupoid = read_groupoid(r);
  } else if (k == "layered") {
    in.kind = InputKind::LAYERED;
    in.layered = read_layered(r);
  } else if (k == "space") {
    in.kind = InputKind::SPACE;
    in.space = read_space(r);
  } else {
    throw r.error(r.kind_line(), 1, "unknown kind '" + k + "'");
  }
  return in;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot read '" + path + "'");
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

ParsedInput parse_file(const std::string& path) { return parse_text(read_file(path), path); }

std::string digest(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  static const char* hex = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[i] = hex[h & 15];
  return out;
}

VertexFn parse_vertex_fn(const Graph& g, const std::string& text) {
  MonoidPresentation p;
  p.generators = g.vertices;
  Element e = p.parse(text);
  VertexFn f;
  for (auto x : e) f.emplace_back(static_cast<long>(x));
  return f;
}

std::vector<int> parse_pointwise(const std::vector<std::string>& points, const std::string& text) {
  std::vector<int> v(points.size(), 0);
  Line whole{text, 1, 1};
  for (const auto& item : split_commas(whole)) {
    auto eq = item.text.find('=');
    if (eq == std::string::npos) throw InputError("expected 'point=value', got '" + item.text + "'");
    std::string name = trim(item.text.substr(0, eq)), val = trim(item.text.substr(eq + 1));
    auto it = std::find(points.begin(), points.end(), name);
    if (it == points.end()) throw InputError("unknown point '" + name + "'");
    try {
      std::size_t used = 0;
      int x = std::stoi(val, &used);
      if (used != val.size() || x < 0) throw std::invalid_argument("bad");
      v[it - points.begin()] = x;
    } catch (const std::logic_error&) {
      throw InputError("expected a nonnegative integer for '" + name + "'");
    }
  }
  return v;
}

std::vector<PointSet> parse_sets(const FiniteSpace& sp, const std::string& text) {
  std::vector<PointSet> out;
  auto lookup_point = [&](const std::string& n) -> PointSet {
    for (int i = 0; i < static_cast<int>(sp.points.size()); ++i)
      if (sp.points[i] == n) return PointSet{1} << i;
    throw InputError("unknown point '" + n + "'");
  };
  if (text.find('{') == std::string::npos) {
    PointSet s = 0;
    for (const auto& t : tokens(Line{text, 1, 1})) s |= lookup_point(t.text);
    out.push_back(s);
    return out;
  }
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ',') {
      ++i;
      continue;
    }
    if (text[i] != '{') throw InputError("expected '{' in set list");
    auto close = text.find('}', i);
    if (close == std::string::npos) throw InputError("unterminated '{'");
    PointSet s = 0;
    for (const auto& t : tokens(Line{text.substr(i + 1, close - i - 1), 1, 1})) s |= lookup_point(t.text);
    out.push_back(s);
    i = close + 1;
  }
  return out;
}

}  // namespace typesemi
