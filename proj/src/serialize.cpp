#include "ffbench/serialize.hpp"

#include <fstream>
#include <sstream>

#include "ffbench/error.hpp"

namespace ffbench {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) bad(std::string("expected an object holding '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) bad(std::string("missing field '") + key + "'");
  return *it;
}

const Json& array_field(const Json& j, const char* key) {
  const Json& a = field(j, key);
  if (!a.is_array()) bad(std::string("field '") + key + "' must be an array");
  return a;
}

Rational rat(const Json& j) {
  if (j.is_string()) return Rational::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  bad("expected a rational, got " + j.dump());
}

Rational rat(const Json& j, const char* key) { return rat(field(j, key)); }

BigInt big(const Json& j) {
  if (j.is_string()) return parse_bigint(j.get<std::string>());
  if (j.is_number_integer()) return BigInt(j.get<long>());
  bad("expected an integer, got " + j.dump());
}

long integer(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer()) bad(std::string("field '") + key + "' must be an integer");
  return v.get<long>();
}

std::string text(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_string()) bad(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

Json pair(const Interval& i) { return Json::array({i.lo.str(), i.hi.str()}); }

Interval interval(const Json& j, const char* key) {
  const Json& a = field(j, key);
  if (!a.is_array() || a.size() != 2) bad(std::string("field '") + key + "' must be a pair");
  try {
    return Interval(rat(a[0]), rat(a[1]));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ParseError) throw;
    bad(std::string("field '") + key + "': " + e.what());
  }
}

Side side(const Json& j, const char* key) {
  const std::string s = text(j, key);
  if (s.size() != 1) bad("side must be one of L, R, C");
  return side_from_char(s[0]);
}

Json enclosure(const RootEnclosure& e) {
  Json out = Json::array({e.lo.str(), e.hi.str()});
  return out;
}

}  // namespace

Json to_json(const Wall& w) {
  Json verts = Json::array();
  for (std::size_t v = 0; v < w.size(); ++v) {
    verts.push_back({{"id", v}, {"lo", w.family[v].lo.str()}, {"hi", w.family[v].hi.str()}, {"color", w.colors[v]}});
  }
  return {{"declared_ratio", w.declared_ratio.str()}, {"vertices", verts}};
}

Wall wall_from_json(const Json& j) {
  Wall w;
  w.declared_ratio = rat(j, "declared_ratio");
  const Json& verts = array_field(j, "vertices");
  w.family.resize(verts.size());
  w.colors.resize(verts.size());
  std::vector<bool> seen(verts.size());
  for (const Json& v : verts) {
    const long id = integer(v, "id");
    if (id < 0 || static_cast<std::size_t>(id) >= verts.size() || seen[static_cast<std::size_t>(id)]) {
      bad("vertex ids must be 0..n-1 without repeats");
    }
    const auto i = static_cast<std::size_t>(id);
    seen[i] = true;
    const Rational lo = rat(v, "lo");
    const Rational hi = rat(v, "hi");
    if (hi < lo) bad("vertex " + std::to_string(id) + " has hi < lo");
    w.family[i] = Interval(lo, hi);
    w.colors[i] = integer(v, "color");
  }
  return w;
}

Json to_json(const BoxCap& cap) {
  Json boxes = Json::array();
  for (const CapBox& b : cap.boxes) {
    boxes.push_back({{"id", b.id},
                     {"x", pair(b.x)},
                     {"top", b.top.str()},
                     {"height", b.height.str()},
                     {"cone_depth", b.cone_depth.str()},
                     {"cone_x", pair(b.cone_x)},
                     {"supports", b.supports ? Json(*b.supports) : Json(nullptr)},
                     {"side", std::string(1, side_char(b.side))},
                     {"attach", std::string(1, side_char(b.attach))}});
  }
  return {{"r", cap.r.str()}, {"boxes", boxes}};
}

BoxCap box_cap_from_json(const Json& j) {
  BoxCap cap;
  cap.r = rat(j, "r");
  for (const Json& b : array_field(j, "boxes")) {
    CapBox box;
    box.id = static_cast<int>(integer(b, "id"));
    box.x = interval(b, "x");
    box.top = rat(b, "top");
    box.height = rat(b, "height");
    box.cone_depth = rat(b, "cone_depth");
    box.cone_x = interval(b, "cone_x");
    const Json& s = field(b, "supports");
    if (!s.is_null()) {
      if (!s.is_number_integer()) bad("supports must be an id or null");
      box.supports = s.get<int>();
    }
    box.side = side(b, "side");
    box.attach = b.contains("attach") ? side(b, "attach") : Side::Center;
    cap.boxes.push_back(std::move(box));
  }
  return cap;
}

Json to_json(const Quasicap& qc) {
  Json j = to_json(qc.cap);
  j["quasicap"] = {{"twin_top", qc.twin_top},
                   {"twin_low", qc.twin_low},
                   {"key_box", qc.key_box},
                   {"theta", qc.theta.str()}};
  return j;
}

Quasicap quasicap_from_json(const Json& j) {
  Quasicap qc;
  qc.cap = box_cap_from_json(j);
  const Json& q = field(j, "quasicap");
  qc.twin_top = static_cast<int>(integer(q, "twin_top"));
  qc.twin_low = static_cast<int>(integer(q, "twin_low"));
  qc.key_box = static_cast<int>(integer(q, "key_box"));
  qc.theta = rat(q, "theta");
  return qc;
}

Json to_json(const VertexCap& cap) {
  Json runs = Json::array();
  for (const VertexRun& r : cap.runs) {
    runs.push_back({{"I", pair(r.I)}, {"J", pair(r.J)}, {"f_top", r.f_top.get_str()}, {"count", r.count.get_str()},
                    {"c", r.c.get_str()}});
  }
  return {{"r", cap.r.str()}, {"runs", runs}};
}

VertexCap vertex_cap_from_json(const Json& j) {
  VertexCap cap;
  cap.r = rat(j, "r");
  for (const Json& r : array_field(j, "runs")) {
    VertexRun run;
    run.I = interval(r, "I");
    run.J = interval(r, "J");
    run.f_top = big(field(r, "f_top"));
    run.count = big(field(r, "count"));
    run.c = big(field(r, "c"));
    cap.runs.push_back(std::move(run));
  }
  return cap;
}

Json to_json(const Recipe& recipe) {
  Json steps = Json::array();
  for (const RecipeStep& s : recipe.steps) {
    steps.push_back({{"theta", s.theta.str()}, {"delta", s.delta.str()}, {"N", s.N}});
  }
  return {{"r", recipe.r.str()}, {"steps", steps}};
}

Recipe recipe_from_json(const Json& j) {
  Recipe out;
  out.r = rat(j, "r");
  for (const Json& s : array_field(j, "steps")) {
    const long n = integer(s, "N");
    if (n < 0) bad("N must be nonnegative");
    out.steps.push_back({rat(s, "theta"), rat(s, "delta"), static_cast<std::size_t>(n)});
  }
  return out;
}

Json to_json(const BinaryCap& cap) {
  Json nodes = Json::array();
  for (const auto& [w, n] : cap.nodes) nodes.push_back({{"word", w}, {"kappa", n.kappa.str()}, {"tau", n.tau.str()}});
  return {{"r", cap.r.str()}, {"nodes", nodes}};
}

BinaryCap binary_cap_from_json(const Json& j) {
  BinaryCap cap;
  cap.r = rat(j, "r");
  for (const Json& n : array_field(j, "nodes")) {
    const std::string w = text(n, "word");
    if (w.find_first_not_of("HL") != std::string::npos) bad("word '" + w + "' uses letters other than H and L");
    if (cap.nodes.count(w)) bad("word '" + w + "' appears twice");
    cap.set(w, rat(n, "kappa"), rat(n, "tau"));
  }
  return cap;
}

namespace {

Json to_json(const RelationViolation& v) {
  return {{"word", v.word}, {"relation", v.relation}, {"lhs", v.lhs.str()}, {"rhs", v.rhs.str()}};
}

RelationViolation violation_from_json(const Json& j) {
  return {text(j, "word"), text(j, "relation"), rat(j, "lhs"), rat(j, "rhs")};
}

}  // namespace

Json to_json(const RefutationWitness& w) {
  Json rel = Json::array();
  for (const auto& v : w.relations) rel.push_back(to_json(v));
  Json chain = Json::array();
  for (const HardLink& l : w.chain) {
    chain.push_back({{"word", l.word},
                     {"base", l.base},
                     {"m", l.m},
                     {"H0", {{"pi", l.pi.str()}}},
                     {"H1", {{"kappa", l.kappa.str()}, {"bound", l.h1_bound.str()}}},
                     {"H2", {{"tau", l.tau.str()}, {"bound", l.h2_bound.str()}}},
                     {"fibonacci_bound", l.fib_bound.str()}});
  }
  Json out = {{"relations", rel}, {"chain", chain}};
  if (w.failure) {
    out["failure"] = {{"word", w.failure->word},
                      {"required", w.failure->required.str()},
                      {"strict", w.failure->strict},
                      {"actual", w.failure->actual.str()}};
  } else {
    out["failure"] = nullptr;
  }
  return out;
}

RefutationWitness witness_from_json(const Json& j) {
  RefutationWitness w;
  for (const Json& v : array_field(j, "relations")) w.relations.push_back(violation_from_json(v));
  for (const Json& c : array_field(j, "chain")) {
    HardLink l;
    l.word = text(c, "word");
    l.base = text(c, "base");
    const long m = integer(c, "m");
    if (m < 0) bad("m must be nonnegative");
    l.m = static_cast<unsigned>(m);
    l.pi = rat(field(c, "H0"), "pi");
    l.kappa = rat(field(c, "H1"), "kappa");
    l.h1_bound = rat(field(c, "H1"), "bound");
    l.tau = rat(field(c, "H2"), "tau");
    l.h2_bound = rat(field(c, "H2"), "bound");
    l.fib_bound = rat(c, "fibonacci_bound");
    w.chain.push_back(std::move(l));
  }
  const Json& f = field(j, "failure");
  if (!f.is_null()) {
    const Json& strict = field(f, "strict");
    if (!strict.is_boolean()) bad("strict must be a boolean");
    w.failure = ChainFailure{text(f, "word"), rat(f, "required"), strict.get<bool>(), rat(f, "actual")};
  }
  return w;
}

Json to_json(const RelationReport& rep) {
  Json v = Json::array();
  for (const auto& x : rep.violations) v.push_back(to_json(x));
  return {{"ok", rep.ok()}, {"violations", v}};
}

Json to_json(const WallReport& rep) {
  Json v = Json::array();
  for (const auto& x : rep.violations) {
    v.push_back({{"vertex", x.vertex ? Json(*x.vertex) : Json(nullptr)}, {"reason", x.reason}});
  }
  return {{"ok", rep.ok()},
          {"clique_size", rep.clique_size},
          {"colors", rep.color_count},
          {"ratio", rep.ratio.str()},
          {"violations", v}};
}

Json to_json(const CapReport& rep) {
  Json v = Json::array();
  for (const auto& x : rep.violations) v.push_back({{"id", x.id}, {"condition", x.condition}, {"witness", x.witness}});
  return {{"ok", rep.ok()}, {"violations", v}};
}

Json to_json(const AnalysisReport& rep) {
  Json out = {{"r", rep.r.str()}, {"theta", rep.theta.str()}, {"D", rep.D.str()}};
  if (rep.roots) {
    out["real_roots"] = rep.roots->real_count();
    Json roots = {{"alpha", enclosure(rep.roots->alpha)}};
    if (rep.roots->gamma) roots["gamma"] = enclosure(*rep.roots->gamma);
    if (rep.roots->beta) roots["beta"] = enclosure(*rep.roots->beta);
    out["roots"] = roots;
  } else {
    out["real_roots"] = nullptr;
    out["roots"] = nullptr;
  }
  out["margin"] = rep.margin ? Json::array({rep.margin->lo.str(), rep.margin->hi.str()}) : Json(nullptr);
  return out;
}

std::string order_to_text(const std::vector<std::size_t>& order) {
  std::string out;
  for (std::size_t v : order) out += std::to_string(v) + "\n";
  return out;
}

std::vector<std::size_t> order_from_text(const std::string& t) {
  std::istringstream in(t);
  std::vector<std::size_t> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      std::size_t used = 0;
      const long v = std::stol(line, &used);
      if (v < 0 || line.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(line);
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::logic_error&) {
      bad("order line '" + line + "' is not a vertex id");
    }
  }
  return out;
}

std::string strand_csv(const std::vector<Rational>& u) {
  std::string out = "index,numerator,denominator\n";
  for (std::size_t i = 0; i < u.size(); ++i) out += std::to_string(i) + "," + u[i].num().get_str() + "," + u[i].den().get_str() + "\n";
  return out;
}

std::string analysis_csv_header() { return "r,theta,D,real_roots,gamma_lo,gamma_hi,margin_lo,margin_hi\n"; }

std::string analysis_csv_row(const AnalysisReport& rep) {
  std::string row = rep.r.str() + "," + rep.theta.str() + "," + rep.D.str() + ",";
  row += rep.roots ? std::to_string(rep.roots->real_count()) : std::string();
  if (rep.roots && rep.roots->gamma) {
    row += "," + rep.roots->gamma->lo.str() + "," + rep.roots->gamma->hi.str();
  } else {
    row += ",,";
  }
  if (rep.margin) {
    row += "," + rep.margin->lo.str() + "," + rep.margin->hi.str();
  } else {
    row += ",,";
  }
  return row + "\n";
}

Json parse_json(const std::string& t) {
  try {
    return Json::parse(t);
  } catch (const nlohmann::json::exception& e) {
    bad(std::string("malformed JSON: ") + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
  out << t;
}

}  // namespace ffbench
