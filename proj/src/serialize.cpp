#include "rfa/serialize.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace rfa::io {

using json = nlohmann::json;

namespace {

json real(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }
json cplx(complex z) { return json::array({real(z.real()), real(z.imag())}); }

template <class Range>
json cplx_list(const Range& r) {
  json a = json::array();
  for (const auto& z : r) a.push_back(cplx(z));
  return a;
}

double get_real(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::infinity();
  if (!j.is_number()) throw InvalidInput("json: expected a number");
  return j.get<double>();
}

complex get_cplx(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0};
  if (!j.is_array() || j.size() != 2) throw InvalidInput("json: expected a [re, im] pair");
  return {get_real(j[0]), get_real(j[1])};
}

std::vector<complex> get_cplx_list(const json& j) {
  if (!j.is_array()) throw InvalidInput("json: expected an array of [re, im] pairs");
  std::vector<complex> out;
  for (const auto& e : j) out.push_back(get_cplx(e));
  return out;
}

const char* method_name(const Fit& f) {
  switch (f.index()) {
    case 0: return "barycentric";
    case 1: return "thiele";
    default: return "parfrac";
  }
}

json curve_json(const Curve& c) {
  switch (c.kind()) {
    case Curve::Kind::segment: return {{"kind", "segment"}, {"a", cplx(c.a())}, {"b", cplx(c.b())}};
    case Curve::Kind::circle:
      return {{"kind", "circle"}, {"center", cplx(c.center())}, {"radius", c.radius()}, {"ccw", c.sweep() > 0}};
    case Curve::Kind::arc:
      return {{"kind", "arc"},
              {"center", cplx(c.center())},
              {"radius", c.radius()},
              {"start", c.start_angle()},
              {"sweep", c.sweep()}};
    case Curve::Kind::parametric: break;
  }
  throw InvalidInput("json: parametric curves cannot be saved");
}

Curve curve_from(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "segment") return Curve::segment(get_cplx(j.at("a")), get_cplx(j.at("b")));
  if (kind == "circle")
    return Curve::circle(get_cplx(j.at("center")), j.at("radius").get<double>(), j.value("ccw", true));
  if (kind == "arc")
    return Curve::arc(get_cplx(j.at("center")), j.at("radius").get<double>(), j.at("start").get<double>(),
                      j.at("sweep").get<double>());
  throw InvalidInput("json: unknown curve kind '" + kind + "'");
}

json path_json(const Path& p) {
  json pieces = json::array();
  for (const auto& c : p.pieces()) pieces.push_back(curve_json(c));
  return {{"type", "path"}, {"pieces", pieces}};
}

Path path_from(const json& j) {
  std::vector<Curve> pieces;
  for (const auto& c : j.at("pieces")) pieces.push_back(curve_from(c));
  return Path(std::move(pieces));
}

json domain_json(const Domain& d) {
  if (const auto* p = std::get_if<Path>(&d)) return path_json(*p);
  if (const auto* r = std::get_if<Region>(&d))
    return {{"type", "region"},
            {"side", r->side() == Region::Side::interior ? "interior" : "exterior"},
            {"boundary", path_json(r->boundary())}};
  return {{"type", "points"}, {"points", cplx_list(std::get<PointSet>(d))}};
}

Domain domain_from(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "path") return path_from(j);
  if (type == "region") {
    const std::string side = j.at("side").get<std::string>();
    if (side != "interior" && side != "exterior") throw InvalidInput("json: region side must be interior or exterior");
    return Region(path_from(j.at("boundary")), side == "interior" ? Region::Side::interior : Region::Side::exterior);
  }
  if (type == "points") return get_cplx_list(j.at("points"));
  throw InvalidInput("json: unknown domain type '" + type + "'");
}

json history_json(const ConvergenceHistory& h) {
  json a = json::array();
  for (const auto& r : h.records) {
    json allowed = r.allowed == PoleCheck::unchecked ? json(nullptr) : json(r.allowed == PoleCheck::allowed);
    a.push_back({{"n", r.nodes}, {"max_err", real(r.max_error)}, {"allowed", allowed}, {"chosen", r.chosen}});
  }
  return a;
}

ConvergenceHistory history_from(const json& j) {
  ConvergenceHistory h;
  for (const auto& r : j) {
    IterationRecord rec;
    rec.nodes = r.at("n").get<std::size_t>();
    rec.max_error = get_real(r.at("max_err"));
    const auto& a = r.at("allowed");
    rec.allowed = a.is_null() ? PoleCheck::unchecked : a.get<bool>() ? PoleCheck::allowed : PoleCheck::disallowed;
    rec.chosen = r.value("chosen", false);
    h.records.push_back(rec);
  }
  return h;
}

json document(const Fit& fit, const ConvergenceHistory& h, std::string_view fun, const std::optional<Domain>& domain,
              std::optional<double> max_check_err, const std::vector<complex>& tests,
              const std::vector<double>& params) {
  json j;
  j["method"] = method_name(fit);
  const Degrees d = degrees(fit);
  j["degrees"] = {d.numerator, d.denominator};
  std::vector<PoleResidue> pr;
  if (const auto* r = std::get_if<BarycentricInterpolant>(&fit)) {
    j["nodes"] = cplx_list(r->nodes());
    j["values"] = cplx_list(r->values());
    j["weights"] = cplx_list(r->weights());
    pr = r->residues();
  } else if (const auto* t = std::get_if<ThieleInterpolant>(&fit)) {
    j["nodes"] = cplx_list(t->nodes());
    j["values"] = cplx_list(t->values());
    j["weights"] = cplx_list(t->weights());
    pr = t->residues();
  } else {
    const auto& pf = std::get<PartialFractions>(fit);
    j["nodes"] = json::array();
    j["values"] = json::array();
    j["weights"] = json::array();
    pr = pf.residues();
    json H = json::array();
    const auto& Hm = pf.polynomial().basis().hessenberg();
    for (Eigen::Index r = 0; r < Hm.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < Hm.cols(); ++c) row.push_back(cplx(Hm(r, c)));
      H.push_back(row);
    }
    j["hessenberg"] = H;
    j["coefficients"] = cplx_list(pf.polynomial().coefficients());
  }
  json poles = json::array(), res = json::array();
  for (const auto& p : pr) {
    poles.push_back(cplx(p.pole));
    res.push_back(cplx(p.residue));
  }
  j["poles"] = poles;
  j["residues"] = res;
  j["history"] = history_json(h);
  j["max_check_err"] = max_check_err ? real(*max_check_err) : json(nullptr);
  j["fun"] = std::string(fun);
  j["domain"] = domain ? domain_json(*domain) : json(nullptr);
  j["test_points"] = cplx_list(tests);
  j["params"] = params;
  return j;
}

}  // namespace

std::string to_json(const Approximation& a, std::string_view fun, std::optional<double> max_check_err, int indent) {
  return document(a.fit, a.history, fun, a.domain, max_check_err, a.test_points, a.params).dump(indent);
}

std::string to_json(const SavedFit& s, int indent) {
  return document(s.fit, s.history, s.fun, s.domain, s.max_check_err, s.test_points, s.params).dump(indent);
}

SavedFit from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("json: ") + e.what());
  }
  try {
    const std::string method = j.at("method").get<std::string>();
    Fit fit;
    if (method == "barycentric") {
      fit = BarycentricInterpolant(get_cplx_list(j.at("nodes")), get_cplx_list(j.at("values")),
                                   get_cplx_list(j.at("weights")));
    } else if (method == "thiele") {
      fit = ThieleInterpolant::from_weights(get_cplx_list(j.at("nodes")), get_cplx_list(j.at("values")),
                                            get_cplx_list(j.at("weights")));
    } else if (method == "parfrac") {
      const auto& Hj = j.at("hessenberg");
      const auto rows = static_cast<Eigen::Index>(Hj.size());
      const Eigen::Index cols = rows > 0 ? static_cast<Eigen::Index>(Hj[0].size()) : 0;
      linalg::Matrix H(rows, cols);
      for (Eigen::Index r = 0; r < rows; ++r) {
        if (static_cast<Eigen::Index>(Hj[r].size()) != cols) throw InvalidInput("json: ragged hessenberg");
        for (Eigen::Index c = 0; c < cols; ++c) H(r, c) = get_cplx(Hj[r][c]);
      }
      ArnoldiPolynomial poly(ArnoldiBasis::from_hessenberg(std::move(H)), get_cplx_list(j.at("coefficients")));
      fit = PartialFractions(std::move(poly), get_cplx_list(j.at("poles")), get_cplx_list(j.at("residues")));
    } else {
      throw InvalidInput("json: unknown method '" + method + "'");
    }
    SavedFit s{method, j.value("fun", std::string()), std::nullopt, std::move(fit), {}, std::nullopt, {}, {}};
    if (j.contains("domain") && !j["domain"].is_null()) s.domain = domain_from(j["domain"]);
    if (j.contains("history")) s.history = history_from(j["history"]);
    if (j.contains("max_check_err") && !j["max_check_err"].is_null()) s.max_check_err = get_real(j["max_check_err"]);
    if (j.contains("test_points")) s.test_points = get_cplx_list(j["test_points"]);
    if (j.contains("params")) s.params = j["params"].get<std::vector<double>>();
    return s;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("json: ") + e.what());
  }
}

Approximation to_approximation(SavedFit s, Function f) {
  if (!s.domain) throw InvalidInput("saved fit has no domain");
  return Approximation{std::move(f),          std::move(*s.domain),       std::move(s.fit), std::move(s.history),
                       std::move(s.test_points), std::move(s.params), {}};
}

std::string domain_to_json(const Domain& d) { return domain_json(d).dump(); }

Domain domain_from_json(std::string_view text) {
  try {
    return domain_from(json::parse(text));
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("json: ") + e.what());
  }
}

std::string history_csv(const ConvergenceHistory& h) {
  std::ostringstream os;
  os.precision(17);
  for (const auto& r : h.records) {
    os << r.nodes << ',' << r.max_error << ',';
    if (r.allowed != PoleCheck::unchecked) os << (r.allowed == PoleCheck::allowed ? 1 : 0);
    os << '\n';
  }
  return os.str();
}

std::string poles_csv(const std::vector<PoleResidue>& p) {
  std::ostringstream os;
  os.precision(17);
  for (const auto& r : p)
    os << r.pole.real() << ',' << r.pole.imag() << ',' << r.residue.real() << ',' << r.residue.imag() << '\n';
  return os.str();
}

std::vector<complex> read_points_csv(std::string_view text) {
  std::vector<complex> out;
  std::istringstream is{std::string(text)};
  std::string line;
  bool first = true;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> cols;
    bool numeric = true;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      const auto b = cell.find_first_not_of(" \t");
      const auto e = cell.find_last_not_of(" \t");
      cell = b == std::string::npos ? "" : cell.substr(b, e - b + 1);
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (cell.empty() || *end != '\0') {
        numeric = false;
        break;
      }
      cols.push_back(v);
    }
    if (!numeric) {
      if (first) {
        first = false;
        continue;  // header
      }
      throw InvalidInput("csv: line " + std::to_string(lineno) + " is not numeric");
    }
    first = false;
    // Extra columns (e.g. residues in a pole table) are ignored.
    if (cols.size() == 1)
      out.emplace_back(cols[0], 0);
    else
      out.emplace_back(cols[0], cols[1]);
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write '" + path + "'");
  out << content;
  if (!out) throw InvalidInput("failed writing '" + path + "'");
}

}  // namespace rfa::io
