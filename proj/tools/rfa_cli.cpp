// rfa: rational approximation from the command line.
//
//   rfa approx  --fun EXPR DOMAIN [options]   fit and save a result
//   rfa check   --json FIT [--fun EXPR]       re-evaluate a saved fit
//   rfa poles   --json FIT [--emit CSV]       pole/residue table
//   rfa minimax --json FIT [--out JSON]       Lawson refinement of a saved fit

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rfa/engine.hpp"
#include "rfa/expr.hpp"
#include "rfa/serialize.hpp"

namespace {

using rfa::complex;
using nlohmann::json;

enum Exit { ok = 0, engine_failure = 1, usage = 2 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void report(const char* kind, const std::string& message) {
  const json j = {{"error", {{"type", kind}, {"message", message}}}};
  std::cerr << j.dump() << '\n';
}

struct Options {
  std::string fun;
  std::vector<double> interval, circle;
  std::string polygon, points, poles, emit, json_path, history, out;
  bool exterior = false, interior = false;
  std::string method = "aaa";
  double tol = 1e-13;
  std::size_t max_iter = 150, stagnation = 10, refinement = 3, initial_nodes = 0, init = 400, iterations = 20;
  std::optional<std::size_t> degree;
};

rfa::Function compile(const std::string& text) {
  try {
    auto e = rfa::expr::parse_expression(text);
    return [e](complex z) { return e(z); };
  } catch (const rfa::expr::ParseError& err) {
    throw UsageError(std::string("--fun: ") + err.what());
  }
}

rfa::Domain build_domain(const Options& o) {
  const int count = !o.interval.empty() + !o.circle.empty() + !o.polygon.empty() + !o.points.empty();
  if (count != 1) throw UsageError("give exactly one of --interval, --circle, --polygon, --points");
  if (o.exterior && o.interior) throw UsageError("--exterior and --interior are exclusive");
  const bool region = o.exterior || o.interior;
  const auto side = o.exterior ? rfa::Region::Side::exterior : rfa::Region::Side::interior;

  if (!o.points.empty()) {
    if (region) throw UsageError("--exterior/--interior need a closed boundary");
    return rfa::io::read_points_csv(rfa::io::read_file(o.points));
  }
  if (!o.interval.empty()) {
    if (region) throw UsageError("--exterior/--interior need a closed boundary");
    return rfa::Path(rfa::Curve::segment(o.interval[0], o.interval[1]));
  }
  rfa::Path path = !o.circle.empty()
                       ? rfa::Path(rfa::Curve::circle({o.circle[0], o.circle[1]}, o.circle[2]))
                       : rfa::Path::polygon(rfa::io::read_points_csv(rfa::io::read_file(o.polygon)));
  if (region) return rfa::Region(std::move(path), side);
  return path;
}

std::string summary(const rfa::Fit& fit, std::optional<double> err) {
  static const char* names[] = {"barycentric", "thiele", "parfrac"};
  const auto d = rfa::degrees(fit);
  char buf[160];
  if (err)
    std::snprintf(buf, sizeof buf, "%s type (%zu,%zu), max check error %.3g", names[fit.index()], d.numerator,
                  d.denominator, *err);
  else
    std::snprintf(buf, sizeof buf, "%s type (%zu,%zu)", names[fit.index()], d.numerator, d.denominator);
  return buf;
}

void emit_outputs(const Options& o, const rfa::Approximation& a, double max_check) {
  if (!o.json_path.empty()) rfa::io::write_file(o.json_path, rfa::io::to_json(a, o.fun, max_check));
  if (!o.emit.empty()) rfa::io::write_file(o.emit, rfa::io::poles_csv(rfa::residues(a.fit)));
  if (!o.history.empty()) rfa::io::write_file(o.history, rfa::io::history_csv(a.history));
}

int run_approx(const Options& o) {
  if (o.fun.empty()) throw UsageError("approx: --fun is required");
  const auto f = compile(o.fun);
  const rfa::Domain domain = build_domain(o);

  rfa::Approximation a = [&] {
    if (!o.poles.empty() || o.degree) {
      const auto zeta = o.poles.empty() ? std::vector<complex>{} : rfa::io::read_points_csv(rfa::io::read_file(o.poles));
      const std::size_t N = o.degree.value_or(0);
      if (const auto* pts = std::get_if<rfa::PointSet>(&domain)) return rfa::approximate_prescribed(f, *pts, zeta, N);
      if (std::holds_alternative<rfa::Region>(domain)) throw UsageError("prescribed poles need a curve or points");
      return rfa::approximate_prescribed(f, std::get<rfa::Path>(domain), zeta, N, o.init);
    }
    rfa::EngineConfig cfg;
    if (o.method == "thiele")
      cfg.method = rfa::Method::thiele;
    else if (o.method != "aaa")
      throw UsageError("--method must be aaa or thiele");
    cfg.tol = o.tol;
    cfg.max_iter = o.max_iter;
    cfg.stagnation = o.stagnation;
    cfg.refinement = o.refinement;
    cfg.initial_nodes = o.initial_nodes;
    return rfa::approximate(f, domain, cfg);
  }();

  const auto c = rfa::check(a);
  emit_outputs(o, a, c.max_error);
  for (const auto& w : a.warnings) std::cerr << "warning: " << w << '\n';
  std::cout << summary(a.fit, c.max_error) << '\n';
  return ok;
}

rfa::io::SavedFit load(const Options& o) {
  if (o.json_path.empty()) throw UsageError("--json FILE with a saved fit is required");
  return rfa::io::from_json(rfa::io::read_file(o.json_path));
}

rfa::Approximation load_approximation(const Options& o) {
  auto s = load(o);
  const std::string text = o.fun.empty() ? s.fun : o.fun;
  if (text.empty()) throw UsageError("the saved fit records no expression; pass --fun");
  if (!s.domain) throw UsageError("the saved fit records no domain");
  return rfa::io::to_approximation(std::move(s), compile(text));
}

int run_check(const Options& o) {
  Options opts = o;
  auto a = load_approximation(opts);
  const auto c = rfa::check(a);
  if (!o.emit.empty()) {
    std::string csv;
    char buf[96];
    for (std::size_t k = 0; k < c.points.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", c.points[k].real(), c.points[k].imag(), c.errors[k]);
      csv += buf;
    }
    rfa::io::write_file(o.emit, csv);
  }
  std::cout << summary(a.fit, c.max_error) << '\n';
  return ok;
}

int run_poles(const Options& o) {
  const auto s = load(o);
  const auto pr = rfa::residues(s.fit);
  if (!o.emit.empty()) rfa::io::write_file(o.emit, rfa::io::poles_csv(pr));
  std::printf("%zu poles\n", pr.size());
  for (const auto& p : pr)
    std::printf("%+.16e %+.16ei  residue %+.6e %+.6ei%s\n", p.pole.real(), p.pole.imag(), p.residue.real(),
                p.residue.imag(), p.flagged ? "  (flagged)" : "");
  return ok;
}

int run_minimax(const Options& o) {
  Options opts = o;
  const std::string fun = o.fun.empty() ? load(o).fun : o.fun;
  auto a = load_approximation(opts);
  auto b = rfa::minimax(a, o.iterations);
  const auto c = rfa::check(b);
  if (!o.out.empty()) rfa::io::write_file(o.out, rfa::io::to_json(b, fun, c.max_error));
  if (!o.emit.empty()) rfa::io::write_file(o.emit, rfa::io::poles_csv(rfa::residues(b.fit)));
  std::cout << summary(b.fit, c.max_error) << '\n';
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rational approximation of complex functions"};
  app.require_subcommand(1);
  Options o;

  auto* approx = app.add_subcommand("approx", "fit a rational approximation");
  approx->add_option("--fun", o.fun, "expression in z, e.g. \"log(1 + i + 5i*z)\"");
  approx->add_option("--interval", o.interval, "segment endpoints a b")->expected(2);
  approx->add_option("--circle", o.circle, "center and radius cx cy r")->expected(3);
  approx->add_option("--polygon", o.polygon, "CSV of polygon vertices");
  approx->add_option("--points", o.points, "CSV of sample points (discrete fit)");
  approx->add_flag("--exterior", o.exterior, "approximate on the exterior of the closed boundary");
  approx->add_flag("--interior", o.interior, "approximate on the interior of the closed boundary");
  approx->add_option("--method", o.method, "aaa or thiele")->check(CLI::IsMember({"aaa", "thiele"}));
  approx->add_option("--tol", o.tol, "relative tolerance")->check(CLI::PositiveNumber);
  approx->add_option("--max-iter", o.max_iter, "maximum number of nodes")->check(CLI::PositiveNumber);
  approx->add_option("--stagnation", o.stagnation, "stagnation window")->check(CLI::PositiveNumber);
  approx->add_option("--refinement", o.refinement, "test points per interval")->check(CLI::PositiveNumber);
  approx->add_option("--initial-nodes", o.initial_nodes, "initial boundary discretization");
  approx->add_option("--poles", o.poles, "CSV of prescribed poles");
  approx->add_option("--degree", o.degree, "polynomial degree for prescribed poles");
  approx->add_option("--init", o.init, "initial sample count for prescribed poles");
  approx->add_option("--json", o.json_path, "write the result JSON here");
  approx->add_option("--emit", o.emit, "write the pole CSV (re,im,res_re,res_im) here");
  approx->add_option("--history", o.history, "write the convergence CSV (n,max_err,allowed) here");

  auto* check = app.add_subcommand("check", "re-evaluate a saved fit against its expression");
  check->add_option("--json", o.json_path, "saved fit")->required();
  check->add_option("--fun", o.fun, "override the saved expression");
  check->add_option("--emit", o.emit, "write the error CSV (re,im,err) here");

  auto* poles = app.add_subcommand("poles", "print the pole/residue table of a saved fit");
  poles->add_option("--json", o.json_path, "saved fit")->required();
  poles->add_option("--emit", o.emit, "write the pole CSV here");

  auto* mm = app.add_subcommand("minimax", "Lawson refinement of a saved barycentric fit");
  mm->add_option("--json", o.json_path, "saved fit")->required();
  mm->add_option("--fun", o.fun, "override the saved expression");
  mm->add_option("--iterations", o.iterations, "Lawson steps")->check(CLI::NonNegativeNumber);
  mm->add_option("--out", o.out, "write the refined fit JSON here");
  mm->add_option("--emit", o.emit, "write the pole CSV here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return usage;
  }

  try {
    if (*approx) return run_approx(o);
    if (*check) return run_check(o);
    if (*poles) return run_poles(o);
    return run_minimax(o);
  } catch (const UsageError& e) {
    report("usage", e.what());
    return usage;
  } catch (const rfa::InvalidInput& e) {
    report("invalid_input", e.what());
    return engine_failure;
  } catch (const rfa::NoAllowedIterate& e) {
    report("no_allowed_iterate", e.what());
    return engine_failure;
  } catch (const std::exception& e) {
    report("engine", e.what());
    return engine_failure;
  }
}
