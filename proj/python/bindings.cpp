#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rfa/engine.hpp"
#include "rfa/expr.hpp"
#include "rfa/serialize.hpp"

namespace py = pybind11;
using rfa::complex;

namespace {

rfa::EngineConfig make_config(const std::string& method, double tol, std::size_t max_iter, std::size_t stagnation,
                              std::size_t initial_nodes, std::size_t refinement) {
  rfa::EngineConfig cfg;
  if (method == "thiele")
    cfg.method = rfa::Method::thiele;
  else if (method != "aaa" && method != "barycentric")
    throw rfa::InvalidInput("method must be 'aaa' or 'thiele'");
  cfg.tol = tol;
  cfg.max_iter = max_iter;
  cfg.stagnation = stagnation;
  cfg.initial_nodes = initial_nodes;
  cfg.refinement = refinement;
  return cfg;
}

rfa::Domain to_domain(py::handle d) {
  if (py::isinstance<rfa::Region>(d)) return d.cast<rfa::Region>();
  if (py::isinstance<rfa::Path>(d)) return d.cast<rfa::Path>();
  if (py::isinstance<rfa::Curve>(d)) return rfa::Path(d.cast<rfa::Curve>());
  return d.cast<std::vector<complex>>();
}

const char* method_name(const rfa::Fit& fit) {
  static const char* names[] = {"barycentric", "thiele", "parfrac"};
  return names[fit.index()];
}

py::list history_list(const rfa::ConvergenceHistory& h) {
  py::list out;
  for (const auto& r : h.records) {
    py::object allowed = py::none();
    if (r.allowed != rfa::PoleCheck::unchecked) allowed = py::bool_(r.allowed == rfa::PoleCheck::allowed);
    out.append(py::make_tuple(r.nodes, r.max_error, allowed, r.chosen));
  }
  return out;
}

py::list pole_table(const std::vector<rfa::PoleResidue>& pr) {
  py::list out;
  for (const auto& p : pr) out.append(py::make_tuple(p.pole, p.residue));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Rational approximation of complex functions";

  auto base = py::register_exception<rfa::Error>(m, "Error");
  py::register_exception<rfa::InvalidInput>(m, "InvalidInput", base);
  py::register_exception<rfa::DomainError>(m, "DomainError", base);
  py::register_exception<rfa::NoAllowedIterate>(m, "NoAllowedIterate", base);

  py::class_<rfa::Curve>(m, "Curve")
      .def_static("segment", &rfa::Curve::segment, py::arg("a"), py::arg("b"))
      .def_static("circle", &rfa::Curve::circle, py::arg("center"), py::arg("radius"), py::arg("ccw") = true)
      .def_static("arc", &rfa::Curve::arc, py::arg("center"), py::arg("radius"), py::arg("start"), py::arg("sweep"))
      .def_property_readonly("closed", &rfa::Curve::closed)
      .def_property_readonly("length", &rfa::Curve::length)
      .def("point", &rfa::Curve::point)
      .def("dist", &rfa::Curve::dist);

  py::class_<rfa::Path>(m, "Path")
      .def(py::init<rfa::Curve>())
      .def(py::init<std::vector<rfa::Curve>>())
      .def_static("polygon", [](const std::vector<complex>& v) { return rfa::Path::polygon(v); })
      .def_property_readonly("closed", &rfa::Path::closed)
      .def_property_readonly("length", &rfa::Path::length)
      .def("point", &rfa::Path::point)
      .def("dist", &rfa::Path::dist);
  py::implicitly_convertible<rfa::Curve, rfa::Path>();

  py::class_<rfa::Region>(m, "Region")
      .def_property_readonly("boundary", &rfa::Region::boundary)
      .def_property_readonly("exterior",
                             [](const rfa::Region& r) { return r.side() == rfa::Region::Side::exterior; })
      .def("contains", &rfa::Region::contains);
  m.def("interior", [](rfa::Path p) { return rfa::interior(std::move(p)); });
  m.def("exterior", [](rfa::Path p) { return rfa::exterior(std::move(p)); });

  py::class_<rfa::expr::Expression>(m, "Expression")
      .def("__call__", &rfa::expr::Expression::operator())
      .def_property_readonly("text", &rfa::expr::Expression::text);
  m.def("parse_expression", [](const std::string& s) { return rfa::expr::parse_expression(s); });

  py::class_<rfa::Approximation>(m, "Approximation")
      .def("__call__", [](const rfa::Approximation& a, complex z) { return a(z); })
      .def("__call__",
           [](const rfa::Approximation& a, const std::vector<complex>& z) {
             std::vector<complex> out;
             out.reserve(z.size());
             for (complex x : z) out.push_back(a(x));
             return out;
           })
      .def_property_readonly("method", [](const rfa::Approximation& a) { return method_name(a.fit); })
      .def_property_readonly("degrees",
                             [](const rfa::Approximation& a) {
                               const auto d = rfa::degrees(a.fit);
                               return py::make_tuple(d.numerator, d.denominator);
                             })
      .def("poles", [](const rfa::Approximation& a) { return rfa::poles(a.fit); })
      .def("roots", [](const rfa::Approximation& a) { return rfa::roots(a.fit); })
      .def("residues", [](const rfa::Approximation& a) { return pole_table(rfa::residues(a.fit)); })
      .def_property_readonly("history", [](const rfa::Approximation& a) { return history_list(a.history); })
      .def_property_readonly("test_points", [](const rfa::Approximation& a) { return a.test_points; })
      .def_property_readonly("warnings", [](const rfa::Approximation& a) { return a.warnings; })
      .def_property_readonly("nodes",
                             [](const rfa::Approximation& a) -> std::vector<complex> {
                               return std::visit(
                                   [](const auto& r) -> std::vector<complex> {
                                     if constexpr (std::is_same_v<std::decay_t<decltype(r)>, rfa::PartialFractions>)
                                       return {};
                                     else
                                       return r.nodes();
                                   },
                                   a.fit);
                             })
      .def("check",
           [](const rfa::Approximation& a) {
             const auto c = rfa::check(a);
             return py::make_tuple(c.max_error, c.points, c.errors);
           })
      .def("minimax", &rfa::minimax, py::arg("iterations") = 20)
      .def("to_json", [](const rfa::Approximation& a, const std::string& fun) {
        return rfa::io::to_json(a, fun, rfa::check(a).max_error);
      }, py::arg("fun") = "");

  m.def(
      "approximate",
      [](rfa::Function f, py::object domain, const std::string& method, double tol, std::size_t max_iter,
         std::size_t stagnation, std::size_t initial_nodes, std::size_t refinement) {
        const auto cfg = make_config(method, tol, max_iter, stagnation, initial_nodes, refinement);
        return rfa::approximate(f, to_domain(domain), cfg);
      },
      py::arg("f"), py::arg("domain"), py::kw_only(), py::arg("method") = "aaa", py::arg("tol") = 1e-13,
      py::arg("max_iter") = 150, py::arg("stagnation") = 10, py::arg("initial_nodes") = 0,
      py::arg("refinement") = 3);

  m.def(
      "approximate_prescribed",
      [](rfa::Function f, py::object domain, const std::vector<complex>& poles, std::size_t degree,
         std::size_t init) {
        const rfa::Domain d = to_domain(domain);
        if (const auto* p = std::get_if<rfa::Path>(&d)) return rfa::approximate_prescribed(f, *p, poles, degree, init);
        if (const auto* pts = std::get_if<rfa::PointSet>(&d)) return rfa::approximate_prescribed(f, *pts, poles, degree);
        throw rfa::InvalidInput("prescribed poles need a curve, path or point list");
      },
      py::arg("f"), py::arg("domain"), py::arg("poles"), py::arg("degree"), py::arg("init") = 400);

  m.def(
      "load_json",
      [](const std::string& text, std::optional<rfa::Function> f) {
        auto s = rfa::io::from_json(text);
        rfa::Function fn;
        if (f)
          fn = *f;
        else if (!s.fun.empty())
          fn = [e = rfa::expr::parse_expression(s.fun)](complex z) { return e(z); };
        else
          throw rfa::InvalidInput("the saved fit records no expression; pass f");
        return rfa::io::to_approximation(std::move(s), std::move(fn));
      },
      py::arg("text"), py::arg("f") = py::none());

  m.def("kernel_counts", [] {
    const auto& k = rfa::kernel_counters();
    return py::dict(py::arg("svd") = k.svd, py::arg("eig") = k.eig, py::arg("qr") = k.qr);
  });
  m.def("reset_kernel_counts", &rfa::reset_kernel_counters);
}
