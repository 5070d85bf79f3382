#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "rfa/engine.hpp"

using namespace rfa;

namespace {

const Path unit_segment{Curve::segment(-1.0, 1.0)};

complex log_branch(complex z) { return std::log(complex(1, 1) + complex(0, 5) * z); }
complex sqrt_near(complex z) { return std::sqrt(z + complex(0, 1e-6)); }

std::vector<complex> linspace(double a, double b, int n) {
  std::vector<complex> z;
  for (int k = 0; k < n; ++k) z.push_back(a + (b - a) * k / (n - 1));
  return z;
}

double max_error(const Approximation& a, const std::vector<complex>& z) {
  double e = 0;
  for (auto x : z) e = std::max(e, std::abs(a(x) - a.f(x)));
  return e;
}

void check_history(const ConvergenceHistory& h) {
  REQUIRE(h.size() > 0);
  int chosen = 0;
  for (std::size_t k = 0; k < h.size(); ++k) {
    if (k) CHECK(h.records[k].nodes > h.records[k - 1].nodes);
    chosen += h.records[k].chosen;
  }
  CHECK(chosen == 1);
  const auto& best = h.records[*h.chosen()];
  CHECK(best.allowed == PoleCheck::allowed);
  for (const auto& r : h.records)
    if (r.allowed == PoleCheck::allowed) CHECK(best.max_error <= r.max_error);
}

}  // namespace

TEST_CASE("continuum fit of a log branch point") {
  const auto a = approximate(log_branch, unit_segment);
  const auto d = degrees(a.fit);
  CHECK(d.denominator >= 10);
  CHECK(d.denominator <= 16);
  const auto c = check(a);
  CHECK(c.max_error <= 1e-12);
  CHECK(c.errors.size() == c.points.size());
  check_history(a.history);
  // Nodes lie on the segment.
  for (auto z : std::get<BarycentricInterpolant>(a.fit).nodes()) CHECK(unit_segment.dist(z) < 1e-15);
}

TEST_CASE("continuum resolves a near-singularity that a grid misses") {
  const auto grid = linspace(-1, 1, 1001);
  const auto fine = linspace(-1e-3, 1e-3, 2001);
  const auto discrete = approximate(sqrt_near, grid);
  CHECK(check(discrete).max_error <= 1e-12);
  CHECK(max_error(discrete, fine) > 1e-4);
  const auto continuum = approximate(sqrt_near, unit_segment);
  CHECK(max_error(continuum, fine) <= 1e-10);
}

TEST_CASE("trivial inputs") {
  const auto c = approximate([](complex) { return complex(7); }, unit_segment);
  CHECK(c.history.size() == 1);
  CHECK(c.history.records[0].nodes == 1);
  CHECK(std::abs(c(complex(0.3, 2)) - 7.0) < 1e-14);

  const std::vector<complex> two{0.0, 1.0};
  const auto lin = approximate([](complex z) { return 2.0 * z + 1.0; }, two);
  CHECK(std::abs(lin(0.5) - 2.0) < 1e-14);

  CHECK_THROWS_AS(approximate([](complex z) { return z; }, std::vector<complex>{1.0}), InvalidInput);
  CHECK_THROWS_AS(approximate([](complex z) { return z; }, std::vector<complex>{1.0, 1.0}), InvalidInput);
  EngineConfig bad;
  bad.tol = 0;
  CHECK_THROWS_AS(approximate([](complex z) { return z; }, unit_segment, bad), InvalidInput);
}

TEST_CASE("discrete exact recovery of a type (3,3) function") {
  std::mt19937_64 g(12);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<complex> z;
  for (int k = 0; k < 200; ++k) z.emplace_back(u(g), u(g));
  auto f = [](complex x) { return (x * x * x - 2.0) / ((x - 3.0) * (x + complex(0, 2)) * (x - complex(-2, 2))); };
  const auto a = approximate(f, z);
  double scale = 0;
  for (auto x : z) scale = std::max(scale, std::abs(f(x)));
  CHECK(check(a).max_error <= 1e-12 * scale);
  CHECK(degrees(a.fit).denominator <= 4);
}

TEST_CASE("tabulated values") {
  const auto z = linspace(-1, 1, 50);
  const auto c = approximate_values(std::vector<complex>(50, 3.0), z);
  CHECK(std::abs(std::visit([](const auto& r) { return r(complex(0.1, 0.1)); }, c) - 3.0) < 1e-14);

  std::vector<complex> y;
  for (auto x : z) y.push_back(1.0 / (x - 2.0));
  const auto r = approximate_values(y, z);
  const auto p = std::get<BarycentricInterpolant>(r).poles();
  REQUIRE(p.size() == 1);
  CHECK(std::abs(p[0] - 2.0) < 1e-10);

  y[3] = complex(NAN, 0);
  CHECK_THROWS_AS(approximate_values(y, z), InvalidInput);
  CHECK_THROWS_AS(approximate_values(std::span(y).first(10), z), InvalidInput);
}

TEST_CASE("non-finite samples are skipped") {
  // sin(z)/z is 0/0 at the midpoint of [-1, 1], which is a grid node.
  const auto a = approximate([](complex z) { return std::sin(z) / z; }, unit_segment);
  CHECK(check(a).max_error <= 1e-12);
  CHECK(std::abs(a(0.0) - 1.0) < 1e-12);
  const auto b = approximate([](complex z) { return z == 0.0 ? complex(INFINITY) : std::exp(z); }, linspace(-1, 1, 101));
  CHECK(std::isfinite(check(b).max_error));
}

TEST_CASE("stagnation rule") {
  std::vector<double> halving;
  for (int k = 0; k < 60; ++k) halving.push_back(std::ldexp(1.0, -k));
  for (std::size_t n = 1; n <= halving.size(); ++n) CHECK(!stagnation_check(std::span(halving).first(n), 10));
  const std::vector<double> flat(20, 1e-9);
  CHECK(stagnation_check(flat, 10));
  CHECK(!stagnation_check(std::span(flat).first(19), 10));
  // Never before a meaningful fit exists.
  const std::vector<double> big(20, 0.5);
  CHECK(!stagnation_check(big, 10));
  CHECK(stagnation_check(big, 10, 100.0));
}

TEST_CASE("default allowed-pole predicates") {
  const auto seg = allowed_default(Domain(unit_segment));
  CHECK(!seg(0.5));
  CHECK(seg(2.0));
  CHECK(seg(complex(0.5, 1e-3)));
  const auto disk = allowed_default(Domain(interior(Curve::circle(0.0, 1.0))));
  CHECK(!disk(0.3));
  CHECK(disk(1.5));
  const auto outside = allowed_default(Domain(exterior(Curve::circle(0.0, 1.0))));
  CHECK(outside(0.3));
  CHECK(!outside(1.5));
  CHECK(allowed_default(Domain(PointSet{0.0, 1.0}))(0.5));
}

TEST_CASE("regions keep poles out") {
  // Singular only inside the disk, analytic at infinity.
  const auto a = approximate([](complex z) { return std::exp(1.0 / z) / (z - 0.5); }, exterior(Curve::circle(0.0, 1.0)));
  for (auto p : poles(a.fit)) CHECK(std::abs(p) < 1.0);
  CHECK(check(a).max_error <= 1e-11);

  const auto b = approximate([](complex z) { return std::tan(z); }, interior(Path(shapes::squircle())));
  for (auto p : poles(b.fit)) CHECK(!interior(Path(shapes::squircle())).contains(p));
  check_history(b.history);
}

TEST_CASE("determinism and scale invariance") {
  const auto a = approximate(log_branch, unit_segment);
  const auto b = approximate(log_branch, unit_segment);
  REQUIRE(a.history.size() == b.history.size());
  for (std::size_t k = 0; k < a.history.size(); ++k) CHECK(a.history.records[k].max_error == b.history.records[k].max_error);

  const double c = 1024;  // power of two: scaling is exact
  const auto s = approximate([&](complex z) { return c * log_branch(z); }, unit_segment);
  REQUIRE(s.history.size() == a.history.size());
  for (std::size_t k = 0; k < a.history.size(); ++k)
    CHECK(s.history.records[k].max_error == doctest::Approx(c * a.history.records[k].max_error).epsilon(1e-6));
  CHECK(std::get<BarycentricInterpolant>(s.fit).nodes() == std::get<BarycentricInterpolant>(a.fit).nodes());
}

TEST_CASE("thiele engine") {
  EngineConfig cfg;
  cfg.method = Method::thiele;
  const auto a = approximate(log_branch, unit_segment, cfg);
  CHECK(check(a).max_error <= 1e-10);
  check_history(a.history);

  reset_kernel_counters();
  const auto grid = linspace(-1, 1, 300);
  const auto t = approximate([](complex z) { return std::exp(z) / (z - 2.0); }, grid, cfg);
  CHECK(kernel_counters().svd == 0);
  CHECK(kernel_counters().eig == 0);
  const auto& r = std::get<ThieleInterpolant>(t.fit);
  for (std::size_t j = 0; j < r.size(); ++j) CHECK(std::abs(r(r.nodes()[j]) - r.values()[j]) <= 1e-10 * std::abs(r.values()[j]));
}

TEST_CASE("aaa performs one svd per iteration") {
  reset_kernel_counters();
  const auto a = approximate([](complex z) { return std::exp(z) / (z - 2.0); }, linspace(-1, 1, 300));
  CHECK(kernel_counters().svd == a.history.size());
}

TEST_CASE("minimax") {
  auto f = [](complex z) { return std::abs(z - complex(0.5, -0.05)); };
  EngineConfig cfg;
  cfg.max_iter = 20;
  const auto a = approximate(f, unit_segment, cfg);
  const auto m = minimax(a, 20);
  CHECK(std::get<BarycentricInterpolant>(m.fit).nodes() == std::get<BarycentricInterpolant>(a.fit).nodes());
  CHECK(m.history.size() == a.history.size());

  // An exact fit has nothing to equalize.
  const auto exact = approximate([](complex z) { return 1.0 / (z - 3.0); }, linspace(-1, 1, 40));
  const auto e = minimax(exact, 5);
  CHECK(std::get<BarycentricInterpolant>(e.fit).weights() == std::get<BarycentricInterpolant>(exact.fit).weights());

  EngineConfig th;
  th.method = Method::thiele;
  CHECK_THROWS_AS(minimax(approximate(f, unit_segment, th), 3), InvalidInput);
}

TEST_CASE("check grid is ten times the boundary resolution") {
  const auto a = approximate(log_branch, unit_segment);
  const auto pts = check_points(a);
  CHECK(pts.size() == 10 * (a.params.size() - 1) + 1);
  const auto d = approximate(log_branch, linspace(-1, 1, 77));
  CHECK(check_points(d).size() == 77);
}
