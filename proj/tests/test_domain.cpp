#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "doctest.h"
#include "rfa/domain.hpp"

using namespace rfa;
using Which = DiscretizedPath::Which;

namespace {

bool strictly_increasing(const std::vector<double>& v) {
  return std::adjacent_find(v.begin(), v.end(), [](double a, double b) { return !(a < b); }) == v.end();
}

// Every test parameter between consecutive nodes, node parameters increasing.
void check_invariants(const DiscretizedPath& d) {
  const auto all = d.params(Which::all);
  CHECK(strictly_increasing(all));
  CHECK(all.size() == d.num_nodes() + d.num_tests());
  const auto pts = d.collect(Which::all);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) CHECK(std::abs(pts[i] - pts[j]) > 0);
}

}  // namespace

TEST_CASE("curve parameterization") {
  const auto seg = Curve::segment(-1.0, 1.0);
  CHECK(std::abs(seg.point(0.5) - complex(0, 0)) == 0);
  CHECK(std::abs(seg.point(0.75) - complex(0.5, 0)) < 1e-15);
  const auto circ = Curve::circle(0.0, 1.0);
  CHECK(std::abs(circ.point(0.25) - complex(0, 1)) < 1e-15);
  CHECK(std::abs(circ.point(0.0) - circ.point(1.0)) < 1e-15);
  CHECK_THROWS_AS(seg.point(1.5), DomainError);
  CHECK_THROWS_AS(Path(seg).point(-0.1), DomainError);
}

TEST_CASE("path pieces join and parameter is arc-length proportional") {
  const std::vector<complex> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const auto p = Path::polygon(square);
  CHECK(p.closed());
  CHECK(p.length() == doctest::Approx(4.0));
  for (int k = 0; k < 4; ++k) CHECK(std::abs(p.point(k / 4.0) - square[k]) < 1e-14);
  CHECK(std::abs(p.point(0.125) - complex(0.5, 0)) < 1e-14);

  // Finite-difference speed is bounded on a fine grid.
  const double h = 1e-3;
  double speed = 0;
  for (int k = 0; k < 1000; ++k) speed = std::max(speed, std::abs(p.point((k + 1) * h) - p.point(k * h)) / h);
  CHECK(speed <= 4.0 + 1e-9);
}

TEST_CASE("discretize examples") {
  SUBCASE("two nodes, one test") {
    DiscretizedPath d(Curve::segment(-1.0, 1.0), 2, 1);
    CHECK(d.collect(Which::nodes) == std::vector<complex>{-1.0, 1.0});
    CHECK(d.collect(Which::tests) == std::vector<complex>{0.0});
    CHECK(d.collect(Which::all) == std::vector<complex>{-1.0, 0.0, 1.0});
  }
  SUBCASE("three nodes, refinement two") {
    DiscretizedPath d(Curve::segment(-1.0, 1.0), 3, 2);
    CHECK(d.num_nodes() == 3);
    const auto t = d.params(Which::tests);
    REQUIRE(t.size() == 4);
    const double expect[] = {1.0 / 6, 2.0 / 6, 4.0 / 6, 5.0 / 6};
    for (int k = 0; k < 4; ++k) CHECK(t[k] == doctest::Approx(expect[k]).epsilon(1e-15));
  }
  SUBCASE("circle") {
    DiscretizedPath d(Curve::circle(0.0, 1.0), 4, 3);
    CHECK(d.num_nodes() == 4);
    CHECK(d.num_tests() == 12);
    for (auto z : d.collect(Which::all)) CHECK(std::abs(std::abs(z) - 1) < 1e-15);
  }
  CHECK_THROWS_AS(DiscretizedPath(Curve::segment(-1.0, 1.0), 1, 1), DomainError);
  CHECK_THROWS_AS(DiscretizedPath(Curve::circle(0.0, 1.0), 2, 1), DomainError);
  CHECK_THROWS_AS(DiscretizedPath(Curve::segment(-1.0, 1.0), 2, 0), DomainError);
}

TEST_CASE("add_node") {
  DiscretizedPath d(Curve::segment(-1.0, 1.0), 2, 1);
  const auto p = d.add_node({0, 1});
  REQUIRE(p);
  CHECK(d.point(p->node) == complex(0, 0));
  CHECK(d.collect(Which::nodes) == std::vector<complex>{-1.0, 0.0, 1.0});
  CHECK(d.collect(Which::tests) == std::vector<complex>{-0.5, 0.5});
  CHECK(p->changed.size() == 2);
  CHECK_THROWS_AS(d.add_node({0, 0}), DomainError);
}

TEST_CASE("repeated promotion keeps the table consistent") {
  for (std::size_t s : {1u, 2u, 3u}) {
    for (bool closed : {false, true}) {
      DiscretizedPath d(closed ? Path(Curve::circle(0.0, 1.0)) : Path(Curve::segment(-1.0, 1.0)), closed ? 3 : 2, s);
      // Always promote the test point nearest to parameter 0.3, which forces deep local refinement.
      for (int step = 0; step < 40; ++step) {
        const auto tests = d.indices(Which::tests);
        auto best = *std::min_element(tests.begin(), tests.end(), [&](auto a, auto b) {
          return std::abs(d.param(a) - 0.3) < std::abs(d.param(b) - 0.3);
        });
        const std::size_t nodes = d.num_nodes(), ntests = d.num_tests();
        const auto p = d.add_node(best);
        if (!p) break;
        CHECK(d.num_nodes() == nodes + 1);
        CHECK(d.num_tests() == ntests + s);
        CHECK(p->changed.size() == 2 * s);
        check_invariants(d);
      }
    }
  }
}

TEST_CASE("duplicate guard rejects promotions that would collide") {
  DiscretizedPath d(Curve::segment(-1.0, 1.0), 2, 1);
  std::optional<DiscretizedPath::Promotion> p;
  int steps = 0;
  do {
    const auto tests = d.indices(Which::tests);
    p = d.add_node(*std::min_element(tests.begin(), tests.end(),
                                     [&](auto a, auto b) { return std::abs(d.point(a)) < std::abs(d.point(b)); }));
    ++steps;
  } while (p && steps < 200);
  CHECK(!p);
  check_invariants(d);
}

TEST_CASE("distance to boundary") {
  const Path seg(Curve::segment(-1.0, 1.0));
  CHECK(dist_to_boundary(seg, {0, 1}) == doctest::Approx(1.0));
  CHECK(dist_to_boundary(seg, 2.0) == doctest::Approx(1.0));
  const Path circ(Curve::circle(0.0, 1.0));
  CHECK(dist_to_boundary(circ, 0.0) == doctest::Approx(1.0));
  CHECK(dist_to_boundary(circ, {3, 4}) == doctest::Approx(4.0));
  // Sampled distance for a non-closed-form curve.
  const Path sq(shapes::squircle());
  CHECK(dist_to_boundary(sq, 3.0) == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("region membership") {
  const Path circ(Curve::circle(0.0, 1.0));
  CHECK(contains(interior(circ), 0.0));
  CHECK(!contains(interior(circ), 2.0));
  CHECK(contains(exterior(circ), 2.0));
  const Path sq(shapes::squircle());
  for (int k = 0; k < 200; ++k) {
    const complex z = std::polar(0.2 + 0.01 * k, 0.7 * k);
    if (dist_to_boundary(sq, z) < 1e-6) continue;
    CHECK(contains(interior(sq), z) != contains(exterior(sq), z));
    CHECK(contains(interior(sq), z) == (winding_number(sq, z) != 0));
  }
}
