#include "rfa/thiele.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rfa/engine.hpp"

namespace rfa {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double nan = std::numeric_limits<double>::quiet_NaN();

// Barycentric surrogate built from samples of r: the nodes themselves plus points a
// third and a quarter of the way to each node's nearest neighbour, plus the centroid.
BarycentricInterpolant resample(const ThieleInterpolant& r) {
  const auto& z = r.nodes();
  std::vector<complex> pts(z.begin(), z.end());
  std::vector<complex> vals(r.values().begin(), r.values().end());
  auto add = [&](complex p) {
    if (std::ranges::find(pts, p) != pts.end()) return;
    const complex v = r(p);
    if (!is_finite(v)) return;
    pts.push_back(p);
    vals.push_back(v);
  };
  complex centroid = 0;
  for (std::size_t j = 0; j < z.size(); ++j) {
    centroid += z[j];
    std::size_t nn = j == 0 ? 1 : 0;
    for (std::size_t k = 0; k < z.size(); ++k)
      if (k != j && std::abs(z[k] - z[j]) < std::abs(z[nn] - z[j])) nn = k;
    add(z[j] + (z[nn] - z[j]) / 3.0);
    add(z[j] + (z[nn] - z[j]) / 4.0);
  }
  add(centroid / double(z.size()));

  EngineConfig cfg;
  cfg.method = Method::barycentric;
  cfg.allowed = allow_all();
  cfg.max_iter = r.degree() + 2;
  auto fit = approximate_values(vals, pts, cfg);
  return std::get<BarycentricInterpolant>(fit);
}

}  // namespace

ThieleInterpolant::ThieleInterpolant(std::span<const complex> nodes, std::span<const complex> values) {
  if (nodes.size() != values.size()) throw InvalidInput("thiele: nodes and values must have equal length");
  for (std::size_t k = 0; k < nodes.size(); ++k) add_node(nodes[k], values[k]);
}

ThieleInterpolant ThieleInterpolant::from_weights(std::vector<complex> nodes, std::vector<complex> values,
                                                  std::vector<complex> weights) {
  if (nodes.size() != values.size() || nodes.size() != weights.size())
    throw InvalidInput("thiele: nodes, values and weights must have equal length");
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = i + 1; j < nodes.size(); ++j)
      if (nodes[i] == nodes[j]) throw InvalidInput("thiele: repeated node");
  ThieleInterpolant r;
  r.nodes_ = std::move(nodes);
  r.values_ = std::move(values);
  r.weights_ = std::move(weights);
  return r;
}

complex ThieleInterpolant::operator()(complex z) const {
  if (nodes_.empty()) throw DomainError("cannot evaluate an empty interpolant");
  for (std::size_t j = 0; j < nodes_.size(); ++j)
    if (z == nodes_[j]) return values_[j];
  // Bottom-up; a zero denominator sends the tail to infinity, which the next level absorbs.
  complex acc = weights_.back();
  bool infinite = false;
  for (std::size_t k = nodes_.size() - 1; k-- > 0;) {
    const complex num = z - nodes_[k];
    if (infinite) {
      acc = weights_[k];
      infinite = false;
    } else if (acc == 0.0) {
      infinite = true;
    } else {
      acc = weights_[k] + num / acc;
      if (!is_finite(acc)) infinite = true;
    }
  }
  return infinite ? complex(inf, 0) : acc;
}

Degrees ThieleInterpolant::degrees() const {
  const std::size_t n = nodes_.size();
  if (n == 0) return {0, 0};
  if (n % 2 == 1) {
    const std::size_t m = (n + 1) / 2;
    return {m, m};
  }
  const std::size_t m = n / 2;
  return {m + 1, m};
}

std::vector<complex> ThieleInterpolant::poles() const {
  if (nodes_.size() < 2) return {};
  auto ps = resample(*this).poles();
  // The resampled fit only locates the poles; Newton steps on 1/r pin them to this fraction.
  for (std::size_t k = 0; k < ps.size(); ++k) {
    double nearest = inf;
    for (std::size_t j = 0; j < ps.size(); ++j)
      if (j != k) nearest = std::min(nearest, std::abs(ps[j] - ps[k]));
    complex z = ps[k];
    for (int it = 0; it < 8; ++it) {
      // a(z) and a'(z) for the continued fraction, bottom-up.
      complex a = weights_.back(), da = 0;
      for (std::size_t j = nodes_.size() - 1; j-- > 0;) {
        const complex t = z - nodes_[j];
        const complex na = weights_[j] + t / a;
        da = 1.0 / a - t * da / (a * a);
        a = na;
      }
      const complex step = a / da;
      if (!is_finite(step)) break;
      z += step;
      if (std::abs(step) <= 4 * std::numeric_limits<double>::epsilon() * std::abs(z)) break;
    }
    if (is_finite(z) && std::abs(z - ps[k]) < 0.25 * nearest) ps[k] = z;
  }
  return ps;
}

std::vector<complex> ThieleInterpolant::roots() const {
  if (nodes_.size() < 2) return {};
  return resample(*this).roots();
}

std::vector<PoleResidue> ThieleInterpolant::residues() const {
  const auto ps = poles();
  double diameter = 0;
  for (auto a : nodes_)
    for (auto b : nodes_) diameter = std::max(diameter, std::abs(a - b));
  std::vector<PoleResidue> out;
  for (std::size_t k = 0; k < ps.size(); ++k) {
    double nearest = inf;
    for (std::size_t j = 0; j < ps.size(); ++j)
      if (j != k) nearest = std::min(nearest, std::abs(ps[j] - ps[k]));
    for (auto z : nodes_) nearest = std::min(nearest, std::abs(z - ps[k]));
    double radius = 0.5 * nearest;
    if (diameter > 0) radius = std::min(radius, 0.1 * diameter);
    try {
      out.push_back({ps[k], trapezoid_residue(*this, ps[k], radius), false});
    } catch (const ConvergenceError& e) {
      out.push_back({ps[k], e.last_estimate(), true});
    }
  }
  return out;
}

ThieleInterpolant ThieleInterpolant::truncated(std::size_t n) const {
  if (n > size()) throw InvalidInput("truncated: bad prefix length");
  ThieleInterpolant r;
  r.nodes_.assign(nodes_.begin(), nodes_.begin() + n);
  r.values_.assign(values_.begin(), values_.begin() + n);
  r.weights_.assign(weights_.begin(), weights_.begin() + n);
  return r;
}

void ThieleInterpolant::add_node(complex z, complex f) {
  if (!is_finite(z) || !is_finite(f)) throw InvalidInput("thiele: non-finite node data");
  const auto d = next_weight(*this, z, f);
  if (!d) throw UnreachableNode("thiele: inverse difference breaks down at the proposed node");
  nodes_.push_back(z);
  values_.push_back(f);
  weights_.push_back(*d);
}

std::optional<complex> next_weight(const ThieleInterpolant& r, complex z, complex f) {
  const auto& zk = r.nodes();
  const auto& dk = r.weights();
  if (std::ranges::find(zk, z) != zk.end()) throw InvalidInput("next_weight: node already present");
  complex u = f;
  for (std::size_t k = 0; k < zk.size(); ++k) {
    const complex diff = u - dk[k];
    if (diff == 0.0) return std::nullopt;
    u = (z - zk[k]) / diff;
  }
  if (!is_finite(u)) return std::nullopt;
  return u;
}

// ---------------------------------------------------------------------- test points

std::size_t ThieleTestSet::append(std::span<const complex> points, std::span<const complex> values) {
  if (points.size() != values.size()) throw InvalidInput("append: length mismatch");
  const std::size_t first = points_.size();
  points_.insert(points_.end(), points.begin(), points.end());
  values_.insert(values_.end(), values.begin(), values.end());
  active_.resize(points_.size(), true);
  return first;
}

void ThieleTestSet::replace(std::size_t row, complex point, complex value) {
  points_.at(row) = point;
  values_[row] = value;
  active_[row] = true;
}

void ThieleTestSet::deactivate(std::size_t row) { active_.at(row) = false; }

std::vector<complex> update_test_values(const ThieleInterpolant& r, ThieleTestSet& tests,
                                        std::span<const complex> new_points,
                                        std::span<const complex> new_values) {
  if (!new_points.empty()) tests.append(new_points, new_values);
  std::vector<complex> out(tests.size(), complex(nan, nan));
  for (std::size_t i = 0; i < tests.size(); ++i)
    if (tests.active(i)) out[i] = r(tests.points()[i]);
  return out;
}

}  // namespace rfa
