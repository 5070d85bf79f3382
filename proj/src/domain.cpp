#include "rfa/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace rfa {

namespace {

constexpr double two_pi = 2 * std::numbers::pi;

void check_param(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("curve parameter must lie in [0, 1]");
}

double segment_dist(complex a, complex b, complex z) {
  const complex d = b - a;
  const double len2 = std::norm(d);
  if (len2 == 0) return std::abs(z - a);
  const double s = std::clamp((std::conj(d) * (z - a)).real() / len2, 0.0, 1.0);
  return std::abs(z - (a + s * d));
}

// Angle accumulated by z - p(t) as t runs over [t0, t1], refining where the chord is
// long compared with the distance to z.
template <class F>
double swept_angle(const F& p, complex z, double t0, double t1, complex p0, complex p1, int depth) {
  const double near = std::min(std::abs(p0 - z), std::abs(p1 - z));
  if (depth < 40 && std::abs(p1 - p0) > 0.25 * near) {
    const double tm = 0.5 * (t0 + t1);
    const complex pm = p(tm);
    return swept_angle(p, z, t0, tm, p0, pm, depth + 1) + swept_angle(p, z, tm, t1, pm, p1, depth + 1);
  }
  return std::arg((p1 - z) / (p0 - z));
}

}  // namespace

// ---------------------------------------------------------------------------- Curve

Curve Curve::segment(complex a, complex b) {
  if (!is_finite(a) || !is_finite(b)) throw InvalidInput("segment endpoints must be finite");
  Curve c;
  c.kind_ = Kind::segment;
  c.a_ = a;
  c.b_ = b;
  c.finish();
  return c;
}

Curve Curve::circle(complex center, double radius, bool ccw) {
  if (!(radius > 0) || !is_finite(center)) throw InvalidInput("circle needs a finite center and positive radius");
  Curve c;
  c.kind_ = Kind::circle;
  c.a_ = center;
  c.radius_ = radius;
  c.start_ = 0;
  c.sweep_ = ccw ? two_pi : -two_pi;
  c.closed_ = true;
  c.finish();
  return c;
}

Curve Curve::arc(complex center, double radius, double start, double sweep) {
  if (!(radius > 0) || sweep == 0 || !std::isfinite(start) || !std::isfinite(sweep))
    throw InvalidInput("arc needs a positive radius and nonzero sweep");
  Curve c;
  c.kind_ = Kind::arc;
  c.a_ = center;
  c.radius_ = radius;
  c.start_ = start;
  c.sweep_ = sweep;
  c.closed_ = std::abs(sweep) >= two_pi;
  c.finish();
  return c;
}

Curve Curve::parametric(std::function<complex(double)> fn, bool closed) {
  if (!fn) throw InvalidInput("parametric curve needs a function");
  Curve c;
  c.kind_ = Kind::parametric;
  c.fn_ = std::move(fn);
  c.closed_ = closed;
  c.finish();
  if (!is_finite(c.point(0)) || !is_finite(c.point(1)))
    throw InvalidInput("parametric curve endpoints must be finite");
  return c;
}

void Curve::finish() {
  switch (kind_) {
    case Kind::segment:
      length_ = std::abs(b_ - a_);
      break;
    case Kind::circle:
    case Kind::arc:
      length_ = radius_ * std::abs(sweep_);
      break;
    case Kind::parametric: {
      constexpr int n = 1024;
      length_ = 0;
      complex prev = fn_(0.0);
      for (int k = 1; k <= n; ++k) {
        const complex next = fn_(static_cast<double>(k) / n);
        length_ += std::abs(next - prev);
        prev = next;
      }
      break;
    }
  }
}

bool Curve::closed() const { return closed_; }

complex Curve::point(double t) const {
  check_param(t);
  switch (kind_) {
    case Kind::segment:
      if (t == 1.0) return b_;
      return a_ + t * (b_ - a_);
    case Kind::circle:
      if (t == 1.0) return a_ + radius_;
      [[fallthrough]];
    case Kind::arc:
      return a_ + std::polar(radius_, start_ + t * sweep_);
    case Kind::parametric:
      return fn_(t);
  }
  return {};
}

double Curve::dist(complex z) const {
  switch (kind_) {
    case Kind::segment:
      return segment_dist(a_, b_, z);
    case Kind::circle:
      return std::abs(std::abs(z - a_) - radius_);
    case Kind::arc: {
      if (closed_) return std::abs(std::abs(z - a_) - radius_);
      const double phi = std::arg(z - a_);
      double rel = sweep_ > 0 ? phi - start_ : start_ - phi;
      rel = std::fmod(rel, two_pi);
      if (rel < 0) rel += two_pi;
      if (rel <= std::abs(sweep_)) return std::abs(std::abs(z - a_) - radius_);
      return std::min(std::abs(z - point(0)), std::abs(z - point(1)));
    }
    case Kind::parametric: {
      constexpr int n = 256;
      int best = 0;
      double best_d = std::abs(fn_(0.0) - z);
      for (int k = 1; k <= n; ++k) {
        const double d = std::abs(fn_(static_cast<double>(k) / n) - z);
        if (d < best_d) {
          best_d = d;
          best = k;
        }
      }
      // Golden-section search on the bracketing sample interval.
      double lo = std::max(0, best - 1) / double(n), hi = std::min(n, best + 1) / double(n);
      const double g = (std::sqrt(5.0) - 1) / 2;
      double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
      double f1 = std::abs(fn_(x1) - z), f2 = std::abs(fn_(x2) - z);
      for (int it = 0; it < 60; ++it) {
        if (f1 < f2) {
          hi = x2;
          x2 = x1;
          f2 = f1;
          x1 = hi - g * (hi - lo);
          f1 = std::abs(fn_(x1) - z);
        } else {
          lo = x1;
          x1 = x2;
          f1 = f2;
          x2 = lo + g * (hi - lo);
          f2 = std::abs(fn_(x2) - z);
        }
      }
      return std::min({best_d, f1, f2});
    }
  }
  return 0;
}

// ----------------------------------------------------------------------------- Path

Path::Path(Curve c) : pieces_{std::move(c)} { finish(); }

Path::Path(std::vector<Curve> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw InvalidInput("path needs at least one piece");
  finish();
}

Path Path::polygon(std::span<const complex> vertices) {
  if (vertices.size() < 3) throw InvalidInput("polygon needs at least 3 vertices");
  std::vector<Curve> sides;
  sides.reserve(vertices.size());
  for (std::size_t k = 0; k < vertices.size(); ++k)
    sides.push_back(Curve::segment(vertices[k], vertices[(k + 1) % vertices.size()]));
  return Path(std::move(sides));
}

void Path::finish() {
  // Diameter from a modest sampling; it only feeds relative tolerances.
  std::vector<complex> samples;
  for (const auto& c : pieces_) {
    const int n = c.kind() == Curve::Kind::segment ? 1 : 64;
    for (int k = 0; k <= n; ++k) samples.push_back(c.point(static_cast<double>(k) / n));
  }
  diameter_ = 0;
  for (std::size_t i = 0; i < samples.size(); ++i)
    for (std::size_t j = i + 1; j < samples.size(); ++j)
      diameter_ = std::max(diameter_, std::abs(samples[i] - samples[j]));
  const double scale = std::max(1.0, diameter_);

  for (std::size_t k = 0; k + 1 < pieces_.size(); ++k) {
    if (std::abs(pieces_[k].point(1) - pieces_[k + 1].point(0)) > 1e-12 * scale)
      throw InvalidInput("path pieces " + std::to_string(k) + " and " + std::to_string(k + 1) +
                         " do not share an endpoint");
  }
  if (pieces_.size() == 1)
    closed_ = pieces_[0].closed() ||
              (pieces_[0].kind() != Curve::Kind::segment &&
               std::abs(pieces_[0].point(0) - pieces_[0].point(1)) <= 1e-12 * scale);
  else
    closed_ = std::abs(pieces_.back().point(1) - pieces_.front().point(0)) <= 1e-12 * scale;

  total_length_ = 0;
  for (const auto& c : pieces_) total_length_ += c.length();
  if (!(total_length_ > 0)) throw InvalidInput("path has zero length");
  breaks_.assign(1, 0.0);
  double acc = 0;
  for (const auto& c : pieces_) {
    acc += c.length();
    breaks_.push_back(acc / total_length_);
  }
  breaks_.back() = 1.0;
}

std::pair<std::size_t, double> Path::locate(double t) const {
  check_param(t);
  const auto it = std::upper_bound(breaks_.begin() + 1, breaks_.end() - 1, t);
  const auto k = static_cast<std::size_t>(it - breaks_.begin()) - 1;
  const double local = (t - breaks_[k]) / (breaks_[k + 1] - breaks_[k]);
  return {k, std::clamp(local, 0.0, 1.0)};
}

complex Path::point(double t) const {
  const auto [k, local] = locate(t);
  return pieces_[k].point(local);
}

double Path::dist(complex z) const {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& c : pieces_) d = std::min(d, c.dist(z));
  return d;
}

int winding_number(const Path& p, complex z) {
  double total = 0;
  for (const auto& c : p.pieces()) {
    switch (c.kind()) {
      case Curve::Kind::segment:
        total += std::arg((c.b() - z) / (c.a() - z));
        break;
      case Curve::Kind::circle:
        if (std::abs(z - c.center()) < c.radius()) total += c.sweep();
        break;
      default: {
        auto f = [&c](double t) { return c.point(t); };
        constexpr int n = 64;
        complex prev = c.point(0);
        for (int k = 1; k <= n; ++k) {
          const double t0 = double(k - 1) / n, t1 = double(k) / n;
          const complex next = c.point(t1);
          total += swept_angle(f, z, t0, t1, prev, next, 0);
          prev = next;
        }
      }
    }
  }
  return static_cast<int>(std::lround(total / two_pi));
}

complex point(const Path& p, double t) { return p.point(t); }
double dist_to_boundary(const Path& p, complex z) { return p.dist(z); }

// --------------------------------------------------------------------------- Region

Region::Region(Path boundary, Side side) : boundary_(std::move(boundary)), side_(side) {
  if (!boundary_.closed()) throw InvalidInput("region boundary must be a closed path");
}

bool Region::contains(complex z) const {
  if (boundary_.dist(z) <= 1e-13 * boundary_.diameter()) return true;
  const bool inside = winding_number(boundary_, z) != 0;
  return side_ == Side::interior ? inside : !inside;
}

namespace shapes {

Curve unit_interval() { return Curve::segment(-1.0, 1.0); }
Curve unit_circle() { return Curve::circle(0.0, 1.0); }

Curve squircle() {
  return Curve::parametric(
      [](double t) {
        const double c = std::cos(two_pi * t), s = std::sin(two_pi * t);
        return complex(std::copysign(std::sqrt(std::abs(c)), c), std::copysign(std::sqrt(std::abs(s)), s));
      },
      true);
}

}  // namespace shapes

// ------------------------------------------------------------------ DiscretizedPath

DiscretizedPath::DiscretizedPath(Path path, std::size_t initial_nodes, std::size_t refinement,
                                 std::size_t capacity)
    : path_(std::move(path)), s_(refinement), capacity_(capacity) {
  const bool closed = path_.closed();
  if (initial_nodes < (closed ? 3u : 2u))
    throw DomainError(closed ? "closed paths need at least 3 initial nodes"
                             : "open paths need at least 2 initial nodes");
  if (s_ < 1) throw DomainError("refinement must be at least 1");
  if (initial_nodes * (s_ + 1) > capacity_) throw Error("DiscretizedPath capacity exceeded");

  const double denom = closed ? double(initial_nodes) : double(initial_nodes - 1);
  for (std::size_t k = 0; k < initial_nodes; ++k) {
    const std::size_t row = append_row();
    params_[row * (s_ + 1)] = k == initial_nodes - 1 && !closed ? 1.0 : k / denom;
    points_[row * (s_ + 1)] = path_.point(params_[row * (s_ + 1)]);
  }
  for (std::size_t k = 0; k < initial_nodes; ++k) next_[k] = k + 1;
  next_.back() = closed ? 0 : npos;
  for (std::size_t k = 0; k < initial_nodes; ++k)
    if (has_interval(k)) fill_row(k, param({k, 0}), interval_end(k));
}

std::size_t DiscretizedPath::append_row() {
  const std::size_t stride = s_ + 1;
  if ((next_.size() + 1) * stride > capacity_) throw Error("DiscretizedPath capacity exceeded");
  params_.resize(params_.size() + stride, std::numeric_limits<double>::quiet_NaN());
  points_.resize(points_.size() + stride, complex(std::numeric_limits<double>::quiet_NaN()));
  next_.push_back(npos);
  return next_.size() - 1;
}

double DiscretizedPath::interval_end(std::size_t row) const {
  const double start = params_[row * (s_ + 1)];
  const double end = params_[next_[row] * (s_ + 1)];
  return end > start ? end : 1.0;  // wraps past the origin of a closed path
}

void DiscretizedPath::fill_row(std::size_t row, double start, double end) {
  for (std::size_t j = 1; j <= s_; ++j) {
    const double t = start + (end - start) * double(j) / double(s_ + 1);
    params_[row * (s_ + 1) + j] = t;
    points_[row * (s_ + 1) + j] = path_.point(t);
  }
}

std::size_t DiscretizedPath::num_tests() const {
  std::size_t n = 0;
  for (std::size_t r = 0; r < rows(); ++r) n += has_interval(r) ? s_ : 0;
  return n;
}

std::optional<DiscretizedPath::Promotion> DiscretizedPath::add_node(Index test) {
  if (test.row >= rows() || test.col < 1 || test.col > s_ || !has_interval(test.row))
    throw DomainError("add_node: index does not refer to a test point");

  const double start = param({test.row, 0});
  const double end = interval_end(test.row);
  const double mid = param(test);

  // Prospective parameters in order, checked against the duplicate-point guard.
  std::vector<double> seq;
  seq.push_back(start);
  for (std::size_t j = 1; j <= s_; ++j) seq.push_back(start + (mid - start) * double(j) / double(s_ + 1));
  seq.push_back(mid);
  for (std::size_t j = 1; j <= s_; ++j) seq.push_back(mid + (end - mid) * double(j) / double(s_ + 1));
  seq.push_back(end);
  const double guard = 1e-14 * path_.diameter();
  complex prev = path_.point(seq[0]);
  for (std::size_t k = 1; k < seq.size(); ++k) {
    if (!(seq[k] > seq[k - 1])) return std::nullopt;
    const complex p = path_.point(seq[k]);
    if (std::abs(p - prev) <= guard) return std::nullopt;
    prev = p;
  }

  const std::size_t row = append_row();
  params_[row * (s_ + 1)] = mid;
  points_[row * (s_ + 1)] = point(test);
  next_[row] = next_[test.row];
  next_[test.row] = row;
  fill_row(test.row, start, mid);
  fill_row(row, mid, end);

  Promotion out{{row, 0}, {}};
  for (std::size_t j = 1; j <= s_; ++j) out.changed.push_back({test.row, j});
  for (std::size_t j = 1; j <= s_; ++j) out.changed.push_back({row, j});
  return out;
}

std::vector<DiscretizedPath::Index> DiscretizedPath::indices(Which which) const {
  std::vector<Index> out;
  std::size_t row = 0;
  do {
    if (which != Which::tests) out.push_back({row, 0});
    if (which != Which::nodes && has_interval(row))
      for (std::size_t j = 1; j <= s_; ++j) out.push_back({row, j});
    row = next_[row];
  } while (row != npos && row != 0);
  return out;
}

std::vector<complex> DiscretizedPath::collect(Which which) const {
  std::vector<complex> out;
  for (const auto& i : indices(which)) out.push_back(point(i));
  return out;
}

std::vector<double> DiscretizedPath::params(Which which) const {
  std::vector<double> out;
  for (const auto& i : indices(which)) out.push_back(param(i));
  return out;
}

}  // namespace rfa
