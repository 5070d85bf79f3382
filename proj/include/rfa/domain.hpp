#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "rfa/common.hpp"

namespace rfa {

/// A smooth curve in the complex plane parameterized over t in [0, 1].
class Curve {
 public:
  enum class Kind { segment, circle, arc, parametric };

  static Curve segment(complex a, complex b);
  /// Circle starting at angle 0; counterclockwise unless `ccw` is false.
  static Curve circle(complex center, double radius, bool ccw = true);
  /// Circular arc from angle `start` sweeping `sweep` radians (negative = clockwise).
  static Curve arc(complex center, double radius, double start, double sweep);
  static Curve parametric(std::function<complex(double)> fn, bool closed);

  Kind kind() const { return kind_; }
  bool closed() const;
  complex point(double t) const;
  double length() const { return length_; }
  /// Minimum distance from z to the curve.
  double dist(complex z) const;

  complex a() const { return a_; }
  complex b() const { return b_; }
  complex center() const { return a_; }
  double radius() const { return radius_; }
  double start_angle() const { return start_; }
  double sweep() const { return sweep_; }

 private:
  Curve() = default;
  void finish();

  Kind kind_ = Kind::segment;
  complex a_{}, b_{};  // segment endpoints; a_ doubles as the center of circles and arcs
  double radius_ = 0, start_ = 0, sweep_ = 0;
  bool closed_ = false;
  std::function<complex(double)> fn_;
  double length_ = 0;
};

/// Ordered, endpoint-connected sequence of curves. The parameter t in [0, 1] is split
/// among the pieces in proportion to their arc lengths.
class Path {
 public:
  Path(Curve c);  // NOLINT: a single curve is a one-piece path
  explicit Path(std::vector<Curve> pieces);
  /// Closed polygon through the vertices, in the given order.
  static Path polygon(std::span<const complex> vertices);

  const std::vector<Curve>& pieces() const { return pieces_; }
  bool closed() const { return closed_; }
  complex point(double t) const;
  double length() const { return total_length_; }
  double diameter() const { return diameter_; }
  double dist(complex z) const;
  /// Index of the piece holding parameter t, and the local parameter within it.
  std::pair<std::size_t, double> locate(double t) const;

 private:
  void finish();

  std::vector<Curve> pieces_;
  std::vector<double> breaks_;  // cumulative parameter at the start of each piece, ends with 1
  double total_length_ = 0;
  double diameter_ = 0;
  bool closed_ = false;
};

/// Interior or exterior of a closed path.
class Region {
 public:
  enum class Side { interior, exterior };
  Region(Path boundary, Side side);

  const Path& boundary() const { return boundary_; }
  Side side() const { return side_; }
  /// Winding-number membership. Points within 1e-13 * diameter of the boundary count as contained.
  bool contains(complex z) const;

 private:
  Path boundary_;
  Side side_;
};

inline Region interior(Path p) { return Region(std::move(p), Region::Side::interior); }
inline Region exterior(Path p) { return Region(std::move(p), Region::Side::exterior); }

/// Winding number of a closed path about z.
int winding_number(const Path& p, complex z);

complex point(const Path& p, double t);
double dist_to_boundary(const Path& p, complex z);
inline bool contains(const Region& r, complex z) { return r.contains(z); }

namespace shapes {
Curve unit_interval();
Curve unit_circle();
/// The curve |x|^4 + |y|^4 = 1.
Curve squircle();
}  // namespace shapes

/// Adaptive bookkeeping of nodes and test points along a path.
///
/// Storage is a row-major table with one row per node: column 0 holds the node's
/// parameter and columns 1..s hold the test parameters strictly inside the interval
/// from that node to the next one (in parameter order). Rows are appended in
/// creation order and linked by `next`; the terminal node of an open path has no
/// interval and its test columns are unused.
class DiscretizedPath {
 public:
  struct Index {
    std::size_t row = 0;
    std::size_t col = 0;
    bool operator==(const Index&) const = default;
  };
  enum class Which { nodes, tests, all };

  static constexpr std::size_t default_capacity = std::size_t{1} << 20;

  DiscretizedPath(Path path, std::size_t initial_nodes, std::size_t refinement,
                  std::size_t capacity = default_capacity);

  const Path& path() const { return path_; }
  std::size_t refinement() const { return s_; }
  std::size_t rows() const { return next_.size(); }
  std::size_t num_nodes() const { return next_.size(); }
  std::size_t num_tests() const;
  bool has_interval(std::size_t row) const { return next_[row] != npos; }

  double param(Index i) const { return params_[i.row * (s_ + 1) + i.col]; }
  complex point(Index i) const { return points_[i.row * (s_ + 1) + i.col]; }

  /// Result of promoting a test point: the new node and every test slot whose point was
  /// rewritten or created.
  struct Promotion {
    Index node;
    std::vector<Index> changed;
  };

  /// Turns a test point into a node; both intervals adjacent to it are refilled with
  /// fresh equally spaced test points. Returns nullopt (and leaves the path unchanged)
  /// when the new points would lie closer than 1e-14 * diameter to each other.
  std::optional<Promotion> add_node(Index test);

  /// Indices in parameter order.
  std::vector<Index> indices(Which which) const;
  std::vector<complex> collect(Which which) const;
  std::vector<double> params(Which which) const;

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
  double interval_end(std::size_t row) const;
  void fill_row(std::size_t row, double start, double end);
  std::size_t append_row();

  Path path_;
  std::size_t s_;
  std::size_t capacity_;
  std::vector<double> params_;
  std::vector<complex> points_;
  std::vector<std::size_t> next_;
};

/// Any domain the greedy engine accepts: a curve/path, a region, or a fixed point set.
using PointSet = std::vector<complex>;
using Domain = std::variant<Path, Region, PointSet>;

}  // namespace rfa
