#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rfa/rational.hpp"

namespace rfa {

/// Rational interpolant as a Thiele continued fraction
///
///   r(z) = d_1 + (z - z_1) / (d_2 + (z - z_2) / (d_3 + ...)).
///
/// The coefficients are inverse differences, so appending a node costs O(n) and leaves
/// the existing coefficients untouched.
class ThieleInterpolant {
 public:
  ThieleInterpolant() = default;
  /// Builds the interpolant by appending the nodes in order. Throws UnreachableNode if
  /// an inverse difference breaks down.
  ThieleInterpolant(std::span<const complex> nodes, std::span<const complex> values);
  /// Restores an interpolant from stored coefficients (no recomputation).
  static ThieleInterpolant from_weights(std::vector<complex> nodes, std::vector<complex> values,
                                        std::vector<complex> weights);

  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }
  const std::vector<complex>& nodes() const { return nodes_; }
  const std::vector<complex>& values() const { return values_; }
  const std::vector<complex>& weights() const { return weights_; }

  complex operator()(complex z) const;
  complex eval(complex z) const { return (*this)(z); }

  /// Nominal type: (m, m) when n = 2m - 1 and (m + 1, m) when n = 2m.
  Degrees degrees() const;
  std::size_t degree() const { return degrees().denominator; }

  /// Poles of an equivalent barycentric interpolant fitted to samples of r.
  std::vector<complex> poles() const;
  /// Residues by trapezoid quadrature around each pole.
  std::vector<PoleResidue> residues() const;
  std::vector<complex> roots() const;

  ThieleInterpolant truncated(std::size_t n) const;

  /// Appends a node; existing weights are unchanged. Throws UnreachableNode on breakdown.
  void add_node(complex z, complex f);

 private:
  std::vector<complex> nodes_, values_, weights_;
};

/// An inverse difference broke down (u_k == d_k exactly) for the proposed node.
class UnreachableNode : public Error {
 public:
  using Error::Error;
};

/// Continued-fraction coefficient a new node (z, f) would receive, or nullopt when the
/// inverse-difference recurrence breaks down.
std::optional<complex> next_weight(const ThieleInterpolant& r, complex z, complex f);

inline void add_nodes(ThieleInterpolant& r, complex z, complex f) { r.add_node(z, f); }

/// Test points and function values at which a Thiele interpolant is monitored.
class ThieleTestSet {
 public:
  std::size_t size() const { return points_.size(); }
  const std::vector<complex>& points() const { return points_; }
  const std::vector<complex>& values() const { return values_; }
  bool active(std::size_t row) const { return active_[row]; }

  std::size_t append(std::span<const complex> points, std::span<const complex> values);
  void replace(std::size_t row, complex point, complex value);
  void deactivate(std::size_t row);

 private:
  std::vector<complex> points_, values_;
  std::vector<bool> active_;
};

/// Appends the new test points and returns r at every row (NaN for inactive rows).
std::vector<complex> update_test_values(const ThieleInterpolant& r, ThieleTestSet& tests,
                                        std::span<const complex> new_points,
                                        std::span<const complex> new_values);

}  // namespace rfa
