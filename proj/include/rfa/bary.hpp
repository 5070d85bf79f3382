#pragma once

#include <span>
#include <vector>

#include "rfa/linalg.hpp"
#include "rfa/rational.hpp"

namespace rfa {

class LoewnerWorkspace;

/// Rational interpolant in barycentric form
///
///   r(z) = sum_j w_j y_j / (z - z_j)  /  sum_j w_j / (z - z_j).
///
/// r(z_j) = y_j for every node whose weight is nonzero.
class BarycentricInterpolant {
 public:
  BarycentricInterpolant() = default;
  /// Throws InvalidInput on length mismatch, repeated nodes or all-zero weights.
  BarycentricInterpolant(std::vector<complex> nodes, std::vector<complex> values,
                         std::vector<complex> weights);

  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }
  const std::vector<complex>& nodes() const { return nodes_; }
  const std::vector<complex>& values() const { return values_; }
  const std::vector<complex>& weights() const { return weights_; }

  /// Exact node hits return the stored value.
  complex operator()(complex z) const;
  complex eval(complex z) const { return (*this)(z); }

  Degrees degrees() const;
  std::size_t degree() const { return degrees().denominator; }

  /// Finite poles from the arrowhead pencil, polished by one Newton step.
  std::vector<complex> poles() const;
  std::vector<complex> roots() const;
  std::vector<PoleResidue> residues() const;

  /// Prefix of the first n nodes with the given weights; used to rebuild earlier iterates.
  BarycentricInterpolant truncated(std::size_t n, std::vector<complex> weights) const;

 private:
  friend void add_nodes(BarycentricInterpolant&, LoewnerWorkspace&, std::span<const complex>,
                        std::span<const complex>);
  friend std::vector<complex> update_test_values(LoewnerWorkspace&, BarycentricInterpolant&,
                                                 std::span<const complex>, std::span<const complex>);
  friend void set_weights(BarycentricInterpolant&, std::span<const complex>);

  double scale() const;

  std::vector<complex> nodes_, values_, weights_;
};

/// Replaces the weights (same length as the nodes).
void set_weights(BarycentricInterpolant& r, std::span<const complex> w);

/// Test points, node data, cached Cauchy matrix C_ij = 1/(t_i - z_j) and the Loewner matrix
///
///   L_ij = -(f(t_i) - y_j) / (t_i - z_j).
///
/// Rows are addressed by a stable index. A row can be deactivated (its test point
/// became a node) or overwritten; inactive rows are stored as zeros.
class LoewnerWorkspace {
 public:
  std::size_t num_tests() const { return tests_.size(); }
  std::size_t num_nodes() const { return nodes_.size(); }
  const std::vector<complex>& test_points() const { return tests_; }
  const std::vector<complex>& test_values() const { return test_values_; }
  const std::vector<complex>& nodes() const { return nodes_; }
  bool active(std::size_t row) const { return active_[row]; }

  /// Appends rows; returns the index of the first one.
  std::size_t append_tests(std::span<const complex> points, std::span<const complex> values);
  void replace_test(std::size_t row, complex point, complex value);
  void deactivate_test(std::size_t row);
  void append_nodes(std::span<const complex> nodes, std::span<const complex> values);

  const linalg::Matrix& loewner() const { return loewner_; }
  const linalg::Matrix& cauchy() const { return cauchy_; }

  /// Values of the interpolant with weights w at every row, from the cached Cauchy matrix.
  /// Inactive rows get NaN.
  std::vector<complex> predict(std::span<const complex> w) const;

 private:
  void fill_row(std::size_t row);

  std::vector<complex> tests_, test_values_, nodes_, node_values_;
  std::vector<bool> active_;
  linalg::Matrix cauchy_, loewner_;
};

/// Least-squares weights: the unit right singular vector of L for its smallest singular value.
std::vector<complex> solve_weights(const linalg::Matrix& L);

/// L * w, i.e. the linearized residual sum_j w_j (y_j - f(t)) / (t - z_j) at every row.
std::vector<complex> linearized_residual(const LoewnerWorkspace& ws, std::span<const complex> w);

/// Appends the given test points, re-solves the weights of r, and returns r at every row
/// of the workspace (NaN for inactive rows).
std::vector<complex> update_test_values(LoewnerWorkspace& ws, BarycentricInterpolant& r,
                                        std::span<const complex> new_points,
                                        std::span<const complex> new_values);

/// Extends the interpolant and the workspace by new nodes. The weights are zero-filled
/// and must be recomputed by update_test_values before evaluating r.
void add_nodes(BarycentricInterpolant& r, LoewnerWorkspace& ws, std::span<const complex> nodes,
               std::span<const complex> values);

}  // namespace rfa
