#pragma once

#include <span>
#include <string>
#include <vector>

#include "rfa/linalg.hpp"
#include "rfa/rational.hpp"

namespace rfa {

/// Vandermonde–Arnoldi orthonormalization of the monomials 1, t, ..., t^N sampled at
/// m points, under the inner product <a, b> = a^* b / m.
///
/// Q (m x (N+1)) holds the orthonormal vectors, with a first column of ones. The upper
/// Hessenberg H ((N+1) x N) records the recurrence, which is all that is needed to
/// evaluate the basis at new points, so Q may be dropped after fitting.
class ArnoldiBasis {
 public:
  /// Throws LinalgError naming the degree at which the samples become rank deficient.
  ArnoldiBasis(std::span<const complex> points, std::size_t degree);
  /// Basis known only through its Hessenberg matrix (e.g. after deserialization).
  static ArnoldiBasis from_hessenberg(linalg::Matrix H);

  std::size_t degree() const { return static_cast<std::size_t>(H_.cols()); }
  std::size_t dimension() const { return degree() + 1; }
  const linalg::Matrix& hessenberg() const { return H_; }
  /// Empty once dropped.
  const linalg::Matrix& basis() const { return Q_; }
  bool has_samples() const { return Q_.size() > 0; }
  void drop_samples() { Q_.resize(0, 0); }

  /// q_0(z), ..., q_N(z) by replaying the recurrence.
  linalg::Vector eval_basis(complex z) const;

 private:
  ArnoldiBasis() = default;
  linalg::Matrix H_, Q_;
};

/// Polynomial with coefficients in an Arnoldi basis.
class ArnoldiPolynomial {
 public:
  ArnoldiPolynomial(ArnoldiBasis basis, std::vector<complex> coefficients);

  const ArnoldiBasis& basis() const { return basis_; }
  ArnoldiBasis& basis() { return basis_; }
  const std::vector<complex>& coefficients() const { return coef_; }

  complex operator()(complex z) const;
  /// Value and derivative at z.
  std::pair<complex, complex> eval_with_derivative(complex z) const;

 private:
  ArnoldiBasis basis_;
  std::vector<complex> coef_;
};

complex eval_poly(const ArnoldiPolynomial& p, complex z);

/// Least-squares polynomial fit of values sampled at the basis points.
ArnoldiPolynomial fit(const ArnoldiBasis& basis, std::span<const complex> values);

/// r(z) = p(z) + sum_j c_j / (z - zeta_j).
class PartialFractions {
 public:
  PartialFractions(ArnoldiPolynomial poly, std::vector<complex> poles, std::vector<complex> residues);

  const ArnoldiPolynomial& polynomial() const { return poly_; }
  const std::vector<complex>& pole_list() const { return poles_; }
  const std::vector<complex>& residue_list() const { return residues_; }
  /// Non-fatal diagnostics from fitting (e.g. ill-conditioning).
  const std::vector<std::string>& warnings() const { return warnings_; }
  void add_warning(std::string w) { warnings_.push_back(std::move(w)); }

  /// Infinite at a pole.
  complex operator()(complex z) const;
  complex eval(complex z) const { return (*this)(z); }

  /// (N + nu, nu) for polynomial degree N and nu poles.
  Degrees degrees() const;
  std::size_t degree() const { return degrees().denominator; }
  std::vector<complex> poles() const { return poles_; }
  std::vector<PoleResidue> residues() const;
  /// Newton from 4(N + nu) starting points on a circle around the samples; each accepted
  /// root satisfies |r(root)| <= 1e-8 * scale.
  std::vector<complex> roots() const;

 private:
  ArnoldiPolynomial poly_;
  std::vector<complex> poles_, residues_;
  std::vector<std::string> warnings_;
};

/// Least-squares fit of p (degree N) plus simple poles at `poles` to samples (points, values),
/// through a column-pivoted QR of [Q | C] with C_ij = 1 / (t_i - zeta_j).
PartialFractions fit_least_squares(std::span<const complex> points, std::span<const complex> values,
                                   std::span<const complex> poles, std::size_t degree);

}  // namespace rfa
