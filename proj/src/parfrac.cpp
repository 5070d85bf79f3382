#include "rfa/parfrac.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace rfa {

namespace {
constexpr double inf = std::numeric_limits<double>::infinity();
}

// --------------------------------------------------------------------- ArnoldiBasis

ArnoldiBasis::ArnoldiBasis(std::span<const complex> points, std::size_t degree) {
  const auto m = static_cast<Eigen::Index>(points.size());
  const auto N = static_cast<Eigen::Index>(degree);
  if (m < N + 1) throw InvalidInput("ArnoldiBasis: need at least degree + 1 points");
  const Eigen::Map<const linalg::Vector> t(points.data(), m);
  const double scale = t.cwiseAbs().maxCoeff();

  Q_ = linalg::Matrix::Zero(m, N + 1);
  H_ = linalg::Matrix::Zero(N + 1, N);
  Q_.col(0).setOnes();
  for (Eigen::Index j = 0; j < N; ++j) {
    linalg::Vector v = t.cwiseProduct(Q_.col(j));
    for (Eigen::Index k = 0; k <= j; ++k) {
      H_(k, j) = Q_.col(k).dot(v) / double(m);  // dot conjugates its first argument
      v -= H_(k, j) * Q_.col(k);
    }
    const double h = v.norm() / std::sqrt(double(m));
    if (!(h > 1e-14 * scale))
      throw LinalgError("ArnoldiBasis: sample points are rank deficient at degree " + std::to_string(j + 1));
    H_(j + 1, j) = h;
    Q_.col(j + 1) = v / h;
  }
}

ArnoldiBasis ArnoldiBasis::from_hessenberg(linalg::Matrix H) {
  if (H.rows() != H.cols() + 1) throw InvalidInput("ArnoldiBasis: Hessenberg must be (N+1) x N");
  ArnoldiBasis b;
  b.H_ = std::move(H);
  return b;
}

linalg::Vector ArnoldiBasis::eval_basis(complex z) const {
  const Eigen::Index N = H_.cols();
  linalg::Vector q(N + 1);
  q(0) = 1;
  for (Eigen::Index j = 0; j < N; ++j) {
    complex v = z * q(j);
    for (Eigen::Index k = 0; k <= j; ++k) v -= H_(k, j) * q(k);
    q(j + 1) = v / H_(j + 1, j);
  }
  return q;
}

// --------------------------------------------------------------- ArnoldiPolynomial

ArnoldiPolynomial::ArnoldiPolynomial(ArnoldiBasis basis, std::vector<complex> coefficients)
    : basis_(std::move(basis)), coef_(std::move(coefficients)) {
  if (coef_.size() != basis_.dimension())
    throw InvalidInput("ArnoldiPolynomial: need one coefficient per basis vector");
}

complex ArnoldiPolynomial::operator()(complex z) const { return eval_poly(*this, z); }

complex eval_poly(const ArnoldiPolynomial& p, complex z) {
  const auto& H = p.basis().hessenberg();
  const auto& a = p.coefficients();
  const Eigen::Index N = H.cols();
  std::vector<complex> q(static_cast<std::size_t>(N) + 1);
  complex y = a[0];
  q[0] = 1;
  for (Eigen::Index j = 0; j < N; ++j) {
    complex v = z * q[j];
    for (Eigen::Index k = 0; k <= j; ++k) v -= H(k, j) * q[k];
    q[j + 1] = v / H(j + 1, j);
    y += a[j + 1] * q[j + 1];
  }
  return y;
}

std::pair<complex, complex> ArnoldiPolynomial::eval_with_derivative(complex z) const {
  const auto& H = basis_.hessenberg();
  const Eigen::Index N = H.cols();
  std::vector<complex> q(static_cast<std::size_t>(N) + 1), dq(q.size());
  q[0] = 1;
  dq[0] = 0;
  complex y = coef_[0], dy = 0;
  for (Eigen::Index j = 0; j < N; ++j) {
    complex v = z * q[j], dv = q[j] + z * dq[j];
    for (Eigen::Index k = 0; k <= j; ++k) {
      v -= H(k, j) * q[k];
      dv -= H(k, j) * dq[k];
    }
    q[j + 1] = v / H(j + 1, j);
    dq[j + 1] = dv / H(j + 1, j);
    y += coef_[j + 1] * q[j + 1];
    dy += coef_[j + 1] * dq[j + 1];
  }
  return {y, dy};
}

ArnoldiPolynomial fit(const ArnoldiBasis& basis, std::span<const complex> values) {
  if (!basis.has_samples()) throw InvalidInput("fit: basis has no sample vectors");
  const auto& Q = basis.basis();
  if (static_cast<Eigen::Index>(values.size()) != Q.rows()) throw InvalidInput("fit: one value per sample point");
  const Eigen::Map<const linalg::Vector> f(values.data(), Q.rows());
  ++kernel_counters().qr;
  const linalg::Vector a = Q.colPivHouseholderQr().solve(f);
  return ArnoldiPolynomial(basis, {a.data(), a.data() + a.size()});
}

// ----------------------------------------------------------------- PartialFractions

PartialFractions::PartialFractions(ArnoldiPolynomial poly, std::vector<complex> poles,
                                   std::vector<complex> residues)
    : poly_(std::move(poly)), poles_(std::move(poles)), residues_(std::move(residues)) {
  if (poles_.size() != residues_.size()) throw InvalidInput("PartialFractions: one residue per pole");
  for (std::size_t i = 0; i < poles_.size(); ++i)
    for (std::size_t j = i + 1; j < poles_.size(); ++j)
      if (poles_[i] == poles_[j]) throw InvalidInput("PartialFractions: repeated pole");
}

complex PartialFractions::operator()(complex z) const {
  complex y = eval_poly(poly_, z);
  for (std::size_t j = 0; j < poles_.size(); ++j) {
    if (z == poles_[j]) return {inf, 0};
    y += residues_[j] / (z - poles_[j]);
  }
  return y;
}

Degrees PartialFractions::degrees() const {
  const std::size_t N = poly_.basis().degree(), nu = poles_.size();
  return {N + nu, nu};
}

std::vector<PoleResidue> PartialFractions::residues() const {
  std::vector<PoleResidue> out;
  for (std::size_t j = 0; j < poles_.size(); ++j) out.push_back({poles_[j], residues_[j], false});
  return out;
}

std::vector<complex> PartialFractions::roots() const {
  const auto& H = poly_.basis().hessenberg();
  const std::size_t N = poly_.basis().degree(), nu = poles_.size();
  if (N + nu == 0) return {};

  complex center = 0;
  double radius = 0;
  if (N >= 1) {
    center = H(0, 0);
    radius = 2 * std::abs(H(1, 0));
  } else {
    for (auto p : poles_) center += p;
    center /= double(nu);
  }
  for (auto p : poles_) radius = std::max(radius, 1.5 * std::abs(p - center));
  radius = std::max(radius, 1.0);

  auto value_and_slope = [&](complex z) {
    auto [y, dy] = poly_.eval_with_derivative(z);
    for (std::size_t j = 0; j < nu; ++j) {
      const complex q = 1.0 / (z - poles_[j]);
      y += residues_[j] * q;
      dy -= residues_[j] * q * q;
    }
    return std::pair{y, dy};
  };

  const std::size_t count = std::max<std::size_t>(4, 4 * (N + nu));
  std::vector<complex> starts;
  double scale = 0;
  for (std::size_t k = 0; k < count; ++k) {
    starts.push_back(center + std::polar(radius, 2 * std::numbers::pi * (k + 0.5) / double(count)));
    scale = std::max(scale, std::abs((*this)(starts.back())));
  }
  if (!(scale > 0)) scale = 1;

  std::vector<complex> found;
  for (complex z : starts) {
    bool converged = false;
    for (int it = 0; it < 80 && !converged; ++it) {
      const auto [y, dy] = value_and_slope(z);
      if (!is_finite(y) || !is_finite(dy) || dy == 0.0) break;
      const complex step = y / dy;
      z -= step;
      converged = std::abs(step) <= 1e-14 * (std::abs(z) + radius);
    }
    if (!converged || !is_finite(z) || std::abs(z - center) > 100 * radius) continue;
    if (!(std::abs((*this)(z)) <= 1e-8 * scale)) continue;
    const bool duplicate =
        std::ranges::any_of(found, [&](complex w) { return std::abs(w - z) <= 1e-8 * radius; });
    if (!duplicate) found.push_back(z);
  }
  std::ranges::sort(found, [](complex a, complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return found;
}

PartialFractions fit_least_squares(std::span<const complex> points, std::span<const complex> values,
                                   std::span<const complex> poles, std::size_t degree) {
  const auto m = static_cast<Eigen::Index>(points.size());
  const auto nu = static_cast<Eigen::Index>(poles.size());
  const auto N = static_cast<Eigen::Index>(degree);
  if (static_cast<Eigen::Index>(values.size()) != m) throw InvalidInput("fit_least_squares: one value per point");
  if (m < N + 1 + nu) throw InvalidInput("fit_least_squares: too few sample points for the model");
  double scale = 0;
  for (auto t : points) scale = std::max(scale, std::abs(t));
  for (auto z : poles)
    for (auto t : points)
      if (std::abs(z - t) <= 1e-13 * std::max(scale, 1.0))
        throw InvalidInput("fit_least_squares: a prescribed pole lies on a sample point");

  ArnoldiBasis basis(points, degree);
  linalg::Matrix A(m, N + 1 + nu);
  A.leftCols(N + 1) = basis.basis();
  for (Eigen::Index j = 0; j < nu; ++j)
    for (Eigen::Index i = 0; i < m; ++i) A(i, N + 1 + j) = 1.0 / (points[i] - poles[j]);

  ++kernel_counters().qr;
  Eigen::ColPivHouseholderQR<linalg::Matrix> qr(A);
  const Eigen::Map<const linalg::Vector> f(values.data(), m);
  const linalg::Vector x = qr.solve(f);

  const auto R = qr.matrixR();
  const double r0 = std::abs(R(0, 0));
  const double rn = std::abs(R(A.cols() - 1, A.cols() - 1));
  PartialFractions pf(ArnoldiPolynomial(std::move(basis), {x.data(), x.data() + N + 1}),
                      {poles.begin(), poles.end()}, {x.data() + N + 1, x.data() + x.size()});
  if (!(rn > 0) || r0 / rn > 1e14) pf.add_warning("least-squares matrix is ill-conditioned (estimate > 1e14)");
  return pf;
}

}  // namespace rfa
