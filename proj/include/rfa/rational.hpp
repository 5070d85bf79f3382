#pragma once

#include <cmath>
#include <numbers>
#include <utility>

#include "rfa/common.hpp"

namespace rfa {

struct PoleResidue {
  complex pole;
  complex residue;
  /// Set when the residue could not be formed reliably (e.g. a near-double pole).
  bool flagged = false;
};

/// Numerator and denominator degree bounds of a rational function.
struct Degrees {
  std::size_t numerator = 0;
  std::size_t denominator = 0;
  bool operator==(const Degrees&) const = default;
};

/// Residue of `r` at `s` by the trapezoid rule on the circle |z - s| = radius.
///
/// The point count starts at 16 and doubles until two successive estimates agree to
/// 1e-10 relative to the integrand magnitude, up to 1024 points. Throws
/// ConvergenceError (carrying the last estimate) otherwise.
template <class F>
complex trapezoid_residue(const F& r, complex s, double radius) {
  if (!(radius > 0)) throw DomainError("trapezoid_residue: radius must be positive");
  auto estimate = [&](int n, double& magnitude) {
    complex sum = 0;
    for (int k = 0; k < n; ++k) {
      const complex e = std::polar(radius, 2 * std::numbers::pi * k / n);
      const complex term = r(s + e) * e;
      magnitude = std::max(magnitude, std::abs(term));
      sum += term;
    }
    return sum / double(n);
  };
  double magnitude = 0;
  complex prev = estimate(16, magnitude);
  for (int n = 32; n <= 1024; n *= 2) {
    const complex next = estimate(n, magnitude);
    if (!is_finite(next)) break;
    if (std::abs(next - prev) <= 1e-10 * std::max(std::abs(next), magnitude)) return next;
    prev = next;
  }
  throw ConvergenceError("trapezoid_residue did not converge with 1024 points", prev);
}

}  // namespace rfa
