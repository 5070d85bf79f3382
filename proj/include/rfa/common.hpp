#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace rfa {

using complex = std::complex<double>;

inline bool is_finite(complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the documented domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A dense kernel (SVD, eigensolver, factorization) failed.
class LinalgError : public Error {
 public:
  using Error::Error;
};

/// Iterative quadrature that ran out of refinement levels. Carries the last estimate.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, complex last_estimate)
      : Error(what), last_estimate_(last_estimate) {}
  complex last_estimate() const { return last_estimate_; }

 private:
  complex last_estimate_;
};

/// Counts of the expensive dense kernels, used to compare the per-node cost of the
/// greedy methods. Counters are thread-local.
struct KernelCounters {
  std::size_t svd = 0;
  std::size_t eig = 0;
  std::size_t qr = 0;
};

KernelCounters& kernel_counters();
inline void reset_kernel_counters() { kernel_counters() = {}; }

}  // namespace rfa
