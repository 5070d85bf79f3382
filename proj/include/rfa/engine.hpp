#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rfa/bary.hpp"
#include "rfa/domain.hpp"
#include "rfa/parfrac.hpp"
#include "rfa/thiele.hpp"

namespace rfa {

enum class Method { barycentric, thiele };

using Function = std::function<complex(complex)>;
/// Predicate deciding whether a pole location is acceptable.
using Allowed = std::function<bool(complex)>;

Allowed allow_all();

struct EngineConfig {
  Method method = Method::barycentric;
  /// Target for max |f - r| relative to max |f| over the test points.
  double tol = 1e-13;
  /// Maximum number of nodes.
  std::size_t max_iter = 150;
  /// Stagnation window, in iterations.
  std::size_t stagnation = 10;
  /// Empty means the domain default (see allowed_default).
  Allowed allowed;
  /// Initial discretization of a continuum boundary; 0 picks 33 (open) or 32 (closed).
  std::size_t initial_nodes = 0;
  std::size_t refinement = 3;
  std::size_t capacity = DiscretizedPath::default_capacity;

  void validate() const;
};

enum class PoleCheck { allowed, disallowed, unchecked };

struct IterationRecord {
  std::size_t nodes = 0;
  double max_error = 0;
  PoleCheck allowed = PoleCheck::unchecked;
  bool chosen = false;
};

struct ConvergenceHistory {
  std::vector<IterationRecord> records;

  std::size_t size() const { return records.size(); }
  /// Index of the record flagged as the returned result.
  std::optional<std::size_t> chosen() const;
};

using Interpolant = std::variant<BarycentricInterpolant, ThieleInterpolant>;
using Fit = std::variant<BarycentricInterpolant, ThieleInterpolant, PartialFractions>;

complex evaluate(const Fit& fit, complex z);
std::vector<complex> poles(const Fit& fit);
std::vector<PoleResidue> residues(const Fit& fit);
std::vector<complex> roots(const Fit& fit);
Degrees degrees(const Fit& fit);
Fit to_fit(Interpolant r);

/// Outcome of an approximation run: the function, its domain, the returned rational
/// function and the iteration history.
struct Approximation {
  Function f;
  Domain domain;
  Fit fit;
  ConvergenceHistory history;
  /// Test points in use when the iteration stopped.
  std::vector<complex> test_points;
  /// Continuum domains only: sorted boundary parameters of all nodes and test points.
  std::vector<double> params;
  std::vector<std::string> warnings;

  complex operator()(complex z) const { return evaluate(fit, z); }
};

/// No iterate had all of its poles allowed. Carries the full history.
class NoAllowedIterate : public Error {
 public:
  NoAllowedIterate(const std::string& what, ConvergenceHistory history)
      : Error(what), history_(std::move(history)) {}
  const ConvergenceHistory& history() const { return history_; }

 private:
  ConvergenceHistory history_;
};

/// Greedy (AAA or Thiele) interpolation with an adaptively refined boundary discretization.
Approximation approximate_continuum(Function f, const Path& path, EngineConfig cfg = {});
/// Nodes on the boundary; poles inside the region are disallowed by default.
Approximation approximate_continuum(Function f, const Region& region, EngineConfig cfg = {});
/// Greedy interpolation with the points as the fixed test set and node candidates.
Approximation approximate_discrete(Function f, std::span<const complex> points, EngineConfig cfg = {});
/// Dispatches on the domain alternative.
Approximation approximate(Function f, const Domain& domain, EngineConfig cfg = {});
/// Greedy interpolation of tabulated values y at points z.
Interpolant approximate_values(std::span<const complex> y, std::span<const complex> z, EngineConfig cfg = {});

/// Least squares with prescribed poles. The path starts with `init` equally spaced
/// points, and intervals are split until each is no longer than half the distance from
/// its ends to the nearest pole.
Approximation approximate_prescribed(Function f, const Path& path, std::span<const complex> poles,
                                     std::size_t degree, std::size_t init = 400);
Approximation approximate_prescribed(Function f, std::span<const complex> points,
                                     std::span<const complex> poles, std::size_t degree);
PartialFractions approximate_prescribed(std::span<const complex> y, std::span<const complex> z,
                                        std::span<const complex> poles, std::size_t degree);

/// True once the best error of the last `window` iterations is at least 0.95 times the
/// best of the window before it, provided the best error so far is below 1e-2 * scale.
bool stagnation_check(std::span<const double> errors, std::size_t window, double scale = 1.0);

/// Curves and paths: poles on the curve are disallowed. Regions: poles inside the region
/// are disallowed. Point sets: everything is allowed.
Allowed allowed_default(const Domain& domain);

/// Lawson iteration on the barycentric weights with the nodes frozen. Returns the iterate
/// (including the input) with the smallest max/median error ratio over the test points.
Approximation minimax(const Approximation& a, std::size_t iterations);

struct CheckResult {
  std::vector<complex> points;
  std::vector<double> errors;
  double max_error = 0;
};

/// |f - r| on a check grid: ten times the final boundary resolution for continuum
/// domains, the point set itself for discrete ones.
CheckResult check(const Approximation& a);

/// The check grid used by check().
std::vector<complex> check_points(const Approximation& a);

}  // namespace rfa
