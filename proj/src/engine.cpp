#include "rfa/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <unordered_map>

namespace rfa {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

// ------------------------------------------------------------------ interpolant state

// Interpolant under construction together with its monitored test rows.
class Model {
 public:
  virtual ~Model() = default;
  virtual void append_tests(std::span<const complex> points, std::span<const complex> values) = 0;
  virtual void replace_test(std::size_t row, complex point, complex value) = 0;
  virtual void deactivate_test(std::size_t row) = 0;
  /// False when (z, f) cannot become the next node.
  virtual bool accepts(complex z, complex f) const = 0;
  virtual void add_node(complex z, complex f) = 0;
  /// Current interpolant at every row (NaN for inactive rows).
  virtual std::vector<complex> predict() = 0;
  virtual std::size_t size() const = 0;
  virtual Interpolant snapshot() const = 0;
};

class BaryModel final : public Model {
 public:
  void append_tests(std::span<const complex> p, std::span<const complex> v) override { ws_.append_tests(p, v); }
  void replace_test(std::size_t row, complex p, complex v) override { ws_.replace_test(row, p, v); }
  void deactivate_test(std::size_t row) override { ws_.deactivate_test(row); }
  bool accepts(complex, complex) const override { return true; }
  void add_node(complex z, complex f) override {
    const complex zs[1] = {z}, fs[1] = {f};
    add_nodes(r_, ws_, zs, fs);
  }
  std::vector<complex> predict() override { return update_test_values(ws_, r_, {}, {}); }
  std::size_t size() const override { return r_.size(); }
  Interpolant snapshot() const override { return r_; }

 private:
  BarycentricInterpolant r_;
  LoewnerWorkspace ws_;
};

class ThieleModel final : public Model {
 public:
  void append_tests(std::span<const complex> p, std::span<const complex> v) override { tests_.append(p, v); }
  void replace_test(std::size_t row, complex p, complex v) override { tests_.replace(row, p, v); }
  void deactivate_test(std::size_t row) override { tests_.deactivate(row); }
  bool accepts(complex z, complex f) const override { return next_weight(r_, z, f).has_value(); }
  void add_node(complex z, complex f) override { r_.add_node(z, f); }
  std::vector<complex> predict() override { return update_test_values(r_, tests_, {}, {}); }
  std::size_t size() const override { return r_.size(); }
  Interpolant snapshot() const override { return r_; }

 private:
  ThieleInterpolant r_;
  ThieleTestSet tests_;
};

std::unique_ptr<Model> make_model(Method m) {
  if (m == Method::thiele) return std::make_unique<ThieleModel>();
  return std::make_unique<BaryModel>();
}

// ------------------------------------------------------------------ test point sources

struct Slot {
  std::size_t id;
  complex point;
};

// Supplier of test points and node candidates. Slots are stable ids.
class Source {
 public:
  virtual ~Source() = default;
  virtual std::vector<Slot> initial() = 0;
  /// Makes the slot a node. Returns the slots whose point changed or appeared, or
  /// nullopt when the promotion is refused.
  virtual std::optional<std::vector<Slot>> promote(std::size_t id) = 0;
};

class ContinuumSource final : public Source {
 public:
  explicit ContinuumSource(DiscretizedPath& dp) : dp_(dp), stride_(dp.refinement() + 1) {}

  std::vector<Slot> initial() override {
    std::vector<Slot> out;
    for (const auto& i : dp_.indices(DiscretizedPath::Which::all)) out.push_back(slot(i));
    return out;
  }

  std::optional<std::vector<Slot>> promote(std::size_t id) override {
    const DiscretizedPath::Index i{id / stride_, id % stride_};
    // An initial grid node: it simply becomes an interpolation node.
    if (i.col == 0) return std::vector<Slot>{};
    auto p = dp_.add_node(i);
    if (!p) return std::nullopt;
    std::vector<Slot> out;
    for (const auto& c : p->changed) out.push_back(slot(c));
    return out;
  }

 private:
  Slot slot(DiscretizedPath::Index i) const { return {i.row * stride_ + i.col, dp_.point(i)}; }
  DiscretizedPath& dp_;
  std::size_t stride_;
};

class DiscreteSource final : public Source {
 public:
  explicit DiscreteSource(std::span<const complex> pts) : pts_(pts) {}
  std::vector<Slot> initial() override {
    std::vector<Slot> out;
    for (std::size_t k = 0; k < pts_.size(); ++k) out.push_back({k, pts_[k]});
    return out;
  }
  std::optional<std::vector<Slot>> promote(std::size_t) override { return std::vector<Slot>{}; }

 private:
  std::span<const complex> pts_;
};

// ------------------------------------------------------------------ greedy loop

using Evaluator = std::function<complex(std::size_t slot, complex point)>;

struct GreedyResult {
  Interpolant fit;
  ConvergenceHistory history;
  std::vector<complex> tests;
  std::vector<std::string> warnings;
};

bool always_allowed(complex) { return true; }

bool permits_everything(const Allowed& allowed) {
  const auto* fn = allowed.target<bool (*)(complex)>();
  return fn && *fn == &always_allowed;
}

PoleCheck check_poles(const Interpolant& r, const Allowed& allowed) {
  // Skipping the pole computation keeps Thiele steps free of dense kernels.
  if (permits_everything(allowed)) return PoleCheck::allowed;
  const auto ps = std::visit([](const auto& x) { return x.poles(); }, r);
  for (auto p : ps)
    if (!allowed(p)) return PoleCheck::disallowed;
  return PoleCheck::allowed;
}

GreedyResult greedy(const Evaluator& f, Source& src, const EngineConfig& cfg, const Allowed& allowed) {
  auto model = make_model(cfg.method);

  // Mirror of the model's rows.
  std::vector<std::size_t> row_slot;
  std::vector<complex> pts, vals;
  std::vector<bool> active;
  std::unordered_map<std::size_t, std::size_t> slot_row;
  double node_scale = 0;

  auto add_rows = [&](const std::vector<Slot>& slots) {
    std::vector<complex> np, nv;
    for (const auto& s : slots) {
      const complex v = f(s.id, s.point);
      slot_row[s.id] = row_slot.size();
      row_slot.push_back(s.id);
      pts.push_back(s.point);
      vals.push_back(v);
      active.push_back(is_finite(v));
      np.push_back(s.point);
      nv.push_back(is_finite(v) ? v : complex(0));
    }
    if (np.empty()) return;
    const std::size_t first = row_slot.size() - np.size();
    model->append_tests(np, nv);
    for (std::size_t r = first; r < row_slot.size(); ++r)
      if (!active[r]) model->deactivate_test(r);
  };

  // Promotes a test row to a node. False when the method or the discretization refuses.
  auto promote = [&](std::size_t row) {
    const complex z = pts[row], fz = vals[row];
    if (!model->accepts(z, fz)) return false;
    const auto changed = src.promote(row_slot[row]);
    if (!changed) return false;
    bool row_reused = false;
    std::vector<Slot> fresh;
    for (const auto& s : *changed) {
      const auto it = slot_row.find(s.id);
      if (it == slot_row.end()) {
        fresh.push_back(s);
        continue;
      }
      const std::size_t r = it->second;
      row_reused |= r == row;
      const complex v = f(s.id, s.point);
      pts[r] = s.point;
      vals[r] = v;
      active[r] = is_finite(v);
      if (active[r])
        model->replace_test(r, s.point, v);
      else
        model->deactivate_test(r);
    }
    if (!row_reused) {
      active[row] = false;
      model->deactivate_test(row);
    }
    add_rows(fresh);
    model->add_node(z, fz);
    node_scale = std::max(node_scale, std::abs(fz));
    return true;
  };

  add_rows(src.initial());

  std::vector<Interpolant> iterates;
  GreedyResult out;
  auto& records = out.history.records;
  std::vector<double> errs_hist;
  double best_allowed = inf;
  bool converged = false, exhausted = false;

  std::vector<double> err(pts.size(), 0.0);
  for (std::size_t r = 0; r < pts.size(); ++r) err[r] = active[r] ? std::abs(vals[r]) : 0.0;

  while (true) {
    // Candidates: active rows by decreasing error, ties to the lowest row.
    std::vector<std::size_t> order;
    for (std::size_t r = 0; r < active.size(); ++r)
      if (active[r]) order.push_back(r);
    if (order.empty()) {
      if (model->size() == 0) throw InvalidInput("approximate: f is not finite at any test point");
      exhausted = true;
      break;
    }
    std::ranges::stable_sort(order, [&](std::size_t a, std::size_t b) { return err[a] > err[b]; });
    bool promoted = false;
    for (auto r : order)
      if (promote(r)) {
        promoted = true;
        break;
      }
    if (!promoted) {
      exhausted = true;
      break;
    }

    const auto pred = model->predict();
    err.assign(pts.size(), 0.0);
    double max_err = 0, scale = 0;
    for (std::size_t r = 0; r < pts.size(); ++r) {
      if (!active[r]) continue;
      scale = std::max(scale, std::abs(vals[r]));
      const complex d = vals[r] - pred[r];
      err[r] = is_finite(d) ? std::abs(d) : inf;
      max_err = std::max(max_err, err[r]);
    }
    if (scale == 0) scale = node_scale;  // every test point has been promoted

    iterates.push_back(model->snapshot());
    const bool small = max_err <= cfg.tol * scale;
    PoleCheck ok = PoleCheck::unchecked;
    if (cfg.method == Method::barycentric || small || max_err < best_allowed)
      ok = check_poles(iterates.back(), allowed);
    records.push_back({model->size(), max_err, ok, false});
    errs_hist.push_back(max_err);
    if (ok == PoleCheck::allowed) best_allowed = std::min(best_allowed, max_err);

    if (small && ok == PoleCheck::allowed) {
      converged = true;
      break;
    }
    if (model->size() >= cfg.max_iter) break;
    if (stagnation_check(errs_hist, cfg.stagnation, scale)) break;
  }

  std::optional<std::size_t> chosen;
  for (std::size_t k = 0; k < records.size(); ++k)
    if (records[k].allowed == PoleCheck::allowed && (!chosen || records[k].max_error < records[*chosen].max_error))
      chosen = k;
  if (!chosen) throw NoAllowedIterate("approximate: no iterate has all of its poles allowed", out.history);
  records[*chosen].chosen = true;
  out.fit = iterates[*chosen];
  if (exhausted && !converged) out.warnings.push_back("all candidate points promoted without convergence");
  for (std::size_t r = 0; r < pts.size(); ++r)
    if (active[r]) out.tests.push_back(pts[r]);
  return out;
}

void require_distinct(std::span<const complex> z) {
  std::vector<complex> s(z.begin(), z.end());
  std::ranges::sort(s, [](complex a, complex b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); });
  for (std::size_t k = 1; k < s.size(); ++k)
    if (s[k] == s[k - 1]) throw InvalidInput("approximate: repeated point");
}

Approximation run_continuum(Function f, const Path& path, Domain domain, EngineConfig cfg) {
  cfg.validate();
  if (!cfg.allowed) cfg.allowed = allowed_default(domain);
  const std::size_t n0 = cfg.initial_nodes ? cfg.initial_nodes : (path.closed() ? 32 : 33);
  DiscretizedPath dp(path, n0, cfg.refinement, cfg.capacity);
  ContinuumSource src(dp);
  auto res = greedy([&](std::size_t, complex z) { return f(z); }, src, cfg, cfg.allowed);
  Approximation a{std::move(f), std::move(domain), to_fit(std::move(res.fit)), std::move(res.history),
                  std::move(res.tests), dp.params(DiscretizedPath::Which::all), std::move(res.warnings)};
  return a;
}

const Path* boundary_of(const Domain& d) {
  if (const auto* p = std::get_if<Path>(&d)) return p;
  if (const auto* r = std::get_if<Region>(&d)) return &r->boundary();
  return nullptr;
}

}  // namespace

// ------------------------------------------------------------------ public API

Allowed allow_all() { return &always_allowed; }

void EngineConfig::validate() const {
  if (!(tol > 0)) throw InvalidInput("config: tol must be positive");
  if (stagnation < 1) throw InvalidInput("config: stagnation window must be at least 1");
  if (max_iter < 1) throw InvalidInput("config: max_iter must be at least 1");
  if (refinement < 1) throw InvalidInput("config: refinement must be at least 1");
  if (initial_nodes == 1) throw InvalidInput("config: need at least 2 initial nodes");
}

std::optional<std::size_t> ConvergenceHistory::chosen() const {
  for (std::size_t k = 0; k < records.size(); ++k)
    if (records[k].chosen) return k;
  return std::nullopt;
}

complex evaluate(const Fit& fit, complex z) {
  return std::visit([z](const auto& r) { return r(z); }, fit);
}
std::vector<complex> poles(const Fit& fit) {
  return std::visit([](const auto& r) { return r.poles(); }, fit);
}
std::vector<PoleResidue> residues(const Fit& fit) {
  return std::visit([](const auto& r) { return r.residues(); }, fit);
}
std::vector<complex> roots(const Fit& fit) {
  return std::visit([](const auto& r) { return r.roots(); }, fit);
}
Degrees degrees(const Fit& fit) {
  return std::visit([](const auto& r) { return r.degrees(); }, fit);
}
Fit to_fit(Interpolant r) {
  return std::visit([](auto&& x) -> Fit { return std::move(x); }, std::move(r));
}

Allowed allowed_default(const Domain& domain) {
  return std::visit(overloaded{
                        [](const Path& p) -> Allowed {
                          const double tol = 1e-12 * p.diameter();
                          return [p, tol](complex z) { return dist_to_boundary(p, z) > tol; };
                        },
                        [](const Region& r) -> Allowed { return [r](complex z) { return !r.contains(z); }; },
                        [](const PointSet&) -> Allowed { return allow_all(); },
                    },
                    domain);
}

bool stagnation_check(std::span<const double> errors, std::size_t window, double scale) {
  if (window == 0 || errors.size() < 2 * window) return false;
  const auto best = [](auto first, auto last) { return *std::min_element(first, last); };
  const double best_all = best(errors.begin(), errors.end());
  if (!(best_all <= 1e-2 * scale)) return false;
  const auto end = errors.end();
  const double recent = best(end - window, end);
  const double before = best(end - 2 * window, end - window);
  return recent >= 0.95 * before;
}

Approximation approximate_continuum(Function f, const Path& path, EngineConfig cfg) {
  return run_continuum(std::move(f), path, Domain(path), std::move(cfg));
}

Approximation approximate_continuum(Function f, const Region& region, EngineConfig cfg) {
  return run_continuum(std::move(f), region.boundary(), Domain(region), std::move(cfg));
}

Approximation approximate_discrete(Function f, std::span<const complex> points, EngineConfig cfg) {
  cfg.validate();
  if (points.size() < 2) throw InvalidInput("approximate_discrete: need at least 2 points");
  for (auto z : points)
    if (!is_finite(z)) throw InvalidInput("approximate_discrete: non-finite point");
  require_distinct(points);
  if (!cfg.allowed) cfg.allowed = allow_all();
  DiscreteSource src(points);
  auto res = greedy([&](std::size_t, complex z) { return f(z); }, src, cfg, cfg.allowed);
  return Approximation{std::move(f),
                       Domain(PointSet(points.begin(), points.end())),
                       to_fit(std::move(res.fit)),
                       std::move(res.history),
                       std::move(res.tests),
                       {},
                       std::move(res.warnings)};
}

Approximation approximate(Function f, const Domain& domain, EngineConfig cfg) {
  return std::visit(overloaded{
                        [&](const Path& p) { return approximate_continuum(std::move(f), p, std::move(cfg)); },
                        [&](const Region& r) { return approximate_continuum(std::move(f), r, std::move(cfg)); },
                        [&](const PointSet& s) { return approximate_discrete(std::move(f), s, std::move(cfg)); },
                    },
                    domain);
}

Interpolant approximate_values(std::span<const complex> y, std::span<const complex> z, EngineConfig cfg) {
  if (y.size() != z.size()) throw InvalidInput("approximate_values: y and z must have equal length");
  if (z.empty()) throw InvalidInput("approximate_values: no data");
  for (std::size_t k = 0; k < z.size(); ++k)
    if (!is_finite(y[k]) || !is_finite(z[k])) throw InvalidInput("approximate_values: non-finite data");
  require_distinct(z);
  cfg.validate();
  if (!cfg.allowed) cfg.allowed = allow_all();
  DiscreteSource src(z);
  auto res = greedy([&](std::size_t k, complex) { return y[k]; }, src, cfg, cfg.allowed);
  return std::move(res.fit);
}

// ------------------------------------------------------------------ prescribed poles

Approximation approximate_prescribed(Function f, const Path& path, std::span<const complex> zeta,
                                     std::size_t degree, std::size_t init) {
  if (init < 2) throw InvalidInput("approximate_prescribed: need at least 2 initial points");
  DiscretizedPath dp(path, init, 1);
  auto near_pole = [&](complex z) {
    double d = inf;
    for (auto p : zeta) d = std::min(d, std::abs(z - p));
    return d;
  };
  if (!zeta.empty()) {
    // Split every interval longer than half the distance from its ends to the nearest pole.
    bool changed = true;
    while (changed) {
      changed = false;
      for (const auto& t : dp.indices(DiscretizedPath::Which::tests)) {
        const complex a = dp.point({t.row, 0});
        const complex m = dp.point(t);
        // With one test per interval the midpoint sits halfway, so |b - a| ~ 2|m - a|.
        const double h = 2 * std::abs(m - a);
        const double d = std::min(near_pole(a), near_pole(m));
        if (h > 0.5 * d && dp.add_node(t)) changed = true;
      }
    }
  }
  std::vector<complex> pts, vals;
  for (auto z : dp.collect(DiscretizedPath::Which::all)) {
    const complex v = f(z);
    if (!is_finite(v)) continue;
    pts.push_back(z);
    vals.push_back(v);
  }
  PartialFractions pf = fit_least_squares(pts, vals, zeta, degree);
  double max_err = 0;
  for (std::size_t k = 0; k < pts.size(); ++k) max_err = std::max(max_err, std::abs(vals[k] - pf(pts[k])));
  ConvergenceHistory h;
  h.records.push_back({degree + 1 + zeta.size(), max_err, PoleCheck::unchecked, true});
  std::vector<std::string> warnings = pf.warnings();
  return Approximation{std::move(f), Domain(path), std::move(pf), std::move(h),
                       std::move(pts), dp.params(DiscretizedPath::Which::all), std::move(warnings)};
}

Approximation approximate_prescribed(Function f, std::span<const complex> points, std::span<const complex> zeta,
                                     std::size_t degree) {
  std::vector<complex> pts, vals;
  for (auto z : points) {
    const complex v = f(z);
    if (!is_finite(v)) continue;
    pts.push_back(z);
    vals.push_back(v);
  }
  PartialFractions pf = fit_least_squares(pts, vals, zeta, degree);
  double max_err = 0;
  for (std::size_t k = 0; k < pts.size(); ++k) max_err = std::max(max_err, std::abs(vals[k] - pf(pts[k])));
  ConvergenceHistory h;
  h.records.push_back({degree + 1 + zeta.size(), max_err, PoleCheck::unchecked, true});
  std::vector<std::string> warnings = pf.warnings();
  return Approximation{std::move(f), Domain(PointSet(points.begin(), points.end())), std::move(pf), std::move(h),
                       std::move(pts), {}, std::move(warnings)};
}

PartialFractions approximate_prescribed(std::span<const complex> y, std::span<const complex> z,
                                        std::span<const complex> zeta, std::size_t degree) {
  if (y.size() != z.size()) throw InvalidInput("approximate_prescribed: y and z must have equal length");
  return fit_least_squares(z, y, zeta, degree);
}

// ------------------------------------------------------------------ minimax

Approximation minimax(const Approximation& a, std::size_t iterations) {
  const auto* r0 = std::get_if<BarycentricInterpolant>(&a.fit);
  if (!r0) throw InvalidInput("minimax: requires a barycentric fit");
  const auto& nodes = r0->nodes();

  std::vector<complex> pts, vals;
  for (auto t : a.test_points) {
    if (std::ranges::find(nodes, t) != nodes.end()) continue;
    const complex v = a.f(t);
    if (!is_finite(v)) continue;
    pts.push_back(t);
    vals.push_back(v);
  }
  const std::size_t m = pts.size();
  if (m == 0) return a;

  LoewnerWorkspace ws;
  ws.append_tests(pts, vals);
  ws.append_nodes(nodes, r0->values());

  auto errors_of = [&](std::span<const complex> w) {
    const auto pred = ws.predict(w);
    std::vector<double> e(m);
    for (std::size_t i = 0; i < m; ++i) {
      const complex d = vals[i] - pred[i];
      e[i] = is_finite(d) ? std::abs(d) : inf;
    }
    return e;
  };
  auto ratio_of = [](std::vector<double> e) {
    const double mx = *std::ranges::max_element(e);
    auto mid = e.begin() + static_cast<std::ptrdiff_t>(e.size() / 2);
    std::nth_element(e.begin(), mid, e.end());
    return *mid > 0 ? mx / *mid : inf;
  };

  const std::vector<complex> w0 = r0->weights();
  auto e = errors_of(w0);
  // Errors at rounding level count as zero: the fit is already exact.
  double scale = 0;
  for (auto v : vals) scale = std::max(scale, std::abs(v));
  if (*std::ranges::max_element(e) <= 64 * std::numeric_limits<double>::epsilon() * scale) return a;

  std::vector<complex> best_w = w0;
  double best_ratio = ratio_of(e);
  std::vector<double> lambda(m, 1.0 / double(m));
  const auto& L = ws.loewner();
  for (std::size_t it = 0; it < iterations; ++it) {
    linalg::Matrix Lw = L;
    for (std::size_t i = 0; i < m; ++i) Lw.row(static_cast<Eigen::Index>(i)) *= std::sqrt(lambda[i]);
    const auto w = solve_weights(Lw);
    e = errors_of(w);
    const double ratio = ratio_of(e);
    if (ratio < best_ratio) {
      best_ratio = ratio;
      best_w = w;
    }
    double sum = 0;
    for (std::size_t i = 0; i < m; ++i) {
      lambda[i] *= std::isfinite(e[i]) ? e[i] : 0.0;
      sum += lambda[i];
    }
    if (!(sum > 0) || !std::isfinite(sum)) break;
    for (auto& l : lambda) l /= sum;
  }

  Approximation out = a;
  BarycentricInterpolant r = *r0;
  set_weights(r, best_w);
  out.fit = std::move(r);
  return out;
}

// ------------------------------------------------------------------ check

std::vector<complex> check_points(const Approximation& a) {
  const Path* path = boundary_of(a.domain);
  if (!path) return std::get<PointSet>(a.domain);
  std::vector<double> p = a.params;
  std::ranges::sort(p);
  if (p.empty()) return {};
  if (path->closed()) p.push_back(1.0);
  std::vector<complex> out;
  for (std::size_t k = 0; k + 1 < p.size(); ++k)
    for (int j = 0; j < 10; ++j) out.push_back(path->point(p[k] + (p[k + 1] - p[k]) * j / 10.0));
  if (!path->closed()) out.push_back(path->point(p.back()));
  return out;
}

CheckResult check(const Approximation& a) {
  CheckResult out;
  for (auto z : check_points(a)) {
    const complex fz = a.f(z);
    if (!is_finite(fz)) continue;
    const complex d = fz - a(z);
    const double e = is_finite(d) ? std::abs(d) : inf;
    out.points.push_back(z);
    out.errors.push_back(e);
    out.max_error = std::max(out.max_error, e);
  }
  return out;
}

}  // namespace rfa
