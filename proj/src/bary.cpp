#include "rfa/bary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ranges>

namespace rfa {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

// sum_j c_j / (s - z_j) and its derivative.
std::pair<complex, complex> cauchy_sum(std::span<const complex> z, std::span<const complex> c, complex s) {
  complex f = 0, df = 0;
  for (std::size_t j = 0; j < z.size(); ++j) {
    const complex q = 1.0 / (s - z[j]);
    f += c[j] * q;
    df -= c[j] * q * q;
  }
  return {f, df};
}

// Finite eigenvalues of the arrowhead pencil [0 c^T; 1 diag(z)] - lambda diag(0, 1, ..., 1),
// i.e. the zeros of sum_j c_j / (lambda - z_j), each polished by one Newton step.
std::vector<complex> arrowhead_zeros(std::span<const complex> z, std::span<const complex> c, double scale) {
  const auto n = static_cast<Eigen::Index>(z.size());
  linalg::Matrix E = linalg::Matrix::Zero(n + 1, n + 1);
  linalg::Matrix B = linalg::Matrix::Identity(n + 1, n + 1);
  B(0, 0) = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    E(0, j + 1) = c[j];
    E(j + 1, 0) = 1;
    E(j + 1, j + 1) = z[j];
  }
  const double pencil_norm = std::max(E.norm(), B.norm());

  std::vector<complex> out;
  for (const auto& [alpha, beta] : linalg::generalized_eigenvalues(E, B)) {
    if (std::abs(beta) <= 1e-13 * pencil_norm) continue;
    complex s = alpha / beta;
    if (!is_finite(s)) continue;
    const auto [f, df] = cauchy_sum(z, c, s);
    const complex polished = s - f / df;
    if (is_finite(polished) && std::abs(cauchy_sum(z, c, polished).first) <= std::abs(f)) s = polished;
    const double gap = std::ranges::min(z | std::views::transform([s](complex zj) { return std::abs(s - zj); }));
    if (gap <= 1e-13 * scale) continue;  // spurious value sitting on a node
    out.push_back(s);
  }
  std::ranges::sort(out, [](complex a, complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

}  // namespace

// ------------------------------------------------------------ BarycentricInterpolant

BarycentricInterpolant::BarycentricInterpolant(std::vector<complex> nodes, std::vector<complex> values,
                                               std::vector<complex> weights)
    : nodes_(std::move(nodes)), values_(std::move(values)), weights_(std::move(weights)) {
  if (nodes_.size() != values_.size() || nodes_.size() != weights_.size())
    throw InvalidInput("barycentric interpolant: nodes, values and weights must have equal length");
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    for (std::size_t j = i + 1; j < nodes_.size(); ++j)
      if (nodes_[i] == nodes_[j]) throw InvalidInput("barycentric interpolant: repeated node");
  if (!nodes_.empty() && std::ranges::all_of(weights_, [](complex w) { return w == 0.0; }))
    throw InvalidInput("barycentric interpolant: all weights are zero");
}

complex BarycentricInterpolant::operator()(complex z) const {
  if (nodes_.empty()) throw DomainError("cannot evaluate an empty interpolant");
  complex num = 0, den = 0;
  for (std::size_t j = 0; j < nodes_.size(); ++j) {
    if (z == nodes_[j]) return values_[j];
    const complex q = weights_[j] / (z - nodes_[j]);
    num += q * values_[j];
    den += q;
  }
  return num / den;
}

Degrees BarycentricInterpolant::degrees() const {
  const std::size_t d = nodes_.empty() ? 0 : nodes_.size() - 1;
  return {d, d};
}

double BarycentricInterpolant::scale() const {
  double s = 0;
  for (auto z : nodes_) s = std::max(s, std::abs(z));
  return s > 0 ? s : 1.0;
}

std::vector<complex> BarycentricInterpolant::poles() const {
  if (nodes_.size() < 2) return {};
  return arrowhead_zeros(nodes_, weights_, scale());
}

std::vector<complex> BarycentricInterpolant::roots() const {
  if (nodes_.size() < 2) return {};
  std::vector<complex> wy(nodes_.size());
  for (std::size_t j = 0; j < nodes_.size(); ++j) wy[j] = weights_[j] * values_[j];
  if (std::ranges::all_of(wy, [](complex c) { return c == 0.0; })) return {};
  return arrowhead_zeros(nodes_, wy, scale());
}

std::vector<PoleResidue> BarycentricInterpolant::residues() const {
  std::vector<complex> wy(nodes_.size());
  for (std::size_t j = 0; j < nodes_.size(); ++j) wy[j] = weights_[j] * values_[j];
  std::vector<PoleResidue> out;
  for (complex s : poles()) {
    const complex num = cauchy_sum(nodes_, wy, s).first;
    const complex dden = cauchy_sum(nodes_, weights_, s).second;
    const complex res = num / dden;
    const bool flagged = !(std::abs(dden) > std::numeric_limits<double>::min()) || !is_finite(res);
    out.push_back({s, flagged ? complex(nan, nan) : res, flagged});
  }
  return out;
}

BarycentricInterpolant BarycentricInterpolant::truncated(std::size_t n, std::vector<complex> weights) const {
  if (n > size() || weights.size() != n) throw InvalidInput("truncated: bad prefix length");
  BarycentricInterpolant r;
  r.nodes_.assign(nodes_.begin(), nodes_.begin() + n);
  r.values_.assign(values_.begin(), values_.begin() + n);
  r.weights_ = std::move(weights);
  return r;
}

void set_weights(BarycentricInterpolant& r, std::span<const complex> w) {
  if (w.size() != r.size()) throw InvalidInput("set_weights: length mismatch");
  r.weights_.assign(w.begin(), w.end());
}

// ------------------------------------------------------------------ LoewnerWorkspace

std::size_t LoewnerWorkspace::append_tests(std::span<const complex> points, std::span<const complex> values) {
  if (points.size() != values.size()) throw InvalidInput("append_tests: length mismatch");
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (!is_finite(points[k]) || !is_finite(values[k])) throw InvalidInput("append_tests: non-finite data");
    if (std::ranges::find(nodes_, points[k]) != nodes_.end())
      throw InvalidInput("append_tests: test point coincides with a node");
  }
  const std::size_t first = tests_.size();
  const auto m = static_cast<Eigen::Index>(first + points.size());
  const auto n = static_cast<Eigen::Index>(nodes_.size());
  cauchy_.conservativeResize(m, n);
  loewner_.conservativeResize(m, n);
  tests_.insert(tests_.end(), points.begin(), points.end());
  test_values_.insert(test_values_.end(), values.begin(), values.end());
  active_.resize(tests_.size(), true);
  for (std::size_t row = first; row < tests_.size(); ++row) fill_row(row);
  return first;
}

void LoewnerWorkspace::replace_test(std::size_t row, complex point, complex value) {
  if (row >= tests_.size()) throw InvalidInput("replace_test: row out of range");
  if (!is_finite(point) || !is_finite(value)) throw InvalidInput("replace_test: non-finite data");
  if (std::ranges::find(nodes_, point) != nodes_.end())
    throw InvalidInput("replace_test: test point coincides with a node");
  tests_[row] = point;
  test_values_[row] = value;
  active_[row] = true;
  fill_row(row);
}

void LoewnerWorkspace::deactivate_test(std::size_t row) {
  if (row >= tests_.size()) throw InvalidInput("deactivate_test: row out of range");
  active_[row] = false;
  cauchy_.row(static_cast<Eigen::Index>(row)).setZero();
  loewner_.row(static_cast<Eigen::Index>(row)).setZero();
}

void LoewnerWorkspace::append_nodes(std::span<const complex> nodes, std::span<const complex> values) {
  if (nodes.size() != values.size()) throw InvalidInput("append_nodes: length mismatch");
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    if (!is_finite(nodes[k]) || !is_finite(values[k])) throw InvalidInput("append_nodes: non-finite data");
    if (std::ranges::find(nodes_, nodes[k]) != nodes_.end() ||
        std::find(nodes.begin(), nodes.begin() + k, nodes[k]) != nodes.begin() + k)
      throw InvalidInput("append_nodes: duplicate node");
    for (std::size_t i = 0; i < tests_.size(); ++i)
      if (active_[i] && tests_[i] == nodes[k])
        throw InvalidInput("append_nodes: node coincides with an active test point");
  }
  const auto m = static_cast<Eigen::Index>(tests_.size());
  const auto n0 = static_cast<Eigen::Index>(nodes_.size());
  const auto n = n0 + static_cast<Eigen::Index>(nodes.size());
  cauchy_.conservativeResize(m, n);
  loewner_.conservativeResize(m, n);
  nodes_.insert(nodes_.end(), nodes.begin(), nodes.end());
  node_values_.insert(node_values_.end(), values.begin(), values.end());
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = n0; j < n; ++j) {
      if (!active_[i]) {
        cauchy_(i, j) = 0;
        loewner_(i, j) = 0;
        continue;
      }
      cauchy_(i, j) = 1.0 / (tests_[i] - nodes_[j]);
      loewner_(i, j) = (node_values_[j] - test_values_[i]) * cauchy_(i, j);
    }
  }
}

void LoewnerWorkspace::fill_row(std::size_t row) {
  const auto i = static_cast<Eigen::Index>(row);
  for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(nodes_.size()); ++j) {
    cauchy_(i, j) = 1.0 / (tests_[row] - nodes_[j]);
    loewner_(i, j) = (node_values_[j] - test_values_[row]) * cauchy_(i, j);
  }
}

std::vector<complex> LoewnerWorkspace::predict(std::span<const complex> w) const {
  if (w.size() != nodes_.size()) throw InvalidInput("predict: weight length mismatch");
  const Eigen::Map<const linalg::Vector> wv(w.data(), static_cast<Eigen::Index>(w.size()));
  linalg::Vector wy(wv.size());
  for (Eigen::Index j = 0; j < wv.size(); ++j) wy(j) = wv(j) * node_values_[j];
  const linalg::Vector num = cauchy_ * wy;
  const linalg::Vector den = cauchy_ * wv;
  std::vector<complex> out(tests_.size(), complex(nan, nan));
  for (std::size_t i = 0; i < tests_.size(); ++i)
    if (active_[i]) out[i] = num(static_cast<Eigen::Index>(i)) / den(static_cast<Eigen::Index>(i));
  return out;
}

// ---------------------------------------------------------------------- operations

std::vector<complex> solve_weights(const linalg::Matrix& L) {
  const linalg::Vector v = linalg::smallest_right_singular_vector(L);
  return {v.data(), v.data() + v.size()};
}

std::vector<complex> linearized_residual(const LoewnerWorkspace& ws, std::span<const complex> w) {
  if (w.size() != ws.num_nodes()) throw InvalidInput("linearized_residual: weight length mismatch");
  const Eigen::Map<const linalg::Vector> wv(w.data(), static_cast<Eigen::Index>(w.size()));
  const linalg::Vector d = ws.loewner() * wv;
  return {d.data(), d.data() + d.size()};
}

std::vector<complex> update_test_values(LoewnerWorkspace& ws, BarycentricInterpolant& r,
                                        std::span<const complex> new_points,
                                        std::span<const complex> new_values) {
  if (ws.num_nodes() != r.size()) throw InvalidInput("update_test_values: workspace and interpolant disagree");
  if (r.empty()) throw DomainError("update_test_values: interpolant has no nodes");
  if (!new_points.empty()) ws.append_tests(new_points, new_values);
  std::size_t active = 0;
  for (std::size_t i = 0; i < ws.num_tests(); ++i) active += ws.active(i);
  const std::size_t n = r.size();
  if (active + 1 >= n) {
    r.weights_ = solve_weights(ws.loewner());
  } else {
    // Fewer conditions than unknowns: among all null vectors take the one nearest the
    // weights of the polynomial interpolant, so the data are matched with lowest degree.
    const linalg::Matrix V = linalg::right_singular_vectors(ws.loewner());
    const auto k = static_cast<Eigen::Index>(n - active);
    const linalg::Matrix N = V.rightCols(k);
    double diam = 0;
    for (auto a : r.nodes_)
      for (auto b : r.nodes_) diam = std::max(diam, std::abs(a - b));
    linalg::Vector wp(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) {
      complex prod = 1;
      for (std::size_t q = 0; q < n; ++q)
        if (q != j) prod *= (r.nodes_[j] - r.nodes_[q]) / diam;
      wp(static_cast<Eigen::Index>(j)) = 1.0 / prod;
    }
    linalg::Vector w = N * (N.adjoint() * wp);
    if (!(w.norm() > 0) || !w.allFinite()) w = N.col(k - 1);
    w /= w.norm();
    r.weights_.assign(w.data(), w.data() + w.size());
  }
  return ws.predict(r.weights_);
}

void add_nodes(BarycentricInterpolant& r, LoewnerWorkspace& ws, std::span<const complex> nodes,
               std::span<const complex> values) {
  if (ws.num_nodes() != r.size()) throw InvalidInput("add_nodes: workspace and interpolant disagree");
  ws.append_nodes(nodes, values);  // validates distinctness
  r.nodes_.insert(r.nodes_.end(), nodes.begin(), nodes.end());
  r.values_.insert(r.values_.end(), values.begin(), values.end());
  r.weights_.resize(r.nodes_.size(), 0.0);
}

}  // namespace rfa
