#include "caphj/frac_core.hpp"

#include <algorithm>
#include <cmath>

#include "caphj/special_fn.hpp"

namespace caphj {

TimeGrid TimeGrid::uniform(double T, int M) {
  if (!(T > 0.0)) throw std::invalid_argument("TimeGrid: horizon T must be positive");
  if (M < 1) throw std::invalid_argument("TimeGrid: M must be at least 1");
  std::vector<double> nodes(static_cast<size_t>(M) + 1);
  for (int j = 0; j <= M; ++j) nodes[static_cast<size_t>(j)] = static_cast<double>(j) * T / M;
  nodes[0] = 0.0;
  nodes.back() = T;
  return TimeGrid(std::move(nodes), GridKind::uniform, 1.0);
}

TimeGrid TimeGrid::graded(double T, int M, double gamma) {
  if (!(T > 0.0)) throw std::invalid_argument("TimeGrid: horizon T must be positive");
  if (M < 1) throw std::invalid_argument("TimeGrid: M must be at least 1");
  if (!(gamma >= 1.0)) {
    throw std::invalid_argument("TimeGrid: grading exponent gamma must be >= 1");
  }
  std::vector<double> nodes(static_cast<size_t>(M) + 1);
  for (int j = 0; j <= M; ++j) {
    nodes[static_cast<size_t>(j)] = T * std::pow(static_cast<double>(j) / M, gamma);
  }
  nodes[0] = 0.0;
  nodes.back() = T;
  return TimeGrid(std::move(nodes), GridKind::graded, gamma);
}

TimeGrid TimeGrid::from_nodes(std::vector<double> nodes) {
  if (nodes.size() < 2) throw std::invalid_argument("TimeGrid: need at least 2 nodes");
  if (nodes.front() != 0.0) throw std::invalid_argument("TimeGrid: t_0 must be 0");
  for (size_t j = 1; j < nodes.size(); ++j) {
    if (!(nodes[j] > nodes[j - 1])) {
      throw std::invalid_argument("TimeGrid: nodes must be strictly increasing");
    }
  }
  return TimeGrid(std::move(nodes), GridKind::explicit_nodes, 1.0);
}

int TimeGrid::cell_of(double t) const {
  if (t < 0.0 || t > horizon()) {
    throw std::invalid_argument("TimeGrid: t outside [0, horizon]");
  }
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
  int k = static_cast<int>(it - nodes_.begin()) - 1;
  return std::min(k, steps() - 1);
}

SampledPath::SampledPath(TimeGrid g, std::vector<double> v)
    : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid.nodes().size()) {
    throw std::invalid_argument("SampledPath: values length must equal node count");
  }
}

double SampledPath::interp(double t) const {
  if (t <= 0.0) return values[0];
  int k = grid.cell_of(t);
  double t0 = grid.node(k), t1 = grid.node(k + 1);
  double w = (t - t0) / (t1 - t0);
  return values[static_cast<size_t>(k)] * (1.0 - w) +
         values[static_cast<size_t>(k) + 1] * w;
}

CaputoWeights::CaputoWeights(FractionalOrder alpha, TimeGrid grid)
    : alpha_(alpha), grid_(std::move(grid)),
      inv_gamma1ma_(1.0 / gamma_fn(1.0 - alpha.value())) {}

CaputoWeights caputo_weights(FractionalOrder alpha, const TimeGrid& grid) {
  if (grid.nodes().size() < 2) {
    throw std::invalid_argument("caputo_weights: grid needs at least 2 nodes");
  }
  return CaputoWeights(alpha, grid);
}

namespace {

// Mean of (tj - s)^-alpha over the cell [a, b], b <= tj. The direct
// difference of (tj-.)^(1-alpha) cancels catastrophically when the cell is
// far from tj and narrow, so a midpoint expansion takes over there.
double mean_kernel(double tj, double a, double b, double alpha) {
  double width = b - a;
  double far_gap = tj - b;
  if (far_gap > 0.0 && width < 1e-6 * far_gap) {
    double mid = tj - 0.5 * (a + b);
    double corr = 1.0 + alpha * (alpha + 1.0) * width * width / (24.0 * mid * mid);
    return std::pow(mid, -alpha) * corr;
  }
  double one_m_a = 1.0 - alpha;
  return (std::pow(tj - a, one_m_a) - std::pow(tj - b, one_m_a)) /
         (one_m_a * width);
}

}  // namespace

void CaputoWeights::row(int j, std::vector<double>& w) const {
  const int M = grid_.steps();
  if (j < 1 || j > M) throw std::invalid_argument("CaputoWeights::row: j out of range");
  w.resize(static_cast<size_t>(j));
  const double tj = grid_.node(j);
  const double a = alpha_.value();
  for (int i = 0; i < j; ++i) {
    w[static_cast<size_t>(i)] =
        inv_gamma1ma_ * mean_kernel(tj, grid_.node(i), grid_.node(i + 1), a);
  }
}

double CaputoWeights::diag(int j) const {
  const double dt = grid_.node(j) - grid_.node(j - 1);
  return std::pow(dt, -alpha_.value()) * inv_gamma1ma_ / (1.0 - alpha_.value());
}

double caputo_apply(const CaputoWeights& weights, const SampledPath& path, int j) {
  if (!(path.grid == weights.grid())) {
    throw std::invalid_argument("caputo_apply: path grid does not match weights grid");
  }
  if (j < 1 || j > weights.grid().steps()) {
    throw std::invalid_argument("caputo_apply: node index j must satisfy 1 <= j <= M");
  }
  std::vector<double> w;
  weights.row(j, w);
  double acc = 0.0;
  for (int i = 0; i < j; ++i) {
    acc += w[static_cast<size_t>(i)] *
           (path.values[static_cast<size_t>(i) + 1] - path.values[static_cast<size_t>(i)]);
  }
  return acc;
}

std::vector<double> caputo_apply_all(const CaputoWeights& weights,
                                     const SampledPath& path) {
  if (!(path.grid == weights.grid())) {
    throw std::invalid_argument("caputo_apply_all: path grid does not match weights grid");
  }
  const int M = weights.grid().steps();
  std::vector<double> out(static_cast<size_t>(M) + 1, 0.0);
  std::vector<double> w;
  for (int j = 1; j <= M; ++j) {
    weights.row(j, w);
    double acc = 0.0;
    for (int i = 0; i < j; ++i) {
      acc += w[static_cast<size_t>(i)] *
             (path.values[static_cast<size_t>(i) + 1] - path.values[static_cast<size_t>(i)]);
    }
    out[static_cast<size_t>(j)] = acc;
  }
  return out;
}

namespace {

// Int_{tau_lo}^{tau_hi} (A + B tau) tau^(-1-alpha) dtau, 0 <= tau_lo < tau_hi,
// where tau = t - s and phi(t) - phi(s) = A + B tau on the cell. A must be 0
// when tau_lo = 0 (interpolation consistency at s = t).
double marchaud_cell(double A, double B, double tau_lo, double tau_hi, double alpha) {
  double width = tau_hi - tau_lo;
  if (tau_lo > 0.0 && width < 1e-6 * tau_lo) {
    double mid = 0.5 * (tau_lo + tau_hi);
    return (A + B * mid) * std::pow(mid, -1.0 - alpha) * width;
  }
  double term_a = 0.0;
  if (A != 0.0) {
    term_a = A * (std::pow(tau_lo, -alpha) - std::pow(tau_hi, -alpha)) / alpha;
  }
  double term_b =
      B * (std::pow(tau_hi, 1.0 - alpha) - std::pow(tau_lo, 1.0 - alpha)) / (1.0 - alpha);
  return term_a + term_b;
}

}  // namespace

MarchaudSplit marchaud_eval(const SampledPath& path, double t, double delta,
                            FractionalOrder alpha) {
  const TimeGrid& grid = path.grid;
  if (!(t > 0.0) || t > grid.horizon()) {
    throw std::invalid_argument("marchaud_eval: t must lie in (0, horizon]");
  }
  if (!(delta > 0.0) || delta >= t) {
    throw std::invalid_argument("marchaud_eval: delta must lie in (0, t)");
  }
  const int cell_t = grid.cell_of(t);
  // width of the cell whose interior lies just left of t
  const double left_cell_width =
      (t == grid.node(cell_t) && cell_t >= 1)
          ? grid.node(cell_t) - grid.node(cell_t - 1)
          : grid.node(cell_t + 1) - grid.node(cell_t);
  if (delta < left_cell_width) {
    throw std::invalid_argument(
        "marchaud_eval: delta must cover at least the grid cell left of t");
  }
  const double a = alpha.value();
  const double c_a = a / gamma_fn(1.0 - a);
  const double phi_t = path.interp(t);
  const double cut = t - delta;

  // tail over (-inf, 0): constant extension integrates in closed form
  double far = (phi_t - path.values[0]) * std::pow(t, -a) / a;

  double near = 0.0;
  const int last_cell = cell_t;
  for (int i = 0; i <= last_cell; ++i) {
    double s_lo = grid.node(i);
    double s_hi = std::min(grid.node(i + 1), t);
    if (s_hi <= s_lo) continue;
    double sigma = (path.values[static_cast<size_t>(i) + 1] -
                    path.values[static_cast<size_t>(i)]) /
                   (grid.node(i + 1) - grid.node(i));
    // phi(t) - phi(s) = A + B (t - s) on the cell; A vanishes identically
    // on the cell that touches t (interpolation consistency), which keeps
    // the tau^-alpha moment finite at tau = 0.
    double A = (s_hi == t)
                   ? 0.0
                   : phi_t - (path.values[static_cast<size_t>(i)] + sigma * (t - grid.node(i)));
    double B = sigma;
    if (s_hi <= cut) {
      far += marchaud_cell(A, B, t - s_hi, t - s_lo, a);
    } else if (s_lo >= cut) {
      near += marchaud_cell(A, B, t - s_hi, t - s_lo, a);
    } else {
      far += marchaud_cell(A, B, t - cut, t - s_lo, a);
      near += marchaud_cell(A, B, t - s_hi, t - cut, a);
    }
  }
  return MarchaudSplit{c_a * far, c_a * near};
}

double power_rule_constant(FractionalOrder alpha, double beta) {
  if (!(beta > 0.0)) {
    throw std::invalid_argument("power_rule_constant: beta must be positive");
  }
  return gamma_fn(beta + 1.0) / gamma_fn(beta - alpha.value() + 1.0);
}

namespace {

// Int_{tau_lo}^{tau_hi} (C - sigma tau) tau^(alpha-1) dtau with tau = t - z.
double abel_cell(double C, double sigma, double tau_lo, double tau_hi, double alpha) {
  double width = tau_hi - tau_lo;
  if (tau_lo > 0.0 && width < 1e-6 * tau_lo) {
    double mid = 0.5 * (tau_lo + tau_hi);
    return (C - sigma * mid) * std::pow(mid, alpha - 1.0) * width;
  }
  double term_c = C * (std::pow(tau_hi, alpha) - std::pow(tau_lo, alpha)) / alpha;
  double term_s = sigma *
                  (std::pow(tau_hi, alpha + 1.0) - std::pow(tau_lo, alpha + 1.0)) /
                  (alpha + 1.0);
  return term_c - term_s;
}

}  // namespace

double fractional_integral(const SampledPath& f, double t, FractionalOrder alpha) {
  if (t < 0.0) throw std::invalid_argument("fractional_integral: t must be nonnegative");
  if (t == 0.0) return 0.0;
  const TimeGrid& grid = f.grid;
  if (t > grid.horizon()) {
    throw std::invalid_argument("fractional_integral: t beyond grid horizon");
  }
  const double a = alpha.value();
  const int last_cell = grid.cell_of(t);
  double acc = 0.0;
  for (int i = 0; i <= last_cell; ++i) {
    double z_lo = grid.node(i);
    double z_hi = std::min(grid.node(i + 1), t);
    if (z_hi <= z_lo) continue;
    double sigma = (f.values[static_cast<size_t>(i) + 1] -
                    f.values[static_cast<size_t>(i)]) /
                   (grid.node(i + 1) - grid.node(i));
    // f(z) = C - sigma (t - z) with C = f_i + sigma (t - t_i)
    double C = f.values[static_cast<size_t>(i)] + sigma * (t - grid.node(i));
    acc += abel_cell(C, sigma, t - z_hi, t - z_lo, a);
  }
  return acc;
}

}  // namespace caphj
