#include "caphj/frac_ode.hpp"

#include <cmath>
#include <limits>

#include "caphj/special_fn.hpp"

namespace caphj {

namespace {

// Root of g(x) = w x + A x^k - rhs in (0, upper]. g is strictly increasing,
// g(0) = -rhs < 0 and g(upper) > 0 is the caller's responsibility.
double solve_scalar(double w, double A, double k, double rhs, double upper) {
  double lo = 0.0, hi = upper;
  double x = std::min(upper, rhs / w);  // ignore the nonlinearity for the seed
  for (int it = 0; it < 100; ++it) {
    double xk = std::pow(x, k);
    double g = w * x + A * xk - rhs;
    if (g > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    double dg = w + A * k * ((x > 0.0) ? xk / x : 0.0);
    double step = g / dg;
    double x_new = x - step;
    if (!(x_new > lo) || !(x_new < hi)) x_new = 0.5 * (lo + hi);  // bisection fallback
    if (std::abs(x_new - x) <= 1e-16 * upper + 1e-300) return x_new;
    x = x_new;
  }
  if (hi - lo > 1e-12 * upper) {
    throw numerical_error("solve_fode: scalar Newton did not converge (grid too coarse?)");
  }
  return 0.5 * (lo + hi);
}

}  // namespace

FodeSolution solve_fode(const FodeProblem& problem, const TimeGrid& grid) {
  const int M = grid.steps();
  CaputoWeights weights = caputo_weights(problem.alpha, grid);
  std::vector<double> E(static_cast<size_t>(M) + 1);
  E[0] = 1.0;
  std::vector<double> w;
  for (int j = 1; j <= M; ++j) {
    weights.row(j, w);
    const double wd = w[static_cast<size_t>(j) - 1];
    // history_j = wd E_{j-1} - sum_{q<=j-2} w_q (E_{q+1} - E_q)
    double hist = wd * E[static_cast<size_t>(j) - 1];
    for (int q = 0; q <= j - 2; ++q) {
      hist -= w[static_cast<size_t>(q)] *
              (E[static_cast<size_t>(q) + 1] - E[static_cast<size_t>(q)]);
    }
    const double prev = E[static_cast<size_t>(j) - 1];
    double x = solve_scalar(wd, problem.A, problem.k, hist, prev);
    if (!(x > 0.0) || !(x <= prev)) {
      throw numerical_error("solve_fode: monotone bracket violated at step " +
                            std::to_string(j));
    }
    E[static_cast<size_t>(j)] = x;
  }
  return FodeSolution{SampledPath(grid, std::move(E)), problem};
}

double exact_k1(FractionalOrder alpha, double A, double t) {
  if (!(A > 0.0)) throw std::invalid_argument("exact_k1: A must be positive");
  if (t < 0.0) throw std::invalid_argument("exact_k1: t must be nonnegative");
  if (t == 0.0) return 1.0;
  return mittag_leffler(alpha, -A * std::pow(t, alpha.value()));
}

DecayEnvelope decay_envelope(const FodeSolution& solution, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("decay_envelope: eps must be positive");
  const TimeGrid& grid = solution.path.grid;
  const double T = grid.horizon();
  if (T < 100.0) {
    throw std::invalid_argument("decay_envelope: horizon too short, need t_M >= 100");
  }
  const double beta = solution.problem.alpha.value() / solution.problem.k;
  const double t_star = T / 100.0;

  double c_low = std::numeric_limits<double>::infinity();
  double c_high = 0.0;
  for (int j = 0; j <= grid.steps(); ++j) {
    double t = grid.node(j);
    if (t < t_star) continue;
    double e = solution.value(j);
    c_low = std::min(c_low, e * std::pow(t, beta));
    c_high = std::max(c_high, e * std::pow(t, beta - eps));
  }
  if (!(c_low > 0.0) || !std::isfinite(c_low) || !(c_high > 0.0)) {
    throw numerical_error("decay_envelope: calibration window empty or degenerate");
  }
  // the calibrated constants bracket the tail by construction; the
  // falsifiable part is that the tail is genuinely algebraic with the
  // predicted exponent (an exponential or non-decaying tail signals a
  // solver bug)
  double slope = tail_loglog_slope(solution);
  if (slope < -beta - 0.25 || slope > -beta + eps + 0.25) {
    throw numerical_error("decay_envelope: tail slope " + std::to_string(slope) +
                          " incompatible with exponent " + std::to_string(-beta));
  }
  return DecayEnvelope{c_low, c_high, t_star};
}

double tail_loglog_slope(const FodeSolution& solution) {
  const TimeGrid& grid = solution.path.grid;
  const double T = grid.horizon();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int count = 0;
  for (int j = 1; j <= grid.steps(); ++j) {
    double t = grid.node(j);
    if (t < T / 10.0) continue;
    double x = std::log(t), y = std::log(solution.value(j));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count < 3) throw std::invalid_argument("tail_loglog_slope: too few tail nodes");
  double denom = count * sxx - sx * sx;
  return (count * sxy - sx * sy) / denom;
}

}  // namespace caphj
