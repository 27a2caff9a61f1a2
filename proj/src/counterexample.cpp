#include "caphj/counterexample.hpp"

#include <algorithm>
#include <cmath>

#include "caphj/special_fn.hpp"

namespace caphj {

CounterexampleSpec build_spec(FractionalOrder alpha, int K_max) {
  if (K_max < 2) throw std::invalid_argument("build_spec: K_max must be >= 2");
  const double b = inverse_beta_half(alpha);
  if (std::abs(reg_incomplete_beta(alpha, 0.0, b) - 0.5) > 1e-10) {
    throw numerical_error("build_spec: B[0,b] deviates from 1/2 beyond 1e-10");
  }
  const double eta = pi_csc(alpha) * reg_incomplete_beta(alpha, b * b * b, b * b);
  if (!(eta > 0.0) || !(eta < 1.0)) {
    throw numerical_error("build_spec: eta outside (0,1)");
  }
  CounterexampleSpec spec{alpha, b, eta, K_max, {}, {}};
  spec.a.resize(static_cast<size_t>(K_max) + 1);
  const double inv_b = 1.0 / b;
  for (int k = 0; k <= K_max; ++k) spec.a[static_cast<size_t>(k)] = std::pow(inv_b, k);
  const int plateau_count = (K_max - 1) / 2 + 1;  // plateaus [a_{2k}, a_{2k+1}]
  spec.eps.resize(static_cast<size_t>(plateau_count));
  const double c = (1.0 - b * b) / 4.0 * eta;
  double eps_sum = 0.0;
  for (int k = 0; k < plateau_count; ++k) {
    spec.eps[static_cast<size_t>(k)] = c / spec.a[static_cast<size_t>(2 * k)];
    eps_sum += spec.eps[static_cast<size_t>(k)];
  }
  // geometric tail: sum_{k>=0} eps_k = eta/4 exactly
  double tail = c * std::pow(b * b, plateau_count) / (1.0 - b * b);
  if (std::abs(eps_sum + tail - eta / 4.0) > 1e-10) {
    throw numerical_error("build_spec: eps_k geometric sum deviates from eta/4");
  }
  // ramps must not collide: eps_k < (a_{2k+1} - a_{2k}) / 2
  for (int k = 0; k < plateau_count; ++k) {
    double width = spec.a[static_cast<size_t>(2 * k) + 1] - spec.a[static_cast<size_t>(2 * k)];
    if (!(2.0 * spec.eps[static_cast<size_t>(k)] < width)) {
      throw numerical_error("build_spec: ramp width exceeds plateau at k=" + std::to_string(k));
    }
  }
  return spec;
}

double eval_f(const CounterexampleSpec& spec, double t) {
  if (t < 0.0) throw std::invalid_argument("eval_f: t must be nonnegative");
  if (t > spec.a.back()) {
    throw std::invalid_argument("eval_f: t beyond materialized range a_{K_max}");
  }
  const double f1 = (t <= 1.0) ? 1.0 : std::pow(t, -spec.alpha.value());
  if (t < spec.a[0]) return 0.0;  // a_0 = 1: no plateau below it
  // locate k with a_k <= t < a_{k+1}
  auto it = std::upper_bound(spec.a.begin(), spec.a.end(), t);
  int idx = static_cast<int>(it - spec.a.begin()) - 1;
  idx = std::min(idx, spec.K_max - 1);
  if (idx % 2 == 1) {
    // odd gap [a_{2k+1}, a_{2k+2})
    return 0.0;
  }
  const int k = idx / 2;
  const double a_lo = spec.a[static_cast<size_t>(idx)];
  const double a_hi = spec.a[static_cast<size_t>(idx) + 1];
  const double e = spec.eps[static_cast<size_t>(k)];
  double f2;
  if (t < a_lo + e) {
    f2 = (t - a_lo) / e;
  } else if (t < a_hi - e) {
    f2 = 1.0;
  } else if (t < a_hi) {
    f2 = (a_hi - t) / e;
  } else {
    f2 = 0.0;  // t == a.back() on an odd index handled above; t == a_hi with idx even
  }
  return f1 * f2;
}

std::vector<double> quadrature_nodes(const CounterexampleSpec& spec, double t_max,
                                     int resolution) {
  if (!(t_max > 0.0) || t_max > spec.a.back()) {
    throw std::invalid_argument("quadrature_nodes: t_max outside materialized range");
  }
  if (resolution < 8) throw std::invalid_argument("quadrature_nodes: resolution too small");
  std::vector<double> brk{0.0};
  for (size_t k = 0; k < spec.a.size(); ++k) {
    double ak = spec.a[k];
    if (ak >= t_max) break;
    brk.push_back(ak);
    if (k % 2 == 0 && k / 2 < spec.eps.size()) {
      double e = spec.eps[k / 2];
      if (ak + e < t_max) brk.push_back(ak + e);
      double hi = spec.a[k + 1];
      if (hi - e < t_max && hi - e > ak + e) brk.push_back(hi - e);
    }
  }
  brk.push_back(t_max);
  std::sort(brk.begin(), brk.end());
  brk.erase(std::unique(brk.begin(), brk.end()), brk.end());

  // Cells grow proportionally to the distance from the segment ends (ratio
  // ~ dist/Q) and cap at a width that scales with t. u carries a
  // |t - corner|^(1+alpha) singular component at every breakpoint, so the
  // L1 truncation near a corner scales like J * (local cell)^(1-alpha);
  // the proportional growth keeps that small without a global fine mesh.
  const double kQ = 12.0;
  std::vector<double> nodes;
  for (size_t s = 0; s + 1 < brk.size(); ++s) {
    double lo = brk[s], hi = brk[s + 1];
    double half = 0.5 * (hi - lo);
    double w_target = std::max(lo, 0.25) / resolution;
    double w_min = std::max(1e-9 * std::max(hi, 1.0), 1e-14);
    nodes.push_back(lo);
    for (double d = w_min; d < half;) {
      nodes.push_back(lo + d);
      nodes.push_back(hi - d);
      d += std::min(w_target, std::max(d / kQ, w_min));
    }
    nodes.push_back(lo + half);
  }
  nodes.push_back(t_max);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return nodes;
}

double eval_u(const CounterexampleSpec& spec, double t, int resolution) {
  if (t < 0.0) throw std::invalid_argument("eval_u: t must be nonnegative");
  if (t == 0.0) return 0.0;
  if (t > spec.a.back()) {
    throw std::invalid_argument("eval_u: t beyond materialized range a_{K_max}");
  }
  std::vector<double> nodes = quadrature_nodes(spec, t, resolution);
  std::vector<double> vals;
  vals.reserve(nodes.size());
  for (double z : nodes) vals.push_back(eval_f(spec, z));
  SampledPath path(TimeGrid::from_nodes(std::move(nodes)), std::move(vals));
  return fractional_integral(path, t, spec.alpha);
}

int find_admissible_N(const CounterexampleSpec& spec) {
  const double quarter_eta = spec.eta_alpha / 4.0;
  const double picsc = pi_csc(spec.alpha);
  for (int N = 1; 2 * N + 2 <= spec.K_max; ++N) {
    if (spec.a[static_cast<size_t>(2 * N) + 2] > 1e12) break;  // float exhaustion cap
    if (static_cast<size_t>(N) >= spec.eps.size()) break;
    double ratio = spec.eps[static_cast<size_t>(N)] / spec.a[static_cast<size_t>(2 * N) + 1];
    double cond1 = picsc * reg_incomplete_beta(spec.alpha, 1.0 - ratio, 1.0);
    double cond2 = spec.a[static_cast<size_t>(2 * N)] * (spec.a[1] - 1.0);
    if (cond1 < quarter_eta && cond2 >= 2.0) return N;
  }
  throw numerical_error(
      "find_admissible_N: K_max too small to certify any admissible N");
}

double oscillation_gap(const CounterexampleSpec& spec, int N, int resolution) {
  if (2 * N + 2 > spec.K_max) {
    throw std::invalid_argument("oscillation_gap: need 2N+2 <= K_max");
  }
  double u_hi = eval_u(spec, spec.a[static_cast<size_t>(2 * N) + 2], resolution);
  double u_lo = eval_u(spec, spec.a[static_cast<size_t>(2 * N) + 1], resolution);
  return u_hi - u_lo;
}

}  // namespace caphj
