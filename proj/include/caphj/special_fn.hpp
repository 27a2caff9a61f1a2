#pragma once

#include <cstddef>

#include "caphj/errors.hpp"
#include "caphj/frac_order.hpp"

namespace caphj {

/// Gamma function on the positive half line, Lanczos approximation
/// (g = 7, 9 terms), good to at least 13 significant digits.
/// Throws std::invalid_argument for x <= 0 or non-finite x.
double gamma_fn(double x);

/// pi * csc(alpha * pi), computed directly as pi / sin(alpha*pi).
double pi_csc(FractionalOrder alpha);

struct MittagLefflerParams {
  FractionalOrder alpha;
  double series_radius = 5.0;   // switchover |z| for the power series
  double series_tol = 1e-14;    // tail bound for partial sums

  explicit MittagLefflerParams(FractionalOrder a) : alpha(a) { validate(); }
  MittagLefflerParams(FractionalOrder a, double radius, double tol)
      : alpha(a), series_radius(radius), series_tol(tol) {
    validate();
  }

 private:
  void validate() const;
};

/// One-parameter Mittag-Leffler function E_alpha(z) for real z.
///
/// For |z| below the switchover the power series sum z^n / Gamma(alpha*n+1)
/// is used. For z negative beyond the switchover the series loses all
/// precision to cancellation, so the completely monotone spectral form
///
///   E_alpha(-t) = sin(alpha*pi)/(alpha*pi) *
///                 Int_0^inf exp(-t v^(1/alpha)) / (v^2 + 2 v cos(alpha*pi) + 1) dv
///
/// is integrated with tanh-sinh quadrature. The effective negative-side
/// switchover is min(series_radius, 2): in double precision the alternating
/// series already burns > 8 digits at z = -5 for alpha = 1/2, and is
/// hopeless for smaller alpha.
double mittag_leffler(const MittagLefflerParams& params, double z);

/// Convenience overload with default params.
double mittag_leffler(FractionalOrder alpha, double z);

/// Regularized incomplete beta as used for the oscillation constants:
///   B_alpha[z0,z1] = (1 / (pi csc(alpha pi))) Int_{z0}^{z1} t^-alpha (1-t)^(alpha-1) dt,
/// i.e. I_{z1}(1-alpha, alpha) - I_{z0}(1-alpha, alpha) with the continued
/// fraction evaluation of the regularized beta. B_alpha[0,1] = 1.
/// Requires 0 <= z0 <= z1 <= 1.
double reg_incomplete_beta(FractionalOrder alpha, double z0, double z1);

/// The unique b in (0,1) with B_alpha[0,b] = 1/2, found by bisection to
/// |B_alpha[0,b] - 1/2| <= 1e-12 (and interval width below 1e-15).
/// For alpha = 1/2 this is exactly 1/2.
double inverse_beta_half(FractionalOrder alpha);

namespace detail {

/// log Gamma wrapper used by series terms (positive arguments only).
double log_gamma(double x);

/// tanh-sinh quadrature of f over (0, b); handles mild endpoint
/// singularities. Levels are doubled until the estimate is stable to
/// rel_tol or max_level is reached.
template <typename F>
double tanh_sinh(F&& f, double b, double rel_tol = 1e-13, int max_level = 12) {
  // x(s) = b/2 (1 + tanh(pi/2 sinh s)), abscissas clustered at both ends.
  const double half = 0.5 * b;
  const double pi_half = 1.57079632679489661923;
  const double s_max = 4.0;  // tanh(pi/2 sinh 4) is 1 to ~1e-37
  auto eval_point = [&](double s, double& x, double& w) {
    double sh = std::sinh(s) * pi_half;
    double ch = std::cosh(s) * pi_half;
    double sech = 1.0 / std::cosh(sh);
    x = half * (1.0 + std::tanh(sh));
    w = half * ch * sech * sech;
  };
  double h = 1.0;
  double x, w;
  eval_point(0.0, x, w);
  double sum = f(x) * w;
  double prev = 0.0;
  for (int level = 0; level <= max_level; ++level) {
    // level 0 adds s = +-h, +-2h, ...; each refinement halves h and adds
    // the new abscissas at odd multiples of the refined h.
    double s0, step;
    if (level == 0) {
      s0 = h;
      step = h;
    } else {
      h *= 0.5;
      s0 = h;
      step = 2.0 * h;
    }
    double add = 0.0;
    for (double s = s0; s <= s_max; s += step) {
      eval_point(s, x, w);
      if (w > 0.0 && x > 0.0 && x < b) add += f(x) * w;
      eval_point(-s, x, w);
      if (w > 0.0 && x > 0.0 && x < b) add += f(x) * w;
    }
    sum += add;
    double estimate = sum * h;
    if (level >= 3 && std::abs(estimate - prev) <=
                          rel_tol * std::max(std::abs(estimate), 1e-300)) {
      return estimate;
    }
    prev = estimate;
  }
  return sum * h;
}

}  // namespace detail

}  // namespace caphj
