#pragma once

#include <vector>

#include "caphj/frac_core.hpp"

namespace caphj {

/// Data of the oscillating function with nonnegative Caputo derivative:
/// the half-level point b of the regularized beta, the gap constant
/// eta = pi csc(alpha pi) B[b^3, b^2], the geometric breakpoints
/// a_k = (1/b)^k and the ramp widths eps_k = (1-b^2)/4 * eta / a_{2k}.
/// Materialized up to index K_max.
struct CounterexampleSpec {
  FractionalOrder alpha;
  double b_alpha;
  double eta_alpha;
  int K_max;
  std::vector<double> a;    // a[k], k = 0..K_max
  std::vector<double> eps;  // eps[k], k = 0..(K_max-1)/2
};

/// Derives all constants through the special-function module and verifies
/// them at construction: B[0,b] = 1/2 to 1e-10, eta in (0,1), the eps_k
/// geometric sum equal to eta/4. Requires K_max >= 2.
CounterexampleSpec build_spec(FractionalOrder alpha, int K_max);

/// f = f1 f2 with f1 = 1 on [0,1] and t^-alpha after, f2 the trapezoidal
/// plateau indicator of the union of [a_{2k}, a_{2k+1}] with ramps of width
/// eps_k. Zero on [0, a_0) and on the odd gaps; values in [0,1].
/// Requires 0 <= t <= a_{K_max}.
double eval_f(const CounterexampleSpec& spec, double t);

/// The Abel integral u(t) = Int_0^t f(z) (t-z)^(alpha-1) dz, evaluated by
/// sampling f on a breakpoint-aligned grid (every a_k, a_k +- eps_k below t
/// is a node, f is affine between nodes) and integrating the kernel cell by
/// cell in closed form through frac_core. `resolution` caps the cell width
/// per unit scale; the default keeps the quadrature error well below 1e-5.
double eval_u(const CounterexampleSpec& spec, double t, int resolution = 512);

/// Breakpoint-aligned quadrature grid on [0, t_max]: all breakpoints below
/// t_max plus a bounded-width subdivision of each segment, geometrically
/// refined toward t_max where the Abel kernel concentrates.
std::vector<double> quadrature_nodes(const CounterexampleSpec& spec, double t_max,
                                     int resolution = 512);

/// Smallest N with
///   pi csc(alpha pi) B[1 - eps_N / a_{2N+1}, 1] < eta/4   and
///   a_{2N} (a_1 - 1) >= 2,
/// both checked numerically. Throws numerical_error when K_max (or the
/// 1e12 float-exhaustion cap on a_{2N+2}) cannot certify any N.
int find_admissible_N(const CounterexampleSpec& spec);

/// u(a_{2N+2}) - u(a_{2N+1}); for admissible N this is <= -eta/4 up to
/// quadrature tolerance. Requires 2N+2 <= K_max.
double oscillation_gap(const CounterexampleSpec& spec, int N, int resolution = 512);

}  // namespace caphj
