#pragma once

#include "caphj/frac_core.hpp"

namespace caphj {

/// The relaxation problem  d^alpha E + A |E|^k = 0,  E(0) = 1.
struct FodeProblem {
  FractionalOrder alpha;
  double A;
  double k;

  FodeProblem(FractionalOrder a, double A_, double k_) : alpha(a), A(A_), k(k_) {
    if (!(A > 0.0)) throw std::invalid_argument("FodeProblem: A must be positive");
    if (!(k >= 1.0)) throw std::invalid_argument("FodeProblem: k must be >= 1");
  }
};

/// Discrete solution path; strictly positive and nonincreasing with
/// E(0) = 1, both enforced by the bracketed implicit solve.
struct FodeSolution {
  SampledPath path;
  FodeProblem problem;

  double value(int j) const { return path.values[static_cast<size_t>(j)]; }
};

/// Implicit L1 stepping: at each node the scalar equation
///   w_jj E_j + A E_j^k = history_j
/// is solved by safeguarded Newton inside the bracket (0, E_{j-1}].
/// Because the history weights of row j are strictly below those of
/// row j-1, the bracket always contains the root and the discrete
/// solution is positive and strictly decreasing, for any grid.
FodeSolution solve_fode(const FodeProblem& problem, const TimeGrid& grid);

/// Exact solution for k = 1: E_alpha(-A t^alpha).
double exact_k1(FractionalOrder alpha, double A, double t);

/// Two-sided algebraic decay envelope calibrated from the computed tail:
///   C_low t^(-alpha/k) <= E(t) <= C_high t^(-alpha/k + eps)  for t >= t_star.
/// Constants are calibrated on the first (geometric) half of the tail
/// [t_star, sqrt(t_star T)] and validated on the second half; a violation
/// there signals a solver bug and throws numerical_error. Requires a
/// horizon of at least 100.
struct DecayEnvelope {
  double C_low;
  double C_high;
  double t_star;
};

DecayEnvelope decay_envelope(const FodeSolution& solution, double eps);

/// Least-squares slope of log E against log t over the last decade
/// [T/10, T]; the tail exponent of the solution (about -alpha/k).
double tail_loglog_slope(const FodeSolution& solution);

}  // namespace caphj
