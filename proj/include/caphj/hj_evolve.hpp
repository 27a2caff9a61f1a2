#pragma once

#include <vector>

#include "caphj/frac_core.hpp"
#include "caphj/frac_ode.hpp"

namespace caphj {

/// Periodic grid on the unit torus, 1D or 2D, n points per axis with
/// spacing h = 1/n; coordinates j*h identified modulo 1.
class TorusGrid {
 public:
  TorusGrid(int dim, int n);

  int dim() const { return dim_; }
  int n() const { return n_; }
  double h() const { return 1.0 / n_; }
  int size() const { return size_; }

  int index(int ix, int iy = 0) const { return iy * n_ + ix; }
  int wrap(int i) const { return ((i % n_) + n_) % n_; }
  double coord(int i) const { return static_cast<double>(i) / n_; }

 private:
  int dim_;
  int n_;
  int size_;
};

using GridFn = std::vector<double>;

/// Evaluates fn(x) (1D) or fn(x, y) (2D) at every grid point.
template <typename Fn>
GridFn sample_grid(const TorusGrid& grid, Fn&& fn) {
  GridFn out(static_cast<size_t>(grid.size()));
  if (grid.dim() == 1) {
    for (int i = 0; i < grid.n(); ++i) out[static_cast<size_t>(i)] = fn(grid.coord(i), 0.0);
  } else {
    for (int iy = 0; iy < grid.n(); ++iy)
      for (int ix = 0; ix < grid.n(); ++ix)
        out[static_cast<size_t>(grid.index(ix, iy))] = fn(grid.coord(ix), grid.coord(iy));
  }
  return out;
}

/// Setup of the evolution  d^alpha u + a(x) |Du|^m = f(x),  u(.,0) = g.
/// f is normalized at construction so that min f = 0 on the grid; the
/// ergodic constant c = -(min of the original f) is recorded. a must be
/// bounded below by a positive constant, m >= 1.
struct EikonalProblem {
  TorusGrid grid;
  GridFn a;
  GridFn f;  // normalized: min over the grid is exactly 0
  GridFn g;
  double m;
  FractionalOrder alpha;
  double c;      // ergodic constant of the original data, -min f
  double lip_g;  // discrete Lipschitz constant of g (Euclidean in 2D)

  EikonalProblem(TorusGrid grid_, GridFn a_, GridFn f_, GridFn g_, double m_,
                 FractionalOrder alpha_);
};

/// Indices where fn <= min fn + tol.
std::vector<int> aubry_set(const GridFn& fn, double tol);

/// Stationary solution of F(x, Dv) = f(x) + c with v = min g on the Aubry
/// set Z = {f = min f}. After normalization c = 0 and v is the weighted
/// geodesic value  v(x) = min g + dist_w(Z, x), edge weights
/// h * ((f/a)^(1/m) averaged over the edge endpoints), computed by
/// multi-source Dijkstra over the periodic grid graph (lowest-index
/// tie-breaking; deterministic).
struct ErgodicSolution {
  double c;  // reported constant of the original (unnormalized) data
  GridFn v;
  std::vector<int> Z;
};

ErgodicSolution solve_ergodic(const EikonalProblem& problem);

/// Space-time solution; states[j] is the grid function at time node j,
/// states[0] = g exactly. The full history is retained — the Caputo memory
/// is never truncated — so the budget is (M+1) * n^dim doubles: about 8 MB
/// for the reference 1D run (n = 256, M = 4096) and 2 MB per 16x16x(M+1)
/// block in 2D.
struct SpaceTimeSolution {
  EikonalProblem problem;
  TimeGrid tgrid;
  std::vector<GridFn> states;
};

/// L1 / Godunov evolution. Each step solves the implicit problem
///   w_jj u + a(x) |Du|_God^m = f + history_j
/// by monotone Gauss-Seidel sweeps (alternating orderings, fast-sweeping
/// style) iterated to a fixed point; the implicit treatment of both the
/// diagonal and the Hamiltonian makes the scheme unconditionally monotone,
/// so no step-size restriction applies. Throws numerical_error when the
/// per-step iteration fails to converge.
SpaceTimeSolution evolve(const EikonalProblem& problem, const TimeGrid& tgrid);

/// max over grid x and node pairs s != t (both <= horizon) of
/// |u(x,s) - u(x,t)| / |s - t|^alpha. horizons selects the time windows;
/// one value per horizon is returned in matching order (single pass).
std::vector<double> holder_seminorm_time(const SpaceTimeSolution& solution,
                                         const std::vector<double>& horizons);
double holder_seminorm_time(const SpaceTimeSolution& solution);

/// Margins of the two-sided bound on the Aubry set:
///   min g <= u(z, t) <= min g + Lip(g) * ell_gamma * E(t)
/// for every z in Z and every time node. E is the relaxation solution
/// built with the rate A = nu_{L+M} L^(k-1) / (sqrt(N) + ell_gamma);
/// aubry_ode_factor computes that A from grid data. Margins are signed,
/// nonnegative means the bound holds.
struct AubryReport {
  bool assumption_ok;         // argmin g meets Z
  double worst_lower_margin;  // min over (z,t) of u - min g
  double worst_upper_margin;  // min over (z,t) of bound - u
  int checked;                // number of (z, t) pairs
};

AubryReport aubry_decay_check(const SpaceTimeSolution& solution,
                              const ErgodicSolution& erg, const FodeSolution& E,
                              double ell_gamma);

/// A = min(1, nu L^(k-1) / (sqrt(N) + ell_gamma)) with nu = min a, k = m,
/// L = Lip(g); the paper's normalization allows capping A at 1. Throws
/// when the formula degenerates to a nonpositive rate (L = 0 with k > 1).
double aubry_ode_factor(const EikonalProblem& problem, double ell_gamma);

/// Geodesic length within Z (axis-aligned grid path) from the set
/// Z intersect argmin g to the farthest point of Z; the ell_gamma fed to
/// the decay check. Throws numerical_error if some z in Z is unreachable
/// or the intersection is empty.
double aubry_path_length(const EikonalProblem& problem, const std::vector<int>& Z);

/// Discrete residual  d^alpha U_i + a(x) |DU_i|^m - f(x)  of the ladder
/// supersolution
///   U_i(x,t) = L sum_{j<=i} |x_j - x_{j-1}| E(t) + L |x - x_i| E(t)
///              + M d_[x_i, x_{i+1}](x)
/// over all grid points off the kink set (periodic distances; kinks are
/// grid points where a one-sided slope jump of the space profile exceeds
/// the smooth-variation scale, plus their h-neighborhoods). Anchors must
/// be grid points inside Z.
struct SupersolResidual {
  double min_off_kink;  // minimum residual over non-kink points and all t_j >= t_1
  double at_anchor;     // minimum residual over time at x = x_i
};

SupersolResidual supersolution_residual(const EikonalProblem& problem,
                                        const std::vector<std::vector<double>>& anchors,
                                        int i, double L, double M,
                                        const FodeSolution& E);

/// Constant M = L + C_H^2 + C_H ||f||_inf + L C_H (sqrt(N) + ell_gamma)
/// with C_H = max(2, 1/min a) from the coercivity bound of a(x)|p|^m.
double ladder_constant_M(const EikonalProblem& problem, double ell_gamma);

/// Closed-form optimization of the box-counting rate bound
///   eps t^alpha + eps^(-2(D-1)) t^(-alpha):
/// minimizer, minimum and the exponent alpha (2D-3)/(2D-1); the bound
/// decays iff D < 3/2. Scaling is verified internally at t and 2t.
struct RateResult {
  double eps_opt;
  double bound;
  double exponent;
  bool decaying;
};

RateResult eikonal_rate(double D, FractionalOrder alpha, double t);

}  // namespace caphj
