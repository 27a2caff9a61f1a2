#pragma once

#include <vector>

#include "caphj/errors.hpp"
#include "caphj/frac_order.hpp"

namespace caphj {

enum class GridKind { uniform, graded, explicit_nodes };

/// Ordered time nodes t_0 = 0 < t_1 < ... < t_M, either uniform
/// (t_j = j T / M) or graded (t_j = T (j/M)^gamma, gamma >= 1). The graded
/// family clusters nodes at t = 0 to resolve the initial layer of
/// Mittag-Leffler-type solutions.
class TimeGrid {
 public:
  static TimeGrid uniform(double T, int M);
  static TimeGrid graded(double T, int M, double gamma);

  /// Arbitrary strictly increasing nodes with t_0 = 0 (breakpoint-aligned
  /// quadrature grids).
  static TimeGrid from_nodes(std::vector<double> nodes);

  /// Grading exponent (2 - alpha)/alpha that balances the t^alpha layer
  /// against the L1 consistency order.
  static double default_grading(FractionalOrder alpha) {
    return (2.0 - alpha.value()) / alpha.value();
  }

  const std::vector<double>& nodes() const { return nodes_; }
  double node(int j) const { return nodes_[static_cast<size_t>(j)]; }
  int steps() const { return static_cast<int>(nodes_.size()) - 1; }  // M
  double horizon() const { return nodes_.back(); }
  GridKind kind() const { return kind_; }
  double grading() const { return gamma_; }

  /// Index of the cell [t_k, t_{k+1}] containing t (0 <= t <= horizon);
  /// returns M-1 for t = horizon.
  int cell_of(double t) const;

  friend bool operator==(const TimeGrid& a, const TimeGrid& b) {
    return a.nodes_ == b.nodes_;
  }

 private:
  TimeGrid(std::vector<double> nodes, GridKind kind, double gamma)
      : nodes_(std::move(nodes)), kind_(kind), gamma_(gamma) {}

  std::vector<double> nodes_;
  GridKind kind_;
  double gamma_;
};

/// Function samples on a TimeGrid. The path is read as the piecewise
/// linear interpolant of its values, extended by the constant values[0]
/// to negative times.
struct SampledPath {
  TimeGrid grid;
  std::vector<double> values;

  SampledPath(TimeGrid g, std::vector<double> v);

  /// Builds the path by sampling fn at every node.
  template <typename Fn>
  static SampledPath sample(const TimeGrid& g, Fn&& fn) {
    std::vector<double> v;
    v.reserve(g.nodes().size());
    for (double t : g.nodes()) v.push_back(fn(t));
    return SampledPath(g, std::move(v));
  }

  /// Piecewise linear value at t in [0, horizon]; values[0] for t < 0.
  double interp(double t) const;
};

/// L1 quadrature coefficients of the Caputo derivative on a TimeGrid:
/// piecewise linear reconstruction, exact integration of the kernel
/// |t - s|^-alpha. Rows are generated on demand; row j applied to the
/// increments of a path gives the discrete derivative at t_j.
class CaputoWeights {
 public:
  CaputoWeights(FractionalOrder alpha, TimeGrid grid);

  const TimeGrid& grid() const { return grid_; }
  FractionalOrder order() const { return alpha_; }

  /// Fills w[0..j-1] with the row for target node j (1 <= j <= M):
  /// w_i = (1/Gamma(1-alpha)) * mean over cell i of (t_j - s)^-alpha.
  /// All weights are positive and increase toward the diagonal.
  void row(int j, std::vector<double>& w) const;

  /// Diagonal coefficient w_{j,j-1} = (t_j - t_{j-1})^-alpha / Gamma(2-alpha).
  double diag(int j) const;

 private:
  FractionalOrder alpha_;
  TimeGrid grid_;
  double inv_gamma1ma_;  // 1 / Gamma(1-alpha)
};

/// Builds the L1 weights. Throws for grids with fewer than 2 nodes.
CaputoWeights caputo_weights(FractionalOrder alpha, const TimeGrid& grid);

/// Discrete Caputo derivative of the path at node j:
///   sum_i w_{j,i} (values[i+1] - values[i]).
/// Kills constants exactly; applied to the path t it telescopes to
/// t_j^(1-alpha) / Gamma(2-alpha) exactly.
double caputo_apply(const CaputoWeights& weights, const SampledPath& path, int j);

/// Derivative at every node 1..M, reusing one scratch row (O(M^2) total).
std::vector<double> caputo_apply_all(const CaputoWeights& weights,
                                     const SampledPath& path);

/// Far/near split of the Marchaud form at time t with cut at t - delta:
///   far  = c_a Int_{-inf}^{t-delta} (phi(t) - phi(s)) / |t-s|^(1+alpha) ds
///   near = c_a Int_{t-delta}^{t}    (phi(t) - phi(s)) / |t-s|^(1+alpha) ds
/// normalized with c_a = alpha / Gamma(1-alpha) so that far + near equals
/// the Gamma-normalized Caputo derivative of the interpolant identically.
/// The tail over (-inf, 0) is the closed form (phi(t)-phi(0)) t^-alpha / alpha.
struct MarchaudSplit {
  double far;
  double near;
};

/// Requires 0 < delta < t <= horizon and delta at least the width of the
/// grid cell left of t (no sub-cell extrapolation).
MarchaudSplit marchaud_eval(const SampledPath& path, double t, double delta,
                            FractionalOrder alpha);

/// c_{alpha,beta} = Gamma(beta+1) / Gamma(beta-alpha+1), the constant in
/// the power rule for the Caputo derivative of t^beta. Requires beta > 0.
double power_rule_constant(FractionalOrder alpha, double beta);

/// Unnormalized Abel integral Int_0^t f(z) (t-z)^(alpha-1) dz of the
/// piecewise linear path f, cell moments integrated in closed form
/// (no 1/Gamma(alpha) factor). Requires 0 <= t <= horizon.
double fractional_integral(const SampledPath& f, double t, FractionalOrder alpha);

}  // namespace caphj
