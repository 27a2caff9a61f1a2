#include "caphj/hj_evolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <thread>

#include "caphj/special_fn.hpp"
#include "caphj/threads.hpp"

namespace caphj {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TorusGrid::TorusGrid(int dim, int n) : dim_(dim), n_(n) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("TorusGrid: dim must be 1 or 2");
  if (n < 8) throw std::invalid_argument("TorusGrid: n must be at least 8");
  size_ = (dim == 1) ? n : n * n;
}

EikonalProblem::EikonalProblem(TorusGrid grid_, GridFn a_, GridFn f_, GridFn g_,
                               double m_, FractionalOrder alpha_)
    : grid(grid_), a(std::move(a_)), f(std::move(f_)), g(std::move(g_)), m(m_),
      alpha(alpha_), c(0.0), lip_g(0.0) {
  const size_t size = static_cast<size_t>(grid.size());
  if (a.size() != size || f.size() != size || g.size() != size) {
    throw std::invalid_argument("EikonalProblem: grid function size mismatch");
  }
  if (!(m >= 1.0)) throw std::invalid_argument("EikonalProblem: m must be >= 1");
  for (double v : a)
    if (!std::isfinite(v)) throw std::invalid_argument("EikonalProblem: a must be finite");
  for (double v : f)
    if (!std::isfinite(v)) throw std::invalid_argument("EikonalProblem: f must be finite");
  for (double v : g)
    if (!std::isfinite(v)) throw std::invalid_argument("EikonalProblem: g must be finite");
  double a_min = *std::min_element(a.begin(), a.end());
  if (!(a_min > 0.0)) {
    throw std::invalid_argument("EikonalProblem: a must be bounded below by a positive constant");
  }
  double f_min = *std::min_element(f.begin(), f.end());
  for (double& v : f) v -= f_min;  // min f = 0 exactly on the grid
  c = (f_min == 0.0) ? 0.0 : -f_min;

  const int n = grid.n();
  const double h = grid.h();
  if (grid.dim() == 1) {
    double lx = 0.0;
    for (int i = 0; i < n; ++i) {
      lx = std::max(lx, std::abs(g[static_cast<size_t>((i + 1) % n)] -
                                 g[static_cast<size_t>(i)]) / h);
    }
    lip_g = lx;
  } else {
    double lx = 0.0, ly = 0.0;
    for (int iy = 0; iy < n; ++iy) {
      for (int ix = 0; ix < n; ++ix) {
        double gc = g[static_cast<size_t>(grid.index(ix, iy))];
        lx = std::max(lx, std::abs(g[static_cast<size_t>(grid.index((ix + 1) % n, iy))] - gc) / h);
        ly = std::max(ly, std::abs(g[static_cast<size_t>(grid.index(ix, (iy + 1) % n))] - gc) / h);
      }
    }
    lip_g = std::hypot(lx, ly);
  }
}

std::vector<int> aubry_set(const GridFn& fn, double tol) {
  if (fn.empty()) throw std::invalid_argument("aubry_set: empty grid function");
  for (double v : fn)
    if (!std::isfinite(v)) throw std::invalid_argument("aubry_set: f must be finite");
  double f_min = *std::min_element(fn.begin(), fn.end());
  std::vector<int> out;
  for (size_t i = 0; i < fn.size(); ++i) {
    if (fn[i] <= f_min + tol) out.push_back(static_cast<int>(i));
  }
  return out;
}

namespace {

// Axis neighbors (wrapped) of a flattened index.
void neighbors_of(const TorusGrid& grid, int p, int* nb, int& count) {
  const int n = grid.n();
  if (grid.dim() == 1) {
    nb[0] = grid.wrap(p - 1);
    nb[1] = grid.wrap(p + 1);
    count = 2;
  } else {
    int ix = p % n, iy = p / n;
    nb[0] = grid.index(grid.wrap(ix - 1), iy);
    nb[1] = grid.index(grid.wrap(ix + 1), iy);
    nb[2] = grid.index(ix, grid.wrap(iy - 1));
    nb[3] = grid.index(ix, grid.wrap(iy + 1));
    count = 4;
  }
}

}  // namespace

ErgodicSolution solve_ergodic(const EikonalProblem& problem) {
  const TorusGrid& grid = problem.grid;
  const double h = grid.h();
  std::vector<int> Z = aubry_set(problem.f, h * h);
  const double min_g = *std::min_element(problem.g.begin(), problem.g.end());

  GridFn phi(static_cast<size_t>(grid.size()));
  for (size_t i = 0; i < phi.size(); ++i) {
    phi[i] = std::pow(problem.f[i] / problem.a[i], 1.0 / problem.m);
  }

  GridFn dist(static_cast<size_t>(grid.size()), kInf);
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> pq;
  for (int z : Z) {
    dist[static_cast<size_t>(z)] = 0.0;
    pq.emplace(0.0, z);
  }
  int nb[4];
  int count = 0;
  while (!pq.empty()) {
    auto [d, p] = pq.top();
    pq.pop();
    if (d > dist[static_cast<size_t>(p)]) continue;
    neighbors_of(grid, p, nb, count);
    for (int q = 0; q < count; ++q) {
      int t = nb[q];
      double w = 0.5 * h * (phi[static_cast<size_t>(p)] + phi[static_cast<size_t>(t)]);
      double cand = d + w;
      if (cand < dist[static_cast<size_t>(t)]) {
        dist[static_cast<size_t>(t)] = cand;
        pq.emplace(cand, t);
      }
    }
  }
  GridFn v(static_cast<size_t>(grid.size()));
  for (size_t i = 0; i < v.size(); ++i) v[i] = min_g + dist[i];
  return ErgodicSolution{problem.c, std::move(v), std::move(Z)};
}

namespace {

// Godunov slope magnitude at point p for the grid function u:
// per axis max(u_p - min(neighbors), 0)/h, Euclidean norm across axes.
double godunov_slope(const TorusGrid& grid, const GridFn& u, int p, double up) {
  const int n = grid.n();
  const double inv_h = static_cast<double>(n);
  if (grid.dim() == 1) {
    double b = std::min(u[static_cast<size_t>(grid.wrap(p - 1))],
                        u[static_cast<size_t>(grid.wrap(p + 1))]);
    return std::max(up - b, 0.0) * inv_h;
  }
  int ix = p % n, iy = p / n;
  double bx = std::min(u[static_cast<size_t>(grid.index(grid.wrap(ix - 1), iy))],
                       u[static_cast<size_t>(grid.index(grid.wrap(ix + 1), iy))]);
  double by = std::min(u[static_cast<size_t>(grid.index(ix, grid.wrap(iy - 1)))],
                       u[static_cast<size_t>(grid.index(ix, grid.wrap(iy + 1)))]);
  double px = std::max(up - bx, 0.0) * inv_h;
  double py = std::max(up - by, 0.0) * inv_h;
  return std::hypot(px, py);
}

// Root of  w x + a ((x - b)/h)^m = rhs  on (b, hi] (single active axis) by
// safeguarded Newton; the function is strictly increasing.
double solve_one_axis(double w, double a, double m, double h, double b, double rhs,
                      double hi) {
  if (m == 1.0) {
    return (rhs + (a / h) * b) / (w + a / h);
  }
  double lo = b;
  double x = std::min(hi, b + h * std::pow(std::max(rhs - w * b, 0.0) / a, 1.0 / m));
  double hi_b = hi;
  for (int it = 0; it < 80; ++it) {
    double s = (x - b) / h;
    double sm = std::pow(s, m);
    double g = w * x + a * sm - rhs;
    if (g > 0.0) {
      hi_b = x;
    } else {
      lo = x;
    }
    double dg = w + a * m * ((s > 0.0) ? sm / s : 0.0) / h;
    double x_new = x - g / dg;
    if (!(x_new > lo) || !(x_new < hi_b)) x_new = 0.5 * (lo + hi_b);
    if (std::abs(x_new - x) <= 1e-15 * (1.0 + std::abs(x))) return x_new;
    x = x_new;
  }
  return 0.5 * (lo + hi_b);
}

// Root of  w x + a (hypot(x-b1, x-b2)/h)^m = rhs  on (b2, hi], b1 <= b2.
double solve_two_axis(double w, double a, double m, double h, double b1, double b2,
                      double rhs, double hi) {
  double lo = b2, hi_b = hi;
  double x = 0.5 * (lo + hi_b);
  for (int it = 0; it < 100; ++it) {
    double p1 = x - b1, p2 = x - b2;
    double s = std::hypot(p1, p2) / h;
    double g = w * x + a * std::pow(s, m) - rhs;
    if (g > 0.0) {
      hi_b = x;
    } else {
      lo = x;
    }
    double ds = (p1 + p2) / (s * h * h);
    double dg = w + a * m * std::pow(s, m - 1.0) * ds;
    double x_new = x - g / dg;
    if (!(x_new > lo) || !(x_new < hi_b)) x_new = 0.5 * (lo + hi_b);
    if (std::abs(x_new - x) <= 1e-15 * (1.0 + std::abs(x))) return x_new;
    x = x_new;
  }
  return 0.5 * (lo + hi_b);
}

// Local Gauss-Seidel update: solves w x + a |Dx|_God^m = rhs for the value
// at p with the current neighbor values frozen.
double local_solve(const TorusGrid& grid, const GridFn& u, int p, double w,
                   double a, double m, double rhs) {
  const int n = grid.n();
  const double h = grid.h();
  double x0 = rhs / w;
  if (grid.dim() == 1) {
    double b = std::min(u[static_cast<size_t>(grid.wrap(p - 1))],
                        u[static_cast<size_t>(grid.wrap(p + 1))]);
    if (x0 <= b) return x0;
    return solve_one_axis(w, a, m, h, b, rhs, x0);
  }
  int ix = p % n, iy = p / n;
  double bx = std::min(u[static_cast<size_t>(grid.index(grid.wrap(ix - 1), iy))],
                       u[static_cast<size_t>(grid.index(grid.wrap(ix + 1), iy))]);
  double by = std::min(u[static_cast<size_t>(grid.index(ix, grid.wrap(iy - 1)))],
                       u[static_cast<size_t>(grid.index(ix, grid.wrap(iy + 1)))]);
  double b1 = std::min(bx, by), b2 = std::max(bx, by);
  if (x0 <= b1) return x0;
  // single-axis candidate is valid only while the second axis stays inactive
  double x = solve_one_axis(w, a, m, h, b1, rhs, x0);
  if (x <= b2) return x;
  return solve_two_axis(w, a, m, h, b1, b2, rhs, x0);
}

}  // namespace

SpaceTimeSolution evolve(const EikonalProblem& problem, const TimeGrid& tgrid) {
  const TorusGrid& grid = problem.grid;
  const int M = tgrid.steps();
  const int size = grid.size();
  const int n = grid.n();
  CaputoWeights weights = caputo_weights(problem.alpha, tgrid);

  std::vector<GridFn> states;
  states.reserve(static_cast<size_t>(M) + 1);
  states.push_back(problem.g);

  std::vector<double> w;
  GridFn rhs(static_cast<size_t>(size));
  for (int j = 1; j <= M; ++j) {
    weights.row(j, w);
    const double wd = w[static_cast<size_t>(j) - 1];
    const double* prev = states[static_cast<size_t>(j) - 1].data();
    for (int i = 0; i < size; ++i) {
      rhs[static_cast<size_t>(i)] = problem.f[static_cast<size_t>(i)] + wd * prev[i];
    }
    for (int q = 0; q <= j - 2; ++q) {
      const double wq = w[static_cast<size_t>(q)];
      const double* s0 = states[static_cast<size_t>(q)].data();
      const double* s1 = states[static_cast<size_t>(q) + 1].data();
      for (int i = 0; i < size; ++i) {
        rhs[static_cast<size_t>(i)] -= wq * (s1[i] - s0[i]);
      }
    }

    GridFn u = states[static_cast<size_t>(j) - 1];  // warm start
    const double tol = 1e-12 * (1.0 + std::abs(*std::max_element(
                                    u.begin(), u.end(),
                                    [](double a_, double b_) { return std::abs(a_) < std::abs(b_); })));
    bool converged = false;
    for (int sweep = 0; sweep < 1000 && !converged; ++sweep) {
      double change = 0.0;
      if (grid.dim() == 1) {
        for (int dir = 0; dir < 2; ++dir) {
          for (int s = 0; s < n; ++s) {
            int p = (dir == 0) ? s : n - 1 - s;
            double x = local_solve(grid, u, p, wd, problem.a[static_cast<size_t>(p)],
                                   problem.m, rhs[static_cast<size_t>(p)]);
            change = std::max(change, std::abs(x - u[static_cast<size_t>(p)]));
            u[static_cast<size_t>(p)] = x;
          }
        }
      } else {
        for (int dir = 0; dir < 4; ++dir) {
          for (int sy = 0; sy < n; ++sy) {
            int iy = (dir & 1) ? n - 1 - sy : sy;
            for (int sx = 0; sx < n; ++sx) {
              int ix = (dir & 2) ? n - 1 - sx : sx;
              int p = grid.index(ix, iy);
              double x = local_solve(grid, u, p, wd, problem.a[static_cast<size_t>(p)],
                                     problem.m, rhs[static_cast<size_t>(p)]);
              change = std::max(change, std::abs(x - u[static_cast<size_t>(p)]));
              u[static_cast<size_t>(p)] = x;
            }
          }
        }
      }
      converged = change <= tol;
    }
    if (!converged) {
      throw numerical_error("evolve: fixed-point sweeps did not converge at step " +
                            std::to_string(j));
    }
    states.push_back(std::move(u));
  }
  return SpaceTimeSolution{problem, tgrid, std::move(states)};
}

std::vector<double> holder_seminorm_time(const SpaceTimeSolution& solution,
                                         const std::vector<double>& horizons) {
  const int M = solution.tgrid.steps();
  if (M < 2) throw std::invalid_argument("holder_seminorm_time: need at least 3 time nodes");
  const int size = solution.problem.grid.size();
  const double alpha = solution.problem.alpha.value();

  // max-reduction over (j1, j2) pairs is order independent, so chunking the
  // outer index across workers keeps the result bit-identical
  auto scan = [&](int j2_lo, int j2_hi, std::vector<double>& out) {
    out.assign(horizons.size(), 0.0);
    for (int j2 = j2_lo; j2 < j2_hi; ++j2) {
      const double t2 = solution.tgrid.node(j2);
      const double* u2 = solution.states[static_cast<size_t>(j2)].data();
      for (int j1 = 0; j1 < j2; ++j1) {
        const double* u1 = solution.states[static_cast<size_t>(j1)].data();
        double diff = 0.0;
        for (int i = 0; i < size; ++i) diff = std::max(diff, std::abs(u2[i] - u1[i]));
        double ratio = diff * std::pow(t2 - solution.tgrid.node(j1), -alpha);
        for (size_t hzi = 0; hzi < horizons.size(); ++hzi) {
          if (t2 <= horizons[hzi] && ratio > out[hzi]) out[hzi] = ratio;
        }
      }
    }
  };

  const int workers = std::min(thread_count(), std::max(1, M / 64));
  std::vector<double> result(horizons.size(), 0.0);
  if (workers <= 1) {
    scan(1, M + 1, result);
    return result;
  }
  std::vector<std::vector<double>> partial(static_cast<size_t>(workers));
  std::vector<std::thread> pool;
  // balance the triangular workload: costs grow linearly in j2, so chunk
  // boundaries follow sqrt spacing
  std::vector<int> cuts(static_cast<size_t>(workers) + 1);
  for (int w = 0; w <= workers; ++w) {
    cuts[static_cast<size_t>(w)] =
        1 + static_cast<int>(M * std::sqrt(static_cast<double>(w) / workers));
  }
  cuts.back() = M + 1;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back(scan, cuts[static_cast<size_t>(w)], cuts[static_cast<size_t>(w) + 1],
                      std::ref(partial[static_cast<size_t>(w)]));
  }
  for (auto& th : pool) th.join();
  for (const auto& p : partial) {
    for (size_t hzi = 0; hzi < horizons.size(); ++hzi) {
      result[hzi] = std::max(result[hzi], p[hzi]);
    }
  }
  return result;
}

double holder_seminorm_time(const SpaceTimeSolution& solution) {
  return holder_seminorm_time(solution, {solution.tgrid.horizon()})[0];
}

double aubry_ode_factor(const EikonalProblem& problem, double ell_gamma) {
  if (ell_gamma < 0.0) throw std::invalid_argument("aubry_ode_factor: ell_gamma must be >= 0");
  const double nu = *std::min_element(problem.a.begin(), problem.a.end());
  const double L = problem.lip_g;
  const double k = problem.m;
  const double sqrt_n = std::sqrt(static_cast<double>(problem.grid.dim()));
  double A = nu * std::pow(L, k - 1.0) / (sqrt_n + ell_gamma);
  if (!(A > 0.0)) {
    throw std::invalid_argument(
        "aubry_ode_factor: rate degenerates (Lip(g) = 0 with superlinear growth)");
  }
  return std::min(A, 1.0);
}

double aubry_path_length(const EikonalProblem& problem, const std::vector<int>& Z) {
  const TorusGrid& grid = problem.grid;
  const double min_g = *std::min_element(problem.g.begin(), problem.g.end());
  const double g_tol = 1e-12 * (1.0 + std::abs(min_g));
  std::vector<char> in_z(static_cast<size_t>(grid.size()), 0);
  for (int z : Z) in_z[static_cast<size_t>(z)] = 1;
  std::vector<int> depth(static_cast<size_t>(grid.size()), -1);
  std::queue<int> bfs;
  for (int z : Z) {
    if (problem.g[static_cast<size_t>(z)] <= min_g + g_tol) {
      depth[static_cast<size_t>(z)] = 0;
      bfs.push(z);
    }
  }
  if (bfs.empty()) {
    throw numerical_error("aubry_path_length: argmin g does not meet the Aubry set");
  }
  int nb[4];
  int count = 0;
  int deepest = 0;
  while (!bfs.empty()) {
    int p = bfs.front();
    bfs.pop();
    neighbors_of(grid, p, nb, count);
    for (int q = 0; q < count; ++q) {
      int t = nb[q];
      if (!in_z[static_cast<size_t>(t)] || depth[static_cast<size_t>(t)] >= 0) continue;
      depth[static_cast<size_t>(t)] = depth[static_cast<size_t>(p)] + 1;
      deepest = std::max(deepest, depth[static_cast<size_t>(t)]);
      bfs.push(t);
    }
  }
  for (int z : Z) {
    if (depth[static_cast<size_t>(z)] < 0) {
      throw numerical_error("aubry_path_length: Aubry set not path-connected to argmin g");
    }
  }
  return deepest * grid.h();
}

AubryReport aubry_decay_check(const SpaceTimeSolution& solution,
                              const ErgodicSolution& erg, const FodeSolution& E,
                              double ell_gamma) {
  const EikonalProblem& problem = solution.problem;
  const double min_g = *std::min_element(problem.g.begin(), problem.g.end());
  const double g_tol = 1e-12 * (1.0 + std::abs(min_g));
  bool assumption_ok = false;
  for (int z : erg.Z) {
    if (problem.g[static_cast<size_t>(z)] <= min_g + g_tol) {
      assumption_ok = true;
      break;
    }
  }
  AubryReport report{assumption_ok, kInf, kInf, 0};
  const double factor = problem.lip_g * ell_gamma;
  for (int j = 0; j <= solution.tgrid.steps(); ++j) {
    const double t = solution.tgrid.node(j);
    const double envelope = min_g + factor * E.path.interp(t);
    const GridFn& u = solution.states[static_cast<size_t>(j)];
    for (int z : erg.Z) {
      double uz = u[static_cast<size_t>(z)];
      report.worst_lower_margin = std::min(report.worst_lower_margin, uz - min_g);
      report.worst_upper_margin = std::min(report.worst_upper_margin, envelope - uz);
      ++report.checked;
    }
  }
  return report;
}

namespace {

double wrap_unit(double d) {
  d = std::fmod(d, 1.0);
  if (d > 0.5) d -= 1.0;
  if (d <= -0.5) d += 1.0;
  return d;
}

// Periodic distance from x to the point p (dim-dimensional).
double dist_point(const std::vector<double>& x, const std::vector<double>& p) {
  double acc = 0.0;
  for (size_t d = 0; d < x.size(); ++d) {
    double w = wrap_unit(x[d] - p[d]);
    acc += w * w;
  }
  return std::sqrt(acc);
}

// Periodic distance from x to the segment [p, q] (q reached from p along
// the shortest torus displacement).
double dist_segment(const std::vector<double>& x, const std::vector<double>& p,
                    const std::vector<double>& q) {
  const size_t dim = x.size();
  std::vector<double> seg(dim);
  for (size_t d = 0; d < dim; ++d) seg[d] = wrap_unit(q[d] - p[d]);
  double seg_sq = 0.0;
  for (size_t d = 0; d < dim; ++d) seg_sq += seg[d] * seg[d];
  double best = kInf;
  // minimize over the lattice images of the displacement x - p
  const int shift_lo = -1, shift_hi = 1;
  std::vector<double> rel(dim);
  auto eval = [&](const std::vector<double>& r) {
    double tproj = 0.0;
    for (size_t d = 0; d < dim; ++d) tproj += r[d] * seg[d];
    double tt = (seg_sq > 0.0) ? std::clamp(tproj / seg_sq, 0.0, 1.0) : 0.0;
    double acc = 0.0;
    for (size_t d = 0; d < dim; ++d) {
      double diff = r[d] - tt * seg[d];
      acc += diff * diff;
    }
    best = std::min(best, std::sqrt(acc));
  };
  if (dim == 1) {
    for (int s = shift_lo; s <= shift_hi; ++s) {
      rel[0] = x[0] - p[0] + s;
      eval(rel);
    }
  } else {
    for (int sx = shift_lo; sx <= shift_hi; ++sx) {
      for (int sy = shift_lo; sy <= shift_hi; ++sy) {
        rel[0] = x[0] - p[0] + sx;
        rel[1] = x[1] - p[1] + sy;
        eval(rel);
      }
    }
  }
  return best;
}

}  // namespace

double ladder_constant_M(const EikonalProblem& problem, double ell_gamma) {
  const double a_min = *std::min_element(problem.a.begin(), problem.a.end());
  const double c_h = std::max(2.0, 1.0 / a_min);
  const double f_max = *std::max_element(problem.f.begin(), problem.f.end());
  const double L = problem.lip_g;
  const double sqrt_n = std::sqrt(static_cast<double>(problem.grid.dim()));
  return L + c_h * c_h + c_h * f_max + L * c_h * (sqrt_n + ell_gamma);
}

SupersolResidual supersolution_residual(const EikonalProblem& problem,
                                        const std::vector<std::vector<double>>& anchors,
                                        int i, double L, double M,
                                        const FodeSolution& E) {
  const TorusGrid& grid = problem.grid;
  const double h = grid.h();
  if (i < 0 || static_cast<size_t>(i) + 1 >= anchors.size()) {
    throw std::invalid_argument("supersolution_residual: ladder index i out of range");
  }
  for (const auto& p : anchors) {
    if (p.size() != static_cast<size_t>(grid.dim())) {
      throw std::invalid_argument("supersolution_residual: anchor dimension mismatch");
    }
  }
  // anchors must sit on grid points inside the Aubry set
  const double f_tol = h * h;
  std::vector<int> anchor_idx;
  for (const auto& p : anchors) {
    int ix = static_cast<int>(std::llround(p[0] * grid.n()));
    int iy = (grid.dim() == 2) ? static_cast<int>(std::llround(p[1] * grid.n())) : 0;
    double x_snap = grid.coord(grid.wrap(ix));
    if (std::abs(wrap_unit(p[0] - x_snap)) > 1e-9 ||
        (grid.dim() == 2 &&
         std::abs(wrap_unit(p[1] - grid.coord(grid.wrap(iy)))) > 1e-9)) {
      throw std::invalid_argument("supersolution_residual: anchors must be grid points");
    }
    int idx = grid.index(grid.wrap(ix), grid.wrap(iy));
    if (problem.f[static_cast<size_t>(idx)] > f_tol) {
      throw std::invalid_argument("supersolution_residual: anchors outside the Aubry set");
    }
    anchor_idx.push_back(idx);
  }

  // static profile: U(x,t) = P(x) E(t) + Q(x)
  double chain = 0.0;
  for (int jj = 1; jj <= i; ++jj) {
    chain += dist_point(anchors[static_cast<size_t>(jj)], anchors[static_cast<size_t>(jj) - 1]);
  }
  GridFn P(static_cast<size_t>(grid.size()));
  GridFn Q(static_cast<size_t>(grid.size()));
  std::vector<double> x(static_cast<size_t>(grid.dim()));
  for (int p = 0; p < grid.size(); ++p) {
    x[0] = grid.coord(p % grid.n());
    if (grid.dim() == 2) x[1] = grid.coord(p / grid.n());
    P[static_cast<size_t>(p)] =
        L * (chain + dist_point(x, anchors[static_cast<size_t>(i)]));
    Q[static_cast<size_t>(p)] =
        M * dist_segment(x, anchors[static_cast<size_t>(i)], anchors[static_cast<size_t>(i) + 1]);
  }

  // kink set: one-sided slope jump of the static profile beyond the smooth
  // scale, plus the adjacent points (paper's "within h" exclusion)
  std::vector<char> kink(static_cast<size_t>(grid.size()), 0);
  const double slope_scale = std::max(1.0, L + M);
  const double jump_tol = 20.0 * h * slope_scale + 1e-8;
  int nb[4];
  int count = 0;
  for (int p = 0; p < grid.size(); ++p) {
    neighbors_of(grid, p, nb, count);
    double wp = P[static_cast<size_t>(p)] + Q[static_cast<size_t>(p)];
    for (int axis = 0; axis < grid.dim(); ++axis) {
      double w_minus = P[static_cast<size_t>(nb[2 * axis])] + Q[static_cast<size_t>(nb[2 * axis])];
      double w_plus = P[static_cast<size_t>(nb[2 * axis + 1])] + Q[static_cast<size_t>(nb[2 * axis + 1])];
      if (std::abs((w_plus - wp) - (wp - w_minus)) / h > jump_tol) {
        kink[static_cast<size_t>(p)] = 1;
      }
    }
  }
  std::vector<char> excluded = kink;
  for (int p = 0; p < grid.size(); ++p) {
    if (!kink[static_cast<size_t>(p)]) continue;
    neighbors_of(grid, p, nb, count);
    for (int q = 0; q < count; ++q) excluded[static_cast<size_t>(nb[q])] = 1;
  }

  // discrete Caputo of E at every node (solver-independent application)
  CaputoWeights weights = caputo_weights(E.problem.alpha, E.path.grid);
  std::vector<double> dE = caputo_apply_all(weights, E.path);

  GridFn u(static_cast<size_t>(grid.size()));
  SupersolResidual out{kInf, kInf};
  const int steps = E.path.grid.steps();
  for (int j = 1; j <= steps; ++j) {
    const double Ej = E.value(j);
    for (int p = 0; p < grid.size(); ++p) {
      u[static_cast<size_t>(p)] = P[static_cast<size_t>(p)] * Ej + Q[static_cast<size_t>(p)];
    }
    for (int p = 0; p < grid.size(); ++p) {
      double slope = godunov_slope(grid, u, p, u[static_cast<size_t>(p)]);
      double residual = P[static_cast<size_t>(p)] * dE[static_cast<size_t>(j)] +
                        problem.a[static_cast<size_t>(p)] * std::pow(slope, problem.m) -
                        problem.f[static_cast<size_t>(p)];
      if (!excluded[static_cast<size_t>(p)]) {
        out.min_off_kink = std::min(out.min_off_kink, residual);
      }
      if (p == anchor_idx[static_cast<size_t>(i)]) {
        out.at_anchor = std::min(out.at_anchor, residual);
      }
    }
  }
  return out;
}

RateResult eikonal_rate(double D, FractionalOrder alpha, double t) {
  if (!(D >= 1.0)) throw std::invalid_argument("eikonal_rate: D must be >= 1");
  if (!(t > 0.0)) throw std::invalid_argument("eikonal_rate: t must be positive");
  const double a = alpha.value();
  const double exponent = a * (2.0 * D - 3.0) / (2.0 * D - 1.0);
  RateResult out{0.0, 0.0, exponent, exponent < 0.0};
  if (D == 1.0) {
    // the infimum of eps t^a + t^-a is attained as eps -> 0
    out.eps_opt = 0.0;
    out.bound = std::pow(t, -a);
    return out;
  }
  const double p = 2.0 * (D - 1.0);
  const double q = 2.0 * D - 1.0;
  auto bound_at = [&](double tt, double& eps) {
    eps = std::pow(p, 1.0 / q) * std::pow(tt, -2.0 * a / q);
    return eps * std::pow(tt, a) + std::pow(eps, -p) * std::pow(tt, -a);
  };
  double eps1, eps2;
  out.bound = bound_at(t, eps1);
  out.eps_opt = eps1;
  double bound2 = bound_at(2.0 * t, eps2);
  double expected = std::pow(2.0, exponent);
  if (std::abs(bound2 / out.bound - expected) > 1e-12 * std::max(1.0, expected)) {
    throw numerical_error("eikonal_rate: scaling verification failed");
  }
  return out;
}

}  // namespace caphj
