#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "caphj/catalog.hpp"
#include "caphj/counterexample.hpp"
#include "caphj/csv.hpp"
#include "caphj/frac_ode.hpp"
#include "caphj/hj_evolve.hpp"
#include "caphj/run_config.hpp"
#include "caphj/special_fn.hpp"

namespace caphj {

namespace {

std::string join_path(const std::string& dir, const std::string& file) {
  if (dir.empty() || file.empty() || file.front() == '/') return file;
  if (dir.back() == '/') return dir + file;
  return dir + "/" + file;
}

FractionalOrder order_of(const RunConfig& config) {
  return FractionalOrder(config.get_real("alpha"));
}

TimeGrid grid_of(const RunConfig& config, FractionalOrder alpha, double default_T,
                 int default_M, const std::string& default_kind) {
  double T = config.get_real("T", default_T);
  int M = config.get_int("M", default_M);
  std::string kind = config.get_str("grid", default_kind);
  if (kind == "uniform") return TimeGrid::uniform(T, M);
  if (kind == "graded") {
    double gamma = config.get_real("gamma", TimeGrid::default_grading(alpha));
    return TimeGrid::graded(T, M, gamma);
  }
  throw std::invalid_argument("parameter 'grid' must be uniform or graded, got " + kind);
}

void write_kv(std::ostream& out, const std::string& key, double value) {
  out << key << " = " << format_real(value) << "\n";
}

void run_caputo(const RunConfig& config, const std::string& out_dir) {
  FractionalOrder alpha = order_of(config);
  double beta = config.get_real("beta");
  if (!(beta > 0.0)) throw std::invalid_argument("parameter 'beta' must be positive");
  TimeGrid grid = grid_of(config, alpha, 1.0, 4096, "uniform");
  CaputoWeights weights = caputo_weights(alpha, grid);
  SampledPath path = SampledPath::sample(grid, [beta](double t) { return std::pow(t, beta); });
  std::vector<double> numeric = caputo_apply_all(weights, path);
  const double c_ab = power_rule_constant(alpha, beta);

  Table table;
  table.add_column("t");
  table.add_column("numeric");
  table.add_column("exact");
  table.add_column("abs_err");
  for (int j = 1; j <= grid.steps(); ++j) {
    double t = grid.node(j);
    double exact = c_ab * std::pow(t, beta - alpha.value());
    table.push_row({t, numeric[static_cast<size_t>(j)], exact,
                    std::abs(numeric[static_cast<size_t>(j)] - exact)});
  }
  emit_csv(table, join_path(out_dir, config.get_str("out", "caputo.csv")));
}

void run_mlf(const RunConfig& config, const std::string& out_dir) {
  FractionalOrder alpha = order_of(config);
  MittagLefflerParams params(alpha);
  if (config.has("z")) {
    double z = config.get_real("z");
    double value = mittag_leffler(params, z);
    std::cout << format_real(value) << "\n";
    if (config.has("out")) {
      Table table;
      table.add_column("z");
      table.add_column("value");
      table.push_row({z, value});
      emit_csv(table, join_path(out_dir, config.kv.at("out")));
    }
    return;
  }
  double tmin = config.get_real("tmin", 1.0);
  double tmax = config.get_real("tmax", 1e4);
  int count = config.get_int("count", 50);
  if (!(tmin > 0.0) || !(tmax > tmin)) {
    throw std::invalid_argument("parameters 'tmin','tmax' must satisfy 0 < tmin < tmax");
  }
  if (count < 2) throw std::invalid_argument("parameter 'count' must be at least 2");
  const double g_lo = 1.0 / gamma_fn(1.0 - alpha.value());
  const double g_hi = gamma_fn(1.0 + alpha.value());
  Table table;
  for (const char* name : {"t", "value", "lower", "upper", "viol_lower", "viol_upper"}) {
    table.add_column(name);
  }
  for (int i = 0; i < count; ++i) {
    double t = tmin * std::pow(tmax / tmin, static_cast<double>(i) / (count - 1));
    double value = mittag_leffler(params, -t);
    double lower = g_lo / t;
    double upper = g_hi / t;
    table.push_row({t, value, lower, upper, value < lower ? 1.0 : 0.0,
                    value > upper ? 1.0 : 0.0});
  }
  emit_csv(table, join_path(out_dir, config.get_str("out", "mlf.csv")));
}

void run_beta(const RunConfig& config, const std::string& out_dir) {
  FractionalOrder alpha = order_of(config);
  Table table;
  if (config.get_int("invert", 0) != 0) {
    double b = inverse_beta_half(alpha);
    std::cout << format_real(b) << "\n";
    table.add_column("alpha");
    table.add_column("b_alpha");
    table.push_row({alpha.value(), b});
  } else {
    double z0 = config.get_real("z0", 0.0);
    double z1 = config.get_real("z1", 1.0);
    double value = reg_incomplete_beta(alpha, z0, z1);
    std::cout << format_real(value) << "\n";
    table.add_column("z0");
    table.add_column("z1");
    table.add_column("value");
    table.push_row({z0, z1, value});
  }
  if (config.has("out")) emit_csv(table, join_path(out_dir, config.kv.at("out")));
}

void run_counterexample(const RunConfig& config, const std::string& out_dir) {
  FractionalOrder alpha = order_of(config);
  int kmax = config.get_int("kmax", 8);
  int resolution = config.get_int("resolution", 512);
  CounterexampleSpec spec = build_spec(alpha, kmax);
  int N = find_admissible_N(spec);
  double a_odd = spec.a[static_cast<size_t>(2 * N) + 1];
  double a_even = spec.a[static_cast<size_t>(2 * N) + 2];
  double gap = oscillation_gap(spec, N, resolution);

  const std::string prefix = config.get_str("out", "counterexample");
  // trace: breakpoints below a_{2N+2} plus log-spaced fill
  std::vector<double> ts;
  for (double ak : spec.a) {
    if (ak > a_even) break;
    ts.push_back(ak);
  }
  const int fill = 12;
  double t_lo = 0.25;
  for (int i = 0; i <= fill * 8; ++i) {
    double t = t_lo * std::pow(a_even / t_lo, static_cast<double>(i) / (fill * 8));
    ts.push_back(t);
  }
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  Table trace;
  trace.add_column("t");
  trace.add_column("f");
  trace.add_column("u");
  for (double t : ts) {
    trace.push_row({t, eval_f(spec, t), eval_u(spec, t, resolution)});
  }
  emit_csv(trace, join_path(out_dir, prefix + "_trace.csv"));

  std::ofstream marker(join_path(out_dir, prefix + "_gap.txt"), std::ios::binary);
  if (!marker) throw std::invalid_argument("cannot open marker file for " + prefix);
  marker << "N = " << N << "\n";
  write_kv(marker, "a_2N1", a_odd);
  write_kv(marker, "a_2N2", a_even);
  write_kv(marker, "gap", gap);
  write_kv(marker, "minus_eta_over_4", -spec.eta_alpha / 4.0);
  write_kv(marker, "b_alpha", spec.b_alpha);
  write_kv(marker, "eta_alpha", spec.eta_alpha);
}

void run_fode(const RunConfig& config, const std::string& out_dir) {
  FractionalOrder alpha = order_of(config);
  FodeProblem problem(alpha, config.get_real("A"), config.get_real("k"));
  TimeGrid grid = grid_of(config, alpha, 50.0, 2048, "graded");
  double eps = config.get_real("eps", 0.01);
  FodeSolution solution = solve_fode(problem, grid);

  bool have_envelope = grid.horizon() >= 100.0;
  DecayEnvelope env{0.0, 0.0, 0.0};
  if (have_envelope) env = decay_envelope(solution, eps);
  const double beta = alpha.value() / problem.k;
  const double nan = std::nan("");

  Table table;
  for (const char* name :
       {"t", "E_numeric", "E_exact_if_k1", "lower_envelope", "upper_envelope"}) {
    table.add_column(name);
  }
  for (int j = 0; j <= grid.steps(); ++j) {
    double t = grid.node(j);
    double exact = (problem.k == 1.0) ? exact_k1(alpha, problem.A, t) : nan;
    double lo = (have_envelope && t >= env.t_star) ? env.C_low * std::pow(t, -beta) : nan;
    double hi = (have_envelope && t >= env.t_star) ? env.C_high * std::pow(t, -beta + eps) : nan;
    table.push_row({t, solution.value(j), exact, lo, hi});
  }
  emit_csv(table, join_path(out_dir, config.get_str("out", "fode.csv")));
}

void run_hj(const RunConfig& config, const std::string& out_dir) {
  FractionalOrder alpha = order_of(config);
  int dim = config.get_int("dim", 1);
  int n = config.get_int("n");
  TorusGrid grid(dim, n);
  double m = config.get_real("m", 1.0);
  GridFn a = catalog_fn(config.get_str("a", "one"), grid);
  GridFn f = catalog_fn(config.kv.at("f"), grid);
  std::string g_sel = config.get_str("g", "zero");
  GridFn g = (g_sel == "vstar") ? GridFn(static_cast<size_t>(grid.size()), 0.0)
                                : catalog_fn(g_sel, grid);
  EikonalProblem problem(grid, std::move(a), std::move(f), std::move(g), m, alpha);
  ErgodicSolution erg = solve_ergodic(problem);
  if (g_sel == "vstar") {
    problem = EikonalProblem(grid, problem.a, problem.f, erg.v, m, alpha);
  }
  TimeGrid tgrid = grid_of(config, alpha, 50.0, 1024, "graded");
  SpaceTimeSolution solution = evolve(problem, tgrid);

  // snapshots
  std::vector<double> snap_times;
  {
    std::string spec = config.get_str("snapshots", "");
    if (spec.empty()) {
      snap_times.push_back(tgrid.horizon());
    } else {
      std::stringstream ss(spec);
      std::string item;
      while (std::getline(ss, item, ',')) {
        try {
          snap_times.push_back(std::stod(item));
        } catch (const std::exception&) {
          throw std::invalid_argument("parameter 'snapshots' has a bad entry: " + item);
        }
      }
    }
  }
  const std::string prefix = config.get_str("out", "hj");
  Table snaps;
  snaps.add_column("t");
  snaps.add_column("x");
  if (dim == 2) snaps.add_column("y");
  snaps.add_column("u");
  for (double target : snap_times) {
    // nearest time node
    int best = 0;
    for (int j = 0; j <= tgrid.steps(); ++j) {
      if (std::abs(tgrid.node(j) - target) < std::abs(tgrid.node(best) - target)) best = j;
    }
    const GridFn& u = solution.states[static_cast<size_t>(best)];
    for (int p = 0; p < grid.size(); ++p) {
      if (dim == 1) {
        snaps.push_row({tgrid.node(best), grid.coord(p), u[static_cast<size_t>(p)]});
      } else {
        snaps.push_row({tgrid.node(best), grid.coord(p % n), grid.coord(p / n),
                        u[static_cast<size_t>(p)]});
      }
    }
  }
  emit_csv(snaps, join_path(out_dir, prefix + "_snapshots.csv"));

  // summary: ergodic constant, time regularity, asymptotic gap, Aubry margins
  std::ofstream summary(join_path(out_dir, prefix + "_summary.txt"), std::ios::binary);
  if (!summary) throw std::invalid_argument("cannot open summary file for " + prefix);
  write_kv(summary, "c", erg.c);
  write_kv(summary, "holder_seminorm", holder_seminorm_time(solution));
  double gap = 0.0;
  const GridFn& u_final = solution.states.back();
  for (int p = 0; p < grid.size(); ++p) {
    gap = std::max(gap, std::abs(u_final[static_cast<size_t>(p)] - erg.v[static_cast<size_t>(p)]));
  }
  write_kv(summary, "asymptotic_gap", gap);
  try {
    double ell = aubry_path_length(problem, erg.Z);
    double A = aubry_ode_factor(problem, ell);
    FodeSolution E = solve_fode(FodeProblem(alpha, A, problem.m), tgrid);
    AubryReport report = aubry_decay_check(solution, erg, E, ell);
    summary << "aubry_ok = " << (report.assumption_ok ? 1 : 0) << "\n";
    write_kv(summary, "ell_gamma", ell);
    write_kv(summary, "aubry_lower_margin", report.worst_lower_margin);
    write_kv(summary, "aubry_upper_margin", report.worst_upper_margin);
  } catch (const std::exception& e) {
    summary << "aubry_skipped = " << e.what() << "\n";
  }
}

void run_rate(const RunConfig& config, const std::string& out_dir) {
  FractionalOrder alpha = order_of(config);
  double D = config.get_real("D");
  double t = config.get_real("t", 100.0);
  RateResult r = eikonal_rate(D, alpha, t);
  std::cout << "eps_opt = " << format_real(r.eps_opt) << "\n"
            << "bound = " << format_real(r.bound) << "\n"
            << "exponent = " << format_real(r.exponent) << "\n"
            << "decaying = " << (r.decaying ? 1 : 0) << "\n";
  if (config.has("out")) {
    Table table;
    for (const char* name : {"D", "t", "eps_opt", "bound", "exponent", "decaying"}) {
      table.add_column(name);
    }
    table.push_row({D, t, r.eps_opt, r.bound, r.exponent, r.decaying ? 1.0 : 0.0});
    emit_csv(table, join_path(out_dir, config.kv.at("out")));
  }
}

}  // namespace

void run(const RunConfig& config, const std::string& out_dir) {
  validate_config(config);
  if (config.cmd == "caputo") return run_caputo(config, out_dir);
  if (config.cmd == "mlf") return run_mlf(config, out_dir);
  if (config.cmd == "beta") return run_beta(config, out_dir);
  if (config.cmd == "counterexample") return run_counterexample(config, out_dir);
  if (config.cmd == "fode") return run_fode(config, out_dir);
  if (config.cmd == "hj") return run_hj(config, out_dir);
  if (config.cmd == "rate") return run_rate(config, out_dir);
  throw std::invalid_argument("unknown subcommand '" + config.cmd + "'");
}

}  // namespace caphj
