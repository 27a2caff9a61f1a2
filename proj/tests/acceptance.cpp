// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. Heavy runs are shared between related criteria.
#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "caphj/catalog.hpp"
#include "caphj/counterexample.hpp"
#include "caphj/frac_core.hpp"
#include "caphj/frac_ode.hpp"
#include "caphj/hj_evolve.hpp"
#include "caphj/special_fn.hpp"
#include "oracles.hpp"

using namespace caphj;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, const char* title, bool pass, const std::string& detail) {
  std::printf("[%s] C%-2d %s: %s\n", pass ? "PASS" : "FAIL", criterion, title,
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list args;
  va_start(args, f);
  std::vsnprintf(buf, sizeof(buf), f, args);
  va_end(args);
  return buf;
}

// ---------------------------------------------------------------------------
// C1: power rule reproduction and refinement order
void criterion_1() {
  bool pass = true;
  std::string detail;
  for (double av : {0.3, 0.5, 0.7}) {
    FractionalOrder alpha(av);
    for (double beta : {av, 1.0, 2.0}) {
      TimeGrid g = TimeGrid::uniform(1.0, 4096);
      CaputoWeights w = caputo_weights(alpha, g);
      SampledPath p = SampledPath::sample(g, [beta](double t) { return std::pow(t, beta); });
      double exact = power_rule_constant(alpha, beta);
      double rel = std::abs(caputo_apply(w, p, 4096) - exact) / exact;
      if (rel > 1e-3) {
        pass = false;
        detail += fmt("rel(%.1f,%.1f)=%.2e>1e-3 ", av, beta, rel);
      }
    }
    // refinement order for the smooth power beta = 2
    double errs[3];
    int Ms[3] = {256, 1024, 4096};
    for (int k = 0; k < 3; ++k) {
      TimeGrid g = TimeGrid::uniform(1.0, Ms[k]);
      CaputoWeights w = caputo_weights(alpha, g);
      SampledPath p = SampledPath::sample(g, [](double t) { return t * t; });
      errs[k] = std::abs(caputo_apply(w, p, Ms[k]) - power_rule_constant(alpha, 2.0));
    }
    double order = std::log(errs[1] / errs[2]) / std::log(4.0);
    detail += fmt("order(a=%.1f)=%.4f ", av, order);
    if (order < 1.5) {
      pass = false;
      detail += fmt("<1.5(theory 2-a=%.1f) ", 2.0 - av);
    }
  }
  report(1, "power rule c_{a,b} t^(b-a), refinement order", pass, detail);
}

// ---------------------------------------------------------------------------
// C2: Mittag-Leffler eigenfunction identity under the discrete operator
void criterion_2() {
  bool pass = true;
  std::string detail = "measured on t >= 0.1 (first-cell L1 transient excluded): ";
  for (double av : {0.3, 0.5, 0.7}) {
    FractionalOrder alpha(av);
    TimeGrid g = TimeGrid::graded(20.0, 2048, TimeGrid::default_grading(alpha));
    CaputoWeights w = caputo_weights(alpha, g);
    MittagLefflerParams params(alpha);
    SampledPath p = SampledPath::sample(g, [&](double t) {
      return mittag_leffler(params, -std::pow(t, av));
    });
    std::vector<double> d = caputo_apply_all(w, p);
    double worst = 0.0, worst_all = 0.0;
    for (int j = 1; j <= g.steps(); ++j) {
      double target = -p.values[static_cast<size_t>(j)];
      double rel = std::abs(d[static_cast<size_t>(j)] - target) / std::abs(target);
      worst_all = std::max(worst_all, rel);
      if (g.node(j) >= 0.1) worst = std::max(worst, rel);
    }
    detail += fmt("a=%.1f: %.2e (all nodes %.2e) ", av, worst, worst_all);
    if (worst > 2e-2) pass = false;
  }
  report(2, "d^a E_a(-t^a) = -E_a(-t^a), graded M=2048 T=20, rel<=2e-2", pass, detail);
}

// ---------------------------------------------------------------------------
// C3: two-sided decay bounds as printed, 50 log-spaced t in [1, 1e4]
void criterion_3() {
  bool pass = true;
  std::string detail;
  for (double av : {0.3, 0.5, 0.7}) {
    FractionalOrder alpha(av);
    double g_lo = 1.0 / gamma_fn(1.0 - av);
    double g_hi = gamma_fn(1.0 + av);
    int viol = 0;
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      double t = std::pow(10.0, 4.0 * i / 49.0);
      double e = mittag_leffler(alpha, -t);
      if (e < g_lo / t) {
        ++viol;
        worst = std::max(worst, (g_lo / t - e) / e);
      }
      if (e > g_hi / t) ++viol;
    }
    detail += fmt("a=%.1f: %d violations%s ", av, viol,
                  viol ? fmt(" (lower bound, worst rel %.2f)", worst).c_str() : "");
    if (viol) pass = false;
  }
  report(3, "1/(G(1-a)t) <= E_a(-t) <= G(1+a)/t, zero violations", pass, detail);
}

// ---------------------------------------------------------------------------
// C4: the oscillation counterexample at alpha = 1/2
void criterion_4() {
  bool pass = true;
  std::string detail;
  FractionalOrder half(0.5);
  CounterexampleSpec spec = build_spec(half, 8);

  if (std::abs(spec.b_alpha - 0.5) > 1e-12) {
    pass = false;
    detail += fmt("b=%.15g!=1/2 ", spec.b_alpha);
  }
  double eta_oracle = oracles::beta_integral(0.5, spec.b_alpha * spec.b_alpha * spec.b_alpha,
                                             spec.b_alpha * spec.b_alpha, 1e-10);
  double eta_err = std::abs(spec.eta_alpha - eta_oracle);
  detail += fmt("|eta-oracle|=%.1e ", eta_err);
  if (eta_err > 1e-6) pass = false;

  int N = find_admissible_N(spec);
  double gap = oscillation_gap(spec, N, 512);
  double quarter = spec.eta_alpha / 4.0;
  detail += fmt("N=%d gap=%.4f bound=%.4f ", N, gap, -quarter + 1e-3);
  if (gap > -quarter + 1e-3) pass = false;

  // discrete Caputo of the computed u against Gamma(1/2) f; the pinned
  // tolerance 0.02 is 10x the observed L1 truncation of u on this grid
  const double tol = 0.02;
  std::vector<double> nodes = quadrature_nodes(spec, 64.0, 512);
  std::vector<double> fv;
  fv.reserve(nodes.size());
  for (double z : nodes) fv.push_back(eval_f(spec, z));
  TimeGrid grid = TimeGrid::from_nodes(nodes);
  SampledPath fpath(grid, fv);
  std::vector<double> uv(nodes.size());
  double u_max = 0.0;
  for (size_t j = 0; j < nodes.size(); ++j) {
    uv[j] = fractional_integral(fpath, nodes[j], half);
    u_max = std::max(u_max, uv[j]);
  }
  SampledPath upath(grid, uv);
  CaputoWeights w = caputo_weights(half, grid);
  std::vector<double> d = caputo_apply_all(w, upath);
  double worst = 0.0, most_negative = 0.0;
  const double ga = gamma_fn(0.5);
  for (int j = 1; j <= grid.steps(); ++j) {
    worst = std::max(worst,
                     std::abs(d[static_cast<size_t>(j)] - ga * fv[static_cast<size_t>(j)]));
    most_negative = std::min(most_negative, d[static_cast<size_t>(j)]);
  }
  detail += fmt("|Du-G(a)f|=%.1e minDu=%.1e (tol %.2g) ", worst, most_negative, tol);
  if (worst > tol || most_negative < -tol) pass = false;

  double cap = pi_csc(half);
  detail += fmt("max u=%.4f <= pi csc+1e-6=%.4f", u_max, cap + 1e-6);
  if (u_max > cap + 1e-6) pass = false;

  report(4, "oscillation gap u(a_{2N+2})-u(a_{2N+1}) <= -eta/4", pass, detail);
}

// ---------------------------------------------------------------------------
// C5: fractional relaxation solver
void criterion_5() {
  bool pass = true;
  std::string detail;
  for (double av : {0.3, 0.5, 0.7}) {
    FractionalOrder alpha(av);
    double worst = 0.0;
    for (double A : {0.5, 1.0, 2.0}) {
      TimeGrid g = TimeGrid::graded(50.0, 2048, TimeGrid::default_grading(alpha));
      FodeSolution sol = solve_fode(FodeProblem(alpha, A, 1.0), g);
      for (int j = 0; j <= g.steps(); ++j) {
        double exact = exact_k1(alpha, A, g.node(j));
        worst = std::max(worst, std::abs(sol.value(j) - exact) / exact);
        if (!(sol.value(j) > 0.0) || (j > 0 && !(sol.value(j) < sol.value(j - 1)))) {
          pass = false;
          detail += "positivity/monotonicity violated ";
        }
      }
    }
    detail += fmt("k1(a=%.1f)=%.1e ", av, worst);
    if (worst > 1e-2) pass = false;

    TimeGrid g2 = TimeGrid::graded(1000.0, 2048, TimeGrid::default_grading(alpha));
    FodeSolution quad = solve_fode(FodeProblem(alpha, 1.0, 2.0), g2);
    double slope = tail_loglog_slope(quad);
    const double eps = 0.01;
    detail += fmt("slope(a=%.1f)=%.3f ", av, slope);
    if (slope < -av / 2.0 - 0.05 || slope > -av / 2.0 + eps + 0.05) pass = false;
    for (int j = 1; j <= g2.steps(); ++j) {
      if (!(quad.value(j) > 0.0) || !(quad.value(j) < quad.value(j - 1))) {
        pass = false;
        detail += "k2 positivity/monotonicity violated ";
        break;
      }
    }
  }
  report(5, "fode: k=1 matches E_a(-At^a) (<=1e-2), k=2 tail slope -a/2", pass, detail);
}

// ---------------------------------------------------------------------------
// shared state for criteria 6-9
struct EikonalRun {
  EikonalProblem problem;
  TimeGrid tgrid;
  SpaceTimeSolution solution;
  ErgodicSolution erg;
};

EikonalRun make_run6(const GridFn* g_override) {
  FractionalOrder half(0.5);
  TorusGrid grid(1, 256);
  GridFn a = catalog_fn("one", grid);
  GridFn f = catalog_fn("sinsq", grid);
  GridFn g = g_override ? *g_override : catalog_fn("zero", grid);
  EikonalProblem problem(grid, std::move(a), std::move(f), std::move(g), 1.0, half);
  TimeGrid tgrid = TimeGrid::graded(200.0, 4096, TimeGrid::default_grading(half));
  SpaceTimeSolution solution = evolve(problem, tgrid);
  ErgodicSolution erg = solve_ergodic(problem);
  return EikonalRun{problem, tgrid, std::move(solution), std::move(erg)};
}

double gap_at(const EikonalRun& run, double target) {
  int best = 0;
  for (int j = 0; j <= run.tgrid.steps(); ++j) {
    if (std::abs(run.tgrid.node(j) - target) < std::abs(run.tgrid.node(best) - target)) {
      best = j;
    }
  }
  // c = 0 for this run, so u + c t^a - v is just u - v
  double gap = 0.0;
  const GridFn& u = run.solution.states[static_cast<size_t>(best)];
  for (int i = 0; i < run.problem.grid.size(); ++i) {
    gap = std::max(gap, std::abs(u[static_cast<size_t>(i)] - run.erg.v[static_cast<size_t>(i)]));
  }
  return gap;
}

void criterion_6(const EikonalRun& run) {
  bool pass = true;
  std::string detail;
  double g200 = gap_at(run, 200.0);
  double g50 = gap_at(run, 50.0);
  detail += fmt("sup|u(.,200)+cT^a-v|=%.5f (<=0.05) gap(50)=%.5f ", g200, g50);
  if (g200 > 0.05) pass = false;
  // late-time comparison within the 10% slack of the convergence-proxy
  // invariant (the gap saturates at the spatial-discretization floor)
  if (g200 > 1.10 * g50) {
    pass = false;
    detail += "gap(200) > 1.1 gap(50) ";
  } else {
    detail += fmt("gap(200) <= 1.1 gap(50); ladder 25/50/100/200: %.5f %.5f %.5f %.5f",
                  gap_at(run, 25.0), g50, gap_at(run, 100.0), g200);
  }
  report(6, "large-time gap at T=200 (1D eikonal, n=256, M=4096)", pass, detail);
}

void criterion_7(const EikonalRun& run) {
  std::vector<double> semis = holder_seminorm_time(run.solution, {100.0, 200.0});
  bool pass = semis[1] <= 1.10 * semis[0] && semis[0] <= 1.10 * semis[1];
  report(7, "time-Holder seminorm uniform over horizons 100 vs 200", pass,
         fmt("S(100)=%.6f S(200)=%.6f ratio=%.4f (<=1.10)", semis[0], semis[1],
             semis[1] / semis[0]));
}

void criterion_8(const EikonalRun& run) {
  const EikonalProblem& p = run.problem;
  double f_max = *std::max_element(p.f.begin(), p.f.end());
  double a_max = *std::max_element(p.a.begin(), p.a.end());
  double C = (f_max + a_max * std::pow(p.lip_g, p.m)) / gamma_fn(1.0 + 0.5);
  int violations = 0;
  double worst_margin = 1e300;
  for (int j = 0; j <= run.tgrid.steps(); ++j) {
    double bound = C * std::pow(run.tgrid.node(j), 0.5);
    const GridFn& u = run.solution.states[static_cast<size_t>(j)];
    for (int i = 0; i < p.grid.size(); ++i) {
      double gi = p.g[static_cast<size_t>(i)];
      double lo_margin = u[static_cast<size_t>(i)] - (gi - bound);
      double hi_margin = (gi + bound) - u[static_cast<size_t>(i)];
      worst_margin = std::min(worst_margin, std::min(lo_margin, hi_margin));
      if (lo_margin < -1e-9 || hi_margin < -1e-9) ++violations;
    }
  }
  report(8, "barrier g - Ct^a <= u <= g + Ct^a at every node", violations == 0,
         fmt("C=%.4f violations=%d worst margin=%.2e", C, violations, worst_margin));
}

void criterion_9() {
  FractionalOrder half(0.5);
  TorusGrid grid(1, 256);
  GridFn hat = catalog_fn("hat", grid);
  EikonalRun run = make_run6(&hat);  // nonconstant Lipschitz datum minimized on Z = {0}
  bool pass = true;
  std::string detail;
  double ell = 0.0;
  try {
    ell = aubry_path_length(run.problem, run.erg.Z);
    double A = aubry_ode_factor(run.problem, ell);
    FodeSolution E = solve_fode(FodeProblem(half, A, run.problem.m), run.tgrid);
    AubryReport rep = aubry_decay_check(run.solution, run.erg, E, ell);
    pass = rep.assumption_ok && rep.worst_lower_margin >= -1e-8 &&
           rep.worst_upper_margin >= -1e-8;
    detail = fmt("ell=%.4g A=%.4g lower margin=%.2e upper margin=%.2e pairs=%d", ell, A,
                 rep.worst_lower_margin, rep.worst_upper_margin, rep.checked);
  } catch (const std::exception& e) {
    pass = false;
    detail = std::string("exception: ") + e.what();
  }
  report(9, "Aubry decay min g <= u(z,t) <= min g + Lip(g) l(gamma) E(t)", pass, detail);
}

void criterion_10() {
  FractionalOrder half(0.5);
  TorusGrid grid(1, 256);
  GridFn one = catalog_fn("one", grid);
  GridFn f = catalog_fn("plateau:0.2:0.45", grid);
  GridFn g = sample_grid(grid, [](double x, double) {
    double d = std::abs(x - 0.25);
    return 0.5 * std::min(d, 1.0 - d);
  });
  EikonalProblem p(grid, std::move(one), std::move(f), std::move(g), 1.0, half);
  const double ell = 0.2;
  const double L = p.lip_g;
  const double M = ladder_constant_M(p, ell);
  const double A = aubry_ode_factor(p, ell);
  TimeGrid tgrid = TimeGrid::graded(50.0, 256, 3.0);
  FodeSolution E = solve_fode(FodeProblem(half, A, 1.0), tgrid);
  SupersolResidual r =
      supersolution_residual(p, {{0.25}, {0.4375}}, 0, L, M, E);
  bool pass = r.min_off_kink >= -10.0 * p.grid.h() && r.at_anchor >= -1e-12;
  report(10, "ladder supersolution U_0: residual off kinks >= -10h, >= 0 at x_0", pass,
         fmt("min off-kink=%.4g (-10h=%.4g) at x_0=%.3g L=%.3g M=%.3g", r.min_off_kink,
             -10.0 * p.grid.h(), r.at_anchor, L, M));
}

void criterion_11() {
  FractionalOrder half(0.5);
  bool pass = true;
  std::string detail;
  for (double D : {1.0, 1.2, 1.4}) {
    double formula = 0.5 * (2.0 * D - 3.0) / (2.0 * D - 1.0);
    RateResult r = eikonal_rate(D, half, 100.0);
    if (std::abs(r.exponent - formula) > 1e-12) {
      pass = false;
      detail += fmt("exponent mismatch D=%.1f ", D);
    }
    if (D > 1.0) {
      // numerical minimization at t and 2t reproduces the exponent
      auto num_min = [&](double t) {
        return oracles::golden_min(
            [&](double eps) {
              return eps * std::pow(t, 0.5) +
                     std::pow(eps, -2.0 * (D - 1.0)) * std::pow(t, -0.5);
            },
            1e-9, 1e5);
      };
      double num_exp = std::log(num_min(200.0) / num_min(100.0)) / std::log(2.0);
      detail += fmt("D=%.1f exp=%.12f num=%.12f ", D, formula, num_exp);
      if (std::abs(num_exp - formula) > 1e-12) pass = false;
    } else {
      detail += fmt("D=1 exp=%.3f bound=t^-a ", r.exponent);
      if (std::abs(r.bound - std::pow(100.0, -0.5)) > 1e-12) pass = false;
    }
  }
  RateResult flat = eikonal_rate(1.5, half, 100.0);
  if (flat.decaying || flat.exponent != 0.0) {
    pass = false;
    detail += "D=1.5 not flagged ";
  } else {
    detail += "D=1.5 flagged non-decaying";
  }
  report(11, "rate exponent a(2D-3)/(2D-1) vs closed-form minimization", pass, detail);
}

// ---------------------------------------------------------------------------
// C12: CLI determinism over the checked-in run configs
struct CliArgs {
  std::string cli;
  std::string configs;
  std::string tmp;
};

int run_cli(const std::string& cli, const std::string& args) {
  std::string cmd = cli + " " + args + " >/dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

void criterion_12(const CliArgs& args) {
  bool pass = true;
  std::string detail;
  fs::path tmp(args.tmp);
  std::error_code ec;
  fs::remove_all(tmp, ec);
  fs::create_directories(tmp / "run1");
  fs::create_directories(tmp / "run2");

  std::vector<fs::path> configs;
  for (const auto& entry : fs::directory_iterator(args.configs)) {
    if (entry.path().extension() == ".cfg") configs.push_back(entry.path());
  }
  std::sort(configs.begin(), configs.end());
  if (configs.empty()) {
    report(12, "CLI determinism across run configs", false, "no configs found");
    return;
  }
  int checked = 0;
  for (const auto& cfg : configs) {
    for (const char* run_dir : {"run1", "run2"}) {
      int rc = run_cli(args.cli, "run " + cfg.string() + " --out-dir " +
                                     (tmp / run_dir).string());
      if (rc != 0) {
        pass = false;
        detail += fmt("%s rc=%d ", cfg.filename().c_str(), rc);
      }
    }
  }
  for (const auto& entry : fs::directory_iterator(tmp / "run1")) {
    fs::path other = tmp / "run2" / entry.path().filename();
    std::ifstream f1(entry.path(), std::ios::binary);
    std::ifstream f2(other, std::ios::binary);
    std::string s1((std::istreambuf_iterator<char>(f1)), {});
    std::string s2((std::istreambuf_iterator<char>(f2)), {});
    if (!f2 || s1 != s2 || s1.empty()) {
      pass = false;
      detail += fmt("%s differs ", entry.path().filename().c_str());
    }
    ++checked;
  }
  detail += fmt("%d artifacts byte-identical over %zu configs; ", checked, configs.size());

  // exit-code contract: validation -> 2, numerical failure -> 3
  int rc_val = run_cli(args.cli, "fode --alpha 1.5 --A 1 --k 1 --out-dir " + tmp.string());
  int rc_num = run_cli(args.cli, "counterexample --alpha 0.5 --kmax 2 --out-dir " + tmp.string());
  detail += fmt("exit codes: validation=%d numerical=%d", rc_val, rc_num);
  if (rc_val != 2 || rc_num != 3) pass = false;

  report(12, "CLI determinism across run configs", pass, detail);
}

}  // namespace

int main(int argc, char** argv) {
  CliArgs args{"", "", ""};
  for (int i = 1; i + 1 < argc; i += 2) {
    std::string key = argv[i];
    if (key == "--cli") args.cli = argv[i + 1];
    if (key == "--configs") args.configs = argv[i + 1];
    if (key == "--tmp") args.tmp = argv[i + 1];
  }

  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();

  EikonalRun run6 = make_run6(nullptr);
  criterion_6(run6);
  criterion_7(run6);
  criterion_8(run6);
  criterion_9();
  criterion_10();
  criterion_11();

  if (!args.cli.empty() && !args.configs.empty() && !args.tmp.empty()) {
    criterion_12(args);
  } else {
    report(12, "CLI determinism across run configs", false,
           "missing --cli/--configs/--tmp arguments");
  }

  std::printf("%d of 12 criteria failed\n", g_failures);
  return g_failures;
}
