// pdmg: command-line driver for the shifted-Laplacian multigrid solver,
// its Fourier-analysis toolkit, and the diagonalization-based space-time
// solver.  Subcommands:
//   lfa-table  predicted smoothing/two-grid factors with optimized damping
//   solve      a single shifted solve with residual history output
//   sweep      iteration counts and rates across a family of shifts
//   paradiag   full space-time solve with a manufactured right-hand side
// Exit codes: 0 completed, 1 usage/configuration error, 2 numerical failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "pdmg/lfa.hpp"
#include "pdmg/multigrid.hpp"
#include "pdmg/paradiag.hpp"
#include "pdmg/runio.hpp"
#include "pdmg/version.hpp"

namespace {

using namespace pdmg;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

// Set by subcommands that complete but must report a numerical failure
// (e.g. a non-converged shifted solve inside a space-time run).
int g_exit_code = kExitOk;

// ---------------------------------------------------------------------------
// Shared option blocks and small helpers.

// Subcommand factory: restricts the automatic help flag to --help so that the
// single-character mesh option --h stays available.
CLI::App* add_cmd(CLI::App& app, const std::string& name, const std::string& desc) {
  CLI::App* cmd = app.add_subcommand(name, desc);
  cmd->set_help_flag("--help", "Print this help message and exit");
  return cmd;
}

struct OutputOpt {
  std::string path = "-";

  void attach(CLI::App* cmd) {
    cmd->add_option("-o,--out", path, "Output CSV path ('-' for stdout)")->capture_default_str();
  }

  // Returns the stream to write to; keeps the file alive in `file`.
  std::ostream& open(std::ofstream& file) const {
    if (path == "-") return std::cout;
    file.open(path);
    if (!file) throw ConfigError("cannot open output file '" + path + "'");
    return file;
  }
};

struct CycleOpts {
  std::string cycle = "w";
  int nu1 = 1;
  int nu2 = 0;
  std::string h0 = "1/8";
  double tol = 1e-8;
  int max_iter = 200;

  void attach(CLI::App* cmd) {
    cmd->add_option("--cycle", cycle, "Cycle kind: v or w")
        ->check(CLI::IsMember({"v", "w"}))
        ->capture_default_str();
    cmd->add_option("--nu1", nu1, "Pre-smoothing sweeps")->capture_default_str();
    cmd->add_option("--nu2", nu2, "Post-smoothing sweeps")->capture_default_str();
    cmd->add_option("--h0", h0, "Coarsest mesh width (fraction or decimal)")
        ->capture_default_str();
    cmd->add_option("--tol", tol, "Relative residual tolerance")->capture_default_str();
    cmd->add_option("--max-iter", max_iter, "Maximum multigrid cycles")->capture_default_str();
  }

  MultigridConfig make(SmootherKind kind, double omega) const {
    MultigridConfig cfg;
    cfg.cycle = (cycle == "v") ? CycleKind::V : CycleKind::W;
    cfg.nu1 = nu1;
    cfg.nu2 = nu2;
    cfg.coarsest_n = parse_reciprocal(h0);
    cfg.tol = tol;
    cfg.max_iter = max_iter;
    cfg.smoother = {kind, omega};
    return cfg;
  }

  void describe(RunManifest& m) const {
    m.add("cycle", cycle);
    m.add("nu1", std::to_string(nu1));
    m.add("nu2", std::to_string(nu2));
    m.add("h0", "1/" + std::to_string(parse_reciprocal(h0)));
    m.add("tol", format_sig(tol));
    m.add("max_iter", std::to_string(max_iter));
  }
};

SmootherKind parse_smoother(const std::string& name) {
  if (name == "vanka") return SmootherKind::Vanka;
  if (name == "jacobi") return SmootherKind::Jacobi;
  throw ConfigError("unknown smoother '" + name + "' (expected vanka or jacobi)");
}

std::string smoother_name(SmootherKind k) {
  return k == SmootherKind::Vanka ? "vanka" : "jacobi";
}

double preset_omega(SmootherKind k) { return k == SmootherKind::Vanka ? 24.0 / 25.0 : 4.0 / 5.0; }

std::vector<SmootherKind> parse_smoother_list(const std::string& csv) {
  std::vector<SmootherKind> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_smoother(item));
  if (out.empty()) throw ConfigError("--smoothers: empty list");
  return out;
}

TimeSchemeKind parse_scheme(const std::string& name) {
  if (name == "heat-bvm") return TimeSchemeKind::HeatBVM;
  if (name == "backward-heat") return TimeSchemeKind::BackwardHeatQBV;
  throw ConfigError("unknown scheme '" + name + "'");
}

TimeDiagonalization scheme_diagonalization(const TimeDiscretization& td) {
  return td.kind == TimeSchemeKind::BackwardHeatQBV ? diagonalize_qbv_closed_form(td)
                                                    : diagonalize_time_matrix(time_stepping_matrix(td));
}

// Deterministic random right-hand side with entries uniform in [-1,1]^2.
GridFunction random_rhs(const Grid2D& g, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  GridFunction b(g);
  cplx* d = b.data();
  for (long k = 0; k < b.size(); ++k) {
    const double re = dist(rng), im = dist(rng);
    d[k] = cplx(re, im);
  }
  return b;
}

std::string bool_str(bool v) { return v ? "true" : "false"; }

// ---------------------------------------------------------------------------
// lfa-table

struct LfaTableCmd {
  std::string h = "1/256";
  std::string tau;  // defaults to h
  std::string scheme = "heat-bvm";
  double beta = 0.01;
  std::string smoothers = "vanka,jacobi";
  int nu_max = 4;
  int samples = 64;
  OutputOpt out;

  void attach(CLI::App& app) {
    CLI::App* cmd =
        add_cmd(app, "lfa-table", "Predicted smoothing/two-grid factors with optimized damping");
    cmd->add_option("--h", h, "Mesh width (fraction or decimal)")->capture_default_str();
    cmd->add_option("--tau", tau, "Time step (defaults to --h)");
    cmd->add_option("--scheme", scheme, "Time scheme providing the shift")
        ->check(CLI::IsMember({"heat-bvm", "backward-heat"}))
        ->capture_default_str();
    cmd->add_option("--beta", beta, "Regularization weight (backward-heat)")
        ->capture_default_str();
    cmd->add_option("--smoothers", smoothers, "Comma-separated smoother list")
        ->capture_default_str();
    cmd->add_option("--nu-max", nu_max, "Largest smoothing count to tabulate")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--samples", samples, "Frequency samples per dimension")
        ->capture_default_str();
    out.attach(cmd);
    cmd->callback([this] { run(); });
  }

  void run() const {
    const int N = parse_reciprocal(h);
    const int n = parse_reciprocal(tau.empty() ? h : tau);
    TimeDiscretization td{parse_scheme(scheme), n, 1.0 / n, beta};
    const TimeDiagonalization diag = scheme_diagonalization(td);
    const Shift shift{diag.eigenvalues(0), 0, ShiftKind::TimeEigenvalue};
    const double hval = 1.0 / N;
    LFAConfig lfa{samples, 1e-8};

    RunManifest m{"lfa-table", {}, kVersion};
    m.add("h", "1/" + std::to_string(N));
    m.add("tau", "1/" + std::to_string(n));
    m.add("scheme", scheme);
    if (td.kind == TimeSchemeKind::BackwardHeatQBV) m.add("beta", format_sig(beta));
    m.add("lambda_re", format_sig(shift.lambda.real()));
    m.add("lambda_im", format_sig(shift.lambda.imag()));
    m.add("samples", std::to_string(samples));
    m.add("nu_max", std::to_string(nu_max));

    std::vector<std::string> cols = {"smoother", "omega_opt", "mu"};
    for (int nu = 1; nu <= nu_max; ++nu) cols.push_back("rho_nu" + std::to_string(nu));

    std::ofstream file;
    std::ostream& os = out.open(file);
    CsvWriter csv(os, m, cols);
    for (SmootherKind kind : parse_smoother_list(smoothers)) {
      TwoGridModel model(shift, hval, kind, lfa);
      const OmegaOpt opt = optimize_omega(model, OmegaObjective::TwoGridRho, 1);
      std::vector<std::string> row = {smoother_name(kind), format_sig(opt.omega),
                                      format_sig(model.smoothing(opt.omega).mu)};
      for (int nu = 1; nu <= nu_max; ++nu) row.push_back(format_sig(model.rho(opt.omega, nu)));
      csv.row(row);
      std::cerr << "lfa-table: " << smoother_name(kind) << " omega_opt=" << format_sig(opt.omega)
                << " rho1=" << format_sig(opt.value) << "\n";
    }
  }
};

// ---------------------------------------------------------------------------
// solve

struct SolveCmd {
  std::string h;
  double lambda_re = 0.0;
  double lambda_im = 0.0;
  std::string scheme;
  std::string tau;
  double beta = 0.01;
  int shift_index = 1;
  std::string smoother = "vanka";
  double omega = 0.0;  // 0 means smoother preset
  std::string rhs = "random";
  unsigned seed = 1234;
  CycleOpts cyc;
  OutputOpt out;

  CLI::Option* opt_lre = nullptr;
  CLI::Option* opt_scheme = nullptr;

  void attach(CLI::App& app) {
    CLI::App* cmd =
        add_cmd(app, "solve", "Run one shifted multigrid solve and dump residual history");
    cmd->add_option("--h", h, "Mesh width (fraction or decimal)")->required();
    opt_lre = cmd->add_option("--lambda-re", lambda_re, "Shift, real part");
    cmd->add_option("--lambda-im", lambda_im, "Shift, imaginary part");
    opt_scheme = cmd->add_option("--scheme", scheme,
                                 "Take the shift from a scheme: heat-bvm, backward-heat, helmholtz")
                     ->check(CLI::IsMember({"heat-bvm", "backward-heat", "helmholtz"}));
    cmd->add_option("--tau", tau, "Time step for scheme shifts (defaults to --h)");
    cmd->add_option("--beta", beta, "Regularization weight (backward-heat)")
        ->capture_default_str();
    cmd->add_option("--shift-index", shift_index, "1-based index into the scheme's shift family")
        ->capture_default_str();
    cmd->add_option("--smoother", smoother, "vanka or jacobi")
        ->check(CLI::IsMember({"vanka", "jacobi"}))
        ->capture_default_str();
    cmd->add_option("--omega", omega, "Damping factor (default: smoother preset)");
    cmd->add_option("--rhs", rhs, "Right-hand side: random or manufactured")
        ->check(CLI::IsMember({"random", "manufactured"}))
        ->capture_default_str();
    cmd->add_option("--seed", seed, "Seed for the random right-hand side")
        ->capture_default_str();
    cyc.attach(cmd);
    out.attach(cmd);
    cmd->callback([this] { run(); });
  }

  Shift resolve_shift(double hval) const {
    // Without --scheme the shift is taken from --lambda-re/--lambda-im
    // (default 0: the unshifted Poisson problem).
    if (opt_scheme->count() == 0) return {cplx(lambda_re, lambda_im), 0, ShiftKind::User};
    if (opt_lre->count() > 0)
      throw ConfigError("--lambda-re/--lambda-im and --scheme are mutually exclusive");
    if (scheme == "helmholtz") {
      const std::vector<Shift> shifts = helmholtz_shifts(hval);
      if (shift_index < 1 || shift_index > static_cast<int>(shifts.size()))
        throw ConfigError("--shift-index out of range (family has " +
                          std::to_string(shifts.size()) + " shifts)");
      return shifts[static_cast<size_t>(shift_index - 1)];
    }
    const int n = parse_reciprocal(tau.empty() ? h : tau);
    TimeDiscretization td{parse_scheme(scheme), n, 1.0 / n, beta};
    const TimeDiagonalization diag = scheme_diagonalization(td);
    if (shift_index < 1 || shift_index > diag.eigenvalues.size())
      throw ConfigError("--shift-index out of range (scheme has " +
                        std::to_string(diag.eigenvalues.size()) + " eigenvalues)");
    return {diag.eigenvalues(shift_index - 1), shift_index - 1, ShiftKind::TimeEigenvalue};
  }

  void run() const {
    const int N = parse_reciprocal(h);
    const Grid2D grid(N);
    const Shift shift = resolve_shift(grid.h());
    const SmootherKind kind = parse_smoother(smoother);
    const double w = (omega > 0.0) ? omega : preset_omega(kind);
    const MultigridConfig cfg = cyc.make(kind, w);

    GridFunction b = (rhs == "manufactured")
                         ? apply_shifted_laplacian(manufactured_field(grid, 1, 0.0)[0], shift)
                         : random_rhs(grid, seed);

    const auto [u, rep] = multigrid_solve(b, shift, cfg);

    RunManifest m{"solve", {}, kVersion};
    m.add("h", "1/" + std::to_string(N));
    m.add("lambda_re", format_sig(shift.lambda.real()));
    m.add("lambda_im", format_sig(shift.lambda.imag()));
    m.add("smoother", smoother);
    m.add("omega", format_sig(w));
    m.add("rhs", rhs);
    if (rhs == "random") m.add("seed", std::to_string(seed));
    cyc.describe(m);

    std::ofstream file;
    std::ostream& os = out.open(file);
    CsvWriter csv(os, m, {"iter", "residual"});
    for (size_t k = 0; k < rep.residual_history.size(); ++k)
      csv.row({std::to_string(k), format_sig(rep.residual_history[k])});

    std::cerr << "solve: converged=" << bool_str(rep.converged) << " iterations=" << rep.iterations
              << " rate=" << format_sig(rep.rate) << " seconds=" << format_sig(rep.seconds)
              << "\n";
  }
};

// ---------------------------------------------------------------------------
// sweep

struct SweepCmd {
  std::string example;
  std::string h;
  std::string tau;
  double beta = 0.01;
  std::string smoothers = "vanka,jacobi";
  double omega_vanka = 24.0 / 25.0;
  double omega_jacobi = 4.0 / 5.0;
  unsigned seed = 1234;
  CycleOpts cyc;
  OutputOpt out;

  void attach(CLI::App& app) {
    CLI::App* cmd =
        add_cmd(app, "sweep", "Solve across a family of shifts and tabulate iterations/rates");
    cmd->add_option("--example", example, "Shift family: heat, backward-heat, helmholtz")
        ->check(CLI::IsMember({"heat", "backward-heat", "helmholtz"}))
        ->required();
    cmd->add_option("--h", h, "Mesh width (fraction or decimal)")->required();
    cmd->add_option("--tau", tau, "Time step (defaults to --h)");
    cmd->add_option("--beta", beta, "Regularization weight (backward-heat)")
        ->capture_default_str();
    cmd->add_option("--smoothers", smoothers, "Comma-separated smoother list")
        ->capture_default_str();
    cmd->add_option("--omega-vanka", omega_vanka, "Damping for the Vanka smoother")
        ->capture_default_str();
    cmd->add_option("--omega-jacobi", omega_jacobi, "Damping for the Jacobi smoother")
        ->capture_default_str();
    cmd->add_option("--seed", seed, "Seed for the random right-hand side")
        ->capture_default_str();
    cyc.attach(cmd);
    out.attach(cmd);
    cmd->callback([this] { run(); });
  }

  std::vector<Shift> resolve_shifts(double hval, std::string& tau_desc) const {
    if (example == "helmholtz") {
      tau_desc = "n/a";
      return helmholtz_shifts(hval);
    }
    const int n = parse_reciprocal(tau.empty() ? h : tau);
    tau_desc = "1/" + std::to_string(n);
    TimeDiscretization td{example == "heat" ? TimeSchemeKind::HeatBVM
                                            : TimeSchemeKind::BackwardHeatQBV,
                          n, 1.0 / n, beta};
    return time_shifts(scheme_diagonalization(td));
  }

  void run() const {
    const int N = parse_reciprocal(h);
    const Grid2D grid(N);
    std::string tau_desc;
    const std::vector<Shift> shifts = resolve_shifts(grid.h(), tau_desc);
    const std::vector<SmootherKind> kinds = parse_smoother_list(smoothers);
    const GridFunction b = random_rhs(grid, seed);

    RunManifest m{"sweep", {}, kVersion};
    m.add("example", example);
    m.add("h", "1/" + std::to_string(N));
    m.add("tau", tau_desc);
    if (example == "backward-heat") m.add("beta", format_sig(beta));
    m.add("smoothers", smoothers);
    m.add("omega_vanka", format_sig(omega_vanka));
    m.add("omega_jacobi", format_sig(omega_jacobi));
    m.add("seed", std::to_string(seed));
    cyc.describe(m);

    std::ofstream file;
    std::ostream& os = out.open(file);
    CsvWriter csv(os, m,
                  {"shift_index", "lambda_re", "lambda_im", "smoother", "omega", "iterations",
                   "converged", "rate"});
    int non_converged = 0;
    for (SmootherKind kind : kinds) {
      const double w = kind == SmootherKind::Vanka ? omega_vanka : omega_jacobi;
      const MultigridConfig cfg = cyc.make(kind, w);
      for (const Shift& s : shifts) {
        const auto [u, rep] = multigrid_solve(b, s, cfg);
        if (!rep.converged) ++non_converged;
        csv.row({std::to_string(s.index), format_sig(s.lambda.real()),
                 format_sig(s.lambda.imag()), smoother_name(kind), format_sig(w),
                 std::to_string(rep.iterations), bool_str(rep.converged),
                 format_sig(rep.rate)});
      }
    }
    std::cerr << "sweep: " << shifts.size() << " shifts x " << kinds.size() << " smoothers, "
              << non_converged << " non-converged\n";
  }
};

// ---------------------------------------------------------------------------
// paradiag

struct ParadiagCmd {
  std::string scheme = "heat-bvm";
  std::string h;
  std::string tau;
  double beta = 0.01;
  std::string smoother = "vanka";
  double omega = 0.0;
  int threads = 1;
  CycleOpts cyc;
  OutputOpt out;

  void attach(CLI::App& app) {
    CLI::App* cmd = add_cmd(
        app, "paradiag", "Diagonalization-based space-time solve with a manufactured right-hand side");
    cmd->add_option("--scheme", scheme, "Time scheme: heat-bvm or backward-heat")
        ->check(CLI::IsMember({"heat-bvm", "backward-heat"}))
        ->capture_default_str();
    cmd->add_option("--h", h, "Mesh width (fraction or decimal)")->required();
    cmd->add_option("--tau", tau, "Time step (defaults to --h)");
    cmd->add_option("--beta", beta, "Regularization weight (backward-heat)")
        ->capture_default_str();
    cmd->add_option("--smoother", smoother, "vanka or jacobi")
        ->check(CLI::IsMember({"vanka", "jacobi"}))
        ->capture_default_str();
    cmd->add_option("--omega", omega, "Damping factor (default: smoother preset)");
    cmd->add_option("--threads", threads, "Worker threads for the independent shifted solves")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cyc.attach(cmd);
    out.attach(cmd);
    cmd->callback([this] { run(); });
  }

  void run() const {
    const int N = parse_reciprocal(h);
    const Grid2D grid(N);
    const int n = parse_reciprocal(tau.empty() ? h : tau);
    TimeDiscretization td{parse_scheme(scheme), n, 1.0 / n, beta};
    const SmootherKind kind = parse_smoother(smoother);
    const double w = (omega > 0.0) ? omega : preset_omega(kind);
    const MultigridConfig cfg = cyc.make(kind, w);

    const std::vector<GridFunction> ustar = manufactured_field(grid, td.dim(), td.tau);
    const std::vector<GridFunction> f = all_at_once_apply(time_stepping_matrix(td), ustar);

    const ParadiagResult res = paradiag_solve(f, td, cfg, threads);

    // Error against the manufactured discrete solution.
    double err = 0.0, ref = 0.0;
    for (size_t i = 0; i < ustar.size(); ++i) {
      GridFunction d = res.u[i];
      d -= ustar[i];
      err += d.norm() * d.norm();
      ref += ustar[i].norm() * ustar[i].norm();
    }
    const double rel_err = std::sqrt(err / ref);

    RunManifest m{"paradiag", {}, kVersion};
    m.add("scheme", scheme);
    m.add("h", "1/" + std::to_string(N));
    m.add("tau", "1/" + std::to_string(n));
    if (td.kind == TimeSchemeKind::BackwardHeatQBV) m.add("beta", format_sig(beta));
    m.add("smoother", smoother);
    m.add("omega", format_sig(w));
    m.add("threads", std::to_string(threads));
    cyc.describe(m);

    std::ofstream file;
    std::ostream& os = out.open(file);
    CsvWriter csv(os, m,
                  {"shift_index", "lambda_re", "lambda_im", "iterations", "converged", "rate"});
    for (size_t j = 0; j < res.reports.size(); ++j) {
      const Shift& s = res.shifts[j];
      const SolveReport& rep = res.reports[j];
      csv.row({std::to_string(s.index), format_sig(s.lambda.real()),
               format_sig(s.lambda.imag()), std::to_string(rep.iterations),
               bool_str(rep.converged), format_sig(rep.rate)});
    }

    std::cerr << "paradiag: relative_residual=" << format_sig(res.relative_residual)
              << " manufactured_error=" << format_sig(rel_err)
              << " cond_estimate=" << format_sig(res.time_cond_estimate)
              << " ill_conditioned=" << bool_str(res.time_ill_conditioned)
              << " all_converged=" << bool_str(res.all_converged)
              << " seconds=" << format_sig(res.seconds) << "\n";
    if (!res.all_converged) {
      std::cerr << "paradiag: at least one shifted solve did not converge\n";
      g_exit_code = kExitNumerical;
    }
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matrix-free multigrid for complex-shifted Laplacians, with Fourier analysis "
               "and a diagonalization-based space-time driver"};
  app.set_version_flag("--version", std::string("pdmg ") + kVersion);
  app.require_subcommand(1);

  LfaTableCmd lfa_table;
  SolveCmd solve;
  SweepCmd sweep;
  ParadiagCmd paradiag;
  lfa_table.attach(app);
  solve.attach(app);
  sweep.attach(app);
  paradiag.attach(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SingularOperatorError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const EigenSolverError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return g_exit_code;
}
