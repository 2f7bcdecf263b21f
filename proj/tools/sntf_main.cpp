// Command-line interface for the sparse nonnegative tensor factorization
// library: synthetic data generation, solving, parameter sweeps, and the
// closed-form error-bound tables.

#include <CLI11.hpp>
#include <omp.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "sntf/bounds.hpp"
#include "sntf/errors.hpp"
#include "sntf/harness.hpp"
#include "sntf/observation.hpp"
#include "sntf/solver.hpp"
#include "sntf/tprod.hpp"

namespace {

sntf::NoiseModel noise_from_flags(const std::string& name, double sigma, double tau) {
  const double param = name == "gaussian" ? sigma : name == "laplace" ? tau : 0.0;
  return sntf::make_noise(name, param);
}

int run_gen(int n1, int n2, int n3, int r, double s, double b, const std::string& noise,
            double sigma, double tau, double sr, std::uint64_t seed,
            const std::string& prefix) {
  const sntf::Instance inst = sntf::generate_instance(n1, n2, n3, r, s, b, seed);
  const auto mask = sntf::sample_mask(n1, n2, n3, sr, seed);
  const sntf::ObservationSet obs =
      sntf::synthesize(inst.x, mask, noise_from_flags(noise, sigma, tau), seed + 1);

  sntf::write_nt3(prefix + "_xstar.nt3", inst.x);
  sntf::write_nt3(prefix + "_astar.nt3", inst.a);
  sntf::write_nt3(prefix + "_bstar.nt3", inst.b);
  sntf::write_obs(prefix + ".obs", obs);
  std::printf("wrote %s_xstar.nt3 %s_astar.nt3 %s_bstar.nt3 %s.obs (m=%zu, c=%.6g)\n",
              prefix.c_str(), prefix.c_str(), prefix.c_str(), prefix.c_str(), obs.m(), inst.c);
  return 0;
}

int run_solve(const std::string& obs_path, const std::string& out_path,
              const std::string& xstar_path, const std::string& trace_path, int r,
              std::optional<double> rho, std::optional<double> lambda, std::optional<double> c,
              double b, int max_iters, double tol, int kkt_every, std::uint64_t seed) {
  const sntf::ObservationSet obs = sntf::read_obs(obs_path);
  sntf::SolverConfig cfg;
  cfg.r = r;
  cfg.rho = rho ? *rho : sntf::default_rho(obs.noise());
  cfg.lambda = lambda ? *lambda : sntf::default_lambda(obs.noise());
  cfg.c = c ? *c : sntf::default_amplitude_bound(obs);
  cfg.b = b;
  cfg.max_iters = max_iters;
  cfg.tol = tol;
  cfg.kkt_every = kkt_every;
  cfg.seed = seed;

  std::ofstream trace;
  std::ostream* trace_os = nullptr;
  if (!trace_path.empty()) {
    trace.open(trace_path);
    if (!trace) throw sntf::IoError("cannot open for writing: " + trace_path);
    trace_os = &trace;
  }

  const sntf::SolveReport report = sntf::solve(obs, cfg, trace_os);
  sntf::write_nt3(out_path, report.estimate());
  std::printf("solved: iters=%d converged=%d eta_max=%.3e wall=%.1fms\n", report.iters_run,
              int(report.converged), report.state.eta.eta_max, report.wall_time_ms);
  if (!xstar_path.empty()) {
    const sntf::Tensor3 xstar = sntf::read_nt3(xstar_path);
    std::printf("re=%.6g\n", sntf::relative_error(report.estimate(), xstar));
  }
  return 0;
}

int run_sweep_cmd(const std::string& config_path, const std::string& output_override,
                  bool full) {
  sntf::ExperimentSpec spec = sntf::load_experiment_spec(config_path);
  if (full) spec.n1 = spec.n2 = spec.n3 = 100;
  if (!output_override.empty()) spec.output_path = output_override;
  const auto rows = sntf::run_sweep(spec);
  if (spec.output_path.empty()) {
    sntf::write_sweep_csv(std::cout, rows);
  } else {
    std::ofstream os(spec.output_path);
    if (!os) throw sntf::IoError("cannot open for writing: " + spec.output_path);
    sntf::write_sweep_csv(os, rows);
    std::printf("wrote %zu rows to %s\n", rows.size(), spec.output_path.c_str());
  }
  return 0;
}

int run_bound(int n1, int n2, int n3, int r, long long m, double b, double c, long long b0,
              long long s, const std::string& noise, double sigma, double tau, double zeta,
              std::optional<double> beta_override, double beta_c, double C,
              bool kappa_appendix, bool lambda_theorem1) {
  sntf::BoundInputs in;
  in.n1 = n1;
  in.n2 = n2;
  in.n3 = n3;
  in.r = r;
  in.m = m;
  in.b = b;
  in.c = c;
  in.b0_norm = b0;
  in.s = s > 0 ? s : std::max<long long>(b0, r);
  in.noise = noise_from_flags(noise, sigma, tau);
  in.zeta = zeta;
  if (beta_override) in.beta_override = *beta_override;
  in.validate();

  const auto kappa_variant =
      kappa_appendix ? sntf::PoissonKappa::Appendix : sntf::PoissonKappa::Proposition;
  const auto log_variant =
      lambda_theorem1 ? sntf::LambdaLog::NMaxSqrtN3 : sntf::LambdaLog::NMax;

  std::printf("%-12s %s\n", "noise", noise.c_str());
  std::printf("%-12s %.12g\n", "beta", sntf::beta_param(in));
  std::printf("%-12s %lld\n", "theta", static_cast<long long>(sntf::discretization_levels(in)));
  std::printf("%-12s %.12g\n", "kappa", sntf::kappa_param(in, kappa_variant));
  std::printf("%-12s %.12g\n", "lambda", sntf::lambda_param(in, log_variant, kappa_variant));
  std::printf("%-12s %.12g\n", "upper", sntf::upper_bound(in));
  bool lower_ok = true;
  if (std::holds_alternative<sntf::PoissonNoise>(in.noise)) {
    lower_ok = in.s > static_cast<long long>(n2) * n3;
  }
  if (lower_ok) {
    std::printf("%-12s %.12g\n", "lower", sntf::minimax_lower_bound(in, beta_c, C));
  } else {
    std::printf("%-12s %s\n", "lower", "n/a (requires s > n2*n3)");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse nonnegative tensor factorization and completion"};
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads, "OpenMP thread count (0 = runtime default)");

  // gen
  auto* gen = app.add_subcommand("gen", "generate a synthetic instance and observations");
  int g_n1 = 50, g_n2 = 50, g_n3 = 50, g_r = 10;
  double g_s = 0.3, g_b = 2.0, g_sigma = 0.1, g_tau = 0.1, g_sr = 0.5;
  std::string g_noise = "gaussian", g_prefix = "instance";
  std::uint64_t g_seed = 1;
  gen->add_option("--n1", g_n1);
  gen->add_option("--n2", g_n2);
  gen->add_option("--n3", g_n3);
  gen->add_option("--r", g_r, "true factorization rank");
  gen->add_option("--s", g_s, "sparsity of B* in (0,1]");
  gen->add_option("--b", g_b, "amplitude of B*");
  gen->add_option("--noise", g_noise)->check(CLI::IsMember({"gaussian", "laplace", "poisson"}));
  gen->add_option("--sigma", g_sigma);
  gen->add_option("--tau", g_tau);
  gen->add_option("--sr", g_sr, "sampling ratio (Bernoulli rate)");
  gen->add_option("--seed", g_seed);
  gen->add_option("--out-prefix", g_prefix);

  // solve
  auto* solve_cmd = app.add_subcommand("solve", "run the ADMM on an OBS file");
  std::string s_obs, s_out = "solution.nt3", s_xstar, s_trace;
  int s_r = 10, s_max_iters = 300, s_kkt_every = 1;
  double s_b = 2.0, s_tol = 1e-4;
  std::optional<double> s_rho, s_lambda, s_c;
  std::uint64_t s_seed = 1;
  solve_cmd->add_option("--obs", s_obs, "OBS v1 input")->required();
  solve_cmd->add_option("--out", s_out, "NT3 output for the estimate");
  solve_cmd->add_option("--xstar", s_xstar, "optional NT3 ground truth for RE");
  solve_cmd->add_option("--trace", s_trace, "per-iteration CSV trace path");
  solve_cmd->add_option("--r", s_r, "factorization rank");
  solve_cmd->add_option("--rho", s_rho, "ADMM penalty (default per noise model)");
  solve_cmd->add_option("--lambda", s_lambda, "l0 weight (default per noise model)");
  solve_cmd->add_option("--c", s_c, "X amplitude bound (default 2*max|Y|)");
  solve_cmd->add_option("--b", s_b, "B amplitude bound");
  solve_cmd->add_option("--max-iters", s_max_iters);
  solve_cmd->add_option("--tol", s_tol);
  solve_cmd->add_option("--kkt-every", s_kkt_every);
  solve_cmd->add_option("--seed", s_seed);

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "run an experiment sweep from a config file");
  std::string w_config, w_output;
  bool w_full = false;
  sweep_cmd->add_option("--config", w_config, "key = value config file")->required();
  sweep_cmd->add_option("--output", w_output, "override the config's output path");
  sweep_cmd->add_flag("--full", w_full, "run at the full 100^3 scale");

  // bound
  auto* bound_cmd = app.add_subcommand("bound", "print the closed-form bound table");
  int b_n1 = 100, b_n2 = 100, b_n3 = 100, b_r = 10;
  long long b_m = 500000, b_b0 = 0, b_s = 0;
  double b_b = 1.0, b_c = 1.0, b_sigma = 0.1, b_tau = 0.1, b_zeta = 0.0;
  double b_betac = 1.0, b_C = 1.0;
  std::string b_noise = "gaussian";
  std::optional<double> b_beta;
  bool b_kappa_appendix = false, b_lambda_theorem1 = false;
  bound_cmd->add_option("--n1", b_n1);
  bound_cmd->add_option("--n2", b_n2);
  bound_cmd->add_option("--n3", b_n3);
  bound_cmd->add_option("--r", b_r);
  bound_cmd->add_option("--m", b_m, "number of observations");
  bound_cmd->add_option("--b", b_b, "B amplitude bound");
  bound_cmd->add_option("--c", b_c, "X amplitude bound");
  bound_cmd->add_option("--b0", b_b0, "||B*||_0");
  bound_cmd->add_option("--s", b_s, "sparsity budget for the lower bound (default max(b0, r))");
  bound_cmd->add_option("--noise", b_noise)
      ->check(CLI::IsMember({"gaussian", "laplace", "poisson"}));
  bound_cmd->add_option("--sigma", b_sigma);
  bound_cmd->add_option("--tau", b_tau);
  bound_cmd->add_option("--zeta", b_zeta, "Poisson floor");
  bound_cmd->add_option("--beta", b_beta, "override the computed beta (must be >= 3)");
  bound_cmd->add_option("--beta-c", b_betac, "lower-bound constant beta_c");
  bound_cmd->add_option("--C", b_C, "lower-bound constant C");
  bound_cmd->add_flag("--kappa-appendix", b_kappa_appendix, "use kappa = c^2/zeta for Poisson");
  bound_cmd->add_flag("--lambda-theorem1", b_lambda_theorem1,
                      "use log((n1 v n2) sqrt(n3)) inside lambda");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints usage to the error stream
    return code == 0 ? 0 : 1;
  }

  if (threads > 0) omp_set_num_threads(threads);

  try {
    if (*gen) {
      return run_gen(g_n1, g_n2, g_n3, g_r, g_s, g_b, g_noise, g_sigma, g_tau, g_sr, g_seed,
                     g_prefix);
    }
    if (*solve_cmd) {
      return run_solve(s_obs, s_out, s_xstar, s_trace, s_r, s_rho, s_lambda, s_c, s_b,
                       s_max_iters, s_tol, s_kkt_every, s_seed);
    }
    if (*sweep_cmd) return run_sweep_cmd(w_config, w_output, w_full);
    if (*bound_cmd) {
      return run_bound(b_n1, b_n2, b_n3, b_r, b_m, b_b, b_c, b_b0, b_s, b_noise, b_sigma,
                       b_tau, b_zeta, b_beta, b_betac, b_C, b_kappa_appendix,
                       b_lambda_theorem1);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
