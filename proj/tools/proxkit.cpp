// proxkit command-line front end: fit regularized models from delimited
// data, run seeded simulations, trace regularization paths and surfaces,
// and check the prox catalog against its brute-force oracle.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "json.hpp"

#include "proxkit/envelopes.hpp"
#include "proxkit/experiments.hpp"
#include "proxkit/io.hpp"
#include "proxkit/linalg.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace proxkit;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNoConvergence = 1;
constexpr int kExitConfig = 2;

struct CommonOpts {
  std::string out = ".";
  bool print_config = false;
  bool timing = false;
  int threads = 1;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->set_config("--config", "", "Read options for this command from a "
                                  "config file");
  cmd->add_option("--out", c.out, "Output directory")
      ->capture_default_str()
      ->envname("PROXKIT_OUT");
  cmd->add_flag("--print-config", c.print_config,
                "Echo the resolved configuration before running")
      ->envname("PROXKIT_PRINT_CONFIG");
  cmd->add_flag("--timing", c.timing,
                "Record real wall time per iteration (trace files are then "
                "not byte-stable across reruns)")
      ->envname("PROXKIT_TIMING");
  cmd->add_option("--threads", c.threads, "Worker threads for grid sweeps")
      ->capture_default_str()
      ->check(CLI::PositiveNumber)
      ->envname("PROXKIT_THREADS");
}

struct SolverOpts {
  std::string solver = "fista";
  double tol = 1e-8;
  int max_iter = 100000;
  std::optional<double> step;
  double rho = 1.0;
  double kappa = 0.5;
  bool backtrack = false;
  bool restart = false;
  uint64_t seed = 1;
};

void add_solver(CLI::App* cmd, SolverOpts& s, bool with_choice = true) {
  if (with_choice)
    cmd->add_option("--solver", s.solver,
                    "ista|fista|admm|dr|lin-admm|pd|dfb|po|newton|cyclic-lq")
        ->capture_default_str()
        ->envname("PROXKIT_SOLVER");
  cmd->add_option("--tol", s.tol, "Stopping tolerance on the residual")
      ->capture_default_str()
      ->check(CLI::PositiveNumber)
      ->envname("PROXKIT_TOL");
  cmd->add_option("--max-iter", s.max_iter, "Iteration budget")
      ->capture_default_str()
      ->check(CLI::PositiveNumber)
      ->envname("PROXKIT_MAX_ITER");
  cmd->add_option("--step", s.step,
                  "Step size (default: 1/lipschitz where defined)")
      ->check(CLI::PositiveNumber)
      ->envname("PROXKIT_STEP");
  cmd->add_option("--rho", s.rho, "Penalty weight for the Lagrangian solvers")
      ->capture_default_str()
      ->check(CLI::PositiveNumber)
      ->envname("PROXKIT_RHO");
  cmd->add_option("--kappa", s.kappa, "Damping for Picard-Opial sweeps")
      ->capture_default_str()
      ->check(CLI::Range(1e-9, 1.0))
      ->envname("PROXKIT_KAPPA");
  cmd->add_flag("--backtrack", s.backtrack, "Backtracking line search")
      ->envname("PROXKIT_BACKTRACK");
  cmd->add_flag("--restart", s.restart, "Objective-based momentum restart")
      ->envname("PROXKIT_RESTART");
  cmd->add_option("--seed", s.seed, "Random seed")
      ->capture_default_str()
      ->envname("PROXKIT_SEED");
}

SolverConfig to_config(const SolverOpts& s, const CommonOpts& c) {
  SolverConfig cfg;
  cfg.tol = s.tol;
  cfg.max_iter = s.max_iter;
  cfg.step = s.step;
  cfg.backtracking = s.backtrack;
  cfg.fista_restart = s.restart;
  cfg.seed = s.seed;
  cfg.collect_timing = c.timing;
  return cfg;
}

ordered_json config_json(const SolverOpts& s, const CommonOpts& c) {
  ordered_json j;
  j["solver"] = s.solver;
  j["tol"] = s.tol;
  j["max_iter"] = s.max_iter;
  if (s.step) j["step"] = *s.step;
  j["rho"] = s.rho;
  j["kappa"] = s.kappa;
  j["backtrack"] = s.backtrack;
  j["restart"] = s.restart;
  j["seed"] = s.seed;
  j["threads"] = c.threads;
  j["timing"] = c.timing;
  return j;
}

void check_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  const fs::path probe = fs::path(dir) / ".write_probe";
  std::ofstream f(probe);
  if (!f) throw Error("output directory '" + dir + "' is not writable");
  f.close();
  fs::remove(probe, ec);
}

void write_summary(const std::string& dir, const ordered_json& j) {
  const fs::path p = fs::path(dir) / "summary.json";
  std::ofstream out(p);
  if (!out) throw Error(p.string() + ": cannot open for writing");
  out << j.dump(2) << "\n";
}

int finish_run(const SolverTrace& trace, const std::string& out_dir,
               ordered_json config, const std::string& command) {
  io::write_trace_csv(trace, (fs::path(out_dir) / "trace.csv").string());
  ordered_json j;
  j["command"] = command;
  j["config"] = std::move(config);
  j["result"]["converged"] = trace.converged;
  j["result"]["iterations"] = trace.iterations;
  j["result"]["final_objective"] = trace.final_objective();
  j["result"]["final_residual"] =
      trace.iters.empty() ? 0.0 : trace.iters.back().residual;
  write_summary(out_dir, j);
  if (!trace.converged) {
    std::cerr << command << ": did not converge within the iteration budget\n";
    return kExitNoConvergence;
  }
  return kExitOk;
}

// Shared solver dispatch over an assembled problem. The design matrix and
// response back the cyclic bridge solver.
SolverTrace dispatch(const std::string& solver, const models::Loss& loss,
                     const models::CompositePenalty& penalty, const Mat& A,
                     const Vec& y, const SolverOpts& sopt,
                     const SolverConfig& cfg, double lq_q) {
  const Vec x0 = Vec::Zero(loss.dim());
  const auto choice = experiments::solver_from_name(solver);
  using experiments::SolverChoice;
  switch (choice) {
    case SolverChoice::ista:
      return solvers::proximal_gradient(loss, splitting::penalty_ops(penalty),
                                        x0, cfg);
    case SolverChoice::fista:
      return solvers::fista(loss, splitting::penalty_ops(penalty), x0, cfg);
    case SolverChoice::admm:
      return splitting::admm(loss, splitting::penalty_ops(penalty), sopt.rho,
                             x0, cfg);
    case SolverChoice::douglas_rachford:
      return solvers::douglas_rachford(
          [&loss](const Vec& v, double t) { return loss.prox(v, t); },
          splitting::penalty_ops(penalty).prox,
          [&](const Vec& v) { return loss.value(v) + penalty.value(v); }, x0,
          cfg);
    case SolverChoice::linearized_admm:
      return splitting::linearized_admm(loss, penalty, sopt.rho, x0, cfg);
    case SolverChoice::primal_dual: {
      const double sigma = penalty.is_identity()
                               ? 1.0
                               : linalg::spectral_norm(penalty.B(), 1e-9);
      const double step = cfg.step.value_or(0.9 / sigma);
      return splitting::primal_dual_composite(loss, penalty, step, step, x0,
                                              cfg);
    }
    case SolverChoice::dual_fb: {
      SolverConfig c = cfg;
      c.backtracking = c.backtracking || !loss.lipschitz_bound().has_value();
      return solvers::proximal_gradient(
          loss,
          splitting::composite_penalty_ops(penalty,
                                           splitting::InnerEngine::dual_fb),
          x0, c);
    }
    case SolverChoice::picard_opial: {
      SolverConfig c = cfg;
      c.backtracking = c.backtracking || !loss.lipschitz_bound().has_value();
      return solvers::proximal_gradient(
          loss,
          splitting::composite_penalty_ops(
              penalty, splitting::InnerEngine::picard_opial),
          x0, c);
    }
    case SolverChoice::proximal_newton:
      return solvers::proximal_newton(
          loss, penalty, x0, cfg,
          [&loss](const Vec& v) { return loss.hessian(v); });
    case SolverChoice::cyclic_lq: {
      const auto& entry = penalty.entry();
      require(entry.name == "lq_bridge", "cyclic-lq requires --penalty lq");
      const auto lq = prox::LqEntry::make(lq_q, entry.params.at("lambda"));
      return solvers::cyclic_descent_lq(A, y, lq, x0, cfg);
    }
  }
  throw Error("unhandled solver choice");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"proxkit: proximal operators, envelopes, and splitting "
               "solvers for regularized models"};
  app.require_subcommand(1);

  // ---- fit ----
  auto* fit = app.add_subcommand("fit", "Fit a regularized model from a "
                                        "delimited data file");
  CommonOpts fit_common;
  SolverOpts fit_sopt;
  std::string fit_data, fit_family = "gaussian", fit_penalty = "l1";
  std::string fit_response;
  double fit_gamma = 1.0, fit_q = 0.5;
  int fit_trials = 1;
  fit->add_option("data", fit_data, "Input file (header row; response is the "
                                    "first or the named column)")
      ->required();
  fit->add_option("--family", fit_family, "gaussian|logistic|poisson")
      ->capture_default_str()
      ->envname("PROXKIT_FAMILY");
  fit->add_option("--penalty", fit_penalty, "none|l1|fused|lq")
      ->capture_default_str()
      ->envname("PROXKIT_PENALTY");
  fit->add_option("--gamma", fit_gamma, "Penalty weight")
      ->capture_default_str()
      ->check(CLI::PositiveNumber)
      ->envname("PROXKIT_GAMMA");
  fit->add_option("--q", fit_q, "Bridge exponent for --penalty lq")
      ->capture_default_str()
      ->check(CLI::Range(1e-9, 1.0))
      ->envname("PROXKIT_Q");
  fit->add_option("--trials", fit_trials, "Binomial trials per observation")
      ->capture_default_str()
      ->check(CLI::PositiveNumber)
      ->envname("PROXKIT_TRIALS");
  fit->add_option("--response", fit_response, "Response column name")
      ->envname("PROXKIT_RESPONSE");
  add_solver(fit, fit_sopt);
  add_common(fit, fit_common);

  // ---- simulate ----
  auto* sim = app.add_subcommand("simulate", "Generate a seeded instance and "
                                             "run one solver on it");
  CommonOpts sim_common;
  SolverOpts sim_sopt;
  std::string sim_family = "logistic-l1";
  experiments::SimSpec sim_spec;
  double sim_weight = -1.0, sim_q = 0.5, sim_sigma = -1.0;
  sim->add_option("--family", sim_family,
                  "logistic-l1|logit-fused|poisson-fused|lq-bridge")
      ->capture_default_str()
      ->envname("PROXKIT_FAMILY");
  sim->add_option("--n", sim_spec.n, "Observations")
      ->capture_default_str()
      ->envname("PROXKIT_N");
  sim->add_option("--d", sim_spec.d, "Parameters")
      ->capture_default_str()
      ->envname("PROXKIT_D");
  sim->add_option("--sparsity", sim_spec.sparsity, "Nonzero fraction")
      ->capture_default_str()
      ->check(CLI::Range(1e-9, 1.0))
      ->envname("PROXKIT_SPARSITY");
  sim->add_option("--trials", sim_spec.trials, "Binomial trials")
      ->capture_default_str()
      ->envname("PROXKIT_TRIALS");
  sim->add_option("--snr", sim_spec.snr, "Signal-to-noise for lq-bridge")
      ->capture_default_str()
      ->envname("PROXKIT_SNR");
  sim->add_option("--sigma", sim_sigma, "Noise level override (lq-bridge)")
      ->envname("PROXKIT_SIGMA");
  sim->add_option("--weight", sim_weight, "Penalty weight override")
      ->envname("PROXKIT_WEIGHT");
  sim->add_option("--q", sim_q, "Bridge exponent")
      ->capture_default_str()
      ->envname("PROXKIT_Q");
  add_solver(sim, sim_sopt);
  add_common(sim, sim_common);

  // ---- path ----
  auto* path_cmd = app.add_subcommand(
      "path", "Bridge-penalty coefficient path on the prostate data");
  CommonOpts path_common;
  SolverOpts path_sopt;
  std::string path_data;
  double path_q = 0.5, path_lo = 1e-4, path_hi = 2.0;
  int path_count = 50;
  path_cmd->add_option("data", path_data, "Prostate data file")->required();
  path_cmd->add_option("--q", path_q, "Bridge exponent")
      ->capture_default_str()
      ->check(CLI::Range(1e-9, 1.0))
      ->envname("PROXKIT_Q");
  path_cmd->add_option("--lambda-count", path_count, "Grid size")
      ->capture_default_str()
      ->check(CLI::PositiveNumber)
      ->envname("PROXKIT_LAMBDA_COUNT");
  path_cmd->add_option("--lambda-min-ratio", path_lo,
                       "Grid start as a fraction of lambda_max")
      ->capture_default_str()
      ->check(CLI::PositiveNumber)
      ->envname("PROXKIT_LAMBDA_MIN_RATIO");
  path_cmd->add_option("--lambda-max-scale", path_hi,
                       "Grid end as a multiple of lambda_max")
      ->capture_default_str()
      ->check(CLI::PositiveNumber)
      ->envname("PROXKIT_LAMBDA_MAX_SCALE");
  add_solver(path_cmd, path_sopt, /*with_choice=*/false);
  add_common(path_cmd, path_common);

  // ---- surface ----
  auto* surf = app.add_subcommand(
      "surface", "MSE surface of the bridge fit over a (lambda, q) grid");
  CommonOpts surf_common;
  SolverOpts surf_sopt;
  experiments::SimSpec surf_spec;
  surf_spec.d = 256;
  surf_spec.sparsity = 0.05;
  double surf_qmin = 0.1, surf_qmax = 0.9, surf_sigma = -1.0;
  double surf_lo = 1e-4, surf_hi = 2.0;
  int surf_qcount = 9, surf_lcount = 50;
  surf->add_option("--n", surf_spec.n, "Observations")
      ->capture_default_str()
      ->envname("PROXKIT_N");
  surf->add_option("--d", surf_spec.d, "Parameters")
      ->capture_default_str()
      ->envname("PROXKIT_D");
  surf->add_option("--sparsity", surf_spec.sparsity, "Nonzero fraction")
      ->capture_default_str()
      ->envname("PROXKIT_SPARSITY");
  surf->add_option("--snr", surf_spec.snr, "Signal-to-noise ratio")
      ->capture_default_str()
      ->envname("PROXKIT_SNR");
  surf->add_option("--sigma", surf_sigma, "Noise level override")
      ->envname("PROXKIT_SIGMA");
  surf->add_option("--q-min", surf_qmin, "Smallest bridge exponent")
      ->capture_default_str()
      ->envname("PROXKIT_Q_MIN");
  surf->add_option("--q-max", surf_qmax, "Largest bridge exponent")
      ->capture_default_str()
      ->envname("PROXKIT_Q_MAX");
  surf->add_option("--q-count", surf_qcount, "Number of q grid points")
      ->capture_default_str()
      ->envname("PROXKIT_Q_COUNT");
  surf->add_option("--lambda-count", surf_lcount, "Number of lambda points")
      ->capture_default_str()
      ->envname("PROXKIT_LAMBDA_COUNT");
  surf->add_option("--lambda-min-ratio", surf_lo,
                   "Grid start as a fraction of lambda_max")
      ->capture_default_str()
      ->envname("PROXKIT_LAMBDA_MIN_RATIO");
  surf->add_option("--lambda-max-scale", surf_hi,
                   "Grid end as a multiple of lambda_max")
      ->capture_default_str()
      ->envname("PROXKIT_LAMBDA_MAX_SCALE");
  add_solver(surf, surf_sopt, /*with_choice=*/false);
  add_common(surf, surf_common);

  // ---- catalog-check ----
  auto* cat = app.add_subcommand(
      "catalog-check", "Compare every catalog prox against the grid oracle");
  int cat_draws = 50;
  double cat_tol = 1e-3;
  uint64_t cat_seed = 20240901;
  std::string cat_fault;
  cat->add_option("--draws", cat_draws, "Random parameterizations per row")
      ->capture_default_str()
      ->check(CLI::PositiveNumber)
      ->envname("PROXKIT_DRAWS");
  cat->add_option("--tol", cat_tol, "Oracle match tolerance")
      ->capture_default_str()
      ->check(CLI::PositiveNumber)
      ->envname("PROXKIT_TOL");
  cat->add_option("--seed", cat_seed, "Random seed")
      ->capture_default_str()
      ->envname("PROXKIT_SEED");
  cat->add_option("--inject-fault", cat_fault,
                  "Perturb the named row (test fixture)")
      ->group("");  // hidden

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*cat) {
      const auto report =
          prox::run_catalog_check(cat_draws, cat_tol, cat_seed, cat_fault);
      std::printf("%-18s %-14s %s\n", "entry", "max|dev|", "status");
      for (const auto& row : report.rows)
        std::printf("%-18s %-14.3e %s\n", row.name.c_str(),
                    row.max_abs_deviation, row.pass ? "PASS" : "FAIL");
      return report.all_pass() ? kExitOk : kExitNoConvergence;
    }

    if (*fit) {
      SolverTrace trace;
      ordered_json cj = config_json(fit_sopt, fit_common);
      cj["family"] = fit_family;
      cj["penalty"] = fit_penalty;
      cj["gamma"] = fit_gamma;
      cj["q"] = fit_q;
      cj["data"] = fit_data;
      if (fit_common.print_config) std::cout << cj.dump(2) << "\n";
      Mat A;
      Vec y;
      std::unique_ptr<models::Loss> loss;
      std::optional<models::CompositePenalty> penalty;
      try {
        check_out_dir(fit_common.out);
        io::Dataset data = io::ingest_csv(fit_data, fit_response);
        A = std::move(data.A);
        y = std::move(data.y);
        const int d = static_cast<int>(A.cols());
        if (fit_family == "gaussian") {
          loss = std::make_unique<models::QuadraticLoss>(
              models::QuadraticLoss::least_squares(A, y));
        } else if (fit_family == "logistic") {
          loss = std::make_unique<models::LogisticLoss>(
              A, y, Vec::Constant(A.rows(), double(fit_trials)));
        } else if (fit_family == "poisson") {
          loss = std::make_unique<models::PoissonLoss>(A, y);
        } else {
          throw Error("unknown family: " + fit_family);
        }
        if (fit_penalty == "none")
          penalty = models::CompositePenalty::zero(d);
        else if (fit_penalty == "l1")
          penalty = models::l1_penalty(fit_gamma, d);
        else if (fit_penalty == "fused")
          penalty = models::fused_lasso_penalty(fit_gamma, d);
        else if (fit_penalty == "lq")
          penalty = models::lq_penalty(fit_gamma, fit_q, d);
        else
          throw Error("unknown penalty: " + fit_penalty);
        if (fit_penalty == "lq")
          require(fit_sopt.solver == "cyclic-lq" && fit_family == "gaussian",
                  "the lq penalty pairs with --solver cyclic-lq and the "
                  "gaussian family");
      } catch (const std::exception& e) {
        std::cerr << "fit: " << e.what() << "\n";
        return kExitConfig;
      }
      try {
        trace = dispatch(fit_sopt.solver, *loss, *penalty, A, y, fit_sopt,
                         to_config(fit_sopt, fit_common), fit_q);
      } catch (const std::exception& e) {
        std::cerr << "fit: solver failed: " << e.what() << "\n";
        return kExitNoConvergence;
      }
      return finish_run(trace, fit_common.out, cj, "fit");
    }

    if (*sim) {
      ordered_json cj = config_json(sim_sopt, sim_common);
      cj["family"] = sim_family;
      cj["n"] = sim_spec.n;
      cj["d"] = sim_spec.d;
      cj["sparsity"] = sim_spec.sparsity;
      cj["trials"] = sim_spec.trials;
      cj["snr"] = sim_spec.snr;
      cj["q"] = sim_q;
      if (sim_weight > 0) cj["weight"] = sim_weight;
      if (sim_sigma > 0) cj["sigma"] = sim_sigma;
      if (sim_common.print_config) std::cout << cj.dump(2) << "\n";
      experiments::ExperimentResult result;
      try {
        check_out_dir(sim_common.out);
        sim_spec.family = experiments::family_from_name(sim_family);
        sim_spec.seed = sim_sopt.seed;
        if (sim_sigma > 0) sim_spec.noise_sigma = sim_sigma;
      } catch (const std::exception& e) {
        std::cerr << "simulate: " << e.what() << "\n";
        return kExitConfig;
      }
      try {
        std::optional<double> weight;
        if (sim_weight > 0) weight = sim_weight;
        SolverConfig cfg = to_config(sim_sopt, sim_common);
        if (sim_sopt.solver == "admm" || sim_sopt.solver == "lin-admm")
          cfg.step = sim_sopt.rho;
        result = experiments::run_experiment(
            sim_spec, experiments::solver_from_name(sim_sopt.solver), cfg,
            weight, sim_q);
      } catch (const std::exception& e) {
        std::cerr << "simulate: solver failed: " << e.what() << "\n";
        return kExitNoConvergence;
      }
      cj["resolved_weight"] = result.penalty_weight;
      cj["description"] = result.description;
      return finish_run(result.trace, sim_common.out, cj, "simulate");
    }

    if (*path_cmd) {
      ordered_json cj = config_json(path_sopt, path_common);
      cj["data"] = path_data;
      cj["q"] = path_q;
      cj["lambda_count"] = path_count;
      if (path_common.print_config) std::cout << cj.dump(2) << "\n";
      experiments::ProstateData data;
      std::vector<double> grid;
      try {
        check_out_dir(path_common.out);
        data = experiments::load_prostate(path_data);
        const double lmax = experiments::lq_lambda_max(data.A, data.y, path_q);
        grid = experiments::default_lambda_grid(lmax, path_count, path_lo,
                                                path_hi);
      } catch (const std::exception& e) {
        std::cerr << "path: " << e.what() << "\n";
        return kExitConfig;
      }
      const auto result = experiments::prostate_path(
          data, path_q, grid, to_config(path_sopt, path_common));
      io::write_path_csv(result,
                         (fs::path(path_common.out) / "path.csv").string());
      int bad = 0;
      for (const auto& cell : result.cells) bad += cell.ok ? 0 : 1;
      cj["cells"] = result.cells.size();
      cj["failed_cells"] = bad;
      ordered_json j;
      j["command"] = "path";
      j["config"] = std::move(cj);
      write_summary(path_common.out, j);
      return bad == 0 ? kExitOk : kExitNoConvergence;
    }

    if (*surf) {
      ordered_json cj = config_json(surf_sopt, surf_common);
      cj["n"] = surf_spec.n;
      cj["d"] = surf_spec.d;
      if (surf_common.print_config) std::cout << cj.dump(2) << "\n";
      experiments::RegularizationPath result;
      try {
        check_out_dir(surf_common.out);
        surf_spec.family = experiments::Family::lq_bridge;
        surf_spec.seed = surf_sopt.seed;
        if (surf_sigma > 0) surf_spec.noise_sigma = surf_sigma;
        require(surf_qcount >= 1 && surf_qmin > 0 && surf_qmax < 1 &&
                    surf_qmin <= surf_qmax,
                "surface: q grid must lie inside (0,1)");
      } catch (const std::exception& e) {
        std::cerr << "surface: " << e.what() << "\n";
        return kExitConfig;
      }
      std::vector<double> qs(static_cast<size_t>(surf_qcount));
      for (int i = 0; i < surf_qcount; ++i)
        qs[size_t(i)] = surf_qcount == 1
                            ? surf_qmin
                            : surf_qmin + (surf_qmax - surf_qmin) * double(i) /
                                              double(surf_qcount - 1);
      const auto data = experiments::generate(surf_spec);
      const double lmax = experiments::lq_lambda_max(data.A, data.y, 0.5);
      const auto grid = experiments::default_lambda_grid(lmax, surf_lcount,
                                                         surf_lo, surf_hi);
      result = experiments::lq_mse_surface(surf_spec, grid, qs,
                                           to_config(surf_sopt, surf_common),
                                           surf_common.threads);
      io::write_path_csv(result,
                         (fs::path(surf_common.out) / "path.csv").string());
      int bad = 0;
      for (const auto& cell : result.cells) bad += cell.ok ? 0 : 1;
      cj["cells"] = result.cells.size();
      cj["failed_cells"] = bad;
      ordered_json j;
      j["command"] = "surface";
      j["config"] = std::move(cj);
      write_summary(surf_common.out, j);
      return bad == 0 ? kExitOk : kExitNoConvergence;
    }
  } catch (const std::exception& e) {
    std::cerr << "proxkit: " << e.what() << "\n";
    return kExitNoConvergence;
  }
  return kExitConfig;
}
