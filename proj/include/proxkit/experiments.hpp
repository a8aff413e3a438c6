#ifndef PROXKIT_EXPERIMENTS_HPP
#define PROXKIT_EXPERIMENTS_HPP

#include <string>
#include <vector>

#include "proxkit/splitting.hpp"
#include "proxkit/solvers.hpp"

namespace proxkit::experiments {

enum class Family { logistic_l1, logit_fused, poisson_fused, lq_bridge };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

struct SimSpec {
  int n = 100;
  int d = 300;
  double sparsity = 0.1;
  int trials = 2;          // binomial trials per observation
  double snr = 16.5;       // lq_bridge noise scale: sigma = sd(Ax)/snr
  std::optional<double> noise_sigma;  // overrides the snr-derived sigma
  uint64_t seed = 1;
  Family family = Family::logistic_l1;
};

struct SimData {
  Mat A;
  Vec y;
  Vec x_true;
  double sigma = 0.0;  // gaussian noise level actually used (lq_bridge)
};

// Standard-normal design with unit-norm columns, sparse standard-normal
// signal, response drawn from the family's likelihood. Deterministic in the
// seed.
SimData generate(const SimSpec& spec);

enum class SolverChoice {
  ista,
  fista,
  admm,
  douglas_rachford,
  linearized_admm,
  primal_dual,
  dual_fb,
  picard_opial,
  proximal_newton,
  cyclic_lq,
};

std::string solver_name(SolverChoice s);
SolverChoice solver_from_name(const std::string& name);

struct ExperimentResult {
  SolverTrace trace;
  double penalty_weight = 0.0;
  double q = 0.5;  // lq_bridge only
  std::string description;
};

// Build the family's problem at the requested scale and run the chosen
// solver.
// The penalty weight defaults per family (0.1*sigma_max(A) for the
// logistic-lasso replication, 1 for the fused problems, 5% of the
// all-zero threshold for the bridge).
ExperimentResult run_experiment(const SimSpec& spec, SolverChoice choice,
                                const SolverConfig& cfg,
                                std::optional<double> penalty_weight = {},
                                double q = 0.5);

struct PathCell {
  double lambda = 0.0;
  double q = 0.5;
  Vec x;
  int support = 0;
  double mse = 0.0;
  double objective = 0.0;
  bool ok = true;
  std::string error;
};

struct RegularizationPath {
  std::vector<std::string> names;  // coefficient labels (may be empty)
  std::vector<PathCell> cells;
};

// Smallest weight that zeroes every coordinate of the bridge problem when
// starting from zero.
double lq_lambda_max(const Mat& A, const Vec& y, double q);

// Log-spaced grid on [lo_ratio, hi_scale] * lambda_max, increasing.
std::vector<double> default_lambda_grid(double lambda_max, int count = 50,
                                        double lo_ratio = 1e-4,
                                        double hi_scale = 2.0);

// Cyclic-descent solves over a (lambda, q) grid against a generated
// instance; cells warm-start along decreasing lambda, sweeps over q may run
// in parallel. MSE is measured against the generating signal.
RegularizationPath lq_mse_surface(const SimSpec& spec,
                                  const std::vector<double>& lambdas,
                                  const std::vector<double>& qs,
                                  const SolverConfig& cfg, int threads = 1);

struct ProstateData {
  Mat A;                           // standardized predictors
  Vec y;                           // centered response
  std::vector<std::string> names;  // predictor names, canonical order
};

// Reads the prostate file (delimited, header row, the eight canonical
// predictors plus an lpsa response), standardizes predictors and centers
// the response.
ProstateData load_prostate(const std::string& path);

// Bridge-penalty coefficient path over the lambda grid at fixed q; cells
// carry residual mean squared error.
RegularizationPath prostate_path(const ProstateData& data, double q,
                                 const std::vector<double>& lambdas,
                                 const SolverConfig& cfg);

}  // namespace proxkit::experiments

#endif  // PROXKIT_EXPERIMENTS_HPP
