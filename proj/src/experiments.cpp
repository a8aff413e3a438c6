#include "proxkit/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <sstream>
#include <thread>

#include "proxkit/io.hpp"
#include "proxkit/linalg.hpp"

namespace proxkit::experiments {

namespace {

using models::CompositePenalty;
using models::LogisticLoss;
using models::PoissonLoss;
using models::QuadraticLoss;

double sample_sd(const Vec& v) {
  const double mean = v.mean();
  if (v.size() < 2) return 0.0;
  return std::sqrt((v.array() - mean).square().sum() / double(v.size() - 1));
}

// Logistic curvature weight tanh(s/2)/(4s) with its limit 1/8 at zero.
double jj_weight(double s) {
  if (std::abs(s) < 1e-8) return 0.125;
  return std::tanh(0.5 * s) / (4.0 * s);
}

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::logistic_l1: return "logistic-l1";
    case Family::logit_fused: return "logit-fused";
    case Family::poisson_fused: return "poisson-fused";
    case Family::lq_bridge: return "lq-bridge";
  }
  return "unknown";
}

Family family_from_name(const std::string& name) {
  if (name == "logistic-l1") return Family::logistic_l1;
  if (name == "logit-fused") return Family::logit_fused;
  if (name == "poisson-fused") return Family::poisson_fused;
  if (name == "lq-bridge") return Family::lq_bridge;
  throw Error("unknown family: " + name);
}

std::string solver_name(SolverChoice s) {
  switch (s) {
    case SolverChoice::ista: return "ista";
    case SolverChoice::fista: return "fista";
    case SolverChoice::admm: return "admm";
    case SolverChoice::douglas_rachford: return "dr";
    case SolverChoice::linearized_admm: return "lin-admm";
    case SolverChoice::primal_dual: return "pd";
    case SolverChoice::dual_fb: return "dfb";
    case SolverChoice::picard_opial: return "po";
    case SolverChoice::proximal_newton: return "newton";
    case SolverChoice::cyclic_lq: return "cyclic-lq";
  }
  return "unknown";
}

SolverChoice solver_from_name(const std::string& name) {
  if (name == "ista") return SolverChoice::ista;
  if (name == "fista") return SolverChoice::fista;
  if (name == "admm") return SolverChoice::admm;
  if (name == "dr") return SolverChoice::douglas_rachford;
  if (name == "lin-admm") return SolverChoice::linearized_admm;
  if (name == "pd") return SolverChoice::primal_dual;
  if (name == "dfb") return SolverChoice::dual_fb;
  if (name == "po") return SolverChoice::picard_opial;
  if (name == "newton") return SolverChoice::proximal_newton;
  if (name == "cyclic-lq") return SolverChoice::cyclic_lq;
  throw Error("unknown solver: " + name);
}

SimData generate(const SimSpec& spec) {
  require(spec.n >= 1 && spec.d >= 1, "generate: n and d must be positive");
  require(spec.sparsity > 0 && spec.sparsity <= 1,
          "generate: sparsity must lie in (0,1]");
  Rng rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  SimData data;
  data.A.resize(spec.n, spec.d);
  for (int i = 0; i < spec.n; ++i)
    for (int j = 0; j < spec.d; ++j) data.A(i, j) = normal(rng);
  for (int j = 0; j < spec.d; ++j) {
    const double nrm = data.A.col(j).norm();
    require(nrm > 0, "generate: degenerate zero column");
    data.A.col(j) /= nrm;
  }

  const int k = static_cast<int>(std::ceil(spec.sparsity * spec.d));
  std::vector<int> idx(spec.d);
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  data.x_true = Vec::Zero(spec.d);
  for (int j = 0; j < k; ++j) data.x_true[idx[j]] = normal(rng);

  const Vec eta = data.A * data.x_true;
  data.y.resize(spec.n);
  switch (spec.family) {
    case Family::logistic_l1:
    case Family::logit_fused: {
      require(spec.trials >= 1, "generate: binomial trials must be >= 1");
      for (int i = 0; i < spec.n; ++i) {
        const double p = 1.0 / (1.0 + std::exp(-eta[i]));
        std::binomial_distribution<int> bin(spec.trials, p);
        data.y[i] = double(bin(rng));
      }
      break;
    }
    case Family::poisson_fused: {
      for (int i = 0; i < spec.n; ++i) {
        std::poisson_distribution<long> pois(std::exp(eta[i]));
        data.y[i] = double(pois(rng));
      }
      break;
    }
    case Family::lq_bridge: {
      require(spec.snr > 0, "generate: snr must be positive");
      data.sigma = spec.noise_sigma.value_or(sample_sd(eta) / spec.snr);
      for (int i = 0; i < spec.n; ++i)
        data.y[i] = eta[i] + data.sigma * normal(rng);
      break;
    }
  }
  return data;
}

double lq_lambda_max(const Mat& A, const Vec& y, double q) {
  require(q > 0 && q < 1, "lq_lambda_max: q must lie in (0,1)");
  // h threshold scales as c(q) * lambda^{1/(2-q)}; invert it per coordinate.
  const double e = 1.0 / (2.0 - q);
  const double c = std::pow(2.0 * (1.0 - q), e) +
                   q * std::pow(2.0 * (1.0 - q), (q - 1.0) / (2.0 - q));
  double lam = 0.0;
  for (Eigen::Index j = 0; j < A.cols(); ++j) {
    const double n2 = A.col(j).squaredNorm();
    require(n2 > 0, "lq_lambda_max: zero design column");
    const double u = std::abs(A.col(j).dot(y)) / n2;
    lam = std::max(lam, n2 * std::pow(u / c, 2.0 - q));
  }
  return lam * 1.000001;
}

std::vector<double> default_lambda_grid(double lambda_max, int count,
                                        double lo_ratio, double hi_scale) {
  require(count >= 2, "default_lambda_grid: need at least two points");
  require(lambda_max > 0 && lo_ratio > 0 && hi_scale > lo_ratio,
          "default_lambda_grid: bad range");
  std::vector<double> grid(count);
  const double lo = std::log(lo_ratio * lambda_max);
  const double hi = std::log(hi_scale * lambda_max);
  for (int i = 0; i < count; ++i)
    grid[i] = std::exp(lo + (hi - lo) * double(i) / double(count - 1));
  return grid;
}

namespace {

// Majorize-minimize outer loop for penalized logistic fits: at each outer
// iterate the loss is replaced by its quadratic envelope
// 0.5 x'Lambda(v)x - eta'x (curvature from the per-observation logistic
// bound), and the resulting quadratic-composite problem goes to the chosen
// dual engine, warm-started across outer steps.
SolverTrace jj_mm_solve(const LogisticLoss& loss,
                        const CompositePenalty& penalty,
                        splitting::InnerEngine engine, const Vec& x0,
                        const SolverConfig& cfg) {
  const Mat& A = loss.A();
  require(A.cols() <= A.rows(),
          "quadratic-envelope engines need d <= n so the curvature stays "
          "invertible; use ista/fista/admm for wide designs");
  const Vec eta_lin = A.transpose() *
                      (loss.successes() - 0.5 * loss.trials());
  TraceBuilder tb(cfg);
  Vec x = x0;
  bool converged = false;
  for (int k = 0; k < cfg.max_iter; ++k) {
    const Vec s = A * x;
    Vec w(s.size());
    for (Eigen::Index i = 0; i < s.size(); ++i)
      w[i] = 2.0 * loss.trials()[i] * jj_weight(s[i]);
    Mat Lambda = A.transpose() * w.asDiagonal() * A;
    Lambda = 0.5 * (Lambda + Lambda.transpose());
    // Tiny ridge centered at the expansion point keeps Lambda factorable
    // without disturbing the majorization.
    const double eps = 1e-9 * (1.0 + Lambda.diagonal().maxCoeff());
    Lambda.diagonal().array() += eps;
    splitting::QuadraticCompositeProblem sub{Lambda, eta_lin + eps * x,
                                             penalty};
    SolverConfig inner;
    inner.tol = std::min(1e-10, cfg.tol * 1e-2);
    inner.max_iter = 500000;
    inner.record_trace = false;
    Vec x_next;
    if (engine == splitting::InnerEngine::picard_opial) {
      auto res = splitting::picard_opial(sub, std::nullopt, 0.5, inner);
      x_next = std::move(res.x);
    } else {
      SolverTrace zt = splitting::dual_forward_backward(sub, std::nullopt,
                                                        inner);
      x_next = std::move(zt.x);
    }
    const double res = (x_next - x).cwiseAbs().maxCoeff();
    x = std::move(x_next);
    tb.add(k, loss.value(x) + penalty.value(x), res, 0.0);
    if (res <= cfg.tol) {
      converged = true;
      break;
    }
  }
  return tb.finish(std::move(x), converged);
}

}  // namespace

ExperimentResult run_experiment(const SimSpec& spec, SolverChoice choice,
                                const SolverConfig& cfg,
                                std::optional<double> penalty_weight,
                                double q) {
  SimData data = generate(spec);
  ExperimentResult out;
  out.q = q;

  // Family-specific problem assembly.
  std::unique_ptr<models::Loss> loss;
  std::optional<CompositePenalty> penalty;
  switch (spec.family) {
    case Family::logistic_l1: {
      const double sigma = linalg::spectral_norm(data.A, 1e-9);
      out.penalty_weight = penalty_weight.value_or(0.1 * sigma);
      loss = std::make_unique<LogisticLoss>(
          data.A, data.y, Vec::Constant(spec.n, double(spec.trials)));
      penalty = models::l1_penalty(out.penalty_weight, spec.d);
      break;
    }
    case Family::logit_fused: {
      out.penalty_weight = penalty_weight.value_or(1.0);
      loss = std::make_unique<LogisticLoss>(
          data.A, data.y, Vec::Constant(spec.n, double(spec.trials)));
      penalty = models::fused_lasso_penalty(out.penalty_weight, spec.d);
      break;
    }
    case Family::poisson_fused: {
      out.penalty_weight = penalty_weight.value_or(1.0);
      loss = std::make_unique<PoissonLoss>(data.A, data.y);
      penalty = models::fused_lasso_penalty(out.penalty_weight, spec.d);
      break;
    }
    case Family::lq_bridge: {
      out.penalty_weight =
          penalty_weight.value_or(0.05 * lq_lambda_max(data.A, data.y, q));
      break;
    }
  }

  SolverConfig run_cfg = cfg;
  if (spec.family == Family::poisson_fused &&
      (choice == SolverChoice::ista || choice == SolverChoice::fista)) {
    run_cfg.backtracking = true;  // no global Lipschitz bound exists
  }

  std::ostringstream desc;
  desc << family_name(spec.family) << " n=" << spec.n << " d=" << spec.d
       << " seed=" << spec.seed << " solver=" << solver_name(choice)
       << " weight=" << out.penalty_weight;
  out.description = desc.str();

  const Vec x0 = Vec::Zero(spec.d);
  if (spec.family == Family::lq_bridge) {
    require(choice == SolverChoice::cyclic_lq,
            "run_experiment: the bridge family runs on cyclic descent");
    const auto entry = prox::LqEntry::make(q, out.penalty_weight);
    out.trace = solvers::cyclic_descent_lq(data.A, data.y, entry, x0, run_cfg);
    return out;
  }

  switch (choice) {
    case SolverChoice::ista:
      out.trace = solvers::proximal_gradient(
          *loss, splitting::penalty_ops(*penalty), x0, run_cfg);
      break;
    case SolverChoice::fista: {
      SolverConfig acc = run_cfg;
      acc.acceleration = true;
      out.trace =
          solvers::fista(*loss, splitting::penalty_ops(*penalty), x0, acc);
      break;
    }
    case SolverChoice::admm: {
      const double rho = run_cfg.step.value_or(1.0);
      SolverConfig acfg = run_cfg;
      acfg.step.reset();
      out.trace = splitting::admm(*loss, splitting::penalty_ops(*penalty), rho,
                                  x0, acfg);
      break;
    }
    case SolverChoice::douglas_rachford: {
      auto ops = splitting::penalty_ops(*penalty);
      const models::Loss* lp = loss.get();
      const auto pen = *penalty;
      out.trace = solvers::douglas_rachford(
          [lp](const Vec& v, double t) { return lp->prox(v, t); }, ops.prox,
          [lp, pen](const Vec& v) { return lp->value(v) + pen.value(v); }, x0,
          run_cfg);
      break;
    }
    case SolverChoice::linearized_admm: {
      const double rho = run_cfg.step.value_or(1.0);
      SolverConfig acfg = run_cfg;
      acfg.step.reset();
      out.trace = splitting::linearized_admm(*loss, *penalty, rho, x0, acfg);
      break;
    }
    case SolverChoice::primal_dual: {
      const double sigma = penalty->is_identity()
                               ? 1.0
                               : linalg::spectral_norm(penalty->B(), 1e-9);
      const double step = run_cfg.step.value_or(0.9 / sigma);
      out.trace = splitting::primal_dual_composite(*loss, *penalty, step, step,
                                                   x0, run_cfg);
      break;
    }
    case SolverChoice::dual_fb:
    case SolverChoice::picard_opial: {
      const auto* logit = dynamic_cast<const LogisticLoss*>(loss.get());
      require(logit != nullptr,
              "run_experiment: the dual composite engines run on logistic "
              "families via the quadratic envelope");
      out.trace = jj_mm_solve(*logit, *penalty,
                              choice == SolverChoice::picard_opial
                                  ? splitting::InnerEngine::picard_opial
                                  : splitting::InnerEngine::dual_fb,
                              x0, run_cfg);
      break;
    }
    case SolverChoice::proximal_newton: {
      const models::Loss* lp = loss.get();
      out.trace = solvers::proximal_newton(
          *loss, *penalty, x0, run_cfg,
          [lp](const Vec& v) { return lp->hessian(v); });
      break;
    }
    case SolverChoice::cyclic_lq:
      throw Error("run_experiment: cyclic descent applies to the bridge "
                  "family only");
  }
  return out;
}

namespace {

PathCell solve_lq_cell(const Mat& A, const Vec& y, const Vec* x_truth,
                       double lambda, double q, const Vec& warm,
                       const SolverConfig& cfg) {
  PathCell cell;
  cell.lambda = lambda;
  cell.q = q;
  try {
    const auto entry = prox::LqEntry::make(q, lambda);
    SolverConfig ccfg = cfg;
    ccfg.record_trace = false;
    // The objective is non-convex: the warm start usually tracks the better
    // branch but can land in a worse basin, so race it against a cold start
    // and keep the lower minimum.
    SolverTrace t = solvers::cyclic_descent_lq(A, y, entry, warm, ccfg);
    if (warm.cwiseAbs().maxCoeff() != 0.0) {
      SolverTrace cold = solvers::cyclic_descent_lq(
          A, y, entry, Vec::Zero(A.cols()), ccfg);
      if (cold.final_objective() < t.final_objective()) t = std::move(cold);
    }
    cell.x = std::move(t.x);
    cell.objective = t.final_objective();
    cell.support = static_cast<int>((cell.x.array() != 0.0).count());
    if (x_truth)
      cell.mse = (cell.x - *x_truth).squaredNorm() / double(cell.x.size());
    else
      cell.mse = (y - A * cell.x).squaredNorm() / double(y.size());
  } catch (const std::exception& e) {
    cell.ok = false;
    cell.error = e.what();
    cell.x = warm;
  }
  return cell;
}

}  // namespace

RegularizationPath lq_mse_surface(const SimSpec& spec,
                                  const std::vector<double>& lambdas,
                                  const std::vector<double>& qs,
                                  const SolverConfig& cfg, int threads) {
  require(!lambdas.empty() && !qs.empty(), "lq_mse_surface: empty grid");
  require(std::is_sorted(lambdas.begin(), lambdas.end()),
          "lq_mse_surface: lambda grid must be increasing");
  for (double q : qs)
    require(q > 0 && q < 1, "lq_mse_surface: q grid must lie in (0,1)");
  SimData data = generate(spec);

  const int nl = static_cast<int>(lambdas.size());
  const int nq = static_cast<int>(qs.size());
  std::vector<PathCell> cells(size_t(nl) * size_t(nq));

  auto sweep_q = [&](int qi) {
    // Walk lambda from large to small, warm-starting each cell.
    Vec warm = Vec::Zero(spec.d);
    for (int li = nl - 1; li >= 0; --li) {
      PathCell cell = solve_lq_cell(data.A, data.y, &data.x_true, lambdas[li],
                                    qs[qi], warm, cfg);
      if (cell.ok) warm = cell.x;
      cells[size_t(qi) * nl + li] = std::move(cell);
    }
  };

  if (threads <= 1 || nq == 1) {
    for (int qi = 0; qi < nq; ++qi) sweep_q(qi);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    const int workers = std::min(threads, nq);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&]() {
        for (int qi = next.fetch_add(1); qi < nq; qi = next.fetch_add(1))
          sweep_q(qi);
      });
    for (auto& th : pool) th.join();
  }

  RegularizationPath path;
  path.cells = std::move(cells);
  return path;
}

ProstateData load_prostate(const std::string& path) {
  static const std::vector<std::string> kPredictors = {
      "lcavol", "lweight", "age",     "lbph",
      "svi",    "lcp",     "gleason", "pgg45"};
  io::CsvTable table = io::read_table(path);
  require(table.values.rows() >= 20,
          "load_prostate: expected at least 20 data rows");

  auto column = [&](const std::string& name) -> int {
    for (size_t c = 0; c < table.header.size(); ++c)
      if (table.header[c] == name) return static_cast<int>(c);
    throw Error("load_prostate: missing column '" + name + "' in " + path);
  };

  ProstateData data;
  data.names = kPredictors;
  const int n = static_cast<int>(table.values.rows());
  data.A.resize(n, static_cast<int>(kPredictors.size()));
  for (size_t j = 0; j < kPredictors.size(); ++j)
    data.A.col(static_cast<int>(j)) = table.values.col(column(kPredictors[j]));
  data.y = table.values.col(column("lpsa"));

  // Standardize predictors, center the response.
  for (int j = 0; j < data.A.cols(); ++j) {
    const double mean = data.A.col(j).mean();
    data.A.col(j).array() -= mean;
    const double sd = sample_sd(data.A.col(j));
    require(sd > 0, "load_prostate: constant predictor column '" +
                        kPredictors[size_t(j)] + "'");
    data.A.col(j) /= sd;
  }
  data.y.array() -= data.y.mean();
  return data;
}

RegularizationPath prostate_path(const ProstateData& data, double q,
                                 const std::vector<double>& lambdas,
                                 const SolverConfig& cfg) {
  require(!lambdas.empty(), "prostate_path: empty lambda grid");
  require(std::is_sorted(lambdas.begin(), lambdas.end()),
          "prostate_path: lambda grid must be increasing");
  RegularizationPath path;
  path.names = data.names;
  path.cells.resize(lambdas.size());
  Vec warm = Vec::Zero(data.A.cols());
  for (int li = static_cast<int>(lambdas.size()) - 1; li >= 0; --li) {
    PathCell cell = solve_lq_cell(data.A, data.y, nullptr, lambdas[size_t(li)],
                                  q, warm, cfg);
    if (cell.ok) warm = cell.x;
    path.cells[size_t(li)] = std::move(cell);
  }
  return path;
}

}  // namespace proxkit::experiments
