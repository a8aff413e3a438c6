#include "proxkit/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "proxkit/splitting.hpp"

namespace proxkit::solvers {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double loss_value_or_inf(const Loss& loss, const Vec& z) {
  try {
    return loss.value(z);
  } catch (const Error&) {
    return kInf;
  }
}

double fixed_forward_step(const Loss& loss, const SolverConfig& cfg) {
  if (cfg.step) {
    require(*cfg.step > 0, "solver: step must be positive");
    return *cfg.step;
  }
  const auto lip = loss.lipschitz_bound();
  require(lip.has_value(),
          "solver: loss has no Lipschitz bound; pass a step or enable "
          "backtracking");
  require(*lip > 0, "solver: degenerate zero-curvature loss needs a step");
  return 1.0 / *lip;
}

}  // namespace

SolverTrace proximal_point(const ProxFn& f_prox, const ValueFn& f_value,
                           const Vec& x0, const SolverConfig& cfg) {
  require(cfg.tol > 0, "proximal_point: tol must be positive");
  const double gamma = cfg.step.value_or(1.0);
  require(gamma > 0, "proximal_point: step must be positive");
  TraceBuilder tb(cfg);
  Vec x = x0;
  bool converged = false;
  for (int t = 0; t < cfg.max_iter; ++t) {
    Vec x_next = f_prox(x, gamma);
    const double res = (x_next - x).cwiseAbs().maxCoeff();
    x = std::move(x_next);
    tb.add(t, f_value ? f_value(x) : 0.0, res, gamma);
    if (res <= cfg.tol) {
      converged = true;
      break;
    }
  }
  return tb.finish(std::move(x), converged);
}

SolverTrace proximal_gradient(const Loss& loss, const PenaltyOps& penalty,
                              const Vec& x0, const SolverConfig& cfg) {
  require(cfg.tol > 0, "proximal_gradient: tol must be positive");
  TraceBuilder tb(cfg);
  Vec x = x0;
  double gamma =
      cfg.backtracking ? cfg.step.value_or(1.0) : fixed_forward_step(loss, cfg);
  bool converged = false;
  for (int t = 0; t < cfg.max_iter; ++t) {
    Vec x_next;
    if (cfg.backtracking) {
      auto bt = backtracking_step(loss, penalty, x, gamma, cfg.backtrack_shrink);
      gamma = bt.gamma;
      x_next = std::move(bt.x_next);
    } else {
      x_next = penalty.prox(x - gamma * loss.gradient(x), gamma);
    }
    const double res = ((x - x_next) / gamma).cwiseAbs().maxCoeff();
    x = std::move(x_next);
    tb.add(t, loss.value(x) + penalty.value(x), res, gamma);
    if (res <= cfg.tol) {
      converged = true;
      break;
    }
  }
  return tb.finish(std::move(x), converged);
}

SolverTrace fista(const Loss& loss, const PenaltyOps& penalty, const Vec& x0,
                  const SolverConfig& cfg) {
  require(cfg.tol > 0, "fista: tol must be positive");
  require(penalty.convex, "fista: momentum requires a convex penalty");
  TraceBuilder tb(cfg);
  Vec x = x0, x_prev = x0;
  double gamma =
      cfg.backtracking ? cfg.step.value_or(1.0) : fixed_forward_step(loss, cfg);
  bool converged = false;
  double f_prev = kInf;
  int momentum_t = 1;
  for (int t = 0; t < cfg.max_iter; ++t, ++momentum_t) {
    const double coef = double(momentum_t - 1) / double(momentum_t + 2);
    Vec z = x + coef * (x - x_prev);
    Vec x_next;
    if (cfg.backtracking) {
      auto bt = backtracking_step(loss, penalty, z, gamma, cfg.backtrack_shrink);
      gamma = bt.gamma;
      x_next = std::move(bt.x_next);
    } else {
      x_next = penalty.prox(z - gamma * loss.gradient(z), gamma);
    }
    const double res = ((z - x_next) / gamma).cwiseAbs().maxCoeff();
    x_prev = std::move(x);
    x = std::move(x_next);
    const double f = loss.value(x) + penalty.value(x);
    if (cfg.fista_restart && f > f_prev) {
      momentum_t = 0;  // restart the momentum schedule
      x_prev = x;
    }
    f_prev = f;
    tb.add(t, f, res, gamma);
    if (res <= cfg.tol) {
      converged = true;
      break;
    }
  }
  return tb.finish(std::move(x), converged);
}

BacktrackResult backtracking_step(const Loss& loss, const PenaltyOps& penalty,
                                  const Vec& x, double gamma0, double beta) {
  require(gamma0 > 0, "backtracking_step: gamma0 must be positive");
  require(beta > 0 && beta < 1, "backtracking_step: beta must lie in (0,1)");
  const double lx = loss.value(x);
  const Vec g = loss.gradient(x);
  double gamma = gamma0;
  while (true) {
    if (gamma < 1e-300)
      throw Error("backtracking_step: step size underflow");
    Vec x_next = penalty.prox(x - gamma * g, gamma);
    const Vec d = x_next - x;
    const double bound =
        lx + g.dot(d) + d.squaredNorm() / (2.0 * gamma) +
        1e-12 * (1.0 + std::abs(lx));
    if (loss_value_or_inf(loss, x_next) <= bound)
      return BacktrackResult{gamma, std::move(x_next)};
    gamma *= beta;
  }
}

SolverTrace proximal_newton(const Loss& loss, const CompositePenalty& penalty,
                            const Vec& x0, const SolverConfig& cfg,
                            const std::function<Mat(const Vec&)>& hessian) {
  require(cfg.tol > 0, "proximal_newton: tol must be positive");
  const double gamma = cfg.step.value_or(1.0);
  require(gamma > 0, "proximal_newton: step must be positive");
  TraceBuilder tb(cfg);
  Vec x = x0;
  bool converged = false;
  for (int t = 0; t < cfg.max_iter; ++t) {
    const Vec g = loss.gradient(x);
    Mat M = hessian(x);
    M.diagonal().array() += 1.0 / gamma;
    Eigen::LLT<Mat> llt(M);
    if (llt.info() != Eigen::Success) {
      std::ostringstream os;
      os << "proximal_newton: scaled Hessian not positive definite at "
            "iteration "
         << t;
      throw Error(os.str());
    }
    Vec x_next;
    if (penalty.is_zero()) {
      x_next = x - llt.solve(g);
    } else {
      // Scaled proximal subproblem min phi(v) + g'(v-x) + 0.5 (v-x)'M(v-x),
      // i.e. a quadratic-composite problem with Lambda = M, eta = Mx - g.
      splitting::QuadraticCompositeProblem sub{M, M * x - g, penalty};
      SolverConfig inner;
      inner.tol = std::min(cfg.tol * 1e-2, 1e-10);
      inner.max_iter = 200000;
      inner.record_trace = false;
      SolverTrace zt = splitting::dual_forward_backward(sub, {}, inner);
      require(zt.converged, "proximal_newton: inner subproblem stalled");
      x_next = std::move(zt.x);
    }
    const double res = (x_next - x).cwiseAbs().maxCoeff();
    x = std::move(x_next);
    tb.add(t, loss.value(x) + penalty.value(x), res, gamma);
    if (res <= cfg.tol) {
      converged = true;
      break;
    }
  }
  return tb.finish(std::move(x), converged);
}

SolverTrace douglas_rachford(const ProxFn& loss_prox,
                             const ProxFn& penalty_prox,
                             const ValueFn& objective, const Vec& x0,
                             const SolverConfig& cfg) {
  require(cfg.tol > 0, "douglas_rachford: tol must be positive");
  const double gamma = cfg.step.value_or(1.0);
  require(gamma > 0, "douglas_rachford: step must be positive");
  TraceBuilder tb(cfg);
  Vec x = x0;
  Vec w = x0;
  bool converged = false;
  for (int t = 0; t < cfg.max_iter; ++t) {
    w = loss_prox(x, gamma);
    Vec z = penalty_prox(2.0 * w - x, gamma);
    const double res = (z - w).cwiseAbs().maxCoeff();
    x += z - w;
    if (x.cwiseAbs().maxCoeff() > 1e12)
      throw Error("douglas_rachford: governing sequence diverged");
    tb.add(t, objective ? objective(w) : 0.0, res, gamma);
    if (res <= cfg.tol) {
      converged = true;
      break;
    }
  }
  return tb.finish(std::move(w), converged);
}

SolverTrace cyclic_descent_lq(const Mat& A, const Vec& y,
                              const prox::LqEntry& entry, const Vec& x0,
                              const SolverConfig& cfg) {
  require(cfg.tol > 0, "cyclic_descent_lq: tol must be positive");
  require(A.rows() == y.size(), "cyclic_descent_lq: A/y dimension mismatch");
  require(A.cols() == x0.size(), "cyclic_descent_lq: A/x0 dimension mismatch");
  const int d = static_cast<int>(A.cols());

  std::vector<double> col_norm2(d);
  std::vector<prox::LqEntry> scaled(d);
  for (int j = 0; j < d; ++j) {
    col_norm2[j] = A.col(j).squaredNorm();
    if (col_norm2[j] == 0.0) {
      std::ostringstream os;
      os << "cyclic_descent_lq: column " << j << " of the design is zero";
      throw Error(os.str());
    }
    scaled[j] = prox::LqEntry::make(entry.q, entry.lambda / col_norm2[j]);
  }

  TraceBuilder tb(cfg);
  Vec x = x0;
  Vec r = y - A * x;
  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(cfg.seed);

  auto objective = [&]() {
    double pen = 0.0;
    for (int j = 0; j < d; ++j)
      pen += std::pow(std::abs(x[j]), entry.q);
    return 0.5 * r.squaredNorm() + entry.lambda * pen;
  };

  bool converged = false;
  for (int cycle = 0; cycle < cfg.max_iter; ++cycle) {
    if (cfg.randomized_order) std::shuffle(order.begin(), order.end(), rng);
    double max_change = 0.0;
    for (int j : order) {
      const double u = A.col(j).dot(r) / col_norm2[j] + x[j];
      const double v = prox::prox_lq(u, scaled[j]).primary;
      if (v != x[j]) {
        r += A.col(j) * (x[j] - v);
        max_change = std::max(max_change, std::abs(v - x[j]));
        x[j] = v;
      }
    }
    tb.add(cycle, objective(), max_change, entry.lambda);
    if (max_change <= cfg.tol) {
      converged = true;
      break;
    }
  }
  return tb.finish(std::move(x), converged);
}

}  // namespace proxkit::solvers
