#include "proxkit/splitting.hpp"

#include <cmath>
#include <memory>
#include <sstream>

#include "proxkit/linalg.hpp"
#include "proxkit/solvers.hpp"

namespace proxkit::splitting {

namespace {

// B applied without the offset: Bx = penalty.apply_operator(x) + b.
Vec apply_B(const CompositePenalty& p, const Vec& x) {
  return p.apply_operator(x) + p.offset();
}

double operator_norm(const CompositePenalty& p) {
  if (p.is_identity()) return 1.0;
  return linalg::spectral_norm(p.B(), 1e-9);
}

// Damped Newton for smooth strongly convex minimization; shared by the
// generic augmented-Lagrangian x-step.
Vec newton_minimize(const std::function<double(const Vec&)>& value,
                    const std::function<Vec(const Vec&)>& grad,
                    const std::function<Mat(const Vec&)>& hess, Vec x,
                    double tol, int max_iter = 200) {
  for (int it = 0; it < max_iter; ++it) {
    Vec g = grad(x);
    if (g.cwiseAbs().maxCoeff() <= tol) return x;
    Eigen::LLT<Mat> llt(hess(x));
    require(llt.info() == Eigen::Success,
            "newton_minimize: Hessian not positive definite");
    Vec step = llt.solve(g);
    const double f0 = value(x);
    const double slope = g.dot(step);
    if (slope <= 1e-12 * (1.0 + std::abs(f0))) {
      x -= step;
      continue;
    }
    double s = 1.0;
    for (; s > 1e-14; s *= 0.5) {
      if (value(x - s * step) <= f0 - 1e-4 * s * slope) break;
    }
    require(s > 1e-14, "newton_minimize: line search stalled");
    x -= s * step;
  }
  throw ConvergenceError("newton_minimize: iteration budget exhausted", 0.0);
}

}  // namespace

SolverTrace dual_ascent(const QuadraticLoss& loss, const Mat& A, const Vec& y,
                        const std::function<double(int)>& step_schedule,
                        const SolverConfig& cfg) {
  require(A.rows() == y.size(), "dual_ascent: A/y dimension mismatch");
  require(A.cols() == loss.dim(), "dual_ascent: A/loss dimension mismatch");
  // Strict convexity makes the inner argmin unique; a semidefinite P (e.g. a
  // linear loss) fails the factorization here.
  std::unique_ptr<linalg::SpdSolver> inner;
  try {
    inner = std::make_unique<linalg::SpdSolver>(loss.P());
  } catch (const Error&) {
    throw Error("dual_ascent: inner argmin unbounded; loss is not strictly "
                "convex");
  }
  TraceBuilder tb(cfg);
  Vec z = Vec::Zero(y.size());
  Vec x = Vec::Zero(loss.dim());
  bool converged = false;
  for (int k = 0; k < cfg.max_iter; ++k) {
    x = -inner->solve(loss.q() + A.transpose() * z);
    const Vec r = A * x - y;
    const double res = r.cwiseAbs().maxCoeff();
    tb.add(k, loss.value(x), res, step_schedule(k));
    if (res <= cfg.tol) {
      converged = true;
      break;
    }
    z += step_schedule(k) * r;
  }
  return tb.finish(std::move(x), converged);
}

SolverTrace augmented_lagrangian(const Loss& loss, const Mat& A, const Vec& y,
                                 double rho, const SolverConfig& cfg) {
  require(rho > 0, "augmented_lagrangian: rho must be positive");
  require(A.rows() == y.size(), "augmented_lagrangian: A/y dimension mismatch");
  require(A.cols() == loss.dim(),
          "augmented_lagrangian: A/loss dimension mismatch");
  const auto* quad = dynamic_cast<const QuadraticLoss*>(&loss);
  std::unique_ptr<linalg::SpdSolver> normal;
  Mat AtA;
  if (quad) {
    normal = std::make_unique<linalg::SpdSolver>(
        quad->P() + rho * (A.transpose() * A));
  } else {
    AtA = A.transpose() * A;
  }

  TraceBuilder tb(cfg);
  Vec x = Vec::Zero(loss.dim());
  Vec u = Vec::Zero(y.size());
  bool converged = false;
  for (int k = 0; k < cfg.max_iter; ++k) {
    if (quad) {
      x = normal->solve(-quad->q() + rho * (A.transpose() * (y - u)));
    } else {
      const Vec target = y - u;
      x = newton_minimize(
          [&](const Vec& v) {
            return loss.value(v) + 0.5 * rho * (A * v - target).squaredNorm();
          },
          [&](const Vec& v) {
            return (loss.gradient(v) + rho * (A.transpose() * (A * v - target)))
                .eval();
          },
          [&](const Vec& v) { return (loss.hessian(v) + rho * AtA).eval(); },
          x, 1e-10 * rho);
    }
    const Vec r = A * x - y;
    u += r;
    const double res = r.cwiseAbs().maxCoeff();
    tb.add(k, loss.value(x), res, rho);
    if (res <= cfg.tol) {
      converged = true;
      break;
    }
  }
  return tb.finish(std::move(x), converged);
}

SolverTrace bregman_iteration(const Mat& A, const Vec& y, double quad_weight,
                              const SolverConfig& cfg) {
  require(quad_weight > 0, "bregman_iteration: quad_weight must be positive");
  require(A.rows() == y.size(), "bregman_iteration: A/y dimension mismatch");
  const int d = static_cast<int>(A.cols());
  const double sigma = linalg::spectral_norm(A, 1e-9);
  const double lip = quad_weight * sigma * sigma;
  Mat P = quad_weight * (A.transpose() * A);
  P = 0.5 * (P + P.transpose());
  const PenaltyOps l1 = models::separable_penalty_ops(models::l1_penalty(1.0, d));

  TraceBuilder tb(cfg);
  Vec x = Vec::Zero(d);
  Vec z = y;
  bool converged = false;
  for (int k = 0; k < cfg.max_iter; ++k) {
    models::QuadraticLoss inner(P, -quad_weight * (A.transpose() * z),
                                0.5 * quad_weight * z.squaredNorm());
    inner.set_lipschitz_hint(lip);
    SolverConfig inner_cfg;
    inner_cfg.tol = 1e-10;
    inner_cfg.max_iter = 200000;
    inner_cfg.record_trace = false;
    SolverTrace inner_trace = solvers::fista(inner, l1, x, inner_cfg);
    if (!inner_trace.converged)
      throw ConvergenceError("bregman_iteration: inner lasso solve stalled",
                             inner_trace.final_objective());
    x = std::move(inner_trace.x);
    const Vec r = A * x - y;
    z = y + z - A * x;
    const double res = r.cwiseAbs().maxCoeff();
    tb.add(k, x.cwiseAbs().sum(), res, quad_weight);
    if (res <= cfg.tol) {
      converged = true;
      break;
    }
  }
  return tb.finish(std::move(x), converged);
}

SolverTrace admm(const Loss& loss, const PenaltyOps& penalty, double rho,
                 const Vec& x0, const SolverConfig& cfg,
                 const AdmmWatch* watch) {
  require(rho > 0, "admm: rho must be positive");
  const double t = 1.0 / rho;
  TraceBuilder tb(cfg);
  Vec x = x0, z = x0;
  Vec u = Vec::Zero(x0.size());
  bool converged = false;
  for (int k = 0; k < cfg.max_iter; ++k) {
    // The dual residual tracks the variable that was stale during the
    // first prox of the sweep.
    const Vec stale_prev = cfg.penalty_step_first ? z : x;
    if (cfg.penalty_step_first) {
      x = penalty.prox(z - u, t);
      z = loss.prox(x + u, t);
    } else {
      z = loss.prox(x + u, t);
      x = penalty.prox(z - u, t);
    }
    u += x - z;
    if (x.cwiseAbs().maxCoeff() > 1e12)
      throw Error("admm: iterates diverged");
    if (watch && watch->on_iter) watch->on_iter(x, z, u);
    const double primal = (x - z).cwiseAbs().maxCoeff();
    const Vec& stale_now = cfg.penalty_step_first ? z : x;
    const double dual = rho * (stale_now - stale_prev).cwiseAbs().maxCoeff();
    tb.add(k, loss.value(x) + penalty.value(x), std::max(primal, dual), rho);
    if (primal <= cfg.tol && dual <= cfg.tol) {
      converged = true;
      break;
    }
  }
  return tb.finish(std::move(x), converged);
}

SolverTrace linearized_admm(const Loss& loss, const CompositePenalty& penalty,
                            double rho, const Vec& x0, const SolverConfig& cfg,
                            std::optional<double> lambda_B,
                            const AdmmWatch* watch) {
  require(rho > 0, "linearized_admm: rho must be positive");
  require(penalty.dim() == loss.dim(),
          "linearized_admm: penalty/loss dimension mismatch");
  const double sigma = operator_norm(penalty);
  const double lam_B = lambda_B.value_or(sigma * sigma);
  require(lam_B > 0, "linearized_admm: curvature bound must be positive");
  const double mu = 1.0 / (rho * lam_B);

  TraceBuilder tb(cfg);
  Vec x = x0;
  Vec w = apply_B(penalty, x);
  Vec u = Vec::Zero(penalty.k());
  bool converged = false;
  for (int k = 0; k < cfg.max_iter; ++k) {
    const Vec w_prev = w;
    const Vec Bx = apply_B(penalty, x);
    const Vec gap = Bx - w + u;
    Vec x_next =
        loss.prox(x - mu * rho * penalty.apply_operator_transpose(gap), mu);

    // The separable surrogate must dominate the coupled quadratic at the
    // accepted point; a too-small lam_B shows up here.
    const Vec Bx_next = apply_B(penalty, x_next);
    const double coupled = 0.5 * rho * (Bx_next - w + u).squaredNorm();
    const Vec dx = x_next - x;
    const double surrogate =
        0.5 * rho * gap.squaredNorm() +
        rho * penalty.apply_operator_transpose(gap).dot(dx) +
        0.5 * rho * lam_B * dx.squaredNorm();
    if (coupled > surrogate + 1e-9 * (1.0 + std::abs(coupled))) {
      std::ostringstream os;
      os << "linearized_admm: majorization violated at iteration " << k
         << "; lambda_B is below sigma_max(B'B)";
      throw Error(os.str());
    }
    x = std::move(x_next);

    const Vec v = Bx_next + u - penalty.offset();
    w = penalty.offset() + penalty.separable_prox(v, 1.0 / rho);
    u += Bx_next - w;
    if (x.cwiseAbs().maxCoeff() > 1e12)
      throw Error("linearized_admm: iterates diverged");
    if (watch && watch->on_iter) watch->on_iter(x, w, u);
    const double primal = (Bx_next - w).cwiseAbs().maxCoeff();
    const double dual =
        rho *
        penalty.apply_operator_transpose(w - w_prev).cwiseAbs().maxCoeff();
    tb.add(k, loss.value(x) + penalty.value(x), std::max(primal, dual), rho);
    if (primal <= cfg.tol && dual <= cfg.tol) {
      converged = true;
      break;
    }
  }
  return tb.finish(std::move(x), converged);
}

SolverTrace divide_and_concur(const std::vector<ProxFn>& sub_proxes,
                              double lambda, const Vec& x0,
                              const SolverConfig& cfg,
                              const ValueFn& objective) {
  require(!sub_proxes.empty(), "divide_and_concur: need at least one block");
  require(lambda > 0, "divide_and_concur: lambda must be positive");
  const size_t J = sub_proxes.size();
  TraceBuilder tb(cfg);
  std::vector<Vec> x(J, x0), u(J, Vec::Zero(x0.size()));
  Vec mean = x0;
  bool converged = false;
  for (int k = 0; k < cfg.max_iter; ++k) {
    for (size_t j = 0; j < J; ++j) {
      try {
        x[j] = sub_proxes[j](mean - u[j], lambda);
      } catch (const std::exception& e) {
        std::ostringstream os;
        os << "divide_and_concur: sub-prox " << j << " failed: " << e.what();
        throw Error(os.str());
      }
    }
    const Vec mean_prev = mean;
    mean.setZero();
    for (const auto& xj : x) mean += xj;
    mean /= double(J);
    double res = 0.0;
    for (size_t j = 0; j < J; ++j) {
      u[j] += x[j] - mean;
      res = std::max(res, (x[j] - mean).cwiseAbs().maxCoeff());
    }
    tb.add(k, objective ? objective(mean) : 0.0, res, lambda);
    // The consensus gap alone is blind to a drifting average (and is
    // identically zero for a single block).
    if (res <= cfg.tol &&
        (mean - mean_prev).cwiseAbs().maxCoeff() <= cfg.tol) {
      converged = true;
      break;
    }
  }
  return tb.finish(std::move(mean), converged);
}

SolverTrace primal_dual_composite(const Loss& loss,
                                  const CompositePenalty& penalty,
                                  double lambda_l, double lambda_phi,
                                  const Vec& x0, const SolverConfig& cfg) {
  require(lambda_l > 0 && lambda_phi > 0,
          "primal_dual_composite: steps must be positive");
  require(penalty.convex(),
          "primal_dual_composite: conjugate prox needs a convex penalty");
  const double sigma = operator_norm(penalty);
  require(lambda_l * lambda_phi * sigma * sigma < 1.0,
          "primal_dual_composite: step product violates "
          "lambda_l*lambda_phi*sigma_max(B)^2 < 1");
  TraceBuilder tb(cfg);
  Vec x = x0;
  Vec z = Vec::Zero(penalty.k());
  bool converged = false;
  for (int k = 0; k < cfg.max_iter; ++k) {
    Vec x_next =
        loss.prox(x - lambda_l * penalty.apply_operator_transpose(z), lambda_l);
    // Conjugate prox through the Moreau decomposition: prox of the penalty
    // conjugate at v equals v minus the scaled primal prox. The dual step
    // reads the extrapolated point 2x+ - x, which keeps the sweep
    // convergent under the step-product bound without moving the fixed
    // point.
    const Vec v =
        z + lambda_phi * penalty.apply_operator(2.0 * x_next - x);
    Vec z_next =
        v - lambda_phi * penalty.separable_prox(v / lambda_phi, 1.0 / lambda_phi);
    const double res =
        std::max((x_next - x).cwiseAbs().maxCoeff() / lambda_l,
                 (z_next - z).cwiseAbs().maxCoeff() / lambda_phi);
    x = std::move(x_next);
    z = std::move(z_next);
    tb.add(k, loss.value(x) + penalty.value(x), res,
           lambda_l);
    if (res <= cfg.tol) {
      converged = true;
      break;
    }
  }
  return tb.finish(std::move(x), converged);
}

namespace {

// Shared geometry for the dual engines: K = B Lambda^{-1} B', its norm, and
// the forward base point B Lambda^{-1} eta - b.
struct DualGeometry {
  linalg::SpdSolver lam;
  Mat K;
  Vec base;
  double sigma_K;

  DualGeometry(const QuadraticCompositeProblem& p)
      : lam(p.Lambda), K(), base(), sigma_K(0) {
    const auto& pen = p.penalty;
    const int k = pen.k();
    Mat BtT(p.Lambda.rows(), k);  // Lambda^{-1} B'
    if (pen.is_identity()) {
      for (int j = 0; j < k; ++j)
        BtT.col(j) = lam.solve(Vec::Unit(p.Lambda.rows(), j));
      K = BtT;
    } else {
      for (int j = 0; j < k; ++j)
        BtT.col(j) = lam.solve(pen.B().row(j).transpose());
      K = pen.B() * BtT;
    }
    K = 0.5 * (K + K.transpose());
    base = apply_B(pen, lam.solve(p.eta)) - pen.offset();  // B L^{-1} eta - b
    sigma_K = linalg::spectral_norm(K, 1e-9);
  }
};

}  // namespace

SolverTrace dual_forward_backward(const QuadraticCompositeProblem& problem,
                                  std::optional<double> lambda2,
                                  const SolverConfig& cfg,
                                  const Vec* warm_dual) {
  require(problem.penalty.convex(),
          "dual_forward_backward: conjugate prox needs a convex penalty");
  DualGeometry geo(problem);
  const double l2 = lambda2.value_or(1.0 / geo.sigma_K);
  require(l2 > 0 && l2 < 2.0 / geo.sigma_K,
          "dual_forward_backward: step must lie in (0, 2/sigma_max(B "
          "Lambda^{-1} B'))");
  const auto& pen = problem.penalty;
  TraceBuilder tb(cfg);
  Vec z = warm_dual && warm_dual->size() == pen.k() ? *warm_dual
                                                    : Vec::Zero(pen.k());
  Vec x = geo.lam.solve(problem.eta - pen.apply_operator_transpose(z));
  bool converged = false;
  for (int k = 0; k < cfg.max_iter; ++k) {
    const Vec u = z - l2 * (geo.K * z - geo.base);
    Vec z_next = u - l2 * pen.separable_prox(u / l2, 1.0 / l2);
    const double res = (z_next - z).cwiseAbs().maxCoeff();
    z = std::move(z_next);
    x = geo.lam.solve(problem.eta - pen.apply_operator_transpose(z));
    tb.add(k, problem.objective(x), res, l2);
    if (res <= cfg.tol) {
      converged = true;
      break;
    }
  }
  return tb.finish(std::move(x), converged);
}

std::function<Vec(const Vec&)> picard_opial_operator(
    const QuadraticCompositeProblem& problem, double gamma) {
  auto geo = std::make_shared<DualGeometry>(problem);
  require(gamma > 0 && gamma < 2.0 / geo->sigma_K,
          "picard_opial: gamma must lie in (0, 2/sigma_max(B Lambda^{-1} "
          "B'))");
  const CompositePenalty pen = problem.penalty;
  return [geo, pen, gamma](const Vec& v) {
    const Vec u = geo->base + v - gamma * (geo->K * v);
    return (u - pen.separable_prox(u, 1.0 / gamma)).eval();
  };
}

PicardOpialResult picard_opial(const QuadraticCompositeProblem& problem,
                               std::optional<double> gamma_opt, double kappa,
                               const SolverConfig& cfg, const Vec* warm_dual) {
  require(kappa > 0 && kappa < 1, "picard_opial: kappa must lie in (0,1)");
  require(problem.penalty.convex(),
          "picard_opial: conjugate prox needs a convex penalty");
  DualGeometry geo(problem);
  const double gamma = gamma_opt.value_or(1.0 / geo.sigma_K);
  require(gamma > 0 && gamma < 2.0 / geo.sigma_K,
          "picard_opial: gamma must lie in (0, 2/sigma_max(B Lambda^{-1} "
          "B'))");
  const auto& pen = problem.penalty;
  TraceBuilder tb(cfg);
  Vec v = warm_dual && warm_dual->size() == pen.k() ? *warm_dual
                                                    : Vec::Zero(pen.k());
  Vec x = geo.lam.solve(problem.eta - gamma * pen.apply_operator_transpose(v));
  bool converged = false;
  for (int k = 0; k < cfg.max_iter; ++k) {
    const Vec u = geo.base + v - gamma * (geo.K * v);
    const Vec Hv = u - pen.separable_prox(u, 1.0 / gamma);
    Vec v_next = kappa * v + (1.0 - kappa) * Hv;
    const double res = (v_next - v).cwiseAbs().maxCoeff();
    v = std::move(v_next);
    x = geo.lam.solve(problem.eta - gamma * pen.apply_operator_transpose(v));
    tb.add(k, problem.objective(x), res, gamma);
    if (res <= cfg.tol) {
      converged = true;
      break;
    }
  }
  PicardOpialResult out;
  out.trace = tb.finish(x, converged);
  out.x = std::move(x);
  return out;
}

SolverTrace hq_solver(const Mat& A, const Vec& y, const models::HQEntry& row,
                      const Mat& B, const Vec& b, double weight,
                      const SolverConfig& cfg) {
  require(weight > 0, "hq_solver: penalty weight must be positive");
  require(A.rows() == y.size(), "hq_solver: A/y dimension mismatch");
  require(B.cols() == A.cols(), "hq_solver: A/B dimension mismatch");
  require(B.rows() == b.size(), "hq_solver: B/b dimension mismatch");
  const Mat AtA = A.transpose() * A;
  const Vec Aty = A.transpose() * y;

  auto objective = [&](const Vec& x) {
    const Vec delta = B * x - b;
    double pen = 0.0;
    for (Eigen::Index i = 0; i < delta.size(); ++i) pen += row.value(delta[i]);
    return 0.5 * (A * x - y).squaredNorm() + weight * pen;
  };

  TraceBuilder tb(cfg);
  Vec x = Vec::Zero(A.cols());
  bool converged = false;
  for (int k = 0; k < cfg.max_iter; ++k) {
    const Vec delta = B * x - b;
    Vec wts(delta.size());
    for (Eigen::Index i = 0; i < delta.size(); ++i)
      wts[i] = row.mult_weight(delta[i]);
    require(all_finite(wts), "hq_solver: weight overflow at current iterate");
    Mat L = AtA + weight * (B.transpose() * wts.asDiagonal() * B);
    L = 0.5 * (L + L.transpose());
    Eigen::LLT<Mat> llt(L);
    if (llt.info() != Eigen::Success)
      throw Error("hq_solver: reweighted normal matrix is not positive "
                  "definite");
    Vec x_next =
        llt.solve(Aty + weight * (B.transpose() * (wts.asDiagonal() * b)));
    const double res = (x_next - x).cwiseAbs().maxCoeff();
    x = std::move(x_next);
    tb.add(k, objective(x), res, weight);
    if (res <= cfg.tol) {
      converged = true;
      break;
    }
  }
  return tb.finish(std::move(x), converged);
}

namespace {

// Warm-started inner engine state for composite proxes.
struct CompositeProxState {
  Vec z;
};

}  // namespace

PenaltyOps composite_penalty_ops(const CompositePenalty& penalty,
                                 InnerEngine engine, double inner_tol,
                                 int inner_max_iter) {
  require(penalty.convex() || penalty.is_identity(),
          "composite_penalty_ops: inner dual engine needs a convex penalty");
  require(!penalty.is_zero(), "composite_penalty_ops: zero penalty is trivial");
  const double sigma_B = operator_norm(penalty);
  auto state = std::make_shared<CompositeProxState>();

  PenaltyOps ops;
  ops.convex = penalty.convex();
  ops.value = [penalty](const Vec& x) { return penalty.value(x); };
  ops.prox = [penalty, engine, inner_tol, inner_max_iter, sigma_B,
              state](const Vec& v, double t) -> Vec {
    require(t > 0, "composite prox: parameter must be positive");
    // Dual of min ||x - v||^2/(2t) + Phi(Bx - b): smooth part
    // h(z) = (t/2)||B'z||^2 - (Bv - b)'z with curvature t*sigma_B^2.
    const Vec base = penalty.apply_operator(v);  // Bv - b
    const double step = 1.0 / (t * sigma_B * sigma_B);
    if (state->z.size() != penalty.k()) state->z = Vec::Zero(penalty.k());
    Vec z = state->z;
    // K z = t * B B' z.
    auto K_apply = [&](const Vec& w) {
      const Vec Btw = penalty.apply_operator_transpose(w);
      return (t * (penalty.apply_operator(Btw) + penalty.offset())).eval();
    };

    if (engine == InnerEngine::picard_opial) {
      // Damped sweeps on the gamma-scaled dual; the primal is
      // v - t*gamma*B'z at the fixed point.
      const double kappa = 0.5;
      const double gamma = step;
      const double ztol =
          (1.0 - kappa) * inner_tol / (1.0 + t * gamma * sigma_B);
      for (int k = 0; k < inner_max_iter; ++k) {
        const Vec u = base + z - gamma * K_apply(z);
        const Vec Hz = u - penalty.separable_prox(u, 1.0 / gamma);
        const Vec z_next = kappa * z + (1.0 - kappa) * Hz;
        const double res = (z_next - z).cwiseAbs().maxCoeff();
        z = z_next;
        if (res <= ztol) {
          state->z = z;
          return v - t * gamma * penalty.apply_operator_transpose(z);
        }
      }
    } else {
      // Accelerated forward-backward on the unscaled dual.
      const double ztol = inner_tol / (1.0 + t * sigma_B);
      Vec z_prev = z;
      for (int k = 0; k < inner_max_iter; ++k) {
        const double coef = double(k) / double(k + 3);
        const Vec w = z + coef * (z - z_prev);
        const Vec u = w - step * (K_apply(w) - base);
        Vec z_next = u - step * penalty.separable_prox(u / step, 1.0 / step);
        const double res = (z_next - w).cwiseAbs().maxCoeff();
        z_prev = std::move(z);
        z = std::move(z_next);
        if (res <= ztol) {
          state->z = z;
          return v - t * penalty.apply_operator_transpose(z);
        }
      }
    }
    throw ConvergenceError("composite prox: inner engine stalled", 0.0);
  };
  return ops;
}

PenaltyOps penalty_ops(const CompositePenalty& penalty, double inner_tol) {
  if (penalty.is_zero()) return models::zero_penalty_ops();
  if (penalty.is_identity()) return models::separable_penalty_ops(penalty);
  return composite_penalty_ops(penalty, InnerEngine::dual_fb, inner_tol);
}

}  // namespace proxkit::splitting
