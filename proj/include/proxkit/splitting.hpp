#ifndef PROXKIT_SPLITTING_HPP
#define PROXKIT_SPLITTING_HPP

#include "proxkit/models.hpp"
#include "proxkit/trace.hpp"

namespace proxkit::splitting {

using models::CompositePenalty;
using models::Loss;
using models::PenaltyOps;
using models::QuadraticLoss;

using ProxFn = std::function<Vec(const Vec&, double)>;
using ValueFn = std::function<double(const Vec&)>;

// min 0.5 x'Lambda x - eta'x + penalty(x) with Lambda symmetric positive
// definite; the composite-form problem every dual engine below solves.
struct QuadraticCompositeProblem {
  Mat Lambda;
  Vec eta;
  CompositePenalty penalty;

  double objective(const Vec& x) const {
    return 0.5 * x.dot(Lambda * x) - eta.dot(x) + penalty.value(x);
  }
};

// Gradient ascent on the dual of min l(x) s.t. Ax = y. The inner argmin is
// closed-form, which needs a strictly convex quadratic loss.
SolverTrace dual_ascent(const QuadraticLoss& loss, const Mat& A, const Vec& y,
                        const std::function<double(int)>& step_schedule,
                        const SolverConfig& cfg);

// Method of multipliers in scaled form; the dual step size equals rho.
SolverTrace augmented_lagrangian(const Loss& loss, const Mat& A, const Vec& y,
                                 double rho, const SolverConfig& cfg);

// Basis-pursuit solve min ||x||_1 s.t. Ax = y by residual re-injection;
// each inner problem is a lasso handled by an accelerated forward-backward
// run to high precision.
SolverTrace bregman_iteration(const Mat& A, const Vec& y, double quad_weight,
                              const SolverConfig& cfg);

// Per-iteration hook exposing the consensus variables (testing/diagnostics).
struct AdmmWatch {
  std::function<void(const Vec& x, const Vec& z, const Vec& u)> on_iter;
};

// Consensus ADMM for min l(x) + phi(x): both steps are proximal operators
// with parameter 1/rho; the scaled dual u accumulates the primal residuals.
SolverTrace admm(const Loss& loss, const PenaltyOps& penalty, double rho,
                 const Vec& x0, const SolverConfig& cfg,
                 const AdmmWatch* watch = nullptr);

// ADMM on min l(x) + phi(w), Bx = w, with the coupled quadratic replaced by
// its separable majorizer at the current iterate so the x-step is a plain
// loss prox. Throws if the supplied curvature bound fails the majorization
// test at any iterate.
SolverTrace linearized_admm(const Loss& loss, const CompositePenalty& penalty,
                            double rho, const Vec& x0, const SolverConfig& cfg,
                            std::optional<double> lambda_B = std::nullopt,
                            const AdmmWatch* watch = nullptr);

// Consensus splitting across J sub-proxes; each round every block proxes a
// private copy against the running average.
SolverTrace divide_and_concur(const std::vector<ProxFn>& sub_proxes,
                              double lambda, const Vec& x0,
                              const SolverConfig& cfg,
                              const ValueFn& objective = nullptr);

// Primal-dual iteration for min l(x) + phi(Bx - b): the x-step proxes the
// loss at x - lambda_l B'z, the z-step proxes the penalty conjugate via the
// Moreau decomposition. Requires lambda_l*lambda_phi*sigma_max(B)^2 < 1.
SolverTrace primal_dual_composite(const Loss& loss,
                                  const CompositePenalty& penalty,
                                  double lambda_l, double lambda_phi,
                                  const Vec& x0, const SolverConfig& cfg);

// Forward-backward sweep on the dual of a quadratic-composite problem.
// Step lambda2 defaults to 1/sigma_max(B Lambda^{-1} B') and must stay
// below twice that bound. `warm_dual` seeds the dual iterate.
SolverTrace dual_forward_backward(const QuadraticCompositeProblem& problem,
                                  std::optional<double> lambda2,
                                  const SolverConfig& cfg,
                                  const Vec* warm_dual = nullptr);

// The damped fixed-point operator H underlying picard_opial, exposed for
// non-expansiveness checks.
std::function<Vec(const Vec&)> picard_opial_operator(
    const QuadraticCompositeProblem& problem, double gamma);

struct PicardOpialResult {
  Vec x;
  SolverTrace trace;
};

// v <- kappa v + (1-kappa) H(v) on the scaled dual; on exit the primal is
// recovered through Lambda^{-1}(eta - gamma B'v). gamma defaults to
// 1/sigma_max(B Lambda^{-1} B').
PicardOpialResult picard_opial(const QuadraticCompositeProblem& problem,
                               std::optional<double> gamma, double kappa,
                               const SolverConfig& cfg,
                               const Vec* warm_dual = nullptr);

// Half-quadratic IRLS for 0.5||Ax - y||^2 + weight * sum phi((Bx - b)_i):
// refit x against the multiplicative weights at the current residuals.
SolverTrace hq_solver(const Mat& A, const Vec& y, const models::HQEntry& row,
                      const Mat& B, const Vec& b, double weight,
                      const SolverConfig& cfg);

enum class InnerEngine { dual_fb, picard_opial };

// Penalty ops whose prox handles a composite operator by solving the inner
// quadratic-composite problem on its dual (accelerated forward-backward or
// damped Picard-Opial sweeps, warm started across calls). Each returned
// object owns its warm-start state, so give every solver run its own copy.
PenaltyOps composite_penalty_ops(const CompositePenalty& penalty,
                                 InnerEngine engine = InnerEngine::dual_fb,
                                 double inner_tol = 1e-10,
                                 int inner_max_iter = 400000);

// Dispatch: separable fast path for identity operators, inner engine
// otherwise.
PenaltyOps penalty_ops(const CompositePenalty& penalty,
                       double inner_tol = 1e-10);

}  // namespace proxkit::splitting

#endif  // PROXKIT_SPLITTING_HPP
