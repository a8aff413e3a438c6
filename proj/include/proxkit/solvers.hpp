#ifndef PROXKIT_SOLVERS_HPP
#define PROXKIT_SOLVERS_HPP

#include "proxkit/models.hpp"
#include "proxkit/trace.hpp"

namespace proxkit::solvers {

using models::CompositePenalty;
using models::Loss;
using models::PenaltyOps;

// (v, t) -> prox_{t f}(v)
using ProxFn = std::function<Vec(const Vec&, double)>;
using ValueFn = std::function<double(const Vec&)>;

// Proximal minimization: x <- prox_{gamma f}(x) until the iterates settle.
// `f_value` feeds the trace objective column.
SolverTrace proximal_point(const ProxFn& f_prox, const ValueFn& f_value,
                           const Vec& x0, const SolverConfig& cfg);

// Forward-backward iteration x <- prox_{gamma phi}(x - gamma grad l(x)).
// Fixed step 1/lipschitz unless cfg.step or cfg.backtracking says otherwise;
// with a quadratic loss this is classical iterative shrinkage thresholding.
SolverTrace proximal_gradient(const Loss& loss, const PenaltyOps& penalty,
                              const Vec& x0, const SolverConfig& cfg);

// Accelerated forward-backward with momentum (t-1)/(t+2); non-descent.
SolverTrace fista(const Loss& loss, const PenaltyOps& penalty, const Vec& x0,
                  const SolverConfig& cfg);

struct BacktrackResult {
  double gamma;
  Vec x_next;
};

// Shrinks gamma0 by beta until the quadratic majorization
// l(x+) <= l(x) + grad'(x+ - x) + ||x+ - x||^2/(2 gamma) holds at the
// forward-backward update x+.
BacktrackResult backtracking_step(const Loss& loss, const PenaltyOps& penalty,
                                  const Vec& x, double gamma0, double beta);

// Scaled proximal step with curvature gamma^{-1} I + H(z); the inner
// subproblem is solved exactly for a zero penalty and by the dual
// forward-backward engine otherwise.
SolverTrace proximal_newton(const Loss& loss, const CompositePenalty& penalty,
                            const Vec& x0, const SolverConfig& cfg,
                            const std::function<Mat(const Vec&)>& hessian);

// Douglas-Rachford splitting; the w-sequence is the solution candidate.
SolverTrace douglas_rachford(const ProxFn& loss_prox,
                             const ProxFn& penalty_prox,
                             const ValueFn& objective, const Vec& x0,
                             const SolverConfig& cfg);

// Coordinate-wise exact minimization of 0.5||y - Ax||^2 + lambda sum |x_j|^q
// with the set-valued bridge prox; one trace record per full cycle.
SolverTrace cyclic_descent_lq(const Mat& A, const Vec& y,
                              const prox::LqEntry& entry, const Vec& x0,
                              const SolverConfig& cfg);

}  // namespace proxkit::solvers

#endif  // PROXKIT_SOLVERS_HPP
