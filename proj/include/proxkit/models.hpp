#ifndef PROXKIT_MODELS_HPP
#define PROXKIT_MODELS_HPP

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "proxkit/prox.hpp"
#include "proxkit/types.hpp"

namespace proxkit::models {

// Differentiable fit term l(x). Every loss exposes value, gradient and
// Hessian; the prox defaults to an inner damped-Newton solve and is exact
// (closed form) for quadratics.
class Loss {
 public:
  virtual ~Loss() = default;
  virtual int dim() const = 0;
  virtual double value(const Vec& x) const = 0;
  virtual Vec gradient(const Vec& x) const = 0;
  virtual Mat hessian(const Vec& x) const = 0;
  // Gradient-Lipschitz modulus; nullopt when no global bound exists.
  virtual std::optional<double> lipschitz_bound() const = 0;
  virtual bool has_exact_prox() const { return false; }
  // prox_{t l}(v) = argmin_z l(z) + ||z - v||^2 / (2t).
  virtual Vec prox(const Vec& v, double t) const;
};

// l(x) = 0.5 x'Px + q'x + r with P symmetric positive semidefinite.
class QuadraticLoss : public Loss {
 public:
  QuadraticLoss(Mat P, Vec q, double r = 0.0);
  // 0.5 (y - Ax)' Omega (y - Ax) written in the canonical quadratic form.
  static QuadraticLoss weighted_least_squares(const Mat& A, const Vec& y,
                                              const Vec& omega_diag);
  static QuadraticLoss least_squares(const Mat& A, const Vec& y);

  int dim() const override { return static_cast<int>(P_.rows()); }
  double value(const Vec& x) const override;
  Vec gradient(const Vec& x) const override;
  Mat hessian(const Vec&) const override { return P_; }
  std::optional<double> lipschitz_bound() const override;
  bool has_exact_prox() const override { return true; }
  Vec prox(const Vec& v, double t) const override;

  const Mat& P() const { return P_; }
  const Vec& q() const { return q_; }
  double r() const { return r_; }

  // Caller-supplied curvature bound, skipping the power iteration (useful
  // when P is reused across many instances).
  void set_lipschitz_hint(double bound) { lipschitz_cache_ = bound; }

 private:
  Mat P_;
  Vec q_;
  double r_;
  mutable std::optional<double> lipschitz_cache_;
};

// Binomial likelihood: sum_i m_i*softplus(a_i'x) - y_i*a_i'x.
class LogisticLoss : public Loss {
 public:
  LogisticLoss(Mat A, Vec successes, Vec trials);

  int dim() const override { return static_cast<int>(A_.cols()); }
  double value(const Vec& x) const override;
  Vec gradient(const Vec& x) const override;
  Mat hessian(const Vec& x) const override;
  std::optional<double> lipschitz_bound() const override;

  const Mat& A() const { return A_; }
  const Vec& successes() const { return y_; }
  const Vec& trials() const { return m_; }

 private:
  Mat A_;
  Vec y_, m_;
  mutable std::optional<double> lipschitz_cache_;
};

// Poisson likelihood: sum_i exp(a_i'x) - y_i*a_i'x. Not gradient-Lipschitz.
class PoissonLoss : public Loss {
 public:
  PoissonLoss(Mat A, Vec counts);

  int dim() const override { return static_cast<int>(A_.cols()); }
  double value(const Vec& x) const override;
  Vec gradient(const Vec& x) const override;
  Mat hessian(const Vec& x) const override;
  std::optional<double> lipschitz_bound() const override { return std::nullopt; }

  const Mat& A() const { return A_; }
  const Vec& counts() const { return y_; }

 private:
  Mat A_;
  Vec y_;
};

// Convenience pair: loss value and gradient in one call.
std::pair<double, Vec> loss_eval_grad(const Loss& loss, const Vec& x);
std::optional<double> lipschitz_bound(const Loss& loss);

// (p-1) x p first-difference operator with rows (..., -1, 1, ...).
Mat first_difference_matrix(int p);

// Penalty weight * sum_j phi((Bx - b)_j) built from a scalar catalog entry.
// B omitted means the identity operator.
class CompositePenalty {
 public:
  static CompositePenalty separable(prox::ScalarProxEntry entry, double weight,
                                    int dim);
  static CompositePenalty composite(prox::ScalarProxEntry entry, double weight,
                                    Mat B, Vec offset);
  static CompositePenalty zero(int dim);

  double value(const Vec& x) const;
  // Coordinatewise prox of t * weight * sum_j phi(.) in the image space of
  // B (dimension k). Available for every penalty; set-valued ties resolve
  // to the nonzero minimizer.
  Vec separable_prox(const Vec& v, double t) const;
  // Scalar image-space prox exposing set-valuedness.
  prox::ProxResult scalar_prox(double v, double t) const;

  bool is_identity() const { return !B_.has_value(); }
  bool is_zero() const { return zero_; }
  bool convex() const { return zero_ || entry_.convex; }
  int dim() const { return dim_; }
  int k() const { return k_; }
  const Mat& B() const;
  const Vec& offset() const { return b_; }
  double weight() const { return weight_; }
  const prox::ScalarProxEntry& entry() const { return entry_; }

  // Bx - b (or x - b for the identity operator).
  Vec apply_operator(const Vec& x) const;
  Vec apply_operator_transpose(const Vec& u) const;

 private:
  CompositePenalty() = default;
  prox::ScalarProxEntry entry_;
  double weight_ = 1.0;
  std::optional<Mat> B_;
  Vec b_;
  int dim_ = 0, k_ = 0;
  bool zero_ = false;
};

CompositePenalty l1_penalty(double weight, int dim);
CompositePenalty fused_lasso_penalty(double weight, int dim);
CompositePenalty lq_penalty(double lambda, double q, int dim);

// Function-object view of a penalty: value plus prox_{t phi}. Solvers take
// this so composite penalties can plug in an inner prox engine.
struct PenaltyOps {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&, double)> prox;
  bool convex = true;
};

PenaltyOps zero_penalty_ops();
// Identity-operator penalties only; composite operators need the inner
// engine from the splitting module.
PenaltyOps separable_penalty_ops(const CompositePenalty& penalty);

// Bregman divergence D(x, y) = d(x) - d(y) - d'(y)(x - y) >= 0.
struct BregmanDivergence {
  std::string name;
  std::function<double(double)> d_value;
  std::function<double(double)> d_derivative;
  double domain_lo = -std::numeric_limits<double>::infinity();
  double domain_hi = std::numeric_limits<double>::infinity();
  // Left argument may sit on the closed boundary (Poisson allows x = 0).
  double arg_lo = -std::numeric_limits<double>::infinity();
};

BregmanDivergence quadratic_divergence();
BregmanDivergence poisson_divergence();

double bregman(const BregmanDivergence& div, double x, double y);

// Half-quadratic penalty row: phi with its multiplicative weight
// sigma_m(t) = phi'(t)/t (phi''(0+) at t = 0) and additive weight
// sigma_a(t) = c t - phi'(t).
struct HQEntry {
  std::string name;
  double c = 1.0;  // additive-form constant
  double domain_lo = -std::numeric_limits<double>::infinity();
  std::function<double(double)> value;
  std::function<double(double)> derivative;
  std::function<double(double)> mult_weight;
};

HQEntry hq_power(double alpha);       // |t|^alpha, alpha in (1,2]
HQEntry hq_sqrt(double alpha);        // sqrt(alpha + t^2)
HQEntry hq_log_ratio(double alpha);   // |t|/alpha - log(1 + |t|/alpha)
HQEntry hq_huber(double alpha);
HQEntry hq_log_cosh(double alpha);
HQEntry hq_inv_abs();                 // -1/(1 + |t|)
HQEntry hq_inv_sqrt();                // -1/(1 + sqrt(t)), t >= 0

struct HQWeights {
  double mult;
  double add;
};
HQWeights hq_weights(const HQEntry& entry, double t);

}  // namespace proxkit::models

#endif  // PROXKIT_MODELS_HPP
