#include "proxkit/models.hpp"

#include <cmath>
#include <sstream>

#include "proxkit/linalg.hpp"

namespace proxkit::models {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sgn(double x) { return (x > 0) - (x < 0); }

// log(1 + exp(t)) without overflow.
double softplus(double t) {
  if (t > 0) return t + std::log1p(std::exp(-t));
  return std::log1p(std::exp(t));
}

double sigmoid(double t) {
  if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double loss_value_or_inf(const Loss& loss, const Vec& z) {
  try {
    return loss.value(z);
  } catch (const Error&) {
    return kInf;
  }
}

}  // namespace

Vec Loss::prox(const Vec& v, double t) const {
  require(t > 0, "Loss::prox: parameter must be positive");
  // Damped Newton on psi(z) = l(z) + ||z - v||^2 / (2t); the quadratic term
  // makes the subproblem strongly convex for convex losses.
  Vec z = v;
  const double tol = 1e-11 * (1.0 + v.cwiseAbs().maxCoeff() / t);
  for (int it = 0; it < 200; ++it) {
    Vec g = gradient(z) + (z - v) / t;
    if (g.cwiseAbs().maxCoeff() <= tol) return z;
    Mat H = hessian(z);
    H.diagonal().array() += 1.0 / t;
    Eigen::LLT<Mat> llt(H);
    require(llt.info() == Eigen::Success,
            "Loss::prox: inner Hessian not positive definite");
    Vec step = llt.solve(g);
    const double psi0 = loss_value_or_inf(*this, z) +
                        (z - v).squaredNorm() / (2.0 * t);
    const double slope = g.dot(step);
    // Inside the quadratic basin the predicted decrease sinks below the
    // floating-point noise of psi; take the full step there.
    if (slope <= 1e-12 * (1.0 + std::abs(psi0))) {
      z -= step;
      continue;
    }
    double s = 1.0;
    Vec z_try;
    for (; s > 1e-14; s *= 0.5) {
      z_try = z - s * step;
      const double psi = loss_value_or_inf(*this, z_try) +
                         (z_try - v).squaredNorm() / (2.0 * t);
      if (psi <= psi0 - 1e-4 * s * slope) break;
    }
    if (s <= 1e-14)
      throw ConvergenceError("Loss::prox: inner line search stalled", psi0);
    z = z_try;
  }
  throw ConvergenceError("Loss::prox: Newton budget exhausted",
                         loss_value_or_inf(*this, z));
}

QuadraticLoss::QuadraticLoss(Mat P, Vec q, double r)
    : P_(std::move(P)), q_(std::move(q)), r_(r) {
  require(P_.rows() == P_.cols(), "QuadraticLoss: P must be square");
  require(P_.rows() == q_.size(), "QuadraticLoss: P/q dimension mismatch");
  const double scale = P_.size() ? P_.cwiseAbs().maxCoeff() : 0.0;
  require((P_ - P_.transpose()).cwiseAbs().maxCoeff() <= 1e-8 * (1.0 + scale),
          "QuadraticLoss: P must be symmetric");
}

QuadraticLoss QuadraticLoss::weighted_least_squares(const Mat& A, const Vec& y,
                                                    const Vec& omega_diag) {
  require(A.rows() == y.size() && A.rows() == omega_diag.size(),
          "weighted_least_squares: dimension mismatch");
  Mat AtO = A.transpose() * omega_diag.asDiagonal();
  Mat P = AtO * A;
  P = 0.5 * (P + P.transpose());  // enforce exact symmetry
  Vec q = -(AtO * y);
  const double r = 0.5 * y.dot(omega_diag.asDiagonal() * y);
  return QuadraticLoss(std::move(P), std::move(q), r);
}

QuadraticLoss QuadraticLoss::least_squares(const Mat& A, const Vec& y) {
  return weighted_least_squares(A, y, Vec::Ones(A.rows()));
}

double QuadraticLoss::value(const Vec& x) const {
  return 0.5 * x.dot(P_ * x) + q_.dot(x) + r_;
}

Vec QuadraticLoss::gradient(const Vec& x) const { return P_ * x + q_; }

std::optional<double> QuadraticLoss::lipschitz_bound() const {
  if (!lipschitz_cache_) {
    if (P_.cwiseAbs().maxCoeff() == 0.0)
      lipschitz_cache_ = 0.0;
    else
      lipschitz_cache_ = linalg::spectral_norm(P_, 1e-9);
  }
  return lipschitz_cache_;
}

Vec QuadraticLoss::prox(const Vec& v, double t) const {
  require(t > 0, "QuadraticLoss::prox: parameter must be positive");
  Mat M = t * P_;
  M.diagonal().array() += 1.0;
  return linalg::solve_spd(M, v - t * q_);
}

LogisticLoss::LogisticLoss(Mat A, Vec successes, Vec trials)
    : A_(std::move(A)), y_(std::move(successes)), m_(std::move(trials)) {
  require(A_.rows() == y_.size() && A_.rows() == m_.size(),
          "LogisticLoss: dimension mismatch");
  for (Eigen::Index i = 0; i < y_.size(); ++i) {
    require(m_[i] >= 1.0, "LogisticLoss: trials must be at least 1");
    require(y_[i] >= 0.0 && y_[i] <= m_[i],
            "LogisticLoss: successes must lie in [0, trials]");
  }
}

double LogisticLoss::value(const Vec& x) const {
  const Vec eta = A_ * x;
  double v = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i)
    v += m_[i] * softplus(eta[i]) - y_[i] * eta[i];
  require(std::isfinite(v), "LogisticLoss: value overflow");
  return v;
}

Vec LogisticLoss::gradient(const Vec& x) const {
  const Vec eta = A_ * x;
  Vec w(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i)
    w[i] = m_[i] * sigmoid(eta[i]) - y_[i];
  Vec g = A_.transpose() * w;
  require(all_finite(g), "LogisticLoss: gradient overflow");
  return g;
}

Mat LogisticLoss::hessian(const Vec& x) const {
  const Vec eta = A_ * x;
  Vec w(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    const double p = sigmoid(eta[i]);
    w[i] = m_[i] * p * (1.0 - p);
  }
  return A_.transpose() * w.asDiagonal() * A_;
}

std::optional<double> LogisticLoss::lipschitz_bound() const {
  if (!lipschitz_cache_) {
    const double s = linalg::spectral_norm(A_, 1e-9);
    lipschitz_cache_ = m_.maxCoeff() * s * s / 4.0;
  }
  return lipschitz_cache_;
}

PoissonLoss::PoissonLoss(Mat A, Vec counts)
    : A_(std::move(A)), y_(std::move(counts)) {
  require(A_.rows() == y_.size(), "PoissonLoss: dimension mismatch");
  for (Eigen::Index i = 0; i < y_.size(); ++i)
    require(y_[i] >= 0.0, "PoissonLoss: counts must be nonnegative");
}

double PoissonLoss::value(const Vec& x) const {
  const Vec eta = A_ * x;
  double v = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    require(eta[i] <= 700.0, "PoissonLoss: linear predictor overflow");
    v += std::exp(eta[i]) - y_[i] * eta[i];
  }
  require(std::isfinite(v), "PoissonLoss: value overflow");
  return v;
}

Vec PoissonLoss::gradient(const Vec& x) const {
  const Vec eta = A_ * x;
  Vec w(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    require(eta[i] <= 700.0, "PoissonLoss: linear predictor overflow");
    w[i] = std::exp(eta[i]) - y_[i];
  }
  return A_.transpose() * w;
}

Mat PoissonLoss::hessian(const Vec& x) const {
  const Vec eta = A_ * x;
  Vec w(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    require(eta[i] <= 700.0, "PoissonLoss: linear predictor overflow");
    w[i] = std::exp(eta[i]);
  }
  return A_.transpose() * w.asDiagonal() * A_;
}

std::pair<double, Vec> loss_eval_grad(const Loss& loss, const Vec& x) {
  require(x.size() == loss.dim(), "loss_eval_grad: dimension mismatch");
  return {loss.value(x), loss.gradient(x)};
}

std::optional<double> lipschitz_bound(const Loss& loss) {
  return loss.lipschitz_bound();
}

Mat first_difference_matrix(int p) {
  require(p >= 2, "first_difference_matrix: need at least two coordinates");
  Mat D = Mat::Zero(p - 1, p);
  for (int j = 0; j < p - 1; ++j) {
    D(j, j) = -1.0;
    D(j, j + 1) = 1.0;
  }
  return D;
}

CompositePenalty CompositePenalty::separable(prox::ScalarProxEntry entry,
                                             double weight, int dim) {
  require(weight > 0, "CompositePenalty: weight must be positive");
  require(dim >= 1, "CompositePenalty: dimension must be positive");
  CompositePenalty p;
  p.entry_ = std::move(entry);
  p.weight_ = weight;
  p.dim_ = dim;
  p.k_ = dim;
  p.b_ = Vec::Zero(dim);
  return p;
}

CompositePenalty CompositePenalty::composite(prox::ScalarProxEntry entry,
                                             double weight, Mat B,
                                             Vec offset) {
  require(weight > 0, "CompositePenalty: weight must be positive");
  require(B.rows() == offset.size(), "CompositePenalty: B/offset mismatch");
  CompositePenalty p;
  p.entry_ = std::move(entry);
  p.weight_ = weight;
  p.dim_ = static_cast<int>(B.cols());
  p.k_ = static_cast<int>(B.rows());
  p.b_ = std::move(offset);
  p.B_ = std::move(B);
  return p;
}

CompositePenalty CompositePenalty::zero(int dim) {
  CompositePenalty p;
  p.zero_ = true;
  p.dim_ = dim;
  p.k_ = dim;
  p.b_ = Vec::Zero(dim);
  return p;
}

double CompositePenalty::value(const Vec& x) const {
  if (zero_) return 0.0;
  require(x.size() == dim_, "CompositePenalty::value: dimension mismatch");
  const Vec d = apply_operator(x);
  double s = 0.0;
  for (Eigen::Index j = 0; j < d.size(); ++j) s += entry_.value(d[j]);
  return weight_ * s;
}

prox::ProxResult CompositePenalty::scalar_prox(double v, double t) const {
  require(t > 0, "CompositePenalty::scalar_prox: parameter must be positive");
  if (zero_) return prox::ProxResult{v, std::nullopt};
  return entry_.prox(v, t * weight_);
}

Vec CompositePenalty::separable_prox(const Vec& v, double t) const {
  require(t > 0, "CompositePenalty::separable_prox: parameter must be positive");
  if (zero_) return v;
  Vec out(v.size());
  for (Eigen::Index j = 0; j < v.size(); ++j)
    out[j] = entry_.prox(v[j], t * weight_).primary;
  return out;
}

const Mat& CompositePenalty::B() const {
  require(B_.has_value(), "CompositePenalty: identity operator has no matrix");
  return *B_;
}

Vec CompositePenalty::apply_operator(const Vec& x) const {
  if (B_) return *B_ * x - b_;
  return x - b_;
}

Vec CompositePenalty::apply_operator_transpose(const Vec& u) const {
  if (B_) return B_->transpose() * u;
  return u;
}

CompositePenalty l1_penalty(double weight, int dim) {
  return CompositePenalty::separable(prox::make_laplace(1.0), weight, dim);
}

CompositePenalty fused_lasso_penalty(double weight, int dim) {
  return CompositePenalty::composite(prox::make_laplace(1.0), weight,
                                     first_difference_matrix(dim),
                                     Vec::Zero(dim - 1));
}

CompositePenalty lq_penalty(double lambda, double q, int dim) {
  return CompositePenalty::separable(prox::make_lq_bridge(lambda, q), 1.0,
                                     dim);
}

PenaltyOps zero_penalty_ops() {
  PenaltyOps ops;
  ops.value = [](const Vec&) { return 0.0; };
  ops.prox = [](const Vec& v, double) { return v; };
  ops.convex = true;
  return ops;
}

PenaltyOps separable_penalty_ops(const CompositePenalty& penalty) {
  require(penalty.is_identity(),
          "separable_penalty_ops: composite operators need an inner prox "
          "engine (see splitting::composite_penalty_ops)");
  PenaltyOps ops;
  ops.convex = penalty.convex();
  ops.value = [penalty](const Vec& x) { return penalty.value(x); };
  if (penalty.is_zero()) {
    ops.prox = [](const Vec& v, double) { return v; };
    return ops;
  }
  ops.prox = [penalty](const Vec& v, double t) -> Vec {
    return penalty.offset() + penalty.separable_prox(v - penalty.offset(), t);
  };
  return ops;
}

BregmanDivergence quadratic_divergence() {
  BregmanDivergence d;
  d.name = "quadratic";
  d.d_value = [](double t) { return 0.5 * t * t; };
  d.d_derivative = [](double t) { return t; };
  return d;
}

BregmanDivergence poisson_divergence() {
  BregmanDivergence d;
  d.name = "poisson";
  d.d_value = [](double t) { return t > 0 ? t * std::log(t) - t : 0.0; };
  d.d_derivative = [](double t) { return std::log(t); };
  d.domain_lo = 0.0;
  d.arg_lo = 0.0;
  return d;
}

double bregman(const BregmanDivergence& div, double x, double y) {
  require(y > div.domain_lo && y < div.domain_hi,
          "bregman: right argument outside divergence domain");
  require(x >= div.arg_lo && x >= div.domain_lo && x < div.domain_hi,
          "bregman: left argument outside divergence domain");
  const double v =
      div.d_value(x) - div.d_value(y) - div.d_derivative(y) * (x - y);
  require(std::isfinite(v), "bregman: non-finite divergence value");
  return v;
}

HQEntry hq_power(double alpha) {
  require(alpha > 1 && alpha <= 2, "hq_power: alpha must lie in (1,2]");
  HQEntry e;
  e.name = "power";
  e.c = 1.0;
  e.value = [alpha](double t) { return std::pow(std::abs(t), alpha); };
  e.derivative = [alpha](double t) {
    return alpha * sgn(t) * std::pow(std::abs(t), alpha - 1.0);
  };
  e.mult_weight = [alpha](double t) {
    if (t == 0) return alpha == 2.0 ? 2.0 : kInf;
    return alpha * std::pow(std::abs(t), alpha - 2.0);
  };
  return e;
}

HQEntry hq_sqrt(double alpha) {
  require(alpha > 0, "hq_sqrt: alpha must be positive");
  HQEntry e;
  e.name = "sqrt";
  e.c = 1.0 / std::sqrt(alpha);
  e.value = [alpha](double t) { return std::sqrt(alpha + t * t); };
  e.derivative = [alpha](double t) { return t / std::sqrt(alpha + t * t); };
  e.mult_weight = [alpha](double t) { return 1.0 / std::sqrt(alpha + t * t); };
  return e;
}

HQEntry hq_log_ratio(double alpha) {
  require(alpha > 0, "hq_log_ratio: alpha must be positive");
  HQEntry e;
  e.name = "log_ratio";
  e.c = 1.0 / (alpha * alpha);
  e.value = [alpha](double t) {
    const double a = std::abs(t);
    return a / alpha - std::log1p(a / alpha);
  };
  e.derivative = [alpha](double t) {
    return sgn(t) * std::abs(t) / (alpha * (alpha + std::abs(t)));
  };
  e.mult_weight = [alpha](double t) {
    return 1.0 / (alpha * (alpha + std::abs(t)));
  };
  return e;
}

HQEntry hq_huber(double alpha) {
  require(alpha > 0, "hq_huber: alpha must be positive");
  HQEntry e;
  e.name = "huber";
  e.c = 1.0;
  e.value = [alpha](double t) {
    const double a = std::abs(t);
    return a <= alpha ? 0.5 * t * t : alpha * a - 0.5 * alpha * alpha;
  };
  e.derivative = [alpha](double t) {
    return std::abs(t) <= alpha ? t : alpha * sgn(t);
  };
  e.mult_weight = [alpha](double t) {
    return std::abs(t) <= alpha ? 1.0 : alpha / std::abs(t);
  };
  return e;
}

HQEntry hq_log_cosh(double alpha) {
  require(alpha > 0, "hq_log_cosh: alpha must be positive");
  HQEntry e;
  e.name = "log_cosh";
  e.c = alpha * alpha;
  e.value = [alpha](double t) {
    const double s = std::abs(alpha * t);
    return s + std::log1p(std::exp(-2.0 * s)) - std::log(2.0);
  };
  e.derivative = [alpha](double t) { return alpha * std::tanh(alpha * t); };
  e.mult_weight = [alpha](double t) {
    if (t == 0) return alpha * alpha;
    return alpha * std::tanh(alpha * t) / t;
  };
  return e;
}

HQEntry hq_inv_abs() {
  HQEntry e;
  e.name = "inv_abs";
  e.c = 2.0;
  e.value = [](double t) { return -1.0 / (1.0 + std::abs(t)); };
  e.derivative = [](double t) {
    const double a = 1.0 + std::abs(t);
    return sgn(t) / (a * a);
  };
  e.mult_weight = [](double t) {
    if (t == 0) return -2.0;  // phi''(0+)
    const double a = 1.0 + std::abs(t);
    return 1.0 / (std::abs(t) * a * a);
  };
  return e;
}

HQEntry hq_inv_sqrt() {
  HQEntry e;
  e.name = "inv_sqrt";
  e.c = 1.0;
  e.domain_lo = 0.0;
  e.value = [](double t) { return -1.0 / (1.0 + std::sqrt(t)); };
  e.derivative = [](double t) {
    const double s = std::sqrt(t);
    return 1.0 / (2.0 * s * (1.0 + s) * (1.0 + s));
  };
  e.mult_weight = [](double t) {
    if (t == 0) return -kInf;
    const double s = std::sqrt(t);
    return 1.0 / (2.0 * t * s * (1.0 + s) * (1.0 + s));
  };
  return e;
}

HQWeights hq_weights(const HQEntry& entry, double t) {
  require(t >= entry.domain_lo, "hq_weights: point outside row domain");
  return HQWeights{entry.mult_weight(t),
                   entry.c * t - entry.derivative(t)};
}

}  // namespace proxkit::models
