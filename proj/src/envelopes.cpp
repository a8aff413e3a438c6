#include "proxkit/envelopes.hpp"

#include <cmath>

#include "proxkit/prox.hpp"

namespace proxkit::envelopes {

namespace {

void check_fb_step(const Loss& loss, double gamma) {
  require(gamma > 0, "envelope: gamma must be positive");
  const auto lip = loss.lipschitz_bound();
  require(lip.has_value(),
          "envelope: loss has no Lipschitz modulus; gamma range undefined");
  if (*lip > 0)
    require(gamma < 1.0 / *lip,
            "envelope: gamma must lie in (0, 1/lipschitz)");
}

}  // namespace

FBEval fbe(const Loss& loss, const PenaltyOps& penalty, const Vec& x,
           double gamma) {
  check_fb_step(loss, gamma);
  const Vec g = loss.gradient(x);
  const Vec forward = x - gamma * g;
  Vec p = penalty.prox(forward, gamma);
  const double env = penalty.value(p) +
                     (p - forward).squaredNorm() / (2.0 * gamma);
  FBEval out;
  out.value = loss.value(x) - 0.5 * gamma * g.squaredNorm() + env;
  out.residual = (x - p) / gamma;
  out.prox_point = std::move(p);
  out.gamma = gamma;
  return out;
}

double dre(const Loss& loss, const PenaltyOps& penalty, const Vec& x,
           double gamma) {
  check_fb_step(loss, gamma);
  const Vec w = loss.prox(x, gamma);          // prox_{gamma l}(x)
  const Vec grad_env = (x - w) / gamma;       // gradient of l^gamma
  const double l_env = loss.value(w) + (w - x).squaredNorm() / (2.0 * gamma);
  const Vec forward = x - 2.0 * gamma * grad_env;
  const Vec p = penalty.prox(forward, gamma);
  const double phi_env =
      penalty.value(p) + (p - forward).squaredNorm() / (2.0 * gamma);
  // The full -gamma coefficient keeps the defining property
  // dre(x) == fbe(prox_{gamma l}(x)).
  return l_env - gamma * grad_env.squaredNorm() + phi_env;
}

DMoreauEval d_moreau(const models::BregmanDivergence& div,
                     const std::function<double(double)>& phi, double x) {
  require(x >= div.arg_lo && x >= div.domain_lo && x < div.domain_hi,
          "d_moreau: point outside divergence domain");
  auto objective = [&](double v) { return models::bregman(div, x, v) + phi(v); };

  // Search bracket: the divergence grows without bound away from x, so a
  // window around x (clipped to the domain) contains the minimizer.
  double lo = std::max(div.domain_lo + 1e-8, x - 10.0 * (1.0 + std::abs(x)));
  double hi = x + 10.0 * (1.0 + std::abs(x));
  if (hi <= lo) hi = lo + 1.0;
  if (objective(hi) < objective(0.5 * (lo + hi)) &&
      objective(hi * 2.0 + 1.0) < objective(hi))
    throw Error("d_moreau: objective appears unbounded below");

  // Golden-section to ~1e-12 bracket width, then a parabolic polish step.
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
  double f1 = objective(c1), f2 = objective(c2);
  for (int it = 0; it < 200 && (b - a) > 1e-12 * (1.0 + std::abs(a)); ++it) {
    if (f1 <= f2) {
      b = c2;
      c2 = c1;
      f2 = f1;
      c1 = b - gr * (b - a);
      f1 = objective(c1);
    } else {
      a = c1;
      c1 = c2;
      f1 = f2;
      c2 = a + gr * (b - a);
      f2 = objective(c2);
    }
  }
  double v = f1 <= f2 ? c1 : c2;
  double fv = std::min(f1, f2);
  // The boundary of the domain can attain the infimum (sharp penalties).
  for (double cand : {lo, hi, x}) {
    if (cand <= div.domain_lo || cand >= div.domain_hi) continue;
    const double fc = objective(cand);
    if (fc < fv) {
      fv = fc;
      v = cand;
    }
  }
  return DMoreauEval{fv, v};
}

}  // namespace proxkit::envelopes
