#ifndef PROXKIT_ENVELOPES_HPP
#define PROXKIT_ENVELOPES_HPP

#include "proxkit/models.hpp"

namespace proxkit::envelopes {

using models::Loss;
using models::PenaltyOps;

// Forward-backward envelope evaluation at x with step gamma in (0, 1/L):
//   value    = l(x) - (gamma/2)||grad l(x)||^2 + phi^gamma(x - gamma grad)
//   prox_point P = prox_{gamma phi}(x - gamma grad l(x))
//   residual G = (x - P)/gamma
struct FBEval {
  double value;
  Vec prox_point;
  Vec residual;
  double gamma;
};

FBEval fbe(const Loss& loss, const PenaltyOps& penalty, const Vec& x,
           double gamma);

// Douglas-Rachford envelope: the forward-backward envelope of the pair
// evaluated at prox_{gamma l}(x), computed from the Moreau envelope of the
// loss.
double dre(const Loss& loss, const PenaltyOps& penalty, const Vec& x,
           double gamma);

// D-Moreau envelope of a scalar penalty under a Bregman divergence:
// inf_v D(x,v) + phi(v), solved by golden-section search over the
// divergence domain.
struct DMoreauEval {
  double value;
  double minimizer;
};

DMoreauEval d_moreau(const models::BregmanDivergence& div,
                     const std::function<double(double)>& phi, double x);

}  // namespace proxkit::envelopes

#endif  // PROXKIT_ENVELOPES_HPP
