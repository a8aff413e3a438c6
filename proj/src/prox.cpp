#include "proxkit/prox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "proxkit/linalg.hpp"

namespace proxkit::prox {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sgn(double x) { return (x > 0) - (x < 0); }

ProxResult single(double z) { return ProxResult{z, std::nullopt}; }

// Objective of the scalar prox problem at weight gamma.
double prox_objective(const std::function<double(double)>& value, double z,
                      double y, double gamma) {
  const double v = value(z);
  if (!std::isfinite(v)) return v;
  const double d = z - y;
  return v + d * d / (2.0 * gamma);
}

void check_gamma(double gamma) {
  require(gamma > 0 && std::isfinite(gamma), "prox: gamma must be positive");
}

}  // namespace

double soft_threshold(double y, double tau) {
  require(tau >= 0 && std::isfinite(tau),
          "soft_threshold: threshold must be nonnegative");
  const double a = std::abs(y) - tau;
  return a > 0 ? sgn(y) * a : 0.0;
}

Vec soft_threshold(const Vec& y, double tau) {
  Vec out(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i)
    out[i] = soft_threshold(y[i], tau);
  return out;
}

LqEntry LqEntry::make(double q, double lambda) {
  require(q > 0 && q < 1, "LqEntry: q must lie in (0,1)");
  require(lambda >= 0, "LqEntry: lambda must be nonnegative");
  LqEntry e;
  e.q = q;
  e.lambda = lambda;
  if (lambda == 0.0) return e;  // b = h = 0; the prox is the identity
  e.b_threshold = std::pow(2.0 * lambda * (1.0 - q), 1.0 / (2.0 - q));
  e.h_threshold =
      e.b_threshold + lambda * q * std::pow(e.b_threshold, q - 1.0);
  return e;
}

ProxResult prox_lq(double y, const LqEntry& entry) {
  if (entry.lambda == 0.0) return single(y);
  const double a = std::abs(y);
  const double b = entry.b_threshold, h = entry.h_threshold;
  if (a < h) return single(0.0);
  if (a == h) {
    ProxResult r;
    r.primary = sgn(y) * b;  // tie-break: the nonzero minimizer
    r.alternate = 0.0;
    return r;
  }
  // Interior stationary point of z + lambda*q*z^(q-1) = |y| on (b, |y|).
  const double lam = entry.lambda, q = entry.q;
  auto f = [&](double z) { return z + lam * q * std::pow(z, q - 1.0) - a; };
  double root;
  try {
    root = linalg::scalar_root(f, b, a, 1e-12 * (1.0 + a), 200);
  } catch (const Error&) {
    throw Error("prox_lq: root bracketing failed; entry thresholds violated");
  }
  return single(sgn(y) * root);
}

bool in_domain(const ScalarProxEntry& entry, double z) {
  return z >= entry.domain_lo && z <= entry.domain_hi;
}

ProxResult prox_table(const ScalarProxEntry& entry, double y, double gamma) {
  check_gamma(gamma);
  require(std::isfinite(y), "prox_table: point must be finite");
  return entry.prox(y, gamma);
}

ScalarProxEntry make_laplace(double omega) {
  require(omega >= 0, "laplace: omega must be nonnegative");
  ScalarProxEntry e;
  e.name = "laplace";
  e.params = {{"omega", omega}};
  e.value = [omega](double t) { return omega * std::abs(t); };
  e.prox = [omega](double y, double g) {
    check_gamma(g);
    return single(soft_threshold(y, g * omega));
  };
  return e;
}

ScalarProxEntry make_gaussian(double tau) {
  require(tau >= 0, "gaussian: tau must be nonnegative");
  ScalarProxEntry e;
  e.name = "gaussian";
  e.params = {{"tau", tau}};
  e.value = [tau](double t) { return tau * t * t; };
  e.prox = [tau](double y, double g) {
    check_gamma(g);
    return single(y / (2.0 * g * tau + 1.0));
  };
  return e;
}

namespace {

// argmin_{z>=0} w*z^p + (z-u)^2/2 for u >= 0; closed forms for the four
// catalog exponents, a bracketed root solve otherwise.
double lp_magnitude_prox(double u, double w, double p) {
  if (u <= 0) return 0.0;
  if (w == 0) return u;
  if (p == 3.0) {
    return (std::sqrt(1.0 + 12.0 * w * u) - 1.0) / (6.0 * w);
  }
  if (p == 4.0) {
    const double chi = std::sqrt(u * u + 1.0 / (27.0 * w));
    return std::cbrt((chi + u) / (8.0 * w)) - std::cbrt((chi - u) / (8.0 * w));
  }
  if (p == 1.5) {
    const double w2 = 9.0 * w * w;
    return u + w2 / 8.0 * (1.0 - std::sqrt(1.0 + 16.0 * u / w2));
  }
  if (std::abs(p - 4.0 / 3.0) < 1e-12) {
    const double chi = std::sqrt(u * u + 256.0 * w * w * w / 729.0);
    return u + 4.0 * w / (3.0 * std::cbrt(2.0)) *
                   (std::cbrt(chi - u) - std::cbrt(chi + u));
  }
  // General p > 1: z + w*p*z^(p-1) = u is strictly increasing on [0, u].
  auto f = [&](double z) { return z + w * p * std::pow(z, p - 1.0) - u; };
  return linalg::scalar_root(f, 0.0, u, 1e-12 * (1.0 + u), 200);
}

}  // namespace

ScalarProxEntry make_group_lp(double kappa, double p) {
  require(kappa >= 0, "group_lp: kappa must be nonnegative");
  require(p > 1, "group_lp: p must exceed 1");
  ScalarProxEntry e;
  e.name = "group_lp";
  e.params = {{"kappa", kappa}, {"p", p}};
  e.value = [kappa, p](double t) { return kappa * std::pow(std::abs(t), p); };
  e.prox = [kappa, p](double y, double g) {
    check_gamma(g);
    return single(sgn(y) * lp_magnitude_prox(std::abs(y), g * kappa, p));
  };
  return e;
}

ScalarProxEntry make_gamma_chi(double kappa, double omega) {
  require(kappa > 0, "gamma_chi: kappa must be positive");
  require(omega >= 0, "gamma_chi: omega must be nonnegative");
  ScalarProxEntry e;
  e.name = "gamma_chi";
  e.params = {{"kappa", kappa}, {"omega", omega}};
  e.domain_lo = 0.0;  // open at 0: value(0) = +inf
  e.value = [kappa, omega](double t) {
    return t > 0 ? -kappa * std::log(t) + omega * t : kInf;
  };
  e.prox = [kappa, omega](double y, double g) {
    check_gamma(g);
    const double s = y - g * omega;
    return single(0.5 * (s + std::sqrt(s * s + 4.0 * g * kappa)));
  };
  return e;
}

ScalarProxEntry make_double_pareto(double a, double weight) {
  require(a > 0, "double_pareto: scale a must be positive");
  require(weight >= 0, "double_pareto: weight must be nonnegative");
  ScalarProxEntry e;
  e.name = "double_pareto";
  e.params = {{"a", a}, {"weight", weight}};
  e.convex = false;
  e.value = [a, weight](double t) {
    return weight * std::log1p(std::abs(t) / a);
  };
  e.prox = [a, weight, value = e.value](double y, double g) {
    check_gamma(g);
    const double t = std::abs(y);
    const double c = g * weight;
    // Stationary points solve z^2 + (a - t) z + (c - a t) = 0 on z > 0;
    // compare candidates because the penalty is non-convex.
    std::vector<double> cand = {0.0};
    const double disc = (a + t) * (a + t) - 4.0 * c;
    if (disc >= 0) {
      const double sq = std::sqrt(disc);
      for (double z : {0.5 * (t - a + sq), 0.5 * (t - a - sq)})
        if (z > 0) cand.push_back(z);
    }
    double best = 0.0, best_val = kInf, second = 0.0, second_val = kInf;
    for (double z : cand) {
      const double v = value(z) + (z - t) * (z - t) / (2.0 * g);
      if (v < best_val) {
        second = best;
        second_val = best_val;
        best = z;
        best_val = v;
      } else if (v < second_val) {
        second = z;
        second_val = v;
      }
    }
    ProxResult r;
    r.primary = sgn(y) * best;
    if (second_val - best_val < 1e-11 * (1.0 + std::abs(best_val)) &&
        second != best)
      r.alternate = sgn(y) * second;
    return r;
  };
  return e;
}

ScalarProxEntry make_huber(double tau, double omega) {
  require(tau > 0 && omega > 0, "huber: tau and omega must be positive");
  ScalarProxEntry e;
  e.name = "huber";
  e.params = {{"tau", tau}, {"omega", omega}};
  const double kink = omega / std::sqrt(2.0 * tau);
  e.value = [tau, omega, kink](double t) {
    const double a = std::abs(t);
    return a <= kink ? tau * t * t
                     : omega * std::sqrt(2.0 * tau) * a - omega * omega / 2.0;
  };
  e.prox = [tau, omega](double y, double g) {
    check_gamma(g);
    const double shrink = 2.0 * tau * g + 1.0;
    if (std::abs(y) <= omega * shrink / std::sqrt(2.0 * tau))
      return single(y / shrink);
    return single(y - g * omega * std::sqrt(2.0 * tau) * sgn(y));
  };
  return e;
}

ScalarProxEntry make_exponential(double omega) {
  require(omega >= 0, "exponential: omega must be nonnegative");
  ScalarProxEntry e;
  e.name = "exponential";
  e.params = {{"omega", omega}};
  e.domain_lo = 0.0;
  e.value = [omega](double t) { return t >= 0 ? omega * t : kInf; };
  e.prox = [omega](double y, double g) {
    check_gamma(g);
    return single(std::max(y - g * omega, 0.0));
  };
  return e;
}

ScalarProxEntry make_uniform_box(double omega) {
  require(omega > 0, "uniform_box: omega must be positive");
  ScalarProxEntry e;
  e.name = "uniform_box";
  e.params = {{"omega", omega}};
  e.domain_lo = -omega;
  e.domain_hi = omega;
  e.value = [omega](double t) { return std::abs(t) <= omega ? 0.0 : kInf; };
  e.prox = [omega](double y, double g) {
    check_gamma(g);
    return single(std::clamp(y, -omega, omega));
  };
  return e;
}

ScalarProxEntry make_max_entropy(double omega, double tau, double kappa,
                                 double p) {
  require(omega > 0 && tau > 0 && kappa > 0,
          "max_entropy: weights must be positive");
  require(p > 1 && p != 2, "max_entropy: p must exceed 1 and differ from 2");
  ScalarProxEntry e;
  e.name = "max_entropy";
  e.params = {{"omega", omega}, {"tau", tau}, {"kappa", kappa}, {"p", p}};
  e.value = [omega, tau, kappa, p](double t) {
    const double a = std::abs(t);
    return omega * a + tau * t * t + kappa * std::pow(a, p);
  };
  e.prox = [omega, tau, kappa, p](double y, double g) {
    check_gamma(g);
    const double shrink = 2.0 * g * tau + 1.0;
    const double u = std::max(std::abs(y) - g * omega, 0.0) / shrink;
    return single(sgn(y) * lp_magnitude_prox(u, g * kappa / shrink, p));
  };
  return e;
}

ScalarProxEntry make_weibull(double kappa, double omega, double p) {
  require(kappa > 0, "weibull: kappa must be positive");
  require(omega >= 0, "weibull: omega must be nonnegative");
  require(p > 1, "weibull: p must exceed 1");
  ScalarProxEntry e;
  e.name = "weibull";
  e.params = {{"kappa", kappa}, {"omega", omega}, {"p", p}};
  e.domain_lo = 0.0;
  e.value = [kappa, omega, p](double t) {
    return t > 0 ? -kappa * std::log(t) + omega * std::pow(t, p) : kInf;
  };
  e.prox = [kappa, omega, p](double y, double g) {
    check_gamma(g);
    const double ke = g * kappa, we = g * omega;
    // p*we*z^p + z^2 - y z = ke; negative at 0+, unique positive root.
    auto f = [&](double z) {
      return p * we * std::pow(z, p) + z * z - y * z - ke;
    };
    double hi = 0.5 * (y + std::sqrt(y * y + 4.0 * ke)) + 1.0;
    return single(linalg::scalar_root(f, 1e-300, hi, 1e-11 * (1.0 + ke), 300));
  };
  return e;
}

ScalarProxEntry make_gig(double kappa, double omega, double rho) {
  require(rho > 0, "gig: rho must be positive");
  require(kappa >= 0 && omega >= 0,
          "gig: kappa and omega must be nonnegative");
  ScalarProxEntry e;
  e.name = "gig";
  e.params = {{"kappa", kappa}, {"omega", omega}, {"rho", rho}};
  e.domain_lo = 0.0;
  e.value = [kappa, omega, rho](double t) {
    return t > 0 ? -kappa * std::log(t) + omega * t + rho / t : kInf;
  };
  e.prox = [kappa, omega, rho](double y, double g) {
    check_gamma(g);
    const double ke = g * kappa, we = g * omega, re = g * rho;
    auto f = [&](double z) {
      return z * z * z + (we - y) * z * z - ke * z - re;
    };
    double hi = std::max(1.0, y) + 1.0;
    for (int i = 0; i < 200 && f(hi) <= 0; ++i) hi *= 2.0;
    return single(linalg::scalar_root(f, 1e-300, hi, 1e-11 * (1.0 + re), 300));
  };
  return e;
}

ScalarProxEntry make_lq_bridge(double lambda, double q) {
  (void)LqEntry::make(q, lambda);  // validate the parameter ranges up front
  ScalarProxEntry e;
  e.name = "lq_bridge";
  e.params = {{"lambda", lambda}, {"q", q}};
  e.convex = false;
  e.value = [lambda, q](double t) { return lambda * std::pow(std::abs(t), q); };
  e.prox = [lambda, q](double y, double g) {
    check_gamma(g);
    return prox_lq(y, LqEntry::make(q, g * lambda));
  };
  return e;
}

double moreau_envelope(const std::function<double(double)>& value,
                       const std::function<double(double, double)>& prox_fn,
                       double x, double gamma) {
  check_gamma(gamma);
  const double z = prox_fn(x, gamma);
  const double d = z - x;
  return value(z) + d * d / (2.0 * gamma);
}

double moreau_envelope(const std::function<double(const Vec&)>& value,
                       const std::function<Vec(const Vec&, double)>& prox_fn,
                       const Vec& x, double gamma) {
  check_gamma(gamma);
  const Vec z = prox_fn(x, gamma);
  return value(z) + (z - x).squaredNorm() / (2.0 * gamma);
}

MoreauParts moreau_decompose(
    const std::function<double(double, double)>& prox_fn, double x,
    double lambda) {
  check_gamma(lambda);
  const double p = prox_fn(x, lambda);
  return MoreauParts{p, x - p};
}

std::pair<Vec, Vec> moreau_decompose(
    const std::function<Vec(const Vec&, double)>& prox_fn, const Vec& x,
    double lambda) {
  check_gamma(lambda);
  Vec p = prox_fn(x, lambda);
  Vec d = x - p;
  return {std::move(p), std::move(d)};
}

Vec prox_quadratic(const Mat& P, const Vec& q, const Vec& x, double gamma) {
  check_gamma(gamma);
  require(P.rows() == P.cols() && P.rows() == q.size() && q.size() == x.size(),
          "prox_quadratic: dimension mismatch");
  Mat M = P + gamma * Mat::Identity(P.rows(), P.cols());
  return linalg::solve_spd(M, gamma * x - q);
}

double grid_prox_oracle(const std::function<double(double)>& value, double y,
                        double gamma, double lo, double hi, double step) {
  require(step > 0 && hi > lo, "grid_prox_oracle: bad grid");
  double best_z = lo, best_v = kInf;
  const long n = static_cast<long>((hi - lo) / step) + 1;
  for (long i = 0; i <= n; ++i) {
    const double z = std::min(lo + double(i) * step, hi);
    const double v = prox_objective(value, z, y, gamma);
    if (v < best_v) {
      best_v = v;
      best_z = z;
    }
  }
  return best_z;
}

double grid_prox_oracle(const ScalarProxEntry& entry, double y, double gamma,
                        double lo, double hi, double step) {
  return grid_prox_oracle(entry.value, y, gamma,
                          std::max(lo, entry.domain_lo),
                          std::min(hi, entry.domain_hi), step);
}

std::vector<CatalogRow> standard_catalog() {
  auto uni = [](Rng& rng, double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(rng);
  };
  std::vector<CatalogRow> rows;
  rows.push_back({"laplace", [uni](Rng& r) { return make_laplace(uni(r, 0.1, 3)); }});
  rows.push_back(
      {"gaussian", [uni](Rng& r) { return make_gaussian(uni(r, 0.1, 3)); }});
  rows.push_back({"group_lp_4_3", [uni](Rng& r) {
                    return make_group_lp(uni(r, 0.2, 2), 4.0 / 3.0);
                  }});
  rows.push_back({"group_lp_3_2", [uni](Rng& r) {
                    return make_group_lp(uni(r, 0.2, 2), 1.5);
                  }});
  rows.push_back({"group_lp_3", [uni](Rng& r) {
                    return make_group_lp(uni(r, 0.2, 2), 3.0);
                  }});
  rows.push_back({"group_lp_4", [uni](Rng& r) {
                    return make_group_lp(uni(r, 0.2, 2), 4.0);
                  }});
  rows.push_back({"group_lp_general", [uni](Rng& r) {
                    double p = uni(r, 1.1, 3.6);
                    if (std::abs(p - 2.0) < 0.05) p = 2.2;
                    return make_group_lp(uni(r, 0.2, 2), p);
                  }});
  rows.push_back({"gamma_chi", [uni](Rng& r) {
                    return make_gamma_chi(uni(r, 0.3, 2), uni(r, 0.0, 2));
                  }});
  rows.push_back({"double_pareto", [uni](Rng& r) {
                    return make_double_pareto(uni(r, 0.5, 3), uni(r, 0.1, 2));
                  }});
  rows.push_back({"huber", [uni](Rng& r) {
                    return make_huber(uni(r, 0.2, 2), uni(r, 0.2, 2));
                  }});
  rows.push_back({"exponential", [uni](Rng& r) {
                    return make_exponential(uni(r, 0.1, 2));
                  }});
  rows.push_back({"uniform_box", [uni](Rng& r) {
                    return make_uniform_box(uni(r, 0.5, 5));
                  }});
  rows.push_back({"max_entropy", [uni](Rng& r) {
                    double p = uni(r, 1.2, 3.5);
                    if (std::abs(p - 2.0) < 0.05) p = 2.4;
                    return make_max_entropy(uni(r, 0.1, 1), uni(r, 0.1, 1),
                                            uni(r, 0.1, 1), p);
                  }});
  rows.push_back({"weibull", [uni](Rng& r) {
                    return make_weibull(uni(r, 0.2, 2), uni(r, 0.2, 2),
                                        uni(r, 1.2, 3));
                  }});
  rows.push_back({"gig", [uni](Rng& r) {
                    return make_gig(uni(r, 0.2, 2), uni(r, 0.2, 2),
                                    uni(r, 0.2, 2));
                  }});
  rows.push_back({"lq_bridge", [uni](Rng& r) {
                    return make_lq_bridge(uni(r, 0.2, 2), uni(r, 0.15, 0.85));
                  }});
  return rows;
}

bool CatalogReport::all_pass() const {
  for (const auto& r : rows)
    if (!r.pass) return false;
  return true;
}

CatalogReport run_catalog_check(int draws, double tol, uint64_t seed,
                                const std::string& fault_entry) {
  CatalogReport report;
  Rng rng(seed);
  std::uniform_real_distribution<double> ydist(-8.0, 8.0);
  std::uniform_real_distribution<double> gdist(0.3, 2.5);
  for (const auto& row : standard_catalog()) {
    double worst = 0.0;
    for (int k = 0; k < draws; ++k) {
      ScalarProxEntry entry = row.sample(rng);
      const double y = ydist(rng);
      const double gamma = gdist(rng);
      ProxResult r = prox_table(entry, y, gamma);
      if (row.name == fault_entry) r.primary += 2.5 * tol;
      const double oracle = grid_prox_oracle(entry, y, gamma);
      double dev = std::abs(r.primary - oracle);
      if (r.alternate) dev = std::min(dev, std::abs(*r.alternate - oracle));
      worst = std::max(worst, dev);
    }
    report.rows.push_back({row.name, worst, worst <= tol});
  }
  return report;
}

}  // namespace proxkit::prox
