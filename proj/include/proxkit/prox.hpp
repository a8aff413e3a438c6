#ifndef PROXKIT_PROX_HPP
#define PROXKIT_PROX_HPP

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "proxkit/types.hpp"

namespace proxkit::prox {

// Scalar proximal problems can have one or, at a tie of a non-convex
// penalty, two global minimizers. `primary` carries the deterministic
// tie-break choice (the nonzero minimizer); `alternate` the other one.
struct ProxResult {
  double primary = 0.0;
  std::optional<double> alternate;

  bool set_valued() const { return alternate.has_value(); }
};

// Soft thresholding: argmin_z tau*|z| + (z-y)^2/2.
double soft_threshold(double y, double tau);
Vec soft_threshold(const Vec& y, double tau);

// prox_l1(y, tau) == soft_threshold(y, tau); name kept for the catalog.
inline double prox_l1(double y, double tau) { return soft_threshold(y, tau); }

// Lq bridge penalty lambda*|t|^q with 0 < q < 1. Thresholds:
//   b = (2*lambda*(1-q))^(1/(2-q))   smallest nonzero prox output
//   h = b + lambda*q*b^(q-1)         input threshold for leaving zero
struct LqEntry {
  double q = 0.5;
  double lambda = 1.0;
  double b_threshold = 0.0;
  double h_threshold = 0.0;

  static LqEntry make(double q, double lambda);
};

// Set-valued prox of the Lq penalty: {0} below the h threshold, {0, +-b} at
// it, and the interior stationary point above it.
ProxResult prox_lq(double y, const LqEntry& entry);

// One catalog row: penalty value and its scalar prox at parameter gamma.
struct ScalarProxEntry {
  std::string name;
  std::map<std::string, double> params;
  bool convex = true;
  // Effective domain of the penalty; value() returns +inf outside.
  double domain_lo = -std::numeric_limits<double>::infinity();
  double domain_hi = std::numeric_limits<double>::infinity();
  std::function<double(double)> value;
  std::function<ProxResult(double, double)> prox;  // (y, gamma)
};

// Catalog constructors. Parameters follow the table rows; every prox
// handles a general parameter gamma > 0 by rescaling the row weights.
ScalarProxEntry make_laplace(double omega);
ScalarProxEntry make_gaussian(double tau);
// |t|^p with weight kappa; closed forms for p in {4/3, 3/2, 3, 4}, a
// bracketed root solve otherwise (p > 1).
ScalarProxEntry make_group_lp(double kappa, double p);
ScalarProxEntry make_gamma_chi(double kappa, double omega);
ScalarProxEntry make_double_pareto(double a, double weight);
ScalarProxEntry make_huber(double tau, double omega);
ScalarProxEntry make_exponential(double omega);
// Box indicator of [-omega, omega]; prox is the Euclidean projection.
ScalarProxEntry make_uniform_box(double omega);
// omega|t| + tau t^2 + kappa |t|^p, p != 2, via composition with the lp prox.
ScalarProxEntry make_max_entropy(double omega, double tau, double kappa,
                                 double p);
ScalarProxEntry make_weibull(double kappa, double omega, double p);
ScalarProxEntry make_gig(double kappa, double omega, double rho);
// Bridge penalty as a catalog entry (wraps LqEntry with gamma rescaling).
ScalarProxEntry make_lq_bridge(double lambda, double q);

// Is z inside the entry's effective domain?
bool in_domain(const ScalarProxEntry& entry, double z);

// Evaluate the entry's prox; validates gamma and domain placement.
ProxResult prox_table(const ScalarProxEntry& entry, double y, double gamma);

// Moreau envelope value phi(zhat) + ||zhat - x||^2 / (2 gamma) with
// zhat = prox_{gamma phi}(x). Scalar and vector forms.
double moreau_envelope(const std::function<double(double)>& value,
                       const std::function<double(double, double)>& prox_fn,
                       double x, double gamma);
double moreau_envelope(const std::function<double(const Vec&)>& value,
                       const std::function<Vec(const Vec&, double)>& prox_fn,
                       const Vec& x, double gamma);

// Moreau decomposition: x = prox_{lambda phi}(x) + residual. The residual
// equals the (scaled) prox of the conjugate.
struct MoreauParts {
  double primal;
  double dual;
};
MoreauParts moreau_decompose(const std::function<double(double, double)>& prox_fn,
                             double x, double lambda);
std::pair<Vec, Vec> moreau_decompose(
    const std::function<Vec(const Vec&, double)>& prox_fn, const Vec& x,
    double lambda);

// Exact prox of a quadratic 0.5 z'Pz + q'z with coupling weight gamma:
// argmin_z 0.5 z'Pz + q'z + (gamma/2)||z - x||^2 = (P + gamma I)^{-1}(gamma x - q).
Vec prox_quadratic(const Mat& P, const Vec& q, const Vec& x, double gamma);

// Brute-force grid minimizer of phi(z) + (z-y)^2/(2 gamma) over
// [lo, hi] with the given step. Independent of every closed form above;
// used by catalog-check and the test oracles.
double grid_prox_oracle(const std::function<double(double)>& value, double y,
                        double gamma, double lo, double hi, double step);
double grid_prox_oracle(const ScalarProxEntry& entry, double y, double gamma,
                        double lo = -20.0, double hi = 20.0,
                        double step = 1e-4);

// The randomized-parameter catalog used by catalog-check and the oracle
// suite: one row per implemented table entry.
struct CatalogRow {
  std::string name;
  std::function<ScalarProxEntry(Rng&)> sample;
};
std::vector<CatalogRow> standard_catalog();

// Per-row oracle comparison report.
struct CatalogReport {
  struct Row {
    std::string name;
    double max_abs_deviation;
    bool pass;
  };
  std::vector<Row> rows;
  bool all_pass() const;
};

// Runs the prox-vs-grid-oracle suite: `draws` random parameterizations per
// row, each compared against grid_prox_oracle at `tol`. `fault_entry`
// perturbs the named row's prox (test fixture for the failure path).
CatalogReport run_catalog_check(int draws = 50, double tol = 1e-3,
                                uint64_t seed = 20240901,
                                const std::string& fault_entry = "");

}  // namespace proxkit::prox

#endif  // PROXKIT_PROX_HPP
