#include "proxkit/linalg.hpp"

#include <cmath>
#include <sstream>

namespace proxkit::linalg {

double spectral_norm(const Mat& M, double tol, int max_iter) {
  require(M.size() > 0, "spectral_norm: empty matrix");
  require(tol > 0, "spectral_norm: tol must be positive");
  const double frob = M.norm();
  require(frob > 0, "spectral_norm: zero matrix has no direction of growth");

  // Work with S = M^T M; sigma_max(M) = sqrt(lambda_max(S)).
  const Eigen::Index d = M.cols();
  Vec v(d);
  // Deterministic start: ones with a mild ramp so it is not orthogonal to
  // the leading eigenvector of any diagonal matrix.
  for (Eigen::Index i = 0; i < d; ++i) v[i] = 1.0 + 1e-3 * double(i);
  v /= v.norm();

  double lambda = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    Vec sv = M.transpose() * (M * v);
    lambda = v.dot(sv);
    const double resid = (sv - lambda * v).norm();
    if (lambda > 0 && resid <= tol * lambda) return std::sqrt(lambda);
    const double nrm = sv.norm();
    if (nrm == 0) {
      // v landed in the null space; restart from a shifted ramp.
      for (Eigen::Index i = 0; i < d; ++i) v[i] = 1.0 + 1e-2 * double(i + 1);
      v /= v.norm();
      continue;
    }
    v = sv / nrm;
  }
  std::ostringstream os;
  os << "spectral_norm: no convergence after " << max_iter
     << " iterations (last estimate " << std::sqrt(std::max(lambda, 0.0))
     << ")";
  throw ConvergenceError(os.str(), std::sqrt(std::max(lambda, 0.0)));
}

SpdSolver::SpdSolver(const Mat& M) {
  require(M.rows() == M.cols(), "SpdSolver: matrix must be square");
  const double scale = M.cwiseAbs().maxCoeff();
  require((M - M.transpose()).cwiseAbs().maxCoeff() <= 1e-8 * (1.0 + scale),
          "SpdSolver: matrix is not symmetric");
  llt_.compute(M);
  require(llt_.info() == Eigen::Success,
          "SpdSolver: factorization breakdown, matrix is not positive definite");
}

Vec SpdSolver::solve(const Vec& rhs) const {
  require(rhs.size() == dim(), "SpdSolver: right-hand side dimension mismatch");
  return llt_.solve(rhs);
}

Vec solve_spd(const Mat& M, const Vec& rhs) { return SpdSolver(M).solve(rhs); }

double scalar_root(const std::function<double(double)>& f, double lo,
                   double hi, double tol, int max_iter) {
  require(lo <= hi, "scalar_root: bracket must satisfy lo <= hi");
  double flo = f(lo), fhi = f(hi);
  require(std::isfinite(flo) && std::isfinite(fhi),
          "scalar_root: non-finite function value at bracket endpoint");
  if (std::abs(flo) <= tol) return lo;
  if (std::abs(fhi) <= tol) return hi;
  require(flo * fhi < 0, "scalar_root: no sign change on bracket");

  // Illinois-safeguarded false position: the stale endpoint's value is
  // halved on repeated one-sided updates, and every fourth step bisects.
  double best = lo, fbest = flo;
  int side = 0;
  for (int it = 0; it < max_iter; ++it) {
    double mid = 0.5 * (lo + hi);
    if (it % 4 != 3 && fhi != flo) {
      const double sec = (lo * fhi - hi * flo) / (fhi - flo);
      if (sec > lo && sec < hi) mid = sec;
    }
    const double fmid = f(mid);
    if (!std::isfinite(fmid))
      throw Error("scalar_root: non-finite function value inside bracket");
    if (std::abs(fmid) < std::abs(fbest)) {
      best = mid;
      fbest = fmid;
    }
    if (std::abs(fmid) <= tol) return mid;
    if (flo * fmid < 0) {
      hi = mid;
      fhi = fmid;
      if (side == -1) flo *= 0.5;
      side = -1;
    } else {
      lo = mid;
      flo = fmid;
      if (side == +1) fhi *= 0.5;
      side = +1;
    }
    if (hi - lo <= 1e-16 * (1.0 + std::abs(lo) + std::abs(hi))) break;
  }
  if (std::abs(fbest) <= tol) return best;
  throw ConvergenceError("scalar_root: residual above tolerance after budget",
                         best);
}

Vec finite_diff_gradient(const std::function<double(const Vec&)>& f,
                         const Vec& x, double h) {
  require(h > 0, "finite_diff_gradient: h must be positive");
  Vec g(x.size());
  Vec xp = x, xm = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + h;
    xm[i] = x[i] - h;
    const double fp = f(xp), fm = f(xm);
    if (!std::isfinite(fp) || !std::isfinite(fm))
      throw Error("finite_diff_gradient: non-finite function value");
    g[i] = (fp - fm) / (2.0 * h);
    xp[i] = x[i];
    xm[i] = x[i];
  }
  return g;
}

double finite_diff_scalar(const std::function<double(double)>& f, double x,
                          double h) {
  const double fp = f(x + h), fm = f(x - h);
  if (!std::isfinite(fp) || !std::isfinite(fm))
    throw Error("finite_diff_scalar: non-finite function value");
  return (fp - fm) / (2.0 * h);
}

}  // namespace proxkit::linalg
