#ifndef PROXKIT_LINALG_HPP
#define PROXKIT_LINALG_HPP

#include <functional>

#include "proxkit/types.hpp"

namespace proxkit::linalg {

// Largest singular value of M, computed by power iteration on M^T M with a
// fixed deterministic start vector. Throws ConvergenceError (carrying the
// last estimate) if the eigenvalue residual does not reach tol * lambda
// within max_iter sweeps.
double spectral_norm(const Mat& M, double tol = 1e-10, int max_iter = 20000);

// Symmetric positive definite solver with a cached Cholesky factorization,
// reusable across right-hand sides.
class SpdSolver {
 public:
  explicit SpdSolver(const Mat& M);
  Vec solve(const Vec& rhs) const;
  int dim() const { return static_cast<int>(llt_.matrixL().rows()); }

 private:
  Eigen::LLT<Mat> llt_;
};

// One-shot SPD solve. Factors M each call; use SpdSolver to amortize.
Vec solve_spd(const Mat& M, const Vec& rhs);

// Root of a continuous scalar function on a sign-changing bracket, by
// bisection with a secant polish. Returns r with |f(r)| <= tol.
double scalar_root(const std::function<double(double)>& f, double lo,
                   double hi, double tol = 1e-12, int max_iter = 200);

// Central-difference gradient, one evaluation pair per coordinate.
Vec finite_diff_gradient(const std::function<double(const Vec&)>& f,
                         const Vec& x, double h = 1e-6);

// Scalar central difference, used by envelope-derivative checks.
double finite_diff_scalar(const std::function<double(double)>& f, double x,
                          double h = 1e-6);

}  // namespace proxkit::linalg

#endif  // PROXKIT_LINALG_HPP
