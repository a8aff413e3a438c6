#ifndef PROXKIT_TYPES_HPP
#define PROXKIT_TYPES_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace proxkit {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Rng = std::mt19937_64;

// Library-wide error type. Thrown for contract violations (bad arguments,
// domain errors) and for solver failures that carry no partial result.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Iterative routine exceeded its budget. Carries the last estimate so a
// caller can decide whether the partial answer is usable.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last)
      : Error(what), last_estimate(last) {}
  double last_estimate;
};

inline bool all_finite(const Vec& v) { return v.allFinite(); }
inline bool all_finite(const Mat& m) { return m.allFinite(); }

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw Error(msg);
}

}  // namespace proxkit

#endif  // PROXKIT_TYPES_HPP
