#ifndef PROXKIT_TRACE_HPP
#define PROXKIT_TRACE_HPP

#include <chrono>
#include <cstdint>
#include <vector>

#include "proxkit/types.hpp"

namespace proxkit {

struct SolverConfig {
  // Step size; solvers derive 1/lipschitz when unset.
  std::optional<double> step;
  int max_iter = 10000;
  // Stopping tolerance on the composite-gradient (or fixed-point) residual.
  double tol = 1e-8;
  bool acceleration = false;
  bool backtracking = false;
  double backtrack_shrink = 0.5;
  bool fista_restart = false;
  // Cyclic descent: visit coordinates in a seeded random order per cycle.
  bool randomized_order = false;
  uint64_t seed = 0;
  // Record one IterRecord per iteration; off keeps only the final state
  // (long reference runs).
  bool record_trace = true;
  // Measure wall time per iteration; off writes zeros, keeping emitted
  // traces byte-stable across reruns.
  bool collect_timing = false;
  // ADMM: run the penalty step before the loss step.
  bool penalty_step_first = false;

  SolverConfig() = default;
};

struct IterRecord {
  int iter = 0;
  double objective = 0.0;
  double residual = 0.0;
  double step = 0.0;
  double seconds = 0.0;
};

struct SolverTrace {
  std::vector<IterRecord> iters;
  Vec x;
  bool converged = false;
  int iterations = 0;

  double final_objective() const {
    return iters.empty() ? std::numeric_limits<double>::quiet_NaN()
                         : iters.back().objective;
  }
};

// Per-run stopwatch honoring collect_timing.
class StopWatch {
 public:
  explicit StopWatch(bool enabled) : enabled_(enabled) {
    if (enabled_) start_ = std::chrono::steady_clock::now();
  }
  double seconds() const {
    if (!enabled_) return 0.0;
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  bool enabled_;
  std::chrono::steady_clock::time_point start_;
};

// Shared bookkeeping for iterative solvers.
class TraceBuilder {
 public:
  TraceBuilder(const SolverConfig& cfg)
      : record_(cfg.record_trace), watch_(cfg.collect_timing) {}

  void add(int iter, double objective, double residual, double step) {
    last_ = IterRecord{iter, objective, residual, step, watch_.seconds()};
    if (record_) trace_.iters.push_back(last_);
    trace_.iterations = iter + 1;
  }

  SolverTrace finish(Vec x, bool converged) {
    if (!record_ && trace_.iterations > 0) trace_.iters.push_back(last_);
    trace_.x = std::move(x);
    trace_.converged = converged;
    return std::move(trace_);
  }

 private:
  bool record_;
  StopWatch watch_;
  IterRecord last_;
  SolverTrace trace_;
};

}  // namespace proxkit

#endif  // PROXKIT_TRACE_HPP
