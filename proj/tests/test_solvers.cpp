#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "proxkit/linalg.hpp"
#include "proxkit/solvers.hpp"
#include "proxkit/splitting.hpp"
#include "test_util.hpp"

using namespace proxkit;
using namespace proxkit::models;
using namespace proxkit::solvers;

namespace {

QuadraticLoss scalar_quadratic(double p, double q) {
  Mat P(1, 1);
  P << p;
  return QuadraticLoss(P, Vec::Constant(1, q));
}

SolverConfig quick(double tol = 1e-10, int max_iter = 100000) {
  SolverConfig cfg;
  cfg.tol = tol;
  cfg.max_iter = max_iter;
  return cfg;
}

}  // namespace

TEST_CASE("proximal point on the absolute value walks to zero") {
  auto prox = [](const Vec& v, double t) {
    return prox::soft_threshold(v, t);
  };
  auto value = [](const Vec& v) { return v.cwiseAbs().sum(); };
  SolverConfig cfg = quick(1e-12, 100);
  cfg.step = 1.0;
  auto trace = proximal_point(prox, value, Vec::Constant(1, 3.0), cfg);
  CHECK(trace.converged);
  // Iterates 2, 1, 0, 0(fixed): objective column records them.
  REQUIRE(trace.iters.size() >= 4);
  CHECK(trace.iters[0].objective == doctest::Approx(2.0));
  CHECK(trace.iters[1].objective == doctest::Approx(1.0));
  CHECK(trace.iters[2].objective == doctest::Approx(0.0));
  CHECK(trace.x[0] == 0.0);

  // Fixed point converges immediately.
  auto t2 = proximal_point(prox, value, Vec::Zero(1), cfg);
  CHECK(t2.iterations == 1);
  CHECK(t2.converged);
}

TEST_CASE("proximal point halves a quadratic iterate") {
  auto prox = [](const Vec& v, double t) { return (v / (1.0 + t)).eval(); };
  SolverConfig cfg = quick(1e-14, 10);
  cfg.step = 1.0;
  auto trace = proximal_point(prox, nullptr, Vec::Constant(1, 4.0), cfg);
  // x_t = 4 / 2^t after t steps.
  CHECK(trace.iters[0].residual == doctest::Approx(2.0));
  CHECK(trace.x[0] == doctest::Approx(4.0 / std::pow(2.0, trace.iterations))
                          .epsilon(1e-12));
}

TEST_CASE("proximal gradient solves the one-dimensional lasso in one step") {
  auto loss = scalar_quadratic(1.0, -2.0);  // 0.5 (z-2)^2
  auto pen = separable_penalty_ops(l1_penalty(0.5, 1));
  SolverConfig cfg = quick();
  auto trace = proximal_gradient(loss, pen, Vec::Zero(1), cfg);
  CHECK(trace.converged);
  CHECK(trace.x[0] == doctest::Approx(1.5).epsilon(1e-12));
  // With step 1/L = 1 the first iterate is already the solution.
  CHECK(trace.iters[0].objective ==
        doctest::Approx(0.5 * 1.5 * 1.5 - 2.0 * 1.5 + 0.5 * 1.5).epsilon(1e-12));
}

TEST_CASE("plain gradient descent decays linearly on a quadratic") {
  auto loss = scalar_quadratic(1.0, 0.0);
  SolverConfig cfg = quick(1e-12, 2000);
  cfg.step = 0.5;
  auto trace = proximal_gradient(loss, zero_penalty_ops(), Vec::Constant(1, 8.0),
                                 cfg);
  CHECK(trace.converged);
  CHECK(std::abs(trace.x[0]) < 1e-10);

  // Stationary start exits on the first iteration.
  auto t2 = proximal_gradient(loss, zero_penalty_ops(), Vec::Zero(1), cfg);
  CHECK(t2.iterations == 1);
}

TEST_CASE("objective never increases with the fixed safe step") {
  Rng rng(61);
  auto prob = testutil::random_lasso(rng, 30, 20);
  SolverConfig cfg = quick(1e-12, 3000);
  auto pen = separable_penalty_ops(prob.penalty);
  auto trace = proximal_gradient(prob.loss, pen, Vec::Zero(20), cfg);
  for (size_t i = 1; i < trace.iters.size(); ++i)
    CHECK(trace.iters[i].objective <= trace.iters[i - 1].objective + 1e-12);
}

TEST_CASE("sublinear rate bound on random lasso instances") {
  Rng rng(67);
  for (int rep = 0; rep < 3; ++rep) {
    auto prob = testutil::random_lasso(rng, 20, 20);
    const double lip = *prob.loss.lipschitz_bound();
    const Vec xstar =
        testutil::lasso_reference(prob.A, prob.y, prob.weight);
    const double fstar =
        testutil::lasso_objective(prob.A, prob.y, prob.weight, xstar);
    Vec x0 = testutil::random_vec(rng, 20);
    SolverConfig cfg = quick(0.0 + 1e-16, 400);
    auto pen = separable_penalty_ops(prob.penalty);
    auto trace = proximal_gradient(prob.loss, pen, x0, cfg);
    const double c = 1.1 * lip * (x0 - xstar).squaredNorm() / 2.0;
    for (size_t i = 0; i < trace.iters.size(); ++i) {
      const double t = double(i + 1);
      CHECK(trace.iters[i].objective - fstar <= c / t + 1e-12);
    }
  }
}

TEST_CASE("prox-step descent inequality at random points") {
  // (lambda - L)/2 ||x+ - w||^2 <= F(w) - F(x+) for prox parameter
  // lambda >= L, where x+ is the forward-backward update from w with step
  // 1/lambda.
  Rng rng(71);
  auto prob = testutil::random_lasso(rng, 15, 10);
  const double lip = *prob.loss.lipschitz_bound();
  auto pen = separable_penalty_ops(prob.penalty);
  auto F = [&](const Vec& v) {
    return prob.loss.value(v) + prob.penalty.value(v);
  };
  for (double lambda : {lip, 1.5 * lip, 4.0 * lip}) {
    for (int rep = 0; rep < 30; ++rep) {
      Vec w = testutil::random_vec(rng, 10);
      Vec xp = pen.prox(w - prob.loss.gradient(w) / lambda, 1.0 / lambda);
      const double lhs = 0.5 * (lambda - lip) * (xp - w).squaredNorm();
      CHECK(lhs <= F(w) - F(xp) + 1e-9 * (1.0 + std::abs(F(w))));
    }
  }
}

TEST_CASE("momentum schedule algebra") {
  // theta_t = 2/(t+1) gives theta_{t+1}(1/theta_t - 1) = (t-1)/(t+2).
  for (int t = 1; t <= 100; ++t) {
    const double theta_t = 2.0 / (t + 1);
    const double theta_next = 2.0 / (t + 2);
    CHECK(theta_next * (1.0 / theta_t - 1.0) ==
          doctest::Approx(double(t - 1) / double(t + 2)).epsilon(1e-12));
  }
}

TEST_CASE("fista first step equals the unaccelerated step") {
  Rng rng(73);
  auto prob = testutil::random_lasso(rng, 15, 10);
  SolverConfig one = quick(1e-16, 1);
  auto pen = separable_penalty_ops(prob.penalty);
  Vec x0 = testutil::random_vec(rng, 10);
  auto ista1 = proximal_gradient(prob.loss, pen, x0, one);
  auto fista1 = fista(prob.loss, pen, x0, one);
  CHECK((ista1.x - fista1.x).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("fista and ista agree on the final objective") {
  Rng rng(79);
  auto prob = testutil::random_lasso(rng, 25, 40);
  SolverConfig cfg = quick(1e-11, 200000);
  auto pen = separable_penalty_ops(prob.penalty);
  auto a = proximal_gradient(prob.loss, pen, Vec::Zero(40), cfg);
  auto b = fista(prob.loss, pen, Vec::Zero(40), cfg);
  CHECK(a.converged);
  CHECK(b.converged);
  CHECK(std::abs(a.final_objective() - b.final_objective()) < 1e-6);
}

TEST_CASE("fista needs fewer iterations on a small logistic lasso") {
  Rng rng(83);
  Mat A = testutil::random_mat(rng, 40, 80);
  for (int j = 0; j < 80; ++j) A.col(j) /= A.col(j).norm();
  Vec xt = Vec::Zero(80);
  for (int j = 0; j < 8; ++j) xt[j * 9] = testutil::random_vec(rng, 1)[0];
  Vec m = Vec::Constant(40, 2.0), y(40);
  for (int i = 0; i < 40; ++i) {
    const double p = 1.0 / (1.0 + std::exp(-A.row(i).dot(xt)));
    std::binomial_distribution<int> bin(2, p);
    y[i] = double(bin(rng));
  }
  LogisticLoss loss(A, y, m);
  const double w = 0.1 * linalg::spectral_norm(A);
  auto pen = separable_penalty_ops(l1_penalty(w, 80));

  SolverConfig ref = quick(1e-12, 300000);
  ref.record_trace = false;
  const double fstar = fista(loss, pen, Vec::Zero(80), ref).final_objective();

  auto count_to = [&](bool accelerate) {
    SolverConfig cfg = quick(1e-13, 100000);
    auto tr = accelerate ? fista(loss, pen, Vec::Zero(80), cfg)
                         : proximal_gradient(loss, pen, Vec::Zero(80), cfg);
    for (size_t i = 0; i < tr.iters.size(); ++i)
      if (tr.iters[i].objective <= fstar + 1e-4) return int(i) + 1;
    return int(tr.iters.size()) + 1;
  };
  const int fista_iters = count_to(true);
  const int ista_iters = count_to(false);
  CHECK(fista_iters < ista_iters);
}

TEST_CASE("fista refuses non-convex penalties") {
  auto loss = scalar_quadratic(1.0, -2.0);
  auto pen = separable_penalty_ops(lq_penalty(0.5, 0.5, 1));
  CHECK_THROWS_AS(fista(loss, pen, Vec::Zero(1), quick()), Error);
}

TEST_CASE("backtracking accepts the safe step immediately") {
  Rng rng(89);
  auto prob = testutil::random_lasso(rng, 15, 10);
  const double gamma0 = 1.0 / *prob.loss.lipschitz_bound();
  auto pen = separable_penalty_ops(prob.penalty);
  Vec x = testutil::random_vec(rng, 10);
  auto bt = backtracking_step(prob.loss, pen, x, gamma0, 0.5);
  CHECK(bt.gamma == gamma0);

  // Zero penalty reduces to a plain gradient step.
  auto bt0 = backtracking_step(prob.loss, zero_penalty_ops(), x, gamma0, 0.5);
  CHECK((bt0.x_next - (x - gamma0 * prob.loss.gradient(x)))
            .cwiseAbs()
            .maxCoeff() < 1e-14);
}

TEST_CASE("backtracking shrinks on a poisson loss") {
  Rng rng(97);
  Mat A = testutil::random_mat(rng, 20, 10, 0.4);
  Vec y(20);
  for (int i = 0; i < 20; ++i) y[i] = double(i % 4);
  PoissonLoss loss(A, y);
  Vec x = Vec::Constant(10, 0.4);
  auto bt = backtracking_step(loss, zero_penalty_ops(), x, 64.0, 0.5);
  CHECK(bt.gamma < 64.0);
  // Accepted step satisfies the majorization test post hoc.
  const Vec d = bt.x_next - x;
  CHECK(loss.value(bt.x_next) <=
        loss.value(x) + loss.gradient(x).dot(d) +
            d.squaredNorm() / (2.0 * bt.gamma) + 1e-9);
}

TEST_CASE("proximal newton steps match the closed forms") {
  Rng rng(101);
  Mat P = testutil::random_spd(rng, 4);
  Vec q = testutil::random_vec(rng, 4);
  QuadraticLoss loss(P, q);
  Vec z = testutil::random_vec(rng, 4);

  // Bare loss: one iterate from z equals z - (I/gamma + H)^{-1} grad.
  SolverConfig one = quick(1e-16, 1);
  one.step = 2.0;
  auto zero_pen = CompositePenalty::zero(4);
  auto tr = proximal_newton(loss, zero_pen, z, one,
                            [&](const Vec& v) { return loss.hessian(v); });
  Mat M = P + Mat::Identity(4, 4) / 2.0;
  Vec expect = z - linalg::solve_spd(M, loss.gradient(z));
  CHECK((tr.x - expect).cwiseAbs().maxCoeff() < 1e-10);

  // Zero curvature map reduces to a gradient step with step gamma.
  auto tr0 = proximal_newton(loss, zero_pen, z, one,
                             [&](const Vec&) { return Mat::Zero(4, 4); });
  CHECK((tr0.x - (z - 2.0 * loss.gradient(z))).cwiseAbs().maxCoeff() < 1e-10);

  // Huge gamma on a quadratic converges to the newton point in one step.
  SolverConfig big = quick(1e-16, 1);
  big.step = 1e12;
  auto trn = proximal_newton(loss, zero_pen, z, big,
                             [&](const Vec& v) { return loss.hessian(v); });
  Vec newton_point = linalg::solve_spd(P, -q);
  CHECK((trn.x - newton_point).cwiseAbs().maxCoeff() < 1e-6);

  // Indefinite curvature is rejected loudly.
  Mat bad = -Mat::Identity(4, 4);
  SolverConfig cfg = quick();
  cfg.step = 100.0;
  CHECK_THROWS_WITH_AS(
      proximal_newton(loss, zero_pen, z, cfg,
                      [&](const Vec&) { return bad; }),
      doctest::Contains("iteration 0"), Error);
}

TEST_CASE("proximal newton handles an l1 penalty via the inner engine") {
  Rng rng(103);
  auto prob = testutil::random_lasso(rng, 20, 12);
  SolverConfig cfg = quick(1e-10, 200);
  cfg.step = 10.0;
  auto tr = proximal_newton(prob.loss, prob.penalty, Vec::Zero(12), cfg,
                            [&](const Vec& v) { return prob.loss.hessian(v); });
  CHECK(tr.converged);
  const Vec ref = testutil::lasso_reference(prob.A, prob.y, prob.weight);
  CHECK(std::abs(testutil::lasso_objective(prob.A, prob.y, prob.weight, tr.x) -
                 testutil::lasso_objective(prob.A, prob.y, prob.weight, ref)) <
        1e-6);
}

TEST_CASE("douglas-rachford splits the one-dimensional lasso") {
  auto loss = scalar_quadratic(1.0, -2.0);
  auto pen = separable_penalty_ops(l1_penalty(0.5, 1));
  SolverConfig cfg = quick(1e-12, 5000);
  cfg.step = 1.0;
  auto tr = douglas_rachford(
      [&](const Vec& v, double t) { return loss.prox(v, t); }, pen.prox,
      [&](const Vec& v) { return loss.value(v) + pen.value(v); },
      Vec::Zero(1), cfg);
  CHECK(tr.converged);
  CHECK(tr.x[0] == doctest::Approx(1.5).epsilon(1e-8));

  // Bare loss: the w-sequence lands on the minimizer.
  auto tr0 = douglas_rachford(
      [&](const Vec& v, double t) { return loss.prox(v, t); },
      [](const Vec& v, double) { return v; },
      [&](const Vec& v) { return loss.value(v); }, Vec::Zero(1), cfg);
  CHECK(tr0.x[0] == doctest::Approx(2.0).epsilon(1e-8));

  // Two indicator constraints on the same point agree there.
  auto proj_one = [](const Vec&, double) -> Vec { return Vec::Constant(1, 1.0); };
  auto tr1 = douglas_rachford(proj_one, proj_one, nullptr, Vec::Zero(1), cfg);
  CHECK(tr1.x[0] == doctest::Approx(1.0));
}

TEST_CASE("douglas-rachford matches the forward-backward objective") {
  Rng rng(107);
  auto prob = testutil::random_lasso(rng, 20, 30);
  auto pen = separable_penalty_ops(prob.penalty);
  SolverConfig cfg = quick(1e-11, 100000);
  auto ista = proximal_gradient(prob.loss, pen, Vec::Zero(30), cfg);
  SolverConfig dcfg = quick(1e-11, 100000);
  dcfg.step = 1.0;
  auto dr = douglas_rachford(
      [&](const Vec& v, double t) { return prob.loss.prox(v, t); }, pen.prox,
      [&](const Vec& v) { return prob.loss.value(v) + pen.value(v); },
      Vec::Zero(30), dcfg);
  CHECK(dr.converged);
  CHECK(std::abs(ista.final_objective() - dr.final_objective()) < 1e-6);
}

TEST_CASE("cyclic descent on the bridge problem") {
  Rng rng(109);

  // Orthonormal design at q near 1 tracks the soft-threshold solution.
  Mat Q = Eigen::HouseholderQR<Mat>(testutil::random_mat(rng, 12, 12))
              .householderQ();
  Mat A = Q.leftCols(8);
  Vec y = testutil::random_vec(rng, 12);
  const double lambda = 0.2;
  auto entry = prox::LqEntry::make(0.999, lambda);
  SolverConfig cfg = quick(1e-12, 10000);
  auto tr = solvers::cyclic_descent_lq(A, y, entry, Vec::Zero(8), cfg);
  const Vec u = A.transpose() * y;
  for (int j = 0; j < 8; ++j)
    CHECK(std::abs(tr.x[j] - prox::soft_threshold(u[j], lambda)) <= 5e-3);

  // Zero data stays at zero.
  auto tr0 = solvers::cyclic_descent_lq(A, Vec::Zero(12), entry, Vec::Zero(8),
                                        cfg);
  CHECK(tr0.iterations == 1);
  CHECK(tr0.x.cwiseAbs().maxCoeff() == 0.0);

  // Objective is non-increasing cycle over cycle on a harder instance.
  Mat A2 = testutil::random_mat(rng, 30, 60, 1.0 / std::sqrt(30.0));
  Vec y2 = testutil::random_vec(rng, 30);
  auto e2 = prox::LqEntry::make(0.5, 0.05);
  auto tr2 = solvers::cyclic_descent_lq(A2, y2, e2, Vec::Zero(60), cfg);
  for (size_t i = 1; i < tr2.iters.size(); ++i)
    CHECK(tr2.iters[i].objective <= tr2.iters[i - 1].objective + 1e-12);

  // Zero column is rejected by name.
  Mat bad = A2;
  bad.col(3).setZero();
  CHECK_THROWS_WITH_AS(
      solvers::cyclic_descent_lq(bad, y2, e2, Vec::Zero(60), cfg),
      doctest::Contains("column 3"), Error);
}

TEST_CASE("fista restart flag leaves the solution unchanged") {
  Rng rng(113);
  auto prob = testutil::random_lasso(rng, 20, 30);
  auto pen = separable_penalty_ops(prob.penalty);
  SolverConfig plain = quick(1e-11, 200000);
  SolverConfig restart = plain;
  restart.fista_restart = true;
  auto a = fista(prob.loss, pen, Vec::Zero(30), plain);
  auto b = fista(prob.loss, pen, Vec::Zero(30), restart);
  CHECK(a.converged);
  CHECK(b.converged);
  CHECK(std::abs(a.final_objective() - b.final_objective()) < 1e-8);
}

TEST_CASE("randomized coordinate order is seeded and reaches the same fit") {
  Rng rng(127);
  Mat A = testutil::random_mat(rng, 30, 50, 1.0 / std::sqrt(30.0));
  Vec y = testutil::random_vec(rng, 30);
  auto entry = prox::LqEntry::make(0.5, 0.03);
  SolverConfig shuffled = quick(1e-12, 20000);
  shuffled.randomized_order = true;
  shuffled.seed = 5;
  auto a = solvers::cyclic_descent_lq(A, y, entry, Vec::Zero(50), shuffled);
  auto b = solvers::cyclic_descent_lq(A, y, entry, Vec::Zero(50), shuffled);
  CHECK(a.converged);
  CHECK((a.x - b.x).cwiseAbs().maxCoeff() == 0.0);  // same seed, same run
  // The visitation order can pick a different basin of this non-convex
  // objective; the certificate is coordinatewise optimality, checked by one
  // fixed-order polish cycle that must not move.
  auto polish = solvers::cyclic_descent_lq(A, y, entry, a.x,
                                           quick(1e-12, 2));
  CHECK((polish.x - a.x).cwiseAbs().maxCoeff() <= 1e-9);
  for (size_t i = 1; i < a.iters.size(); ++i)
    CHECK(a.iters[i].objective <= a.iters[i - 1].objective + 1e-12);
}

namespace {

// A loss that admits no quadratic majorizer anywhere: finite only at one
// point. Drives the backtracking step-size underflow path.
struct SpikeLoss : Loss {
  Vec center;
  explicit SpikeLoss(Vec c) : center(std::move(c)) {}
  int dim() const override { return int(center.size()); }
  double value(const Vec& x) const override {
    if ((x - center).cwiseAbs().maxCoeff() > 0)
      throw Error("outside the spike");
    return 0.0;
  }
  Vec gradient(const Vec&) const override { return Vec::Ones(dim()); }
  Mat hessian(const Vec&) const override { return Mat::Zero(dim(), dim()); }
  std::optional<double> lipschitz_bound() const override { return 1.0; }
};

}  // namespace

TEST_CASE("backtracking reports step underflow") {
  SpikeLoss loss(Vec::Zero(2));
  CHECK_THROWS_WITH_AS(
      backtracking_step(loss, zero_penalty_ops(), Vec::Zero(2), 1.0, 0.5),
      doctest::Contains("underflow"), Error);
}

TEST_CASE("converged iterates satisfy the fixed-point residual bound") {
  Rng rng(131);
  auto prob = testutil::random_lasso(rng, 25, 18);
  auto pen = separable_penalty_ops(prob.penalty);
  SolverConfig cfg = quick(1e-9, 100000);
  auto tr = proximal_gradient(prob.loss, pen, Vec::Zero(18), cfg);
  REQUIRE(tr.converged);
  const double gamma = 1.0 / *prob.loss.lipschitz_bound();
  const Vec p = pen.prox(tr.x - gamma * prob.loss.gradient(tr.x), gamma);
  CHECK(((tr.x - p) / gamma).cwiseAbs().maxCoeff() <= cfg.tol * (1 + 1e-12));
}

TEST_CASE("a loss without a lipschitz bound demands backtracking or a step") {
  Rng rng(137);
  Mat A = testutil::random_mat(rng, 10, 4, 0.3);
  Vec y = Vec::Ones(10);
  PoissonLoss loss(A, y);
  CHECK_THROWS_AS(
      proximal_gradient(loss, zero_penalty_ops(), Vec::Zero(4), quick()),
      Error);
  SolverConfig bt = quick(1e-9, 5000);
  bt.backtracking = true;
  auto tr = proximal_gradient(loss, zero_penalty_ops(), Vec::Zero(4), bt);
  CHECK(tr.converged);
}
