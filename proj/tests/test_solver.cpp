#include <doctest.h>

#include <cmath>

#include "mifb/errors.hpp"
#include "mifb/experiments.hpp"
#include "mifb/problem.hpp"
#include "mifb/prox.hpp"
#include "mifb/rng.hpp"
#include "mifb/solver.hpp"

using namespace mifb;

namespace {

CompositeProblem scalar_quadratic() {
  CompositeProblem p;
  p.f.dim = 1;
  p.f.value = [](const Vector& x) { return 0.5 * x.squaredNorm(); };
  p.f.gradient = [](const Vector& x) -> Vector { return x; };
  p.f.lipschitz = 1.0;
  p.g = make_zero_term(1);
  return p;
}

MifbParams quad_params(double a, double b) {
  MifbParams p = make_constant_params(1, 0.5, {a}, {b});
  p.mu = 0.1;
  p.nu = 0.1;
  return p;
}

}  // namespace

TEST_CASE("admissibility arithmetic: zero inertia") {
  const auto rep = compute_admissibility(quad_params(0.0, 0.0), 1.0, 10);
  CHECK(rep.beta_inf == doctest::Approx(0.35).epsilon(1e-14));
  CHECK(rep.alpha_sup[0] == 0.0);
  CHECK(rep.delta == doctest::Approx(0.35).epsilon(1e-14));
  CHECK(rep.admissible);
}

TEST_CASE("admissibility arithmetic: a = 0.2 tips the margin negative") {
  const auto rep = compute_admissibility(quad_params(0.2, 0.0), 1.0, 10);
  CHECK(rep.alpha_sup[0] == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(rep.delta == doctest::Approx(-0.05).epsilon(1e-12));
  CHECK_FALSE(rep.admissible);
}

TEST_CASE("zero inertia forces alpha to zero for arbitrary valid params") {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const double L = 0.5 + 5.0 * rng.uniform();
    const double gamma = (0.1 + 0.8 * rng.uniform()) / L;
    const int s = 1 + static_cast<int>(rng.below(3));
    MifbParams p = make_constant_params(s, gamma, std::vector<double>(s, 0.0),
                                        std::vector<double>(s, 0.0));
    const auto rep = compute_admissibility(p, L, 5);
    for (double a : rep.alpha_sup) CHECK(a == 0.0);
    CHECK(rep.delta == rep.beta_inf);
  }
}

TEST_CASE("constant schedules: horizon does not affect the report") {
  const auto r1 = compute_admissibility(quad_params(0.1, 0.1), 1.0, 1);
  const auto r2 = compute_admissibility(quad_params(0.1, 0.1), 1.0, 1000);
  CHECK(r1.beta_inf == r2.beta_inf);
  CHECK(r1.alpha_sup[0] == r2.alpha_sup[0]);
  CHECK(r1.delta == r2.delta);
}

TEST_CASE("gamma outside (0, 1/L) is rejected naming the iteration") {
  MifbParams p = make_constant_params(1, 1.5, {0.0}, {0.0});
  p.mu = 0.1;
  p.nu = 0.1;
  CHECK_THROWS_WITH_AS((void)compute_admissibility(p, 1.0, 5),
                       doctest::Contains("k=1"), std::invalid_argument);
}

TEST_CASE("step without inertia is a plain gradient step") {
  auto prob = scalar_quadratic();
  auto params = quad_params(0.0, 0.0);
  auto state = SolverState::initial(Vector::Constant(1, 1.0), params.s);
  const auto rec = mifb_step(prob, params, state);
  CHECK(rec.x(0) == doctest::Approx(0.5));
}

TEST_CASE("two inertial steps on the scalar quadratic") {
  auto prob = scalar_quadratic();
  auto params = quad_params(0.5, 0.5);
  auto state = SolverState::initial(Vector::Constant(1, 1.0), params.s);
  const auto r1 = mifb_step(prob, params, state);
  CHECK(r1.x(0) == doctest::Approx(0.5));  // padded history: no inertia yet
  const auto r2 = mifb_step(prob, params, state);
  CHECK(r2.x(0) == doctest::Approx(0.125));
}

TEST_CASE("zero gradient and equal history reduce the step to the prox") {
  CompositeProblem prob;
  prob.f.dim = 2;
  prob.f.value = [](const Vector&) { return 0.0; };
  prob.f.gradient = [](const Vector& x) -> Vector { return Vector::Zero(x.size()); };
  prob.f.lipschitz = 1.0;
  prob.g = make_l1_term(2, L1Params{1.0});
  MifbParams params = make_constant_params(1, 0.25, {0.8}, {0.8});
  Vector x0(2);
  x0 << 3.0, -0.1;
  auto state = SolverState::initial(x0, params.s);
  const auto rec = mifb_step(prob, params, state);
  const Vector expected = l1_prox(L1Params{1.0}, x0, 0.25);
  CHECK((rec.x - expected).norm() == 0.0);
}

TEST_CASE("solve on the scalar quadratic halves x every iteration") {
  auto prob = scalar_quadratic();
  auto params = quad_params(0.0, 0.0);
  params.max_iters = 40;
  params.tol_delta_x = 1e-12;
  const auto trace = solve(prob, params, Vector::Constant(1, 1.0));
  for (size_t k = 0; k < trace.phi.size(); ++k) {
    CHECK(trace.phi[k] == 0.5 * std::pow(4.0, -static_cast<double>(k)));
  }
  CHECK(trace.reason == StopReason::tolerance);
  CHECK(std::abs(trace.x_final(0)) < 1e-9);
}

TEST_CASE("a fixed-point start terminates after one iteration") {
  auto prob = scalar_quadratic();
  auto params = quad_params(0.0, 0.0);
  const auto trace = solve(prob, params, Vector::Zero(1));
  CHECK(trace.iterations == 1);
  CHECK(trace.reason == StopReason::tolerance);
  CHECK(trace.delta_x[1] == 0.0);
}

TEST_CASE("padded history makes the first iteration inertia-free") {
  auto prob = scalar_quadratic();
  auto plain = quad_params(0.0, 0.0);
  auto inertial = quad_params(0.9, 0.9);
  inertial.force = true;
  plain.max_iters = 1;
  inertial.max_iters = 1;
  plain.tol_delta_x = 0.0;
  inertial.tol_delta_x = 0.0;
  const auto t1 = solve(prob, plain, Vector::Constant(1, 0.7));
  const auto t2 = solve(prob, inertial, Vector::Constant(1, 0.7));
  CHECK(t1.phi[1] == t2.phi[1]);
}

TEST_CASE("solves are deterministic") {
  InstanceSpec spec;
  spec.kind = InstanceKind::scad_ls;
  spec.seed = 5;
  spec.m = 8;
  spec.n = 16;
  spec.sparsity = 2;
  spec.noise_scale = 1.0;
  spec.lambda = 1.0;
  spec.scad_a = 5.0;
  const auto inst = gen_sparse_ls(spec);
  MifbParams params = make_constant_params(1, 0.1 / inst.problem.f.lipschitz,
                                           {0.2}, {0.0});
  params.max_iters = 200;
  Rng rng(6);
  Vector x0(16);
  for (int i = 0; i < 16; ++i) x0(i) = rng.normal();
  const auto t1 = solve(inst.problem, params, x0);
  const auto t2 = solve(inst.problem, params, x0);
  REQUIRE(t1.phi.size() == t2.phi.size());
  for (size_t k = 0; k < t1.phi.size(); ++k) {
    CHECK(t1.phi[k] == t2.phi[k]);
    CHECK(t1.delta_x[k] == t2.delta_x[k]);
    CHECK(t1.psi[k] == t2.psi[k]);
  }
}

TEST_CASE("zero-inertia solve matches an independent forward-backward loop") {
  InstanceSpec spec;
  spec.kind = InstanceKind::l1_ls;
  spec.seed = 12;
  spec.m = 10;
  spec.n = 20;
  spec.sparsity = 3;
  spec.noise_scale = 0.5;
  spec.lambda = 0.05;
  const auto inst = gen_sparse_ls(spec);
  const double L = inst.problem.f.lipschitz;
  const double gamma = 0.9 / L;

  MifbParams params = make_constant_params(1, gamma, {0.0}, {0.0});
  params.max_iters = 300;
  params.tol_delta_x = 0.0;
  params.store_every = 1;
  Rng rng(13);
  Vector x0(20);
  for (int i = 0; i < 20; ++i) x0(i) = rng.normal();
  const auto trace = solve(inst.problem, params, x0);

  // Reference loop written directly against the instance data.
  const Matrix& A = *inst.A;
  Vector x = x0;
  for (int k = 1; k <= 300; ++k) {
    const Vector grad = A.transpose() * (A * x - inst.b);
    Vector u = x - gamma * grad;
    for (int i = 0; i < u.size(); ++i) {
      const double thr = gamma * spec.lambda;
      u(i) = u(i) > thr ? u(i) - thr : (u(i) < -thr ? u(i) + thr : 0.0);
    }
    x = u;
    const Vector& stored = trace.iterates[static_cast<size_t>(k)];
    CHECK((stored - x).norm() <= 1e-12 * std::max(1.0, x.norm()));
  }
}

TEST_CASE("inadmissible parameters require force") {
  auto prob = scalar_quadratic();
  auto params = quad_params(0.9, 0.9);
  params.max_iters = 10;
  CHECK_THROWS_AS((void)solve(prob, params, Vector::Constant(1, 1.0)),
                  inadmissible_error);
  params.force = true;
  const auto trace = solve(prob, params, Vector::Constant(1, 1.0));
  CHECK(trace.phi.size() > 1);
}

TEST_CASE("presets have the documented shapes") {
  const auto none = preset("none");
  CHECK(none.s == 1);
  CHECK(none.a(1, 0) == 0.0);
  CHECK(none.b(1, 0) == 0.0);
  const auto ipiano = preset("ipiano", 0.4);
  CHECK(ipiano.s == 1);
  CHECK(ipiano.a(1, 0) == 0.4);
  CHECK(ipiano.b(1, 0) == 0.0);
  const auto hb = preset("heavy-ball", 0.4);
  CHECK(hb.b(1, 0) == 0.0);
  const auto eq = preset("ifb-equal", 0.25);
  CHECK(eq.a(1, 0) == eq.b(1, 0));
  const auto two = preset("two-step", 0.3, 0.1);
  CHECK(two.s == 2);
  CHECK(two.a(1, 1) == 0.1);
  CHECK_THROWS_WITH_AS((void)preset("nesterov"), doctest::Contains("ifb-equal"),
                       std::invalid_argument);
}

TEST_CASE("non-finite gradients surface as numerical failure") {
  CompositeProblem prob;
  prob.f.dim = 1;
  prob.f.value = [](const Vector&) { return 0.0; };
  prob.f.gradient = [](const Vector&) -> Vector {
    return Vector::Constant(1, std::numeric_limits<double>::quiet_NaN());
  };
  prob.f.lipschitz = 1.0;
  prob.g = make_zero_term(1);
  MifbParams params = make_constant_params(1, 0.5, {0.0}, {0.0});
  params.max_iters = 5;
  const auto trace = solve(prob, params, Vector::Constant(1, 1.0));
  CHECK(trace.reason == StopReason::numerical_failure);
}
