#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "liesys/error.hpp"
#include "liesys/numkit.hpp"
#include "testutil.hpp"

using namespace liesys;

namespace {

VectorField exponential() {
  return {1, [](double, std::span<const double> x, std::span<double> dx) {
            dx[0] = x[0];
          }};
}

VectorField circular() {
  return {2, [](double, std::span<const double> x, std::span<double> dx) {
            dx[0] = x[1];
            dx[1] = -x[0];
          }};
}

}  // namespace

TEST_CASE("adaptive integration of x' = x") {
  const double x0[1] = {1.0};
  Trajectory tr = integrate_ode(exponential(), x0, 0.0, 1.0, {});
  tr.validate();
  CHECK(tr.dim == 1);
  CHECK(tr.t_begin() == 0.0);
  CHECK(tr.t_end() == 1.0);
  CHECK(tr.derivs.size() == tr.size());
  CHECK(tr.states.back()[0] == doctest::Approx(std::exp(1.0)).epsilon(1e-9));
  // Node derivatives are the field values.
  for (size_t i = 0; i < tr.size(); ++i)
    CHECK(tr.derivs[i][0] == tr.states[i][0]);
}

TEST_CASE("energy stays put for the circular field") {
  const double x0[2] = {1.0, 0.0};
  IntegratorOptions opts;
  opts.abs_tol = opts.rel_tol = 1e-12;
  Trajectory tr = integrate_ode(circular(), x0, 0.0, 20.0, opts);
  for (size_t i = 0; i < tr.size(); ++i) {
    double e = tr.states[i][0] * tr.states[i][0] +
               tr.states[i][1] * tr.states[i][1];
    CHECK(std::fabs(e - 1.0) < 1e-10);
  }
  CHECK(tr.states.back()[0] == doctest::Approx(std::cos(20.0)).epsilon(1e-10));
}

TEST_CASE("fixed-step classical method") {
  const double x0[1] = {1.0};
  IntegratorOptions opts;
  opts.method = Method::rk4_fixed;
  opts.step = 1e-3;
  Trajectory tr = integrate_ode(exponential(), x0, 0.0, 1.0, opts);
  CHECK(tr.t_end() == 1.0);
  CHECK(tr.size() == 1001);
  CHECK(std::fabs(tr.states.back()[0] - std::exp(1.0)) < 1e-9);

  opts.step = 0.0;
  CHECK_THROWS_AS(integrate_ode(exponential(), x0, 0.0, 1.0, opts), Error);
}

TEST_CASE("dense output samples between nodes") {
  VectorField f{1, [](double t, std::span<const double>, std::span<double> dx) {
                  dx[0] = std::cos(t);
                }};
  const double x0[1] = {0.0};
  IntegratorOptions opts;
  opts.abs_tol = opts.rel_tol = 1e-12;
  Trajectory tr = integrate_ode(f, x0, 0.0, 3.0, opts);
  // Cubic Hermite between adaptive nodes: interpolation error is O(h^4) in
  // the accepted step size, well below 1e-7 here though above the node
  // accuracy itself.
  for (double t : testutil::uniform_grid(0.0, 3.0, 40)) {
    CHECK(std::fabs(tr.sample(t, 0) - std::sin(t)) < 1e-7);
    CHECK(std::fabs(tr.sample_derivative(t, 0) - std::cos(t)) < 1e-5);
  }
  CHECK_THROWS_AS(tr.sample(-0.1), Error);
  CHECK_THROWS_AS(tr.sample(3.2), Error);

  Trajectory re = tr.resampled(testutil::uniform_grid(0.5, 2.5, 11));
  re.validate();
  CHECK(re.size() == 11);
  CHECK(re.times.front() == 0.5);
  CHECK(std::fabs(re.states[5][0] - std::sin(1.5)) < 1e-7);

  // Fixed-step nodes land exactly on the requested spacing, so sampling
  // there involves no interpolation at all.
  IntegratorOptions fixed;
  fixed.method = Method::rk4_fixed;
  fixed.step = 0.01;
  Trajectory ex = integrate_ode(f, x0, 0.0, 3.0, fixed);
  for (size_t i = 0; i < ex.size(); ++i)
    CHECK(std::fabs(ex.states[i][0] - std::sin(ex.times[i])) < 1e-11);
}

TEST_CASE("events stop the integration at the located root") {
  VectorField f{1, [](double, std::span<const double>, std::span<double> dx) {
                  dx[0] = 1.0;
                }};
  const double x0[1] = {-1.0};
  StepHooks hooks;
  hooks.event = [](double, std::span<const double> x) { return x[0]; };
  Trajectory tr = integrate_ode(f, x0, 0.0, 5.0, {}, hooks);
  CHECK(tr.t_end() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::fabs(tr.states.back()[0]) < 1e-9);

  // Never negative: the event is not armed and must not fire.
  const double y0[1] = {2.0};
  Trajectory full = integrate_ode(f, y0, 0.0, 5.0, {}, hooks);
  CHECK(full.t_end() == 5.0);
}

TEST_CASE("post-step hook edits accepted states") {
  VectorField f{1, [](double, std::span<const double>, std::span<double> dx) {
                  dx[0] = 1.0;
                }};
  const double x0[1] = {0.0};
  StepHooks hooks;
  int calls = 0;
  hooks.post_step = [&calls](double, std::span<double> x) {
    x[0] = std::min(x[0], 0.5);
    ++calls;
  };
  Trajectory tr = integrate_ode(f, x0, 0.0, 1.0, {}, hooks);
  CHECK(calls > 0);
  CHECK(tr.states.back()[0] <= 0.5);
}

TEST_CASE("failure modes carry their kinds and positions") {
  // Pole of x' = x^2, x(0) = 1 at t = 1.
  VectorField sq{1, [](double, std::span<const double> x, std::span<double> dx) {
                   dx[0] = x[0] * x[0];
                 }};
  const double x0[1] = {1.0};
  try {
    integrate_ode(sq, x0, 0.0, 2.0, {});
    FAIL("expected blow-up");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::blow_up);
    REQUIRE(e.where().has_value());
    CHECK(*e.where() > 0.9);
    CHECK(*e.where() < 1.01);
  }

  IntegratorOptions tiny;
  tiny.max_steps = 4;
  try {
    integrate_ode(circular(), std::array<double, 2>{1.0, 0.0}, 0.0, 50.0, tiny);
    FAIL("expected step-limit failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::max_steps);
  }

  // Field undefined past t = 0.5: the step size underflows against the wall.
  VectorField wall{1, [](double t, std::span<const double>, std::span<double> dx) {
                     if (t > 0.5)
                       throw Error(ErrorKind::non_finite, "field overflow", t);
                     dx[0] = 1.0;
                   }};
  try {
    integrate_ode(wall, x0, 0.0, 1.0, {});
    FAIL("expected step underflow");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::singularity);
    REQUIRE(e.where().has_value());
    CHECK(*e.where() == doctest::Approx(0.5).epsilon(1e-6));
  }

  CHECK_THROWS_AS(integrate_ode(sq, x0, 1.0, 1.0, {}), Error);
}

TEST_CASE("adaptive quadrature") {
  CHECK(quadrature([](double t) { return std::sin(t); }, 0.0,
                   std::acos(-1.0)) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(quadrature([](double t) { return 1.0 / (1.0 + t * t); }, 0.0, 1.0) ==
        doctest::Approx(std::atan(1.0)).epsilon(1e-12));
  // Antisymmetric in the endpoints.
  double fwd = quadrature([](double t) { return std::exp(t); }, 0.0, 2.0);
  double bwd = quadrature([](double t) { return std::exp(t); }, 2.0, 0.0);
  CHECK(fwd == -bwd);
  CHECK(fwd == doctest::Approx(std::exp(2.0) - 1.0).epsilon(1e-12));
  // ScalarCurve overload.
  CHECK(quadrature(ScalarCurve::constant(3.0), -1.0, 1.0) ==
        doctest::Approx(6.0));
  CHECK_THROWS_AS(quadrature([](double t) { return t; }, 0.0, 1.0, 0.0), Error);
}

TEST_CASE("quadrature failures") {
  // Bounded but oscillating at every scale the recursion can reach near
  // t = 0: Richardson never settles on the leftmost branch, so the depth
  // budget runs out.
  try {
    quadrature([](double t) { return std::sin(1.0 / (t + 1e-30)); }, 0.0, 1.0,
               1e-13);
    FAIL("expected no convergence");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::no_convergence);
  }

  // A point singularity is eventually evaluated once the bisection reaches
  // ulp resolution and is reported as a non-finite integrand value there.
  try {
    quadrature([](double t) { return std::pow(std::fabs(t - 0.3), -0.9); },
               0.0, 1.0, 1e-13);
    FAIL("expected a failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::non_finite);
    REQUIRE(e.where().has_value());
    CHECK(*e.where() == doctest::Approx(0.3));
  }
}

TEST_CASE("cumulative quadrature is exact at anchors and differentiable") {
  ScalarCurve cosine = ScalarCurve::from_functions(
      [](double t) { return std::cos(t); },
      [](double t) { return -std::sin(t); });
  std::vector<double> grid = testutil::uniform_grid(0.0, 3.0, 16);
  ScalarCurve F = cumulative_quadrature(cosine, 0.0, grid);
  for (double t : grid) CHECK(F(t) == doctest::Approx(std::sin(t)).epsilon(1e-10));
  // Off-anchor points re-quadrate locally.
  CHECK(F(1.77) == doctest::Approx(std::sin(1.77)).epsilon(1e-10));
  CHECK(F(0.013) == doctest::Approx(std::sin(0.013)).epsilon(1e-10));
  // The derivative of the integral is the integrand itself.
  CHECK(F.has_derivative());
  CHECK(F.derivative(1.3) == std::cos(1.3));
}

TEST_CASE("finite differences") {
  ScalarCurve c = ScalarCurve::from_functions(
      [](double t) { return std::cos(t); });
  CHECK(std::fabs(fd_derivative(c, 0.5) + std::sin(0.5)) < 1e-8);
  CHECK_FALSE(c.has_derivative());
  CHECK_THROWS_AS(c.derivative(0.5), Error);
  CHECK(std::fabs(c.derivative_or_fd(0.5) + std::sin(0.5)) < 1e-8);
}
