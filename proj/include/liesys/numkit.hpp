#pragma once

#include <functional>
#include <span>
#include <vector>

#include "liesys/curve.hpp"

namespace liesys {

// Time-dependent vector field on R^dim.
struct VectorField {
  int dim = 0;
  std::function<void(double t, std::span<const double> x, std::span<double> dx)> rhs;
};

// Sampled solution of an ODE. `derivs` holds the field evaluated at each
// node when the producer had it; sample() then uses cubic Hermite
// interpolation (4th-order accurate), otherwise slopes are rebuilt from
// neighbouring samples.
struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
  std::vector<std::vector<double>> derivs;
  int dim = 0;

  size_t size() const { return times.size(); }
  double t_begin() const;
  double t_end() const;

  std::vector<double> sample(double t) const;
  double sample(double t, int component) const;
  double sample_derivative(double t, int component) const;
  Trajectory resampled(std::span<const double> grid) const;

  // Post-condition check run by producers: strictly increasing times,
  // finite entries, consistent row widths.
  void validate() const;
};

enum class Method { rk45_adaptive, rk4_fixed };

struct IntegratorOptions {
  Method method = Method::rk45_adaptive;
  double step = 1e-2;  // fixed-step size for rk4_fixed
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  long max_steps = 1000000;
  double blow_up = 1e12;
};

// Hooks used by chart-switching and group-equation solvers. `post_step`
// may adjust an accepted state in place (e.g. renormalise); `event` is a
// sign-change detector: integration stops at the first root crossing of
// its value, located on the dense output.
struct StepHooks {
  std::function<void(double t, std::span<double> x)> post_step;
  std::function<double(double t, std::span<const double> x)> event;
};

// Integrates from t0 to t1 (t1 > t0), returning nodes at accepted steps,
// both endpoints included. Throws Error(blow_up) with the last good time
// when |x| exceeds opts.blow_up, Error(non_finite) on NaN/overflow in the
// state or field, Error(max_steps) when the step budget is exhausted.
Trajectory integrate_ode(const VectorField& field, std::span<const double> x0,
                         double t0, double t1, const IntegratorOptions& opts,
                         const StepHooks& hooks = {});

// Adaptive Simpson quadrature with absolute tolerance. Antisymmetric:
// quadrature(f, a, b) = -quadrature(f, b, a). Throws Error(no_convergence)
// when the recursion depth limit is hit; domain errors from f propagate.
double quadrature(const std::function<double(double)>& f, double a, double b,
                  double tol = 1e-10);
double quadrature(const ScalarCurve& f, double a, double b, double tol = 1e-10);

// Cumulative integral F(t) = int_{t0}^{t} f. The returned curve is exact at
// the grid points (computed once, reused) and evaluates anywhere else by a
// local quadrature from the nearest anchor; its derivative is f itself.
ScalarCurve cumulative_quadrature(const ScalarCurve& f, double t0,
                                  std::span<const double> grid,
                                  double tol = 1e-10);

// Central difference fallback for curves without a symbolic derivative.
double fd_derivative(const ScalarCurve& f, double t, double h = 1e-6);

}  // namespace liesys
