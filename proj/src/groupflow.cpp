#include "liesys/groupflow.hpp"

#include <cmath>

#include "liesys/error.hpp"

namespace liesys {

namespace {

SL2Matrix coefficient_matrix(const RiccatiCoeffs& b, double t) {
  return Sl2Element{b.b0(t), b.b1(t), b.b2(t)}.matrix();
}

}  // namespace

SL2Curve solve_group_equation(const RiccatiCoeffs& b, double t0, double t1,
                              const IntegratorOptions& opts,
                              std::span<const double> grid) {
  VectorField field{4, [b](double t, std::span<const double> g, std::span<double> dg) {
    SL2Matrix m = coefficient_matrix(b, t);
    dg[0] = m.a * g[0] + m.b * g[2];
    dg[1] = m.a * g[1] + m.b * g[3];
    dg[2] = m.c * g[0] + m.d * g[2];
    dg[3] = m.c * g[1] + m.d * g[3];
  }};
  StepHooks hooks;
  hooks.post_step = [](double t, std::span<double> g) {
    double det = g[0] * g[3] - g[1] * g[2];
    if (!(det > 0.0))
      throw Error(ErrorKind::invalid_curve, "group curve lost positivity", t);
    double s = 1.0 / std::sqrt(det);
    for (double& e : g) e *= s;
  };
  const double id[4] = {1.0, 0.0, 0.0, 1.0};
  Trajectory tr = integrate_ode(field, id, t0, t1, opts, hooks);

  SL2Curve out;
  auto append = [&](double t, std::span<const double> g) {
    SL2Matrix m = SL2Matrix{g[0], g[1], g[2], g[3]}.renormalized();
    out.times.push_back(t);
    out.mats.push_back(m);
    SL2Matrix coeff = coefficient_matrix(b, t);
    out.derivs.push_back(coeff * m);
  };
  if (grid.empty()) {
    for (size_t i = 0; i < tr.size(); ++i) append(tr.times[i], tr.states[i]);
  } else {
    for (size_t i = 0; i < grid.size(); ++i) {
      if (i > 0 && !(grid[i] > grid[i - 1]))
        throw Error(ErrorKind::usage, "sample grid must be strictly increasing");
      append(grid[i], tr.sample(grid[i]));
    }
  }
  return out;
}

ProjTrajectory transport_solution(const SL2Curve& g, const ProjValue& x0) {
  if (g.size() == 0) throw Error(ErrorKind::usage, "empty group curve");
  const SL2Matrix& first = g.mats.front();
  if (std::fabs(first.a - 1.0) > 1e-6 || std::fabs(first.b) > 1e-6 ||
      std::fabs(first.c) > 1e-6 || std::fabs(first.d - 1.0) > 1e-6)
    throw Error(ErrorKind::invalid_curve, "group curve must start at the identity",
                g.times.front());
  ProjTrajectory out;
  out.times = g.times;
  out.values.reserve(g.size());
  for (const SL2Matrix& m : g.mats) out.values.push_back(mobius(m, x0));
  return out;
}

RiccatiCoeffs gauge_transform(const RiccatiCoeffs& b, const SL2MatrixCurve& A) {
  auto mbar = [b, A](double t) {
    SL2Matrix at = A.eval(t);
    SL2Matrix dat = A.eval_derivative(t);
    SL2Matrix inv = at.inverse();
    SL2Matrix m = coefficient_matrix(b, t);
    SL2Matrix t1 = dat * inv;
    SL2Matrix t2 = (at * m) * inv;
    return SL2Matrix{t1.a + t2.a, t1.b + t2.b, t1.c + t2.c, t1.d + t2.d};
  };
  return {
      ScalarCurve::from_functions([mbar](double t) { return mbar(t).b; }),
      ScalarCurve::from_functions([mbar](double t) { return 2.0 * mbar(t).a; }),
      ScalarCurve::from_functions([mbar](double t) { return -mbar(t).c; }),
  };
}

bool check_subalgebra(const RiccatiCoeffs& b, Subalgebra which,
                      std::span<const double> grid, double tol) {
  const ScalarCurve& excluded = (which == Subalgebra::span_a0_a1) ? b.b2 : b.b0;
  for (double t : grid)
    if (std::fabs(excluded(t)) > tol) return false;
  return true;
}

}  // namespace liesys
