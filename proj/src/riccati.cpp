#include "liesys/riccati.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "liesys/error.hpp"

namespace liesys {

VectorField riccati_field(const RiccatiCoeffs& b) {
  return {1, [b](double t, std::span<const double> x, std::span<double> dx) {
            dx[0] = b.b0(t) + (b.b1(t) + b.b2(t) * x[0]) * x[0];
          }};
}

namespace {

// Reciprocal-chart field for w = 1/x.
VectorField reciprocal_field(const RiccatiCoeffs& b) {
  return {1, [b](double t, std::span<const double> w, std::span<double> dw) {
            dw[0] = -b.b2(t) - (b.b1(t) + b.b0(t) * w[0]) * w[0];
          }};
}

ProjValue chart_to_proj(bool w_chart, double y) {
  if (!w_chart) return ProjValue::finite(y);
  if (y == 0.0) return ProjValue::infinity();
  double x = 1.0 / y;
  if (!std::isfinite(x)) return ProjValue::infinity();
  return ProjValue::finite(x);
}

struct ChartSegment {
  bool w_chart;
  Trajectory tr;
};

}  // namespace

ProjTrajectory solve_direct(const RiccatiCoeffs& b, ProjValue x0, double t0,
                            double t1, const IntegratorOptions& opts,
                            std::span<const double> grid) {
  bool w_chart;
  double y;
  if (x0.is_infinity()) {
    w_chart = true;
    y = 0.0;
  } else if (std::fabs(x0.value()) < 1.0) {
    w_chart = false;
    y = x0.value();
  } else {
    w_chart = true;
    y = 1.0 / x0.value();
  }

  StepHooks hooks;
  hooks.event = [](double, std::span<const double> s) {
    return std::fabs(s[0]) - 1.0;
  };

  std::vector<ChartSegment> segments;
  double t = t0;
  const double t_eps = 1e-12 * std::max(1.0, std::fabs(t1));
  for (int guard = 0; t < t1 - t_eps; ++guard) {
    if (guard > 100000)
      throw Error(ErrorKind::singularity, "too many chart switches", t);
    VectorField field = w_chart ? reciprocal_field(b) : riccati_field(b);
    const double y0[1] = {y};
    Trajectory tr = integrate_ode(field, y0, t, t1, opts, hooks);
    t = tr.t_end();
    y = tr.states.back()[0];
    segments.push_back({w_chart, std::move(tr)});
    if (t >= t1 - t_eps) break;
    // |y| = 1 at the switch, so the reciprocal is well conditioned.
    y = 1.0 / y;
    w_chart = !w_chart;
  }
  if (segments.empty())
    throw Error(ErrorKind::usage, "integration interval must have t1 > t0");

  ProjTrajectory out;
  if (grid.empty()) {
    for (size_t s = 0; s < segments.size(); ++s) {
      const ChartSegment& seg = segments[s];
      for (size_t i = (s == 0) ? 0 : 1; i < seg.tr.size(); ++i) {
        out.times.push_back(seg.tr.times[i]);
        out.values.push_back(chart_to_proj(seg.w_chart, seg.tr.states[i][0]));
      }
    }
  } else {
    size_t s = 0;
    for (size_t i = 0; i < grid.size(); ++i) {
      double tg = grid[i];
      if (i > 0 && !(tg > grid[i - 1]))
        throw Error(ErrorKind::usage, "sample grid must be strictly increasing");
      while (s + 1 < segments.size() && tg > segments[s].tr.t_end()) ++s;
      out.times.push_back(tg);
      out.values.push_back(
          chart_to_proj(segments[s].w_chart, segments[s].tr.sample(tg, 0)));
    }
  }
  return out;
}

// ------------------------------------------------------------ superposition

namespace {

struct Homog {
  double p, q;  // x = p/q
};

Homog homog(const ProjValue& v) {
  if (v.is_infinity()) return {1.0, 0.0};
  return {v.value(), 1.0};
}

double cross_diff(const Homog& a, const Homog& b) {
  // Homogeneous numerator of (a - b).
  return a.p * b.q - b.p * a.q;
}

}  // namespace

ProjValue cross_ratio_superpose(const ProjValue& x1, const ProjValue& x2,
                                const ProjValue& x3, double k) {
  Homog h1 = homog(x1), h2 = homog(x2), h3 = homog(x3);
  double d32 = cross_diff(h3, h2);
  double d13 = cross_diff(h1, h3);
  double d12 = cross_diff(h1, h2);
  if (d32 == 0.0 || d13 == 0.0 || d12 == 0.0)
    throw Error(ErrorKind::coincident_solutions,
                "superposition needs three pairwise distinct solutions");
  double num = k * h1.p * d32 + h2.p * d13;
  double den = k * h1.q * d32 + h2.q * d13;
  if (den == 0.0) return ProjValue::infinity();
  double x = num / den;
  if (!std::isfinite(x)) return ProjValue::infinity();
  return ProjValue::finite(x);
}

ProjTrajectory cross_ratio_superpose(const ProjTrajectory& x1,
                                     const ProjTrajectory& x2,
                                     const ProjTrajectory& x3, double k) {
  if (x1.size() != x2.size() || x1.size() != x3.size())
    throw Error(ErrorKind::grid_mismatch, "superposition inputs differ in length");
  ProjTrajectory out;
  out.times = x1.times;
  out.values.reserve(x1.size());
  for (size_t i = 0; i < x1.size(); ++i) {
    double t = x1.times[i];
    if (std::fabs(x2.times[i] - t) > 1e-9 * std::max(1.0, std::fabs(t)) ||
        std::fabs(x3.times[i] - t) > 1e-9 * std::max(1.0, std::fabs(t)))
      throw Error(ErrorKind::grid_mismatch,
                  "superposition inputs sample different time grids", t);
    try {
      out.values.push_back(cross_ratio_superpose(x1.values[i], x2.values[i],
                                                 x3.values[i], k));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::coincident_solutions)
        throw Error(ErrorKind::coincident_solutions, e.what(), t);
      throw;
    }
  }
  return out;
}

double cross_ratio_value(const ProjValue& x, const ProjValue& x1,
                         const ProjValue& x2, const ProjValue& x3) {
  Homog h = homog(x), h1 = homog(x1), h2 = homog(x2), h3 = homog(x3);
  double num = cross_diff(h, h1) * cross_diff(h3, h2);
  double den = cross_diff(h, h2) * cross_diff(h3, h1);
  return num / den;  // +-inf admissible when x = x2 or x3 = x1
}

// ---------------------------------------------------------------- reduction

namespace {

void check_particular(const RiccatiCoeffs& b, const ScalarCurve& x1,
                      std::span<const double> ts, double tol) {
  for (double t : ts) {
    double v = x1(t);
    double residual = x1.derivative_or_fd(t) -
                      (b.b0(t) + (b.b1(t) + b.b2(t) * v) * v);
    if (std::fabs(residual) > tol) {
      std::ostringstream os;
      os << "candidate violates the equation (residual " << residual << ")";
      throw Error(ErrorKind::not_a_solution, os.str(), t);
    }
  }
}

RiccatiCoeffs reduced_coeffs(const RiccatiCoeffs& b, const ScalarCurve& x1) {
  ScalarCurve nb1 = ScalarCurve::from_functions(
      [b, x1](double t) { return b.b1(t) + 2.0 * b.b2(t) * x1(t); });
  return {ScalarCurve::constant(0.0), nb1, b.b2};
}

}  // namespace

RiccatiCoeffs reduce_by_particular(const RiccatiCoeffs& b, const Trajectory& x1) {
  if (x1.dim != 1)
    throw Error(ErrorKind::usage, "particular solution must be one-dimensional");
  ScalarCurve curve = ScalarCurve::from_functions(
      [x1](double t) { return x1.sample(t, 0); },
      [x1](double t) { return x1.sample_derivative(t, 0); });
  check_particular(b, curve, x1.times, 1e-5);
  return reduced_coeffs(b, curve);
}

RiccatiCoeffs reduce_by_particular(const RiccatiCoeffs& b, const ScalarCurve& x1,
                                   std::span<const double> check_grid) {
  if (check_grid.empty())
    throw Error(ErrorKind::usage, "validation grid must not be empty");
  check_particular(b, x1, check_grid, 1e-5);
  return reduced_coeffs(b, x1);
}

// ------------------------------------------------------- coefficient gauge

RiccatiCoeffs transform_coefficients(const RiccatiCoeffs& b, const SL2MatrixCurve& A) {
  auto nb2 = [b, A](double t) {
    SL2Matrix m = A.eval(t), dm = A.eval_derivative(t);
    return m.d * m.d * b.b2(t) - m.d * m.c * b.b1(t) + m.c * m.c * b.b0(t) +
           m.c * dm.d - m.d * dm.c;
  };
  auto nb1 = [b, A](double t) {
    SL2Matrix m = A.eval(t), dm = A.eval_derivative(t);
    return -2.0 * m.b * m.d * b.b2(t) + (m.a * m.d + m.b * m.c) * b.b1(t) -
           2.0 * m.a * m.c * b.b0(t) + m.d * dm.a - m.a * dm.d + m.b * dm.c -
           m.c * dm.b;
  };
  auto nb0 = [b, A](double t) {
    SL2Matrix m = A.eval(t), dm = A.eval_derivative(t);
    return m.b * m.b * b.b2(t) - m.a * m.b * b.b1(t) + m.a * m.a * b.b0(t) +
           m.a * dm.b - m.b * dm.a;
  };
  return {ScalarCurve::from_functions(nb0), ScalarCurve::from_functions(nb1),
          ScalarCurve::from_functions(nb2)};
}

// ------------------------------------------------------------- linear case

Trajectory solve_linear_inhomogeneous(const ScalarCurve& b0, const ScalarCurve& b1,
                                      double x0, double t0,
                                      std::span<const double> grid,
                                      double quad_tol) {
  if (grid.empty()) throw Error(ErrorKind::usage, "output grid must not be empty");
  ScalarCurve I1 = cumulative_quadrature(b1, t0, grid, quad_tol);
  ScalarCurve integrand = ScalarCurve::from_functions(
      [b0, I1](double t) { return b0(t) * std::exp(-I1(t)); });
  ScalarCurve J = cumulative_quadrature(integrand, t0, grid, quad_tol);

  Trajectory out;
  out.dim = 1;
  out.times.assign(grid.begin(), grid.end());
  out.states.reserve(grid.size());
  out.derivs.reserve(grid.size());
  for (double t : grid) {
    double x = std::exp(I1(t)) * (x0 + J(t));
    if (!std::isfinite(x))
      throw Error(ErrorKind::non_finite, "linear solution overflowed", t);
    out.states.push_back({x});
    out.derivs.push_back({b0(t) + b1(t) * x});
  }
  out.validate();
  return out;
}

// ------------------------------------------------------------ solvable case

ProjValue solve_solvable(const SolvableSpec& spec, const ProjValue& y0, double t,
                         double quad_tol) {
  double tau = quadrature(spec.D, 0.0, t, quad_tol);
  SL2Matrix g = expm_sl2({spec.c0, spec.c1, spec.c2}, tau);
  return mobius(g, y0);
}

// -------------------------------------------------- integrability criterion

namespace {

expr::Expression const_expr(double v) {
  if (v >= 0.0) return expr::Expression::literal(v);
  return expr::Expression::negate(expr::Expression::literal(-v));
}

}  // namespace

CriterionReport check_scaling_integrability(const RiccatiCoeffs& b, double c0,
                                            double c2,
                                            std::span<const double> grid,
                                            double tol) {
  double L = c0 * c2;
  if (L == 0.0)
    throw Error(ErrorKind::zero_coefficient, "target product c0*c2 must be nonzero");
  if (grid.empty()) throw Error(ErrorKind::usage, "criterion grid must not be empty");

  auto ratio = [L, b](double t) {
    double p = b.b0(t) * b.b2(t);
    if (p == 0.0)
      throw Error(ErrorKind::zero_coefficient, "b0*b2 vanishes", t);
    double r = L / p;
    if (r < 0.0)
      throw Error(ErrorKind::sign, "c0*c2/(b0*b2) is negative", t);
    return r;
  };

  std::vector<double> E;
  E.reserve(grid.size());
  for (double t : grid) {
    double r = ratio(t);
    double db0 = b.b0.derivative_or_fd(t);
    double db2 = b.b2.derivative_or_fd(t);
    E.push_back(std::sqrt(r) *
                (b.b1(t) + 0.5 * (db2 / b.b2(t) - db0 / b.b0(t))));
  }
  double K = 0.0;
  for (double e : E) K += e;
  K /= static_cast<double>(E.size());
  double max_dev = 0.0;
  for (double e : E) max_dev = std::max(max_dev, std::fabs(e - K));

  CriterionReport report;
  report.holds = max_dev <= tol;
  report.K = K;
  report.L = L;
  report.max_deviation = max_dev;
  report.D = ScalarCurve::from_functions(
      [ratio](double t) { return 1.0 / std::sqrt(ratio(t)); });
  report.scale = ScalarCurve::from_functions([b, c0, c2](double t) {
    double b0 = b.b0(t), b2 = b.b2(t);
    if (b0 == 0.0 || c2 == 0.0)
      throw Error(ErrorKind::zero_coefficient, "scale factor undefined", t);
    double r = (b2 * c0) / (b0 * c2);
    if (r <= 0.0)
      throw Error(ErrorKind::sign, "scale radicand is not positive", t);
    return std::sqrt(r);
  });

  if (b.b0.expression() && b.b2.expression()) {
    using expr::Expression;
    using expr::Func;
    using expr::Op;
    Expression prod =
        Expression::binary(Op::mul, *b.b0.expression(), *b.b2.expression());
    Expression d =
        Expression::call(Func::sqrt, Expression::binary(Op::div, prod, const_expr(L)));
    report.D_text = d.str();
    Expression s = Expression::call(
        Func::sqrt,
        Expression::binary(Op::div,
                           Expression::binary(Op::mul, *b.b2.expression(),
                                              const_expr(c0)),
                           Expression::binary(Op::mul, *b.b0.expression(),
                                              const_expr(c2))));
    report.scale_text = s.str();
  }
  return report;
}

// ----------------------------------------------------------------- scaling

Trajectory scale_solution(const ScalarCurve& scale, const Trajectory& y,
                          bool inverse) {
  Trajectory out;
  out.dim = y.dim;
  out.times = y.times;
  out.states.reserve(y.size());
  for (size_t i = 0; i < y.size(); ++i) {
    double s = scale(y.times[i]);
    if (s == 0.0)
      throw Error(ErrorKind::degenerate_scale, "scale factor vanishes", y.times[i]);
    double f = inverse ? 1.0 / s : s;
    std::vector<double> row = y.states[i];
    for (double& v : row) v *= f;
    out.states.push_back(std::move(row));
  }
  out.validate();
  return out;
}

ProjTrajectory scale_solution(const ScalarCurve& scale, const ProjTrajectory& y,
                              bool inverse) {
  ProjTrajectory out;
  out.times = y.times;
  out.values.reserve(y.size());
  for (size_t i = 0; i < y.size(); ++i) {
    double s = scale(y.times[i]);
    if (s == 0.0)
      throw Error(ErrorKind::degenerate_scale, "scale factor vanishes", y.times[i]);
    double f = inverse ? 1.0 / s : s;
    if (y.values[i].is_infinity())
      out.values.push_back(ProjValue::infinity());
    else
      out.values.push_back(ProjValue::finite(y.values[i].value() * f));
  }
  return out;
}

}  // namespace liesys
