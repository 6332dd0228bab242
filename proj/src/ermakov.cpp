#include "liesys/ermakov.hpp"

#include <cmath>
#include <sstream>

#include "liesys/error.hpp"

namespace liesys {

namespace {

constexpr double kZeroGuard = 1e-6;

double guarded(double value, double t, const char* name) {
  if (std::fabs(value) < kZeroGuard) {
    std::ostringstream os;
    os << name << " entered the |" << name << "| < " << kZeroGuard
       << " guard band around its singularity";
    throw Error(ErrorKind::singularity, os.str(), t);
  }
  return value;
}

}  // namespace

VectorField oscillator_field(const OscillatorSpec& spec, int copies) {
  if (copies < 1)
    throw Error(ErrorKind::usage, "oscillator needs at least one copy");
  ScalarCurve w = spec.omega, m = spec.mass;
  return {2 * copies,
          [w, m, copies](double t, std::span<const double> s, std::span<double> ds) {
            double wt = w(t), mt = m(t);
            if (mt == 0.0)
              throw Error(ErrorKind::zero_coefficient, "mass vanishes", t);
            for (int i = 0; i < copies; ++i) {
              ds[2 * i] = s[2 * i + 1] / mt;
              ds[2 * i + 1] = -mt * wt * wt * s[2 * i];
            }
          }};
}

double wronskian(double x, double vx, double z, double vz) {
  return x * vz - z * vx;
}

Trajectory partial_superpose_oscillator(const Trajectory& x1, double k,
                                        double kprime, double quad_tol) {
  if (x1.dim != 2)
    throw Error(ErrorKind::usage, "known solution must carry the state (x, v)");
  if (x1.size() < 2)
    throw Error(ErrorKind::usage, "known solution needs at least two nodes");
  for (size_t i = 0; i < x1.size(); ++i)
    if (std::fabs(x1.states[i][0]) < kZeroGuard)
      throw Error(ErrorKind::zero_crossing,
                  "known solution crosses zero; reduction of order breaks down",
                  x1.times[i]);
  // A sign change between nodes means a root the node guard cannot see;
  // catch it here rather than letting the 1 / x1^2 quadrature diverge.
  for (size_t i = 0; i + 1 < x1.size(); ++i)
    if (std::signbit(x1.states[i][0]) != std::signbit(x1.states[i + 1][0]))
      throw Error(ErrorKind::zero_crossing,
                  "known solution crosses zero; reduction of order breaks down",
                  0.5 * (x1.times[i] + x1.times[i + 1]));

  ScalarCurve inv_sq = ScalarCurve::from_functions([x1](double t) {
    double x = x1.sample(t, 0);
    if (std::fabs(x) < kZeroGuard)
      throw Error(ErrorKind::zero_crossing,
                  "known solution crosses zero; reduction of order breaks down",
                  t);
    return 1.0 / (x * x);
  });
  ScalarCurve J =
      cumulative_quadrature(inv_sq, x1.times.front(), x1.times, quad_tol);

  bool have_derivs = x1.derivs.size() == x1.size();
  Trajectory out;
  out.dim = 2;
  out.times = x1.times;
  out.states.reserve(x1.size());
  if (have_derivs) out.derivs.reserve(x1.size());
  for (size_t i = 0; i < x1.size(); ++i) {
    double t = x1.times[i];
    double x = x1.states[i][0], v = x1.states[i][1];
    double Jt = J(t);
    double x2 = kprime * x + k * x * Jt;
    double v2 = kprime * v + k * (v * Jt + 1.0 / x);
    out.states.push_back({x2, v2});
    if (have_derivs) {
      // d/dt of v2: the 1/x and x^-2 contributions cancel, leaving
      // v1' (k' + k J).
      double dv = x1.derivs[i][1] * (kprime + k * Jt);
      out.derivs.push_back({v2, dv});
    }
  }
  out.validate();
  return out;
}

Trajectory linear_superpose(const Trajectory& s1, const Trajectory& s2,
                            double k1, double k2) {
  if (s1.dim != s2.dim)
    throw Error(ErrorKind::usage, "superposed solutions differ in dimension");
  if (s1.size() == 0 || s2.size() == 0)
    throw Error(ErrorKind::usage, "superposed solutions must not be empty");

  bool same_grid = s1.size() == s2.size();
  if (same_grid)
    for (size_t i = 0; i < s1.size() && same_grid; ++i)
      same_grid = std::fabs(s1.times[i] - s2.times[i]) <=
                  1e-12 * std::max(1.0, std::fabs(s1.times[i]));

  Trajectory a = s1, b = s2;
  if (!same_grid) {
    std::vector<double> grid;
    for (double t : s1.times)
      if (t >= s2.t_begin() && t <= s2.t_end()) grid.push_back(t);
    if (grid.size() < 2)
      throw Error(ErrorKind::grid_mismatch,
                  "solutions do not overlap on a usable grid");
    a = s1.resampled(grid);
    b = s2.resampled(grid);
  }

  bool have_derivs = a.derivs.size() == a.size() && b.derivs.size() == b.size();
  Trajectory out;
  out.dim = s1.dim;
  out.times = a.times;
  out.states.reserve(a.size());
  if (have_derivs) out.derivs.reserve(a.size());
  for (size_t i = 0; i < a.size(); ++i) {
    std::vector<double> row(out.dim), drow(have_derivs ? out.dim : 0);
    for (int c = 0; c < out.dim; ++c) {
      row[c] = k1 * a.states[i][c] + k2 * b.states[i][c];
      if (have_derivs) drow[c] = k1 * a.derivs[i][c] + k2 * b.derivs[i][c];
    }
    out.states.push_back(std::move(row));
    if (have_derivs) out.derivs.push_back(std::move(drow));
  }
  out.validate();
  return out;
}

std::pair<double, double> coefficients_from_state(const Trajectory& s1,
                                                  const Trajectory& s2,
                                                  double t, double x, double v) {
  if (s1.dim != 2 || s2.dim != 2)
    throw Error(ErrorKind::usage, "basis solutions must carry the state (x, v)");
  double x1 = s1.sample(t, 0), v1 = s1.sample(t, 1);
  double x2 = s2.sample(t, 0), v2 = s2.sample(t, 1);
  double W = x1 * v2 - x2 * v1;
  if (std::fabs(W) <= 1e-10)
    throw Error(ErrorKind::degenerate_wronskian,
                "basis solutions are linearly dependent", t);
  // Cramer's rule; the numerators x v2 - x2 v and x1 v - x v1 are the
  // Wronskians of the target against each basis solution, themselves
  // first integrals of the oscillator.
  return {(x * v2 - x2 * v) / W, (x1 * v - x * v1) / W};
}

VectorField pinney_field(const PinneySpec& spec) {
  ScalarCurve w = spec.omega;
  double k = spec.k;
  return {2, [w, k](double t, std::span<const double> s, std::span<double> ds) {
            double x = guarded(s[0], t, "x");
            double wt = w(t);
            ds[0] = s[1];
            ds[1] = -wt * wt * x + k / (x * x * x);
          }};
}

VectorField pinney_oscillators_field(const ScalarCurve& omega, double c) {
  ScalarCurve w = omega;
  return {6, [w, c](double t, std::span<const double> s, std::span<double> ds) {
            double y = guarded(s[1], t, "y");
            double w2 = w(t) * w(t);
            ds[0] = s[3];
            ds[1] = s[4];
            ds[2] = s[5];
            ds[3] = -w2 * s[0];
            ds[4] = -w2 * y + c / (y * y * y);
            ds[5] = -w2 * s[2];
          }};
}

VectorField ermakov_field(const ErmakovSpec& spec) {
  ScalarCurve w = spec.omega;
  expr::Expression f = spec.f, g = spec.g;
  return {4, [w, f, g](double t, std::span<const double> s, std::span<double> ds) {
            double x = guarded(s[0], t, "x");
            double y = guarded(s[1], t, "y");
            double u = y / x;
            double w2 = w(t) * w(t);
            ds[0] = s[2];
            ds[1] = s[3];
            ds[2] = -w2 * x + f(u) / (x * x * x);
            ds[3] = -w2 * y + g(u) / (y * y * y);
          }};
}

double ermakov_invariant(double k, std::span<const double> state) {
  if (state.size() != 4)
    throw Error(ErrorKind::usage, "state must be (x, y, vx, vy)");
  double x = state[0], y = state[1], vx = state[2], vy = state[3];
  if (x == 0.0)
    throw Error(ErrorKind::singularity, "invariant undefined at x = 0");
  double r = y / x;
  double xi = x * vy - y * vx;
  return 0.5 * k * r * r + 0.5 * xi * xi;
}

double generalized_first_integral(const ErmakovSpec& spec,
                                  std::span<const double> state,
                                  double quad_tol) {
  if (state.size() != 4)
    throw Error(ErrorKind::usage, "state must be (x, y, vx, vy)");
  double x = state[0], y = state[1], vx = state[2], vy = state[3];
  if (y == 0.0 || !(x / y > 0.0))
    throw Error(ErrorKind::sign,
                "x/y crossed zero; the integral from 1 leaves its branch");
  expr::Expression f = spec.f, g = spec.g;
  double I = quadrature(
      [f, g](double u) {
        double inv = 1.0 / u;
        return u * g(inv) - f(inv) / (u * u * u);
      },
      1.0, x / y, quad_tol);
  double xi = x * vy - y * vx;
  return 0.5 * xi * xi + I;
}

PinneyInvariants pinney_invariants(std::span<const double> state, double c) {
  if (state.size() != 6)
    throw Error(ErrorKind::usage, "state must be (x, y, z, vx, vy, vz)");
  double x = state[0], y = state[1], z = state[2];
  double vx = state[3], vy = state[4], vz = state[5];
  if (y == 0.0)
    throw Error(ErrorKind::singularity, "invariants undefined at y = 0");
  PinneyInvariants inv;
  inv.c = c;
  inv.W = x * vz - z * vx;
  double a1 = y * vx - x * vy;
  double a2 = y * vz - z * vy;
  inv.I1 = 0.5 * (a1 * a1 + c * (x / y) * (x / y));
  inv.I2 = 0.5 * (a2 * a2 + c * (z / y) * (z / y));
  return inv;
}

std::pair<double, double> pinney_superpose(double x, double vx, double z,
                                           double vz,
                                           const PinneyInvariants& inv,
                                           Branch branch) {
  double W = inv.W;
  if (std::fabs(W) <= 1e-12)
    throw Error(ErrorKind::zero_wronskian,
                "oscillator pair is linearly dependent");
  double disc = 4.0 * inv.I1 * inv.I2 - inv.c * W * W;
  if (disc < -1e-9)
    throw Error(ErrorKind::negative_discriminant,
                "invariants are inconsistent: 4 I1 I2 - c W^2 < 0");
  double s = std::sqrt(std::max(disc, 0.0));
  double sgn = branch == Branch::plus ? 1.0 : -1.0;
  double rad = inv.I2 * x * x + inv.I1 * z * z + sgn * s * x * z;
  if (rad < -1e-12)
    throw Error(ErrorKind::negative_radicand,
                "inner radicand is negative; inputs do not match the invariants");
  rad = std::max(rad, 0.0);
  double y = std::sqrt(2.0 * rad) / std::fabs(W);
  if (y == 0.0)
    throw Error(ErrorKind::singularity,
                "superposed solution touches zero; its velocity is undefined");
  double vy = (2.0 * inv.I2 * x * vx + 2.0 * inv.I1 * z * vz +
               sgn * s * (vx * z + x * vz)) /
              (W * W * y);
  return {y, vy};
}

}  // namespace liesys
