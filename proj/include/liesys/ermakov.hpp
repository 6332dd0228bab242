#pragma once

#include <utility>

#include "liesys/liecore.hpp"

namespace liesys {

// x' = v / m, v' = -m w^2 x. The default mass is 1, in which case v is
// the plain velocity.
struct OscillatorSpec {
  ScalarCurve omega;
  ScalarCurve mass = ScalarCurve::constant(1.0);
};

// `copies` oscillators sharing the same frequency and mass, state
// interleaved as (x1, v1, ..., xn, vn).
VectorField oscillator_field(const OscillatorSpec& spec, int copies = 1);

// x vz - z vx, constant along any two solutions of one oscillator.
double wronskian(double x, double vx, double z, double vz);

// Second solution from one known nonvanishing unit-mass solution by
// reduction of order:
//   x2 = k' x1 + k x1 J,   v2 = k' v1 + k (v1 J + 1/x1),
//   J(t) = int_{t0}^{t} x1^{-2}.
// The known solution must stay away from zero (|x1| >= 1e-6); otherwise
// Error(zero_crossing) names the first offending time.
Trajectory partial_superpose_oscillator(const Trajectory& x1, double k,
                                        double kprime, double quad_tol = 1e-10);

// k1 s1 + k2 s2. Matching grids combine node by node; otherwise s2 is
// resampled onto the nodes of s1 that fall inside its span, and an empty
// overlap raises Error(grid_mismatch).
Trajectory linear_superpose(const Trajectory& s1, const Trajectory& s2,
                            double k1, double k2);

// Inverts (x, v) = k1 (x1, v1) + k2 (x2, v2) at time t. Throws
// Error(degenerate_wronskian) when |x1 v2 - x2 v1| <= 1e-10 there.
std::pair<double, double> coefficients_from_state(const Trajectory& s1,
                                                  const Trajectory& s2,
                                                  double t, double x, double v);

// x'' = -w(t)^2 x + k / x^3 on the state (x, v).
struct PinneySpec {
  ScalarCurve omega;
  double k = 1.0;
};

VectorField pinney_field(const PinneySpec& spec);

// One Pinney equation driven alongside two copies of its base oscillator,
// state (x, y, z, vx, vy, vz) with y the Pinney variable:
//   x'' = -w^2 x,  y'' = -w^2 y + c / y^3,  z'' = -w^2 z.
VectorField pinney_oscillators_field(const ScalarCurve& omega, double c);

// Coupled pair on (x, y, vx, vy) with homogeneous degree -3 couplings:
//   x'' = -w^2 x + f(y/x) / x^3,   y'' = -w^2 y + g(y/x) / y^3.
struct ErmakovSpec {
  ScalarCurve omega;
  expr::Expression f, g;
};

VectorField ermakov_field(const ErmakovSpec& spec);

// (k/2) (y/x)^2 + (x vy - y vx)^2 / 2, conserved when x carries the
// forcing k/x^3 and y is a plain oscillator solution (f = k, g = 0).
// State ordered (x, y, vx, vy).
double ermakov_invariant(double k, std::span<const double> state);

// First integral of the mutual symmetries of the coupled pair:
//   F = (x vy - y vx)^2 / 2 + int_1^{x/y} (u g(1/u) - f(1/u) / u^3) du.
// Requires x/y > 0 so the integral from 1 stays inside one branch;
// otherwise throws Error(sign).
double generalized_first_integral(const ErmakovSpec& spec,
                                  std::span<const double> state,
                                  double quad_tol = 1e-10);

// Conserved data of the joint system (x, y, z, vx, vy, vz):
//   W  = x vz - z vx,
//   I1 = ((y vx - x vy)^2 + c (x/y)^2) / 2,
//   I2 = ((y vz - z vy)^2 + c (z/y)^2) / 2.
struct PinneyInvariants {
  double I1 = 0.0, I2 = 0.0, W = 0.0, c = 0.0;
};

PinneyInvariants pinney_invariants(std::span<const double> state, double c);

enum class Branch { plus, minus };

// Pinney solution rebuilt algebraically from two oscillator solutions:
//   y  = sqrt(2 (I2 x^2 + I1 z^2 +- s x z)) / |W|, s = sqrt(4 I1 I2 - c W^2),
//   vy = (2 I2 x vx + 2 I1 z vz +- s (vx z + x vz)) / (W^2 y).
// The radicand is nonnegative up to roundoff whenever c >= 0 and the
// invariants come from one joint state. Throws Error(zero_wronskian) when
// |W| <= 1e-12, Error(negative_discriminant) when 4 I1 I2 - c W^2 < -1e-9,
// Error(negative_radicand) below -1e-12 (small negatives clamp to zero)
// and Error(singularity) when y = 0 leaves the velocity undefined.
std::pair<double, double> pinney_superpose(double x, double vx, double z,
                                           double vz,
                                           const PinneyInvariants& inv,
                                           Branch branch);

}  // namespace liesys
