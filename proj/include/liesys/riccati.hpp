#pragma once

#include <optional>
#include <string>

#include "liesys/liecore.hpp"

namespace liesys {

// Coefficients of the scalar quadratic equation x' = b0 + b1 x + b2 x^2.
struct RiccatiCoeffs {
  ScalarCurve b0, b1, b2;
};

VectorField riccati_field(const RiccatiCoeffs& b);

// Integrates the scalar equation through poles by switching to the
// reciprocal chart w = 1/x whenever |x| crosses 1 (w' = -b2 - b1 w - b0 w^2).
// With a non-empty `grid` the solution is sampled there via dense output;
// otherwise nodes fall at accepted steps.
ProjTrajectory solve_direct(const RiccatiCoeffs& b, ProjValue x0, double t0,
                            double t1, const IntegratorOptions& opts = {},
                            std::span<const double> grid = {});

// Nonlinear superposition from three particular solutions:
//   x = (k x1 (x3 - x2) + x2 (x1 - x3)) / (k (x3 - x2) + (x1 - x3)),
// evaluated in homogeneous coordinates so any argument or the result may
// sit at infinity. k = 0 returns x2, k = 1 returns x3; the classical
// cross ratio ((x-x1)(x3-x2))/((x-x2)(x3-x1)) of the result equals 1/k.
ProjValue cross_ratio_superpose(const ProjValue& x1, const ProjValue& x2,
                                const ProjValue& x3, double k);
ProjTrajectory cross_ratio_superpose(const ProjTrajectory& x1,
                                     const ProjTrajectory& x2,
                                     const ProjTrajectory& x3, double k);

// Classical cross ratio of four points, for constancy checks.
double cross_ratio_value(const ProjValue& x, const ProjValue& x1,
                         const ProjValue& x2, const ProjValue& x3);

// Change of variable z = x - x1 for a known particular solution x1 kills
// the inhomogeneous term: z' = (b1 + 2 b2 x1) z + b2 z^2. The candidate is
// validated against the equation (residual <= 1e-5 on its samples).
RiccatiCoeffs reduce_by_particular(const RiccatiCoeffs& b, const Trajectory& x1);
RiccatiCoeffs reduce_by_particular(const RiccatiCoeffs& b, const ScalarCurve& x1,
                                   std::span<const double> check_grid);

// Coefficients of the transformed equation for x' = (alpha x + beta) /
// (gamma x + delta) along a unit-determinant curve A(t):
//   b2' = d^2 b2 - d c b1 + c^2 b0 + c d' - d c'
//   b1' = -2 b d b2 + (a d + b c) b1 - 2 a c b0 + d a' - a d' + b c' - c b'
//   b0' = b^2 b2 - a b b1 + a^2 b0 + a b' - b a'
// (entries named a, b, c, d = alpha, beta, gamma, delta).
RiccatiCoeffs transform_coefficients(const RiccatiCoeffs& b, const SL2MatrixCurve& A);

// Linear case b2 = 0 by two quadratures:
//   x(t) = exp(I1(t)) (x0 + int_t0^t b0 exp(-I1)), I1(t) = int_t0^t b1.
Trajectory solve_linear_inhomogeneous(const ScalarCurve& b0, const ScalarCurve& b1,
                                      double x0, double t0,
                                      std::span<const double> grid,
                                      double quad_tol = 1e-10);

// y' (tau) = c0 + c1 y + c2 y^2 up to the reparametrisation tau = int_0^t D:
// solved exactly by a matrix exponential and the projective action.
struct SolvableSpec {
  double c0 = 0.0, c1 = 0.0, c2 = 0.0;
  ScalarCurve D;
};

ProjValue solve_solvable(const SolvableSpec& spec, const ProjValue& y0, double t,
                         double quad_tol = 1e-10);

struct CriterionReport {
  bool holds = false;
  double K = 0.0;             // detected middle coefficient c1
  double L = 0.0;             // c0 * c2
  double max_deviation = 0.0;
  ScalarCurve D;              // reparametrisation rate sqrt(b0 b2 / (c0 c2))
  ScalarCurve scale;          // y' = scale(t) y, scale = sqrt(b2 c0 / (b0 c2))
  std::optional<std::string> D_text, scale_text;  // when coefficients are symbolic
};

// Tests whether a time scaling plus the reparametrisation above maps the
// equation onto a solvable one with target outer coefficients c0, c2: the
// expression sqrt(c0 c2/(b0 b2)) (b1 + (b2'/b2 - b0'/b0)/2) must be
// constant on the grid within tol. Throws Error(zero_coefficient) when
// b0 b2 vanishes on the grid and Error(sign) when c0 c2/(b0 b2) < 0.
CriterionReport check_scaling_integrability(const RiccatiCoeffs& b, double c0,
                                            double c2,
                                            std::span<const double> grid,
                                            double tol = 1e-8);

// Pointwise multiplication (or division, with inverse = true) of every
// state component by scale(t). Throws Error(degenerate_scale) when the
// factor vanishes at a node.
Trajectory scale_solution(const ScalarCurve& scale, const Trajectory& y,
                          bool inverse = false);
ProjTrajectory scale_solution(const ScalarCurve& scale, const ProjTrajectory& y,
                              bool inverse = false);

}  // namespace liesys
