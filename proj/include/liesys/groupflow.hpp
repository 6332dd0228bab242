#pragma once

#include "liesys/liecore.hpp"
#include "liesys/riccati.hpp"

namespace liesys {

// Sampled curve in SL(2,R); derivs holds the entrywise time derivative
// M(t) g(t) at each node.
struct SL2Curve {
  std::vector<double> times;
  std::vector<SL2Matrix> mats;
  std::vector<SL2Matrix> derivs;
  size_t size() const { return times.size(); }
};

// Solves g' = M(t) g, g(t0) = I, with M(t) = b0 a0 + b1 a1 + b2 a2 =
// [[b1/2, b0], [-b2, -b1/2]]. The determinant is renormalized to 1 after
// every accepted step. With a non-empty grid the curve is sampled there
// through dense output (renormalized again at the samples).
SL2Curve solve_group_equation(const RiccatiCoeffs& b, double t0, double t1,
                              const IntegratorOptions& opts = {},
                              std::span<const double> grid = {});

// x(t) = (g(t) . x0) under the projective action; x(t) then solves the
// quadratic scalar equation with the coefficients used for g.
ProjTrajectory transport_solution(const SL2Curve& g, const ProjValue& x0);

// Coefficient transport along a gauge curve A(t): reads the new
// coefficients off Mbar = A' A^-1 + A M A^-1 as b0' = Mbar_12,
// b2' = -Mbar_21, b1' = 2 Mbar_11. Agrees with transform_coefficients.
RiccatiCoeffs gauge_transform(const RiccatiCoeffs& b, const SL2MatrixCurve& A);

enum class Subalgebra { span_a0_a1, span_a1_a2 };

// True when the coefficient excluded by the subalgebra (b2 for span{a0,a1},
// b0 for span{a1,a2}) stays below tol on the grid.
bool check_subalgebra(const RiccatiCoeffs& b, Subalgebra which,
                      std::span<const double> grid, double tol = 1e-9);

}  // namespace liesys
