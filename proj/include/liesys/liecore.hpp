#pragma once

#include <array>
#include <vector>

#include "liesys/curve.hpp"
#include "liesys/numkit.hpp"

namespace liesys {

// 2x2 real matrix, row-major [[a, b], [c, d]]. Group elements are expected
// to have unit determinant; check_unit_det enforces that where the algebra
// requires it (basis and algebra elements are plain traceless matrices and
// skip the check).
struct SL2Matrix {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  static SL2Matrix identity() { return {}; }
  double det() const { return a * d - b * c; }
  double trace() const { return a + d; }
  SL2Matrix operator*(const SL2Matrix& o) const;
  // Inverse through the adjugate and the actual determinant, so it stays
  // exact for near-unit-determinant matrices.
  SL2Matrix inverse() const;
  // Scales the matrix so det becomes exactly 1; det must be positive.
  SL2Matrix renormalized() const;
  void check_unit_det(double tol = 1e-9) const;
};

// Element b0*a0 + b1*a1 + b2*a2 of the coefficient algebra, where
//   a0 = [[0, 1], [0, 0]],  a1 = [[1/2, 0], [0, -1/2]],  a2 = [[0, 0], [-1, 0]].
// Its matrix form is [[b1/2, b0], [-b2, -b1/2]]; the one-parameter groups
// exp(s*a_i) act on the projective line with fundamental vector fields
// 1, x and x^2, matching the scalar quadratic equation exactly.
struct Sl2Element {
  double b0 = 0.0, b1 = 0.0, b2 = 0.0;
  SL2Matrix matrix() const;
};

SL2Matrix basis_a0();
SL2Matrix basis_a1();
SL2Matrix basis_a2();

// Closed-form exponential exp(s*M) for M traceless: M^2 = mu^2 * I with
// mu^2 = (b1/2)^2 - b0*b2, so the series collapses to cosh/sinh, cos/sin
// or the quadratic Taylor polynomial when |mu^2| <= 1e-14. The result is
// renormalized to unit determinant.
SL2Matrix expm_sl2(const Sl2Element& m, double s);

// Point of the projective line: a finite real or the point at infinity.
class ProjValue {
 public:
  static ProjValue finite(double x);
  static ProjValue infinity();

  bool is_infinity() const { return inf_; }
  double value() const;  // throws Error(domain) at infinity

 private:
  double x_ = 0.0;
  bool inf_ = false;
};

struct ProjTrajectory {
  std::vector<double> times;
  std::vector<ProjValue> values;
  size_t size() const { return times.size(); }
};

// Moebius action x -> (a x + b) / (c x + d), total on the projective line:
// a vanishing denominator (or an overflowing quotient) maps to infinity,
// and infinity maps to a/c (or stays at infinity when c = 0).
ProjValue mobius(const SL2Matrix& g, const ProjValue& x);

// Lie bracket [X, Y] at (t, x) via central differences with step h on each
// coordinate of the common domain.
std::vector<double> commutator_fd(const VectorField& X, const VectorField& Y,
                                  double t, std::span<const double> x, double h);

// c[alpha][beta][gamma] coefficients of [X_alpha, X_beta] = sum_gamma c * X_gamma.
using StructureConstants = std::vector<std::vector<std::vector<double>>>;

// Max over sample points and ordered pairs of the infinity-norm residual
// between the finite-difference bracket and the structure-constant
// combination.
double verify_structure_constants(
    std::span<const VectorField> fields, const StructureConstants& c,
    std::span<const std::pair<double, std::vector<double>>> points, double h);

// Generator sets closed under the bracket, with their structure tables.
// Scalar quadratic-equation fields 1, x, x^2 on the line:
//   [X0, X1] = X0, [X0, X2] = 2 X1, [X1, X2] = X2.
std::array<VectorField, 3> riccati_generators();
StructureConstants riccati_structure_table();

// Second-order one-dimensional fields on (x, v) for x'' = -w^2 x + k/x^3:
//   L1 = x d_v, L2 = (k/x^3) d_v + v d_x, L3 = (x d_x - v d_v)/2,
// with [L1, L2] = 2 L3, [L1, L3] = -L1, [L2, L3] = L2.
std::array<VectorField, 3> pinney_generators(double k);
StructureConstants sode_structure_table();

// Fields on (x, y, vx, vy) for the coupled second-order pair with
// homogeneous degree -3 forcings f(y/x)/x^3 and g(y/x)/y^3; same table as
// the Pinney generators.
std::array<VectorField, 3> ermakov_generators(expr::Expression f,
                                              expr::Expression g);

// Curve A(t) in SL(2,R) given by four scalar entry curves. eval checks the
// determinant against 1 within det_tol and throws Error(invalid_curve).
struct SL2MatrixCurve {
  ScalarCurve alpha, beta, gamma, delta;
  double det_tol = 1e-6;

  SL2Matrix eval(double t) const;
  // Entrywise derivative [[alpha', beta'], [gamma', delta']]; symbolic
  // derivatives are used when available, central differences otherwise.
  SL2Matrix eval_derivative(double t) const;
};

}  // namespace liesys
