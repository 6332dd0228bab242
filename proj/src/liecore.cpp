#include "liesys/liecore.hpp"

#include <cmath>
#include <sstream>

#include "liesys/error.hpp"

namespace liesys {

SL2Matrix SL2Matrix::operator*(const SL2Matrix& o) const {
  return {a * o.a + b * o.c, a * o.b + b * o.d,
          c * o.a + d * o.c, c * o.b + d * o.d};
}

SL2Matrix SL2Matrix::inverse() const {
  double dt = det();
  if (dt == 0.0) throw Error(ErrorKind::invalid_curve, "singular matrix");
  return {d / dt, -b / dt, -c / dt, a / dt};
}

SL2Matrix SL2Matrix::renormalized() const {
  double dt = det();
  if (!(dt > 0.0))
    throw Error(ErrorKind::invalid_curve, "determinant must be positive to renormalize");
  double s = 1.0 / std::sqrt(dt);
  return {a * s, b * s, c * s, d * s};
}

void SL2Matrix::check_unit_det(double tol) const {
  if (std::fabs(det() - 1.0) > tol) {
    std::ostringstream os;
    os << "determinant " << det() << " deviates from 1 beyond " << tol;
    throw Error(ErrorKind::invalid_curve, os.str());
  }
}

SL2Matrix Sl2Element::matrix() const {
  return {0.5 * b1, b0, -b2, -0.5 * b1};
}

SL2Matrix basis_a0() { return {0.0, 1.0, 0.0, 0.0}; }
SL2Matrix basis_a1() { return {0.5, 0.0, 0.0, -0.5}; }
SL2Matrix basis_a2() { return {0.0, 0.0, -1.0, 0.0}; }

SL2Matrix expm_sl2(const Sl2Element& m, double s) {
  double mu2 = 0.25 * m.b1 * m.b1 - m.b0 * m.b2;
  double even, odd;  // exp(sM) = even * I + odd * M
  if (mu2 > 1e-14) {
    double mu = std::sqrt(mu2);
    even = std::cosh(s * mu);
    odd = std::sinh(s * mu) / mu;
  } else if (mu2 < -1e-14) {
    double w = std::sqrt(-mu2);
    even = std::cos(s * w);
    odd = std::sin(s * w) / w;
  } else {
    even = 1.0 + 0.5 * s * s * mu2;
    odd = s;
  }
  if (!std::isfinite(even) || !std::isfinite(odd))
    throw Error(ErrorKind::non_finite, "matrix exponential overflowed");
  SL2Matrix g{even + odd * 0.5 * m.b1, odd * m.b0, -odd * m.b2,
              even - odd * 0.5 * m.b1};
  return g.renormalized();
}

ProjValue ProjValue::finite(double x) {
  if (!std::isfinite(x))
    throw Error(ErrorKind::non_finite, "finite projective value must be finite");
  ProjValue v;
  v.x_ = x;
  return v;
}

ProjValue ProjValue::infinity() {
  ProjValue v;
  v.inf_ = true;
  return v;
}

double ProjValue::value() const {
  if (inf_) throw Error(ErrorKind::domain, "projective value is at infinity");
  return x_;
}

ProjValue mobius(const SL2Matrix& g, const ProjValue& x) {
  g.check_unit_det();
  if (x.is_infinity()) {
    if (g.c == 0.0) return ProjValue::infinity();
    return ProjValue::finite(g.a / g.c);
  }
  double v = x.value();
  double num = g.a * v + g.b;
  double den = g.c * v + g.d;
  if (den == 0.0) return ProjValue::infinity();
  double q = num / den;
  if (!std::isfinite(q)) return ProjValue::infinity();
  return ProjValue::finite(q);
}

std::vector<double> commutator_fd(const VectorField& X, const VectorField& Y,
                                  double t, std::span<const double> x, double h) {
  if (X.dim != Y.dim)
    throw Error(ErrorKind::usage, "bracket needs fields on the same space");
  size_t n = static_cast<size_t>(X.dim);
  if (x.size() != n)
    throw Error(ErrorKind::usage, "bracket point has the wrong dimension");
  if (!(h > 0.0)) throw Error(ErrorKind::usage, "bracket step must be > 0");

  auto eval = [&](const VectorField& F, std::span<const double> p) {
    std::vector<double> out(n);
    F.rhs(t, p, out);
    return out;
  };
  std::vector<double> Xx = eval(X, x);
  std::vector<double> Yx = eval(Y, x);
  std::vector<double> result(n, 0.0);
  std::vector<double> p(x.begin(), x.end());
  for (size_t j = 0; j < n; ++j) {
    double keep = p[j];
    p[j] = keep + h;
    std::vector<double> Yp = eval(Y, p), Xp = eval(X, p);
    p[j] = keep - h;
    std::vector<double> Ym = eval(Y, p), Xm = eval(X, p);
    p[j] = keep;
    for (size_t i = 0; i < n; ++i) {
      double dY = (Yp[i] - Ym[i]) / (2.0 * h);
      double dX = (Xp[i] - Xm[i]) / (2.0 * h);
      result[i] += Xx[j] * dY - Yx[j] * dX;
    }
  }
  return result;
}

double verify_structure_constants(
    std::span<const VectorField> fields, const StructureConstants& c,
    std::span<const std::pair<double, std::vector<double>>> points, double h) {
  size_t r = fields.size();
  if (c.size() != r)
    throw Error(ErrorKind::usage, "structure-constant table size mismatch");
  double worst = 0.0;
  for (const auto& [t, x] : points) {
    for (size_t alpha = 0; alpha < r; ++alpha) {
      for (size_t beta = 0; beta < r; ++beta) {
        if (alpha == beta) continue;
        std::vector<double> bracket =
            commutator_fd(fields[alpha], fields[beta], t, x, h);
        std::vector<double> expected(bracket.size(), 0.0);
        for (size_t gamma = 0; gamma < r; ++gamma) {
          double coeff = c[alpha][beta][gamma];
          if (coeff == 0.0) continue;
          std::vector<double> val(bracket.size());
          fields[gamma].rhs(t, x, val);
          for (size_t i = 0; i < val.size(); ++i) expected[i] += coeff * val[i];
        }
        for (size_t i = 0; i < bracket.size(); ++i)
          worst = std::max(worst, std::fabs(bracket[i] - expected[i]));
      }
    }
  }
  return worst;
}

namespace {

StructureConstants zero_table(size_t r) {
  return StructureConstants(
      r, std::vector<std::vector<double>>(r, std::vector<double>(r, 0.0)));
}

}  // namespace

std::array<VectorField, 3> riccati_generators() {
  VectorField x0{1, [](double, std::span<const double>, std::span<double> dx) {
                   dx[0] = 1.0;
                 }};
  VectorField x1{1, [](double, std::span<const double> x, std::span<double> dx) {
                   dx[0] = x[0];
                 }};
  VectorField x2{1, [](double, std::span<const double> x, std::span<double> dx) {
                   dx[0] = x[0] * x[0];
                 }};
  return {x0, x1, x2};
}

StructureConstants riccati_structure_table() {
  StructureConstants c = zero_table(3);
  c[0][1][0] = 1.0;   // [X0, X1] = X0
  c[1][0][0] = -1.0;
  c[0][2][1] = 2.0;   // [X0, X2] = 2 X1
  c[2][0][1] = -2.0;
  c[1][2][2] = 1.0;   // [X1, X2] = X2
  c[2][1][2] = -1.0;
  return c;
}

std::array<VectorField, 3> pinney_generators(double k) {
  VectorField l1{2, [](double, std::span<const double> x, std::span<double> dx) {
                   dx[0] = 0.0;
                   dx[1] = x[0];
                 }};
  VectorField l2{2, [k](double, std::span<const double> x, std::span<double> dx) {
                   dx[0] = x[1];
                   dx[1] = k / (x[0] * x[0] * x[0]);
                 }};
  VectorField l3{2, [](double, std::span<const double> x, std::span<double> dx) {
                   dx[0] = 0.5 * x[0];
                   dx[1] = -0.5 * x[1];
                 }};
  return {l1, l2, l3};
}

StructureConstants sode_structure_table() {
  StructureConstants c = zero_table(3);
  c[0][1][2] = 2.0;   // [L1, L2] = 2 L3
  c[1][0][2] = -2.0;
  c[0][2][0] = -1.0;  // [L1, L3] = -L1
  c[2][0][0] = 1.0;
  c[1][2][1] = 1.0;   // [L2, L3] = L2
  c[2][1][1] = -1.0;
  return c;
}

std::array<VectorField, 3> ermakov_generators(expr::Expression f,
                                              expr::Expression g) {
  VectorField n1{4, [](double, std::span<const double> x, std::span<double> dx) {
                   dx[0] = 0.0;
                   dx[1] = 0.0;
                   dx[2] = x[0];
                   dx[3] = x[1];
                 }};
  VectorField n2{4, [f, g](double, std::span<const double> s, std::span<double> dx) {
                   double x = s[0], y = s[1];
                   double u = y / x;
                   dx[0] = s[2];
                   dx[1] = s[3];
                   dx[2] = f(u) / (x * x * x);
                   dx[3] = g(u) / (y * y * y);
                 }};
  VectorField n3{4, [](double, std::span<const double> s, std::span<double> dx) {
                   dx[0] = 0.5 * s[0];
                   dx[1] = 0.5 * s[1];
                   dx[2] = -0.5 * s[2];
                   dx[3] = -0.5 * s[3];
                 }};
  return {n1, n2, n3};
}

SL2Matrix SL2MatrixCurve::eval(double t) const {
  SL2Matrix m{alpha(t), beta(t), gamma(t), delta(t)};
  if (std::fabs(m.det() - 1.0) > det_tol) {
    std::ostringstream os;
    os << "transformation curve determinant " << m.det() << " deviates from 1";
    throw Error(ErrorKind::invalid_curve, os.str(), t);
  }
  return m;
}

SL2Matrix SL2MatrixCurve::eval_derivative(double t) const {
  return {alpha.derivative_or_fd(t), beta.derivative_or_fd(t),
          gamma.derivative_or_fd(t), delta.derivative_or_fd(t)};
}

}  // namespace liesys
