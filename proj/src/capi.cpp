#include "liesys.h"

#include <cstdlib>
#include <cstring>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "liesys/ermakov.hpp"
#include "liesys/error.hpp"
#include "liesys/groupflow.hpp"

struct liesys_expr {
  liesys::expr::Expression e;
};
struct liesys_curve {
  liesys::ScalarCurve c;
};
struct liesys_coeffs {
  liesys::RiccatiCoeffs b;
};
struct liesys_traj {
  liesys::Trajectory tr;
};
struct liesys_ptraj {
  liesys::ProjTrajectory tr;
};
struct liesys_slcurve {
  liesys::SL2Curve g;
};

namespace {

thread_local std::string g_error;

liesys_status map_kind(liesys::ErrorKind k) {
  using E = liesys::ErrorKind;
  switch (k) {
    case E::syntax: return LIESYS_E_SYNTAX;
    case E::unknown_identifier: return LIESYS_E_UNKNOWN_IDENTIFIER;
    case E::domain: return LIESYS_E_DOMAIN;
    case E::non_finite: return LIESYS_E_NON_FINITE;
    case E::blow_up: return LIESYS_E_BLOW_UP;
    case E::max_steps: return LIESYS_E_MAX_STEPS;
    case E::no_convergence: return LIESYS_E_NO_CONVERGENCE;
    case E::invalid_curve: return LIESYS_E_INVALID_CURVE;
    case E::not_a_solution: return LIESYS_E_NOT_A_SOLUTION;
    case E::coincident_solutions: return LIESYS_E_COINCIDENT_SOLUTIONS;
    case E::degenerate_wronskian: return LIESYS_E_DEGENERATE_WRONSKIAN;
    case E::zero_crossing: return LIESYS_E_ZERO_CROSSING;
    case E::zero_coefficient: return LIESYS_E_ZERO_COEFFICIENT;
    case E::sign: return LIESYS_E_SIGN;
    case E::degenerate_scale: return LIESYS_E_DEGENERATE_SCALE;
    case E::negative_discriminant: return LIESYS_E_NEGATIVE_DISCRIMINANT;
    case E::negative_radicand: return LIESYS_E_NEGATIVE_RADICAND;
    case E::zero_wronskian: return LIESYS_E_ZERO_WRONSKIAN;
    case E::grid_mismatch: return LIESYS_E_GRID_MISMATCH;
    case E::singularity: return LIESYS_E_SINGULARITY;
    case E::usage: return LIESYS_E_USAGE;
    case E::internal: return LIESYS_E_INTERNAL;
  }
  return LIESYS_E_INTERNAL;
}

template <class F>
liesys_status guard(F&& fn) {
  try {
    fn();
    return LIESYS_OK;
  } catch (const liesys::Error& e) {
    g_error = e.what();
    return map_kind(e.kind());
  } catch (const std::exception& e) {
    g_error = std::string("internal error: ") + e.what();
    return LIESYS_E_INTERNAL;
  } catch (...) {
    g_error = "internal error";
    return LIESYS_E_INTERNAL;
  }
}

liesys_status fail_usage(const char* msg) {
  g_error = std::string("usage error: ") + msg;
  return LIESYS_E_USAGE;
}

liesys::IntegratorOptions to_opts(const liesys_integrator_opts* o) {
  liesys::IntegratorOptions r;
  if (!o) return r;
  r.method = o->fixed_step ? liesys::Method::rk4_fixed
                           : liesys::Method::rk45_adaptive;
  r.step = o->step;
  r.abs_tol = o->abs_tol;
  r.rel_tol = o->rel_tol;
  r.max_steps = o->max_steps;
  r.blow_up = o->blow_up;
  return r;
}

liesys::ProjValue to_proj(liesys_pvalue v) {
  return v.is_inf ? liesys::ProjValue::infinity()
                  : liesys::ProjValue::finite(v.x);
}

liesys_pvalue from_proj(const liesys::ProjValue& v) {
  liesys_pvalue out;
  out.is_inf = v.is_infinity() ? 1 : 0;
  out.x = out.is_inf ? 0.0 : v.value();
  return out;
}

std::span<const double> to_span(const double* p, size_t n) {
  return {p, p ? n : 0};
}

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

liesys::Trajectory maybe_resample(liesys::Trajectory tr, const double* grid,
                                  size_t n) {
  if (!grid || n == 0) return tr;
  return tr.resampled(to_span(grid, n));
}

}  // namespace

extern "C" {

const char* liesys_last_error(void) { return g_error.c_str(); }

const char* liesys_version(void) { return "0.1.0"; }

void liesys_free_string(char* s) { std::free(s); }

void liesys_integrator_opts_default(liesys_integrator_opts* opts) {
  if (!opts) return;
  liesys::IntegratorOptions d;
  opts->fixed_step = 0;
  opts->step = d.step;
  opts->abs_tol = d.abs_tol;
  opts->rel_tol = d.rel_tol;
  opts->max_steps = d.max_steps;
  opts->blow_up = d.blow_up;
}

liesys_status liesys_expr_parse(const char* text, liesys_expr** out) {
  if (!text || !out) return fail_usage("null argument");
  return guard([&] {
    *out = new liesys_expr{liesys::expr::Expression::parse(text)};
  });
}

liesys_status liesys_expr_eval(const liesys_expr* e, double t, double* out) {
  if (!e || !out) return fail_usage("null argument");
  return guard([&] { *out = e->e(t); });
}

liesys_status liesys_expr_derivative(const liesys_expr* e, liesys_expr** out) {
  if (!e || !out) return fail_usage("null argument");
  return guard([&] { *out = new liesys_expr{e->e.derivative()}; });
}

liesys_status liesys_expr_to_string(const liesys_expr* e, char** out) {
  if (!e || !out) return fail_usage("null argument");
  return guard([&] { *out = dup_string(e->e.str()); });
}

void liesys_expr_free(liesys_expr* e) { delete e; }

liesys_status liesys_curve_from_expr(const liesys_expr* e, liesys_curve** out) {
  if (!e || !out) return fail_usage("null argument");
  return guard([&] {
    *out = new liesys_curve{liesys::ScalarCurve::from_expression(e->e)};
  });
}

liesys_status liesys_curve_constant(double value, liesys_curve** out) {
  if (!out) return fail_usage("null argument");
  return guard([&] {
    *out = new liesys_curve{liesys::ScalarCurve::constant(value)};
  });
}

liesys_status liesys_curve_eval(const liesys_curve* c, double t, double* out) {
  if (!c || !out) return fail_usage("null argument");
  return guard([&] { *out = c->c(t); });
}

liesys_status liesys_curve_derivative(const liesys_curve* c, double t,
                                      double* out) {
  if (!c || !out) return fail_usage("null argument");
  return guard([&] { *out = c->c.derivative_or_fd(t); });
}

void liesys_curve_free(liesys_curve* c) { delete c; }

liesys_status liesys_quadrature(const liesys_curve* f, double a, double b,
                                double tol, double* out) {
  if (!f || !out) return fail_usage("null argument");
  return guard([&] { *out = liesys::quadrature(f->c, a, b, tol); });
}

liesys_status liesys_coeffs_create(const liesys_curve* b0, const liesys_curve* b1,
                                   const liesys_curve* b2, liesys_coeffs** out) {
  if (!b0 || !b1 || !b2 || !out) return fail_usage("null argument");
  return guard([&] {
    *out = new liesys_coeffs{{b0->c, b1->c, b2->c}};
  });
}

liesys_status liesys_coeffs_parse(const char* b0, const char* b1, const char* b2,
                                  liesys_coeffs** out) {
  if (!b0 || !b1 || !b2 || !out) return fail_usage("null argument");
  return guard([&] {
    using liesys::ScalarCurve;
    using liesys::expr::Expression;
    *out = new liesys_coeffs{
        {ScalarCurve::from_expression(Expression::parse(b0)),
         ScalarCurve::from_expression(Expression::parse(b1)),
         ScalarCurve::from_expression(Expression::parse(b2))}};
  });
}

liesys_status liesys_coeffs_eval(const liesys_coeffs* b, double t, double out[3]) {
  if (!b || !out) return fail_usage("null argument");
  return guard([&] {
    out[0] = b->b.b0(t);
    out[1] = b->b.b1(t);
    out[2] = b->b.b2(t);
  });
}

void liesys_coeffs_free(liesys_coeffs* b) { delete b; }

size_t liesys_traj_size(const liesys_traj* tr) { return tr ? tr->tr.size() : 0; }

int liesys_traj_dim(const liesys_traj* tr) { return tr ? tr->tr.dim : 0; }

liesys_status liesys_traj_node(const liesys_traj* tr, size_t i, double* t,
                               double* state) {
  if (!tr || !t || !state) return fail_usage("null argument");
  if (i >= tr->tr.size()) return fail_usage("node index out of range");
  *t = tr->tr.times[i];
  const std::vector<double>& row = tr->tr.states[i];
  std::memcpy(state, row.data(), row.size() * sizeof(double));
  return LIESYS_OK;
}

liesys_status liesys_traj_sample(const liesys_traj* tr, double t, double* state) {
  if (!tr || !state) return fail_usage("null argument");
  return guard([&] {
    std::vector<double> row = tr->tr.sample(t);
    std::memcpy(state, row.data(), row.size() * sizeof(double));
  });
}

void liesys_traj_free(liesys_traj* tr) { delete tr; }

size_t liesys_ptraj_size(const liesys_ptraj* tr) {
  return tr ? tr->tr.size() : 0;
}

liesys_status liesys_ptraj_node(const liesys_ptraj* tr, size_t i, double* t,
                                liesys_pvalue* v) {
  if (!tr || !t || !v) return fail_usage("null argument");
  if (i >= tr->tr.size()) return fail_usage("node index out of range");
  *t = tr->tr.times[i];
  *v = from_proj(tr->tr.values[i]);
  return LIESYS_OK;
}

void liesys_ptraj_free(liesys_ptraj* tr) { delete tr; }

size_t liesys_slcurve_size(const liesys_slcurve* g) {
  return g ? g->g.size() : 0;
}

liesys_status liesys_slcurve_node(const liesys_slcurve* g, size_t i, double* t,
                                  double mat[4]) {
  if (!g || !t || !mat) return fail_usage("null argument");
  if (i >= g->g.size()) return fail_usage("node index out of range");
  *t = g->g.times[i];
  const liesys::SL2Matrix& m = g->g.mats[i];
  mat[0] = m.a;
  mat[1] = m.b;
  mat[2] = m.c;
  mat[3] = m.d;
  return LIESYS_OK;
}

void liesys_slcurve_free(liesys_slcurve* g) { delete g; }

liesys_status liesys_riccati_solve(const liesys_coeffs* b, liesys_pvalue x0,
                                   double t0, double t1,
                                   const liesys_integrator_opts* opts,
                                   const double* grid, size_t n,
                                   liesys_ptraj** out) {
  if (!b || !out) return fail_usage("null argument");
  return guard([&] {
    *out = new liesys_ptraj{liesys::solve_direct(
        b->b, to_proj(x0), t0, t1, to_opts(opts), to_span(grid, n))};
  });
}

liesys_status liesys_riccati_superpose_point(liesys_pvalue x1, liesys_pvalue x2,
                                             liesys_pvalue x3, double k,
                                             liesys_pvalue* out) {
  if (!out) return fail_usage("null argument");
  return guard([&] {
    *out = from_proj(liesys::cross_ratio_superpose(to_proj(x1), to_proj(x2),
                                                   to_proj(x3), k));
  });
}

liesys_status liesys_riccati_superpose(const liesys_ptraj* x1,
                                       const liesys_ptraj* x2,
                                       const liesys_ptraj* x3, double k,
                                       liesys_ptraj** out) {
  if (!x1 || !x2 || !x3 || !out) return fail_usage("null argument");
  return guard([&] {
    *out = new liesys_ptraj{
        liesys::cross_ratio_superpose(x1->tr, x2->tr, x3->tr, k)};
  });
}

liesys_status liesys_cross_ratio(liesys_pvalue x, liesys_pvalue x1,
                                 liesys_pvalue x2, liesys_pvalue x3,
                                 double* out) {
  if (!out) return fail_usage("null argument");
  return guard([&] {
    *out = liesys::cross_ratio_value(to_proj(x), to_proj(x1), to_proj(x2),
                                     to_proj(x3));
  });
}

liesys_status liesys_riccati_reduce(const liesys_coeffs* b, const liesys_expr* x1,
                                    const double* check_grid, size_t n,
                                    liesys_coeffs** out) {
  if (!b || !x1 || !check_grid || n == 0 || !out)
    return fail_usage("null argument");
  return guard([&] {
    liesys::ScalarCurve c = liesys::ScalarCurve::from_expression(x1->e);
    *out = new liesys_coeffs{
        liesys::reduce_by_particular(b->b, c, to_span(check_grid, n))};
  });
}

liesys_status liesys_riccati_transform(const liesys_coeffs* b,
                                       const liesys_expr* alpha,
                                       const liesys_expr* beta,
                                       const liesys_expr* gamma,
                                       const liesys_expr* delta, int via_closure,
                                       liesys_coeffs** out) {
  if (!b || !alpha || !beta || !gamma || !delta || !out)
    return fail_usage("null argument");
  return guard([&] {
    using liesys::ScalarCurve;
    liesys::SL2MatrixCurve A{ScalarCurve::from_expression(alpha->e),
                             ScalarCurve::from_expression(beta->e),
                             ScalarCurve::from_expression(gamma->e),
                             ScalarCurve::from_expression(delta->e)};
    *out = new liesys_coeffs{via_closure
                                 ? liesys::gauge_transform(b->b, A)
                                 : liesys::transform_coefficients(b->b, A)};
  });
}

liesys_status liesys_riccati_solve_linear(const liesys_curve* b0,
                                          const liesys_curve* b1, double x0,
                                          double t0, const double* grid, size_t n,
                                          double quad_tol, liesys_traj** out) {
  if (!b0 || !b1 || !grid || n == 0 || !out) return fail_usage("null argument");
  return guard([&] {
    *out = new liesys_traj{liesys::solve_linear_inhomogeneous(
        b0->c, b1->c, x0, t0, to_span(grid, n), quad_tol)};
  });
}

liesys_status liesys_riccati_solve_solvable(double c0, double c1, double c2,
                                            const liesys_curve* D,
                                            liesys_pvalue y0, double t,
                                            double quad_tol, liesys_pvalue* out) {
  if (!D || !out) return fail_usage("null argument");
  return guard([&] {
    liesys::SolvableSpec spec{c0, c1, c2, D->c};
    *out = from_proj(liesys::solve_solvable(spec, to_proj(y0), t, quad_tol));
  });
}

liesys_status liesys_riccati_check_integrability(const liesys_coeffs* b,
                                                 double c0, double c2,
                                                 const double* grid, size_t n,
                                                 double tol,
                                                 liesys_criterion_report* out) {
  if (!b || !grid || n == 0 || !out) return fail_usage("null argument");
  return guard([&] {
    liesys::CriterionReport r = liesys::check_scaling_integrability(
        b->b, c0, c2, to_span(grid, n), tol);
    out->holds = r.holds ? 1 : 0;
    out->K = r.K;
    out->L = r.L;
    out->max_deviation = r.max_deviation;
    out->D = new liesys_curve{r.D};
    out->scale = new liesys_curve{r.scale};
    out->D_text = r.D_text ? dup_string(*r.D_text) : nullptr;
    out->scale_text = r.scale_text ? dup_string(*r.scale_text) : nullptr;
  });
}

void liesys_criterion_report_clear(liesys_criterion_report* report) {
  if (!report) return;
  liesys_curve_free(report->D);
  liesys_curve_free(report->scale);
  std::free(report->D_text);
  std::free(report->scale_text);
  report->D = report->scale = nullptr;
  report->D_text = report->scale_text = nullptr;
}

liesys_status liesys_scale_ptraj(const liesys_curve* scale, const liesys_ptraj* y,
                                 int inverse, liesys_ptraj** out) {
  if (!scale || !y || !out) return fail_usage("null argument");
  return guard([&] {
    *out = new liesys_ptraj{
        liesys::scale_solution(scale->c, y->tr, inverse != 0)};
  });
}

liesys_status liesys_group_solve(const liesys_coeffs* b, double t0, double t1,
                                 const liesys_integrator_opts* opts,
                                 const double* grid, size_t n,
                                 liesys_slcurve** out) {
  if (!b || !out) return fail_usage("null argument");
  return guard([&] {
    *out = new liesys_slcurve{liesys::solve_group_equation(
        b->b, t0, t1, to_opts(opts), to_span(grid, n))};
  });
}

liesys_status liesys_group_transport(const liesys_slcurve* g, liesys_pvalue x0,
                                     liesys_ptraj** out) {
  if (!g || !out) return fail_usage("null argument");
  return guard([&] {
    *out = new liesys_ptraj{liesys::transport_solution(g->g, to_proj(x0))};
  });
}

liesys_status liesys_check_subalgebra(const liesys_coeffs* b, int which,
                                      const double* grid, size_t n, double tol,
                                      int* holds) {
  if (!b || !grid || n == 0 || !holds) return fail_usage("null argument");
  if (which != 0 && which != 1) return fail_usage("subalgebra selector must be 0 or 1");
  return guard([&] {
    liesys::Subalgebra s = which == 0 ? liesys::Subalgebra::span_a0_a1
                                      : liesys::Subalgebra::span_a1_a2;
    *holds = liesys::check_subalgebra(b->b, s, to_span(grid, n), tol) ? 1 : 0;
  });
}

liesys_status liesys_verify_algebra(const char* system, const char* f,
                                    const char* g, double k, int npoints,
                                    unsigned seed, double h,
                                    double* max_residual) {
  if (!system || !max_residual) return fail_usage("null argument");
  if (npoints < 1) return fail_usage("need at least one sample point");
  return guard([&] {
    using liesys::VectorField;
    std::string name = system;
    std::array<VectorField, 3> fields;
    liesys::StructureConstants table;
    int dim = 0;
    if (name == "riccati") {
      fields = liesys::riccati_generators();
      table = liesys::riccati_structure_table();
      dim = 1;
    } else if (name == "pinney") {
      fields = liesys::pinney_generators(k);
      table = liesys::sode_structure_table();
      dim = 2;
    } else if (name == "ermakov") {
      if (!f || !g)
        throw liesys::Error(liesys::ErrorKind::usage,
                            "coupling expressions f and g are required");
      fields = liesys::ermakov_generators(liesys::expr::Expression::parse(f),
                                          liesys::expr::Expression::parse(g));
      table = liesys::sode_structure_table();
      dim = 4;
    } else {
      throw liesys::Error(liesys::ErrorKind::usage,
                          "unknown generator set: " + name);
    }
    if (h <= 0.0) h = 1e-5;
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> pos(0.5, 2.0), vel(-1.0, 1.0),
        time(-1.0, 1.0), line(-2.0, 2.0);
    std::vector<std::pair<double, std::vector<double>>> points;
    points.reserve(static_cast<size_t>(npoints));
    for (int i = 0; i < npoints; ++i) {
      std::vector<double> x(static_cast<size_t>(dim));
      if (dim == 1) {
        x[0] = line(rng);
      } else if (dim == 2) {
        x[0] = pos(rng);
        x[1] = vel(rng);
      } else {
        x[0] = pos(rng);
        x[1] = pos(rng);
        x[2] = vel(rng);
        x[3] = vel(rng);
      }
      points.emplace_back(time(rng), std::move(x));
    }
    *max_residual = liesys::verify_structure_constants(fields, table, points, h);
  });
}

liesys_status liesys_oscillator_solve(const liesys_curve* omega,
                                      const liesys_curve* mass,
                                      const double* state, int copies, double t0,
                                      double t1,
                                      const liesys_integrator_opts* opts,
                                      const double* grid, size_t n,
                                      liesys_traj** out) {
  if (!omega || !state || !out) return fail_usage("null argument");
  if (copies < 1) return fail_usage("need at least one oscillator copy");
  return guard([&] {
    liesys::OscillatorSpec spec;
    spec.omega = omega->c;
    if (mass) spec.mass = mass->c;
    liesys::VectorField field = liesys::oscillator_field(spec, copies);
    liesys::Trajectory tr = liesys::integrate_ode(
        field, to_span(state, static_cast<size_t>(2 * copies)), t0, t1,
        to_opts(opts));
    *out = new liesys_traj{maybe_resample(std::move(tr), grid, n)};
  });
}

liesys_status liesys_pinney_solve(const liesys_curve* omega, double k, double x0,
                                  double v0, double t0, double t1,
                                  const liesys_integrator_opts* opts,
                                  const double* grid, size_t n,
                                  liesys_traj** out) {
  if (!omega || !out) return fail_usage("null argument");
  return guard([&] {
    liesys::PinneySpec spec{omega->c, k};
    const double s0[2] = {x0, v0};
    liesys::Trajectory tr = liesys::integrate_ode(liesys::pinney_field(spec), s0,
                                                  t0, t1, to_opts(opts));
    *out = new liesys_traj{maybe_resample(std::move(tr), grid, n)};
  });
}

liesys_status liesys_ermakov_solve(const liesys_curve* omega, const liesys_expr* f,
                                   const liesys_expr* g, const double state[4],
                                   double t0, double t1,
                                   const liesys_integrator_opts* opts,
                                   const double* grid, size_t n,
                                   liesys_traj** out) {
  if (!omega || !f || !g || !state || !out) return fail_usage("null argument");
  return guard([&] {
    liesys::ErmakovSpec spec{omega->c, f->e, g->e};
    liesys::Trajectory tr = liesys::integrate_ode(
        liesys::ermakov_field(spec), std::span<const double>(state, 4), t0, t1,
        to_opts(opts));
    *out = new liesys_traj{maybe_resample(std::move(tr), grid, n)};
  });
}

liesys_status liesys_pinney_joint_solve(const liesys_curve* omega, double c,
                                        const double state[6], double t0,
                                        double t1,
                                        const liesys_integrator_opts* opts,
                                        const double* grid, size_t n,
                                        liesys_traj** out) {
  if (!omega || !state || !out) return fail_usage("null argument");
  return guard([&] {
    liesys::Trajectory tr = liesys::integrate_ode(
        liesys::pinney_oscillators_field(omega->c, c),
        std::span<const double>(state, 6), t0, t1, to_opts(opts));
    *out = new liesys_traj{maybe_resample(std::move(tr), grid, n)};
  });
}

double liesys_wronskian(double x, double vx, double z, double vz) {
  return liesys::wronskian(x, vx, z, vz);
}

liesys_status liesys_partial_superpose(const liesys_traj* x1, double k,
                                       double kprime, double quad_tol,
                                       liesys_traj** out) {
  if (!x1 || !out) return fail_usage("null argument");
  return guard([&] {
    *out = new liesys_traj{
        liesys::partial_superpose_oscillator(x1->tr, k, kprime, quad_tol)};
  });
}

liesys_status liesys_linear_superpose(const liesys_traj* s1, const liesys_traj* s2,
                                      double k1, double k2, liesys_traj** out) {
  if (!s1 || !s2 || !out) return fail_usage("null argument");
  return guard([&] {
    *out = new liesys_traj{liesys::linear_superpose(s1->tr, s2->tr, k1, k2)};
  });
}

liesys_status liesys_coefficients_from_state(const liesys_traj* s1,
                                             const liesys_traj* s2, double t,
                                             double x, double v, double* k1,
                                             double* k2) {
  if (!s1 || !s2 || !k1 || !k2) return fail_usage("null argument");
  return guard([&] {
    auto [a, b] = liesys::coefficients_from_state(s1->tr, s2->tr, t, x, v);
    *k1 = a;
    *k2 = b;
  });
}

liesys_status liesys_ermakov_invariant(double k, const double state[4],
                                       double* out) {
  if (!state || !out) return fail_usage("null argument");
  return guard([&] {
    *out = liesys::ermakov_invariant(k, std::span<const double>(state, 4));
  });
}

liesys_status liesys_generalized_invariant(const liesys_expr* f,
                                           const liesys_expr* g,
                                           const double state[4], double quad_tol,
                                           double* out) {
  if (!f || !g || !state || !out) return fail_usage("null argument");
  return guard([&] {
    liesys::ErmakovSpec spec{liesys::ScalarCurve::constant(0.0), f->e, g->e};
    *out = liesys::generalized_first_integral(
        spec, std::span<const double>(state, 4), quad_tol);
  });
}

liesys_status liesys_pinney_invariants(const double state[6], double c,
                                       double out[3]) {
  if (!state || !out) return fail_usage("null argument");
  return guard([&] {
    liesys::PinneyInvariants inv =
        liesys::pinney_invariants(std::span<const double>(state, 6), c);
    out[0] = inv.I1;
    out[1] = inv.I2;
    out[2] = inv.W;
  });
}

liesys_status liesys_pinney_superpose(double x, double vx, double z, double vz,
                                      double I1, double I2, double W, double c,
                                      int branch_minus, double* y, double* vy) {
  if (!y || !vy) return fail_usage("null argument");
  return guard([&] {
    liesys::PinneyInvariants inv;
    inv.I1 = I1;
    inv.I2 = I2;
    inv.W = W;
    inv.c = c;
    auto [yy, vv] = liesys::pinney_superpose(
        x, vx, z, vz, inv,
        branch_minus ? liesys::Branch::minus : liesys::Branch::plus);
    *y = yy;
    *vy = vv;
  });
}

}  // extern "C"
