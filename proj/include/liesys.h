/* C interface to the Lie-systems toolkit. Handles are opaque; every
 * fallible call returns a status and leaves a human-readable message in
 * liesys_last_error() (thread-local, valid until the next failing call on
 * the same thread). Out-parameters are written only on LIESYS_OK. */
#ifndef LIESYS_H
#define LIESYS_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum liesys_status {
  LIESYS_OK = 0,
  LIESYS_E_SYNTAX,
  LIESYS_E_UNKNOWN_IDENTIFIER,
  LIESYS_E_DOMAIN,
  LIESYS_E_NON_FINITE,
  LIESYS_E_BLOW_UP,
  LIESYS_E_MAX_STEPS,
  LIESYS_E_NO_CONVERGENCE,
  LIESYS_E_INVALID_CURVE,
  LIESYS_E_NOT_A_SOLUTION,
  LIESYS_E_COINCIDENT_SOLUTIONS,
  LIESYS_E_DEGENERATE_WRONSKIAN,
  LIESYS_E_ZERO_CROSSING,
  LIESYS_E_ZERO_COEFFICIENT,
  LIESYS_E_SIGN,
  LIESYS_E_DEGENERATE_SCALE,
  LIESYS_E_NEGATIVE_DISCRIMINANT,
  LIESYS_E_NEGATIVE_RADICAND,
  LIESYS_E_ZERO_WRONSKIAN,
  LIESYS_E_GRID_MISMATCH,
  LIESYS_E_SINGULARITY,
  LIESYS_E_USAGE,
  LIESYS_E_INTERNAL
} liesys_status;

const char* liesys_last_error(void);
const char* liesys_version(void);
void liesys_free_string(char* s);

/* Opaque handles. */
typedef struct liesys_expr liesys_expr;
typedef struct liesys_curve liesys_curve;
typedef struct liesys_coeffs liesys_coeffs;
typedef struct liesys_traj liesys_traj;
typedef struct liesys_ptraj liesys_ptraj;
typedef struct liesys_slcurve liesys_slcurve;

/* Point of the projective line: x is ignored when is_inf != 0. */
typedef struct liesys_pvalue {
  int is_inf;
  double x;
} liesys_pvalue;

typedef struct liesys_integrator_opts {
  int fixed_step; /* nonzero: classical RK4 with `step`, else adaptive */
  double step;
  double abs_tol;
  double rel_tol;
  long max_steps;
  double blow_up;
} liesys_integrator_opts;

void liesys_integrator_opts_default(liesys_integrator_opts* opts);

/* ---- expressions in one variable t ---- */
liesys_status liesys_expr_parse(const char* text, liesys_expr** out);
liesys_status liesys_expr_eval(const liesys_expr* e, double t, double* out);
liesys_status liesys_expr_derivative(const liesys_expr* e, liesys_expr** out);
/* *out is heap-allocated; release with liesys_free_string. */
liesys_status liesys_expr_to_string(const liesys_expr* e, char** out);
void liesys_expr_free(liesys_expr* e);

/* ---- scalar curves t -> R ---- */
liesys_status liesys_curve_from_expr(const liesys_expr* e, liesys_curve** out);
liesys_status liesys_curve_constant(double value, liesys_curve** out);
liesys_status liesys_curve_eval(const liesys_curve* c, double t, double* out);
/* Symbolic derivative when available, central difference otherwise. */
liesys_status liesys_curve_derivative(const liesys_curve* c, double t, double* out);
void liesys_curve_free(liesys_curve* c);

liesys_status liesys_quadrature(const liesys_curve* f, double a, double b,
                                double tol, double* out);

/* ---- coefficients of x' = b0 + b1 x + b2 x^2 ---- */
liesys_status liesys_coeffs_create(const liesys_curve* b0, const liesys_curve* b1,
                                   const liesys_curve* b2, liesys_coeffs** out);
liesys_status liesys_coeffs_parse(const char* b0, const char* b1, const char* b2,
                                  liesys_coeffs** out);
liesys_status liesys_coeffs_eval(const liesys_coeffs* b, double t, double out[3]);
void liesys_coeffs_free(liesys_coeffs* b);

/* ---- sampled trajectories ---- */
size_t liesys_traj_size(const liesys_traj* tr);
int liesys_traj_dim(const liesys_traj* tr);
liesys_status liesys_traj_node(const liesys_traj* tr, size_t i, double* t,
                               double* state /* dim doubles */);
liesys_status liesys_traj_sample(const liesys_traj* tr, double t, double* state);
void liesys_traj_free(liesys_traj* tr);

size_t liesys_ptraj_size(const liesys_ptraj* tr);
liesys_status liesys_ptraj_node(const liesys_ptraj* tr, size_t i, double* t,
                                liesys_pvalue* v);
void liesys_ptraj_free(liesys_ptraj* tr);

size_t liesys_slcurve_size(const liesys_slcurve* g);
liesys_status liesys_slcurve_node(const liesys_slcurve* g, size_t i, double* t,
                                  double mat[4] /* row-major a b c d */);
void liesys_slcurve_free(liesys_slcurve* g);

/* ---- scalar quadratic equation ----
 * grid may be NULL (n = 0) to keep the integrator's own nodes; opts may be
 * NULL for defaults. */
liesys_status liesys_riccati_solve(const liesys_coeffs* b, liesys_pvalue x0,
                                   double t0, double t1,
                                   const liesys_integrator_opts* opts,
                                   const double* grid, size_t n,
                                   liesys_ptraj** out);

liesys_status liesys_riccati_superpose_point(liesys_pvalue x1, liesys_pvalue x2,
                                             liesys_pvalue x3, double k,
                                             liesys_pvalue* out);
liesys_status liesys_riccati_superpose(const liesys_ptraj* x1,
                                       const liesys_ptraj* x2,
                                       const liesys_ptraj* x3, double k,
                                       liesys_ptraj** out);
liesys_status liesys_cross_ratio(liesys_pvalue x, liesys_pvalue x1,
                                 liesys_pvalue x2, liesys_pvalue x3, double* out);

/* Removes the inhomogeneous term using a particular solution given as an
 * expression; the candidate is validated on check_grid. */
liesys_status liesys_riccati_reduce(const liesys_coeffs* b, const liesys_expr* x1,
                                    const double* check_grid, size_t n,
                                    liesys_coeffs** out);

/* Coefficient transport along the unit-determinant curve
 * [[alpha, beta], [gamma, delta]]; via_closure selects the matrix-closure
 * route instead of the explicit entry formulas (both agree). */
liesys_status liesys_riccati_transform(const liesys_coeffs* b,
                                       const liesys_expr* alpha,
                                       const liesys_expr* beta,
                                       const liesys_expr* gamma,
                                       const liesys_expr* delta, int via_closure,
                                       liesys_coeffs** out);

liesys_status liesys_riccati_solve_linear(const liesys_curve* b0,
                                          const liesys_curve* b1, double x0,
                                          double t0, const double* grid, size_t n,
                                          double quad_tol, liesys_traj** out);

/* y'(tau) = c0 + c1 y + c2 y^2 with tau(t) = int_0^t D, solved in closed
 * form. */
liesys_status liesys_riccati_solve_solvable(double c0, double c1, double c2,
                                            const liesys_curve* D,
                                            liesys_pvalue y0, double t,
                                            double quad_tol, liesys_pvalue* out);

/* D, scale, D_text and scale_text are owned by the report; texts may be
 * NULL when the coefficients carry no symbolic form. Release with
 * liesys_criterion_report_clear. */
typedef struct liesys_criterion_report {
  int holds;
  double K;
  double L;
  double max_deviation;
  liesys_curve* D;
  liesys_curve* scale;
  char* D_text;
  char* scale_text;
} liesys_criterion_report;

liesys_status liesys_riccati_check_integrability(const liesys_coeffs* b,
                                                 double c0, double c2,
                                                 const double* grid, size_t n,
                                                 double tol,
                                                 liesys_criterion_report* out);
void liesys_criterion_report_clear(liesys_criterion_report* report);

liesys_status liesys_scale_ptraj(const liesys_curve* scale, const liesys_ptraj* y,
                                 int inverse, liesys_ptraj** out);

/* ---- group-level transport ---- */
liesys_status liesys_group_solve(const liesys_coeffs* b, double t0, double t1,
                                 const liesys_integrator_opts* opts,
                                 const double* grid, size_t n,
                                 liesys_slcurve** out);
liesys_status liesys_group_transport(const liesys_slcurve* g, liesys_pvalue x0,
                                     liesys_ptraj** out);
/* which: 0 checks b2 = 0 (affine subalgebra), 1 checks b0 = 0. */
liesys_status liesys_check_subalgebra(const liesys_coeffs* b, int which,
                                      const double* grid, size_t n, double tol,
                                      int* holds);

/* Max finite-difference residual of the structure relations of the named
 * generator set ("riccati", "pinney", "ermakov") at npoints random states.
 * f and g are needed for "ermakov", k for "pinney"; the rest ignore them. */
liesys_status liesys_verify_algebra(const char* system, const char* f,
                                    const char* g, double k, int npoints,
                                    unsigned seed, double h,
                                    double* max_residual);

/* ---- oscillator, Pinney and coupled second-order systems ----
 * States are interleaved (x1, v1, ..., xn, vn) for the oscillator and laid
 * out as documented per call otherwise. */
liesys_status liesys_oscillator_solve(const liesys_curve* omega,
                                      const liesys_curve* mass /* NULL: 1 */,
                                      const double* state, int copies, double t0,
                                      double t1, const liesys_integrator_opts* opts,
                                      const double* grid, size_t n,
                                      liesys_traj** out);
liesys_status liesys_pinney_solve(const liesys_curve* omega, double k, double x0,
                                  double v0, double t0, double t1,
                                  const liesys_integrator_opts* opts,
                                  const double* grid, size_t n,
                                  liesys_traj** out);
/* state: (x, y, vx, vy); forcings f(y/x)/x^3 and g(y/x)/y^3. */
liesys_status liesys_ermakov_solve(const liesys_curve* omega, const liesys_expr* f,
                                   const liesys_expr* g, const double state[4],
                                   double t0, double t1,
                                   const liesys_integrator_opts* opts,
                                   const double* grid, size_t n,
                                   liesys_traj** out);
/* state: (x, y, z, vx, vy, vz), y the Pinney variable with forcing c/y^3. */
liesys_status liesys_pinney_joint_solve(const liesys_curve* omega, double c,
                                        const double state[6], double t0,
                                        double t1,
                                        const liesys_integrator_opts* opts,
                                        const double* grid, size_t n,
                                        liesys_traj** out);

double liesys_wronskian(double x, double vx, double z, double vz);

liesys_status liesys_partial_superpose(const liesys_traj* x1, double k,
                                       double kprime, double quad_tol,
                                       liesys_traj** out);
liesys_status liesys_linear_superpose(const liesys_traj* s1, const liesys_traj* s2,
                                      double k1, double k2, liesys_traj** out);
liesys_status liesys_coefficients_from_state(const liesys_traj* s1,
                                             const liesys_traj* s2, double t,
                                             double x, double v, double* k1,
                                             double* k2);

liesys_status liesys_ermakov_invariant(double k, const double state[4],
                                       double* out);
liesys_status liesys_generalized_invariant(const liesys_expr* f,
                                           const liesys_expr* g,
                                           const double state[4], double quad_tol,
                                           double* out);
/* out: (I1, I2, W). */
liesys_status liesys_pinney_invariants(const double state[6], double c,
                                       double out[3]);
/* branch_minus selects the minus sign in front of the mixed term. */
liesys_status liesys_pinney_superpose(double x, double vx, double z, double vz,
                                      double I1, double I2, double W, double c,
                                      int branch_minus, double* y, double* vy);

#ifdef __cplusplus
}
#endif

#endif /* LIESYS_H */
