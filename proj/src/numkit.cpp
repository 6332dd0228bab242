#include "liesys/numkit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "liesys/error.hpp"

namespace liesys {

namespace {

bool all_finite(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

}  // namespace

// -------------------------------------------------------------- Trajectory

double Trajectory::t_begin() const {
  if (times.empty()) throw Error(ErrorKind::usage, "empty trajectory");
  return times.front();
}

double Trajectory::t_end() const {
  if (times.empty()) throw Error(ErrorKind::usage, "empty trajectory");
  return times.back();
}

void Trajectory::validate() const {
  if (times.empty() || times.size() != states.size())
    throw Error(ErrorKind::internal, "trajectory shape mismatch");
  if (!derivs.empty() && derivs.size() != times.size())
    throw Error(ErrorKind::internal, "trajectory derivative shape mismatch");
  for (size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]))
      throw Error(ErrorKind::internal, "non-finite trajectory time");
    if (i > 0 && !(times[i] > times[i - 1]))
      throw Error(ErrorKind::internal, "trajectory times not strictly increasing");
    if (static_cast<int>(states[i].size()) != dim)
      throw Error(ErrorKind::internal, "trajectory row width mismatch");
    if (!all_finite(states[i]))
      throw Error(ErrorKind::internal, "non-finite trajectory state");
    if (!derivs.empty() &&
        (static_cast<int>(derivs[i].size()) != dim || !all_finite(derivs[i])))
      throw Error(ErrorKind::internal, "bad trajectory derivative row");
  }
}

namespace {

// Index of the segment containing t, with a little slack at the ends.
size_t locate_segment(const std::vector<double>& times, double t) {
  double span = times.back() - times.front();
  double slack = 1e-9 * std::max(1.0, std::fabs(span)) ;
  if (t < times.front() - slack || t > times.back() + slack)
    throw Error(ErrorKind::domain, "sample time outside trajectory range", t);
  auto it = std::upper_bound(times.begin(), times.end(), t);
  size_t i = (it == times.begin()) ? 0 : static_cast<size_t>(it - times.begin()) - 1;
  if (i >= times.size() - 1) i = times.size() - 2;
  return i;
}

// Three-point slope estimate at node i for trajectories without stored
// derivatives (e.g. loaded from CSV).
double fd_slope(const Trajectory& tr, size_t i, int c) {
  size_t n = tr.times.size();
  if (n == 1) return 0.0;
  auto x = [&](size_t j) { return tr.states[j][static_cast<size_t>(c)]; };
  if (n == 2) return (x(1) - x(0)) / (tr.times[1] - tr.times[0]);
  size_t j = std::min(std::max<size_t>(i, 1), n - 2);  // centre of the stencil
  double h1 = tr.times[j] - tr.times[j - 1];
  double h2 = tr.times[j + 1] - tr.times[j];
  double d1 = (x(j) - x(j - 1)) / h1;
  double d2 = (x(j + 1) - x(j)) / h2;
  // Value of the interpolating parabola's derivative at node i.
  double ti = tr.times[i];
  double tm = tr.times[j];
  double dd = (d2 - d1) / (h1 + h2);
  return d1 + (tm - tr.times[j - 1]) * dd + 2.0 * (ti - tm) * dd;
}

}  // namespace

double Trajectory::sample(double t, int component) const {
  if (times.size() == 1) {
    if (std::fabs(t - times[0]) > 1e-12)
      throw Error(ErrorKind::domain, "sample time outside trajectory range", t);
    return states[0][static_cast<size_t>(component)];
  }
  size_t i = locate_segment(times, t);
  double h = times[i + 1] - times[i];
  double th = (t - times[i]) / h;
  double x0 = states[i][static_cast<size_t>(component)];
  double x1 = states[i + 1][static_cast<size_t>(component)];
  double m0, m1;
  if (!derivs.empty()) {
    m0 = derivs[i][static_cast<size_t>(component)];
    m1 = derivs[i + 1][static_cast<size_t>(component)];
  } else {
    m0 = fd_slope(*this, i, component);
    m1 = fd_slope(*this, i + 1, component);
  }
  double h00 = (1.0 + 2.0 * th) * (1.0 - th) * (1.0 - th);
  double h10 = th * (1.0 - th) * (1.0 - th);
  double h01 = th * th * (3.0 - 2.0 * th);
  double h11 = th * th * (th - 1.0);
  return h00 * x0 + h10 * h * m0 + h01 * x1 + h11 * h * m1;
}

double Trajectory::sample_derivative(double t, int component) const {
  if (times.size() == 1)
    throw Error(ErrorKind::domain, "cannot differentiate a single sample", t);
  size_t i = locate_segment(times, t);
  double h = times[i + 1] - times[i];
  double th = (t - times[i]) / h;
  double x0 = states[i][static_cast<size_t>(component)];
  double x1 = states[i + 1][static_cast<size_t>(component)];
  double m0, m1;
  if (!derivs.empty()) {
    m0 = derivs[i][static_cast<size_t>(component)];
    m1 = derivs[i + 1][static_cast<size_t>(component)];
  } else {
    m0 = fd_slope(*this, i, component);
    m1 = fd_slope(*this, i + 1, component);
  }
  double d00 = (6.0 * th * th - 6.0 * th) / h;
  double d10 = 3.0 * th * th - 4.0 * th + 1.0;
  double d01 = (6.0 * th - 6.0 * th * th) / h;
  double d11 = 3.0 * th * th - 2.0 * th;
  return d00 * x0 + d10 * m0 + d01 * x1 + d11 * m1;
}

std::vector<double> Trajectory::sample(double t) const {
  std::vector<double> out(static_cast<size_t>(dim));
  for (int c = 0; c < dim; ++c) out[static_cast<size_t>(c)] = sample(t, c);
  return out;
}

Trajectory Trajectory::resampled(std::span<const double> grid) const {
  Trajectory out;
  out.dim = dim;
  out.times.assign(grid.begin(), grid.end());
  out.states.reserve(grid.size());
  out.derivs.reserve(grid.size());
  for (double t : grid) {
    out.states.push_back(sample(t));
    std::vector<double> d(static_cast<size_t>(dim));
    for (int c = 0; c < dim; ++c) d[static_cast<size_t>(c)] = sample_derivative(t, c);
    out.derivs.push_back(std::move(d));
  }
  out.validate();
  return out;
}

// -------------------------------------------------------------- integrator

namespace {

struct Dopri5 {
  // Dormand-Prince 5(4) coefficients.
  static constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0,
                          c5 = 8.0 / 9.0;
  static constexpr double a21 = 1.0 / 5.0;
  static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
  static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
  static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                          a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
  static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                          a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                          a65 = -5103.0 / 18656.0;
  static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                          b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
  static constexpr double e1 = 35.0 / 384.0 - 5179.0 / 57600.0;
  static constexpr double e3 = 500.0 / 1113.0 - 7571.0 / 16695.0;
  static constexpr double e4 = 125.0 / 192.0 - 393.0 / 640.0;
  static constexpr double e5 = -2187.0 / 6784.0 + 92097.0 / 339200.0;
  static constexpr double e6 = 11.0 / 84.0 - 187.0 / 2100.0;
  static constexpr double e7 = -1.0 / 40.0;
};

class Integration {
 public:
  Integration(const VectorField& field, std::span<const double> x0, double t0,
              double t1, const IntegratorOptions& opts, const StepHooks& hooks)
      : field_(field), t0_(t0), t1_(t1), opts_(opts), hooks_(hooks) {
    if (field.dim <= 0 || !field.rhs)
      throw Error(ErrorKind::usage, "vector field is not set up");
    if (static_cast<int>(x0.size()) != field.dim)
      throw Error(ErrorKind::usage, "initial state has the wrong dimension");
    if (!(t1 > t0))
      throw Error(ErrorKind::usage, "integration interval must have t1 > t0");
    n_ = static_cast<size_t>(field.dim);
    x_.assign(x0.begin(), x0.end());
    if (!all_finite(x_))
      throw Error(ErrorKind::non_finite, "initial state is not finite", t0);
    traj_.dim = field.dim;
  }

  Trajectory run() {
    t_ = t0_;
    f_ = eval(t_, x_);
    push_node(t_, x_, f_);
    if (hooks_.event) {
      event_prev_ = hooks_.event(t_, x_);
      event_armed_ = event_prev_ < -1e-14;
    }
    if (opts_.method == Method::rk4_fixed)
      run_rk4();
    else
      run_dopri5();
    traj_.validate();
    return std::move(traj_);
  }

 private:
  std::vector<double> eval(double t, std::span<const double> x) {
    std::vector<double> dx(n_);
    field_.rhs(t, x, dx);
    if (!all_finite(dx))
      throw Error(ErrorKind::non_finite, "vector field value is not finite", t);
    return dx;
  }

  void push_node(double t, const std::vector<double>& x, const std::vector<double>& f) {
    traj_.times.push_back(t);
    traj_.states.push_back(x);
    traj_.derivs.push_back(f);
  }

  void bump_steps(double t) {
    if (++steps_ > opts_.max_steps)
      throw Error(ErrorKind::max_steps, "integrator exceeded max_steps", t);
  }

  // Accepts the step (t -> t_new, state x_new with field value f_new).
  // Returns false when an event fired and integration must stop.
  bool accept(double t_new, std::vector<double> x_new, std::vector<double> f_new) {
    if (hooks_.post_step) {
      hooks_.post_step(t_new, x_new);
      if (!all_finite(x_new))
        throw Error(ErrorKind::non_finite, "post-step hook produced a non-finite state",
                    t_new);
      f_new = eval(t_new, x_new);
    }
    if (inf_norm(x_new) > opts_.blow_up)
      throw Error(ErrorKind::blow_up, "solution exceeded the blow-up bound", t_);
    if (hooks_.event) {
      double g = hooks_.event(t_new, x_new);
      if (event_armed_ && event_prev_ < 0.0 && g >= 0.0) {
        locate_event(t_new, x_new, f_new);
        return false;
      }
      event_prev_ = g;
      if (g < -1e-14) event_armed_ = true;
    }
    t_ = t_new;
    x_ = std::move(x_new);
    f_ = std::move(f_new);
    push_node(t_, x_, f_);
    return true;
  }

  // Bisect the event time on the dense output of the accepted step, then
  // finish the trajectory at the located crossing.
  void locate_event(double t_new, const std::vector<double>& x_new,
                    const std::vector<double>& f_new) {
    double lo = t_, hi = t_new;
    double h = t_new - t_;
    auto state_at = [&](double tm) {
      double th = (tm - t_) / h;
      double h00 = (1.0 + 2.0 * th) * (1.0 - th) * (1.0 - th);
      double h10 = th * (1.0 - th) * (1.0 - th);
      double h01 = th * th * (3.0 - 2.0 * th);
      double h11 = th * th * (th - 1.0);
      std::vector<double> xm(n_);
      for (size_t i = 0; i < n_; ++i)
        xm[i] = h00 * x_[i] + h10 * h * f_[i] + h01 * x_new[i] + h11 * h * f_new[i];
      return xm;
    };
    for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, std::fabs(hi)); ++it) {
      double mid = 0.5 * (lo + hi);
      std::vector<double> xm = state_at(mid);
      if (hooks_.event(mid, xm) < 0.0)
        lo = mid;
      else
        hi = mid;
    }
    std::vector<double> xe = state_at(hi);
    std::vector<double> fe = eval(hi, xe);
    t_ = hi;
    x_ = xe;
    f_ = fe;
    push_node(t_, x_, f_);
  }

  void run_rk4() {
    if (!(opts_.step > 0.0))
      throw Error(ErrorKind::usage, "fixed-step method needs step > 0");
    while (t_ < t1_ && !done()) {
      bump_steps(t_);
      double h = std::min(opts_.step, t1_ - t_);
      std::vector<double> k1 = f_;
      std::vector<double> xt(n_);
      for (size_t i = 0; i < n_; ++i) xt[i] = x_[i] + 0.5 * h * k1[i];
      std::vector<double> k2 = eval(t_ + 0.5 * h, xt);
      for (size_t i = 0; i < n_; ++i) xt[i] = x_[i] + 0.5 * h * k2[i];
      std::vector<double> k3 = eval(t_ + 0.5 * h, xt);
      for (size_t i = 0; i < n_; ++i) xt[i] = x_[i] + h * k3[i];
      std::vector<double> k4 = eval(t_ + h, xt);
      std::vector<double> xn(n_);
      for (size_t i = 0; i < n_; ++i)
        xn[i] = x_[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      double tn = (h == t1_ - t_) ? t1_ : t_ + h;  // land exactly on t1
      if (!all_finite(xn))
        throw Error(ErrorKind::non_finite, "integration state is not finite", tn);
      std::vector<double> kend = eval(tn, xn);
      if (!accept(tn, std::move(xn), std::move(kend))) return;
    }
  }

  void run_dopri5() {
    using D = Dopri5;
    double h = initial_step();
    while (t_ < t1_ && !done()) {
      bump_steps(t_);
      h = std::min(h, t1_ - t_);
      if (h < 1e-14 * std::max(1.0, std::fabs(t_)))
        throw Error(ErrorKind::singularity, "integrator step size underflow", t_);

      const std::vector<double>& k1 = f_;
      std::vector<double> k3, k4, k5, k6, k7, xn(n_);
      try {
        std::vector<double> xt(n_);
        for (size_t i = 0; i < n_; ++i) xt[i] = x_[i] + h * D::a21 * k1[i];
        std::vector<double> k2 = eval(t_ + D::c2 * h, xt);
        for (size_t i = 0; i < n_; ++i)
          xt[i] = x_[i] + h * (D::a31 * k1[i] + D::a32 * k2[i]);
        k3 = eval(t_ + D::c3 * h, xt);
        for (size_t i = 0; i < n_; ++i)
          xt[i] = x_[i] + h * (D::a41 * k1[i] + D::a42 * k2[i] + D::a43 * k3[i]);
        k4 = eval(t_ + D::c4 * h, xt);
        for (size_t i = 0; i < n_; ++i)
          xt[i] = x_[i] + h * (D::a51 * k1[i] + D::a52 * k2[i] + D::a53 * k3[i] +
                               D::a54 * k4[i]);
        k5 = eval(t_ + D::c5 * h, xt);
        for (size_t i = 0; i < n_; ++i)
          xt[i] = x_[i] + h * (D::a61 * k1[i] + D::a62 * k2[i] + D::a63 * k3[i] +
                               D::a64 * k4[i] + D::a65 * k5[i]);
        k6 = eval(t_ + h, xt);
        for (size_t i = 0; i < n_; ++i)
          xn[i] = x_[i] + h * (D::b1 * k1[i] + D::b3 * k3[i] + D::b4 * k4[i] +
                               D::b5 * k5[i] + D::b6 * k6[i]);
        if (!all_finite(xn))
          throw Error(ErrorKind::non_finite, "trial state is not finite", t_ + h);
        k7 = eval(t_ + h, xn);
      } catch (const Error& e) {
        // Overflow inside a trial step just means the step was too long.
        if (e.kind() != ErrorKind::non_finite) throw;
        h *= 0.5;
        continue;
      }

      double err = 0.0;
      for (size_t i = 0; i < n_; ++i) {
        double e = h * (D::e1 * k1[i] + D::e3 * k3[i] + D::e4 * k4[i] +
                        D::e5 * k5[i] + D::e6 * k6[i] + D::e7 * k7[i]);
        double sc = opts_.abs_tol +
                    opts_.rel_tol * std::max(std::fabs(x_[i]), std::fabs(xn[i]));
        err += (e / sc) * (e / sc);
      }
      err = std::sqrt(err / static_cast<double>(n_));

      if (err <= 1.0) {
        double tn = (h == t1_ - t_) ? t1_ : t_ + h;  // land exactly on t1
        if (!accept(tn, std::move(xn), std::move(k7))) return;
        double fac = (err == 0.0) ? 5.0 : 0.9 * std::pow(err, -0.2);
        h *= std::clamp(fac, 0.2, 5.0);
      } else {
        h *= std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
      }
    }
  }

  bool done() const { return t_ >= t1_ - 1e-14 * std::max(1.0, std::fabs(t1_)); }

  double initial_step() const {
    double d0 = inf_norm(x_);
    double d1 = inf_norm(f_);
    double h = 0.01 * (1.0 + d0) / (1e-8 + d1);
    return std::min(h, (t1_ - t0_) / 10.0);
  }

  const VectorField& field_;
  double t0_, t1_;
  const IntegratorOptions& opts_;
  const StepHooks& hooks_;
  size_t n_ = 0;
  double t_ = 0.0;
  std::vector<double> x_, f_;
  Trajectory traj_;
  long steps_ = 0;
  double event_prev_ = 0.0;
  bool event_armed_ = false;
};

}  // namespace

Trajectory integrate_ode(const VectorField& field, std::span<const double> x0,
                         double t0, double t1, const IntegratorOptions& opts,
                         const StepHooks& hooks) {
  return Integration(field, x0, t0, t1, opts, hooks).run();
}

// -------------------------------------------------------------- quadrature

namespace {

double adapt_simpson(const std::function<double(double)>& f, double a, double b,
                     double fa, double fm, double fb, double whole, double tol,
                     int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  if (!std::isfinite(flm) || !std::isfinite(frm))
    throw Error(ErrorKind::non_finite, "integrand value is not finite",
                std::isfinite(flm) ? rm : lm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth <= 0)
    throw Error(ErrorKind::no_convergence, "adaptive quadrature depth exhausted", m);
  return adapt_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adapt_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double quadrature(const std::function<double(double)>& f, double a, double b,
                  double tol) {
  if (!(tol > 0.0)) throw Error(ErrorKind::usage, "quadrature tolerance must be > 0");
  if (a == b) return 0.0;
  if (b < a) return -quadrature(f, b, a, tol);
  double m = 0.5 * (a + b);
  double fa = f(a), fm = f(m), fb = f(b);
  if (!std::isfinite(fa) || !std::isfinite(fm) || !std::isfinite(fb))
    throw Error(ErrorKind::non_finite, "integrand value is not finite", m);
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adapt_simpson(f, a, b, fa, fm, fb, whole, tol, 60);
}

double quadrature(const ScalarCurve& f, double a, double b, double tol) {
  return quadrature([&f](double t) { return f(t); }, a, b, tol);
}

ScalarCurve cumulative_quadrature(const ScalarCurve& f, double t0,
                                  std::span<const double> grid, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorKind::usage, "quadrature tolerance must be > 0");
  auto anchors = std::make_shared<std::vector<std::pair<double, double>>>();
  std::vector<double> ts(grid.begin(), grid.end());
  ts.push_back(t0);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  double seg_tol = tol / static_cast<double>(std::max<size_t>(ts.size(), 1));

  // March outward from t0 in both directions so each segment is short.
  auto it0 = std::lower_bound(ts.begin(), ts.end(), t0);
  size_t i0 = static_cast<size_t>(it0 - ts.begin());
  std::vector<double> acc(ts.size(), 0.0);
  for (size_t i = i0; i + 1 < ts.size(); ++i)
    acc[i + 1] = acc[i] + quadrature(f, ts[i], ts[i + 1], seg_tol);
  for (size_t i = i0; i > 0; --i)
    acc[i - 1] = acc[i] - quadrature(f, ts[i - 1], ts[i], seg_tol);
  anchors->reserve(ts.size());
  for (size_t i = 0; i < ts.size(); ++i) anchors->emplace_back(ts[i], acc[i]);

  ScalarCurve base = f;
  auto value = [anchors, base, tol](double t) {
    // Closest anchor, then a short local quadrature.
    auto cmp = [](const std::pair<double, double>& p, double v) { return p.first < v; };
    auto it = std::lower_bound(anchors->begin(), anchors->end(), t, cmp);
    size_t idx;
    if (it == anchors->begin())
      idx = 0;
    else if (it == anchors->end())
      idx = anchors->size() - 1;
    else {
      size_t hi = static_cast<size_t>(it - anchors->begin());
      idx = (t - (*anchors)[hi - 1].first <= (*anchors)[hi].first - t) ? hi - 1 : hi;
    }
    auto [ta, Fa] = (*anchors)[idx];
    if (t == ta) return Fa;
    return Fa + quadrature(base, ta, t, tol);
  };
  auto deriv = [base](double t) { return base(t); };
  return ScalarCurve::from_functions(value, deriv);
}

double fd_derivative(const ScalarCurve& f, double t, double h) {
  if (!(h > 0.0)) throw Error(ErrorKind::usage, "finite-difference step must be > 0");
  return (f(t + h) - f(t - h)) / (2.0 * h);
}

}  // namespace liesys
