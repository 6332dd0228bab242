#include "liesys/curve.hpp"

#include "liesys/error.hpp"

namespace liesys {

struct ScalarCurve::Impl {
  std::function<double(double)> value;
  std::function<double(double)> deriv;  // empty when no exact derivative
  std::optional<expr::Expression> source;
};

ScalarCurve::ScalarCurve() {
  auto impl = std::make_shared<Impl>();
  impl->value = [](double) { return 0.0; };
  impl->deriv = [](double) { return 0.0; };
  impl_ = std::move(impl);
}

ScalarCurve ScalarCurve::constant(double value) {
  ScalarCurve c;
  auto impl = std::make_shared<Impl>();
  impl->value = [value](double) { return value; };
  impl->deriv = [](double) { return 0.0; };
  c.impl_ = std::move(impl);
  return c;
}

ScalarCurve ScalarCurve::from_expression(expr::Expression e) {
  ScalarCurve c;
  auto impl = std::make_shared<Impl>();
  expr::Expression d = e.derivative();
  impl->value = [e](double t) { return e(t); };
  impl->deriv = [d](double t) { return d(t); };
  impl->source = std::move(e);
  c.impl_ = std::move(impl);
  return c;
}

ScalarCurve ScalarCurve::from_functions(std::function<double(double)> value,
                                        std::function<double(double)> derivative) {
  if (!value) throw Error(ErrorKind::usage, "curve needs a value function");
  ScalarCurve c;
  auto impl = std::make_shared<Impl>();
  impl->value = std::move(value);
  impl->deriv = std::move(derivative);
  c.impl_ = std::move(impl);
  return c;
}

double ScalarCurve::operator()(double t) const { return impl_->value(t); }

bool ScalarCurve::has_derivative() const { return static_cast<bool>(impl_->deriv); }

double ScalarCurve::derivative(double t) const {
  if (!impl_->deriv)
    throw Error(ErrorKind::domain, "curve has no exact derivative", t);
  return impl_->deriv(t);
}

double ScalarCurve::derivative_or_fd(double t, double h) const {
  if (impl_->deriv) return impl_->deriv(t);
  return (impl_->value(t + h) - impl_->value(t - h)) / (2.0 * h);
}

const std::optional<expr::Expression>& ScalarCurve::expression() const {
  return impl_->source;
}

}  // namespace liesys
