#pragma once

#include <functional>
#include <memory>
#include <optional>

#include "liesys/expr.hpp"

namespace liesys {

// Evaluatable map t -> R. Curves built from expressions carry an exact
// symbolic derivative; closure-backed curves may or may not provide one,
// and callers that need a derivative anyway fall back to central
// differences through derivative_or_fd().
class ScalarCurve {
 public:
  static constexpr double kFdStep = 1e-6;

  ScalarCurve();  // constant 0

  static ScalarCurve constant(double value);
  static ScalarCurve from_expression(expr::Expression e);
  static ScalarCurve from_functions(std::function<double(double)> value,
                                    std::function<double(double)> derivative = {});

  double operator()(double t) const;

  bool has_derivative() const;
  double derivative(double t) const;  // throws Error(domain) when absent
  double derivative_or_fd(double t, double h = kFdStep) const;

  // Present only for expression-backed curves; used for report output.
  const std::optional<expr::Expression>& expression() const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

}  // namespace liesys
