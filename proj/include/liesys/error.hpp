#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace liesys {

// One kind per failure mode. The C API and the CLI map these 1:1 to status
// codes and exit diagnostics, so every message keeps a stable "<kind>: "
// prefix (see kind_name).
enum class ErrorKind {
  syntax,
  unknown_identifier,
  domain,
  non_finite,
  blow_up,
  max_steps,
  no_convergence,
  invalid_curve,
  not_a_solution,
  coincident_solutions,
  degenerate_wronskian,
  zero_crossing,
  zero_coefficient,
  sign,
  degenerate_scale,
  negative_discriminant,
  negative_radicand,
  zero_wronskian,
  grid_mismatch,
  singularity,
  usage,
  internal,
};

const char* kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  // `where` is the abscissa (usually time) the failure was detected at.
  Error(ErrorKind kind, const std::string& what, double where);

  ErrorKind kind() const { return kind_; }
  const std::optional<double>& where() const { return where_; }

 private:
  ErrorKind kind_;
  std::optional<double> where_;
};

}  // namespace liesys
