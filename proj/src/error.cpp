#include "liesys/error.hpp"

#include <sstream>

namespace liesys {

const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::syntax: return "syntax error";
    case ErrorKind::unknown_identifier: return "unknown identifier";
    case ErrorKind::domain: return "domain error";
    case ErrorKind::non_finite: return "non-finite result";
    case ErrorKind::blow_up: return "solution blow-up";
    case ErrorKind::max_steps: return "step limit exceeded";
    case ErrorKind::no_convergence: return "quadrature did not converge";
    case ErrorKind::invalid_curve: return "invalid group curve";
    case ErrorKind::not_a_solution: return "not a solution";
    case ErrorKind::coincident_solutions: return "coincident solutions";
    case ErrorKind::degenerate_wronskian: return "degenerate wronskian";
    case ErrorKind::zero_crossing: return "zero crossing";
    case ErrorKind::zero_coefficient: return "zero coefficient";
    case ErrorKind::sign: return "sign error";
    case ErrorKind::degenerate_scale: return "degenerate scale";
    case ErrorKind::negative_discriminant: return "negative discriminant";
    case ErrorKind::negative_radicand: return "negative radicand";
    case ErrorKind::zero_wronskian: return "zero wronskian";
    case ErrorKind::grid_mismatch: return "grid mismatch";
    case ErrorKind::singularity: return "singularity";
    case ErrorKind::usage: return "usage error";
    case ErrorKind::internal: return "internal error";
  }
  return "unknown error";
}

namespace {

std::string format_message(ErrorKind kind, const std::string& what,
                           std::optional<double> where) {
  std::ostringstream os;
  os << kind_name(kind) << ": " << what;
  if (where) os << " (at t = " << *where << ")";
  return os.str();
}

}  // namespace

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(format_message(kind, what, std::nullopt)),
      kind_(kind) {}

Error::Error(ErrorKind kind, const std::string& what, double where)
    : std::runtime_error(format_message(kind, what, where)),
      kind_(kind),
      where_(where) {}

}  // namespace liesys
