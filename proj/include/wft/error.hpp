#pragma once

#include <stdexcept>
#include <string>

namespace wft {

/// Failure categories surfaced by the solver. The CLI maps each category to
/// a distinct exit code.
enum class ErrorKind {
  Domain,               ///< state outside Omega (vacuum, non-finite)
  Degeneracy,           ///< coincident eigenvalues
  Range,                ///< Lax curve left Omega
  Inconsistency,        ///< states not Rankine-Hugoniot compatible
  JunctionSolvability,  ///< junction map has no admissible root
  SonicTransition,      ///< stationary profile left the subsonic region
  LargeData,            ///< Riemann solver failed to converge
  SmallBV,              ///< data exceeds the total-variation budget
  InteractionCap,       ///< too many interactions
  Config,               ///< invalid scenario or parameters
  Internal,             ///< broken invariant
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace wft
