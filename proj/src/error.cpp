#include "wft/error.hpp"

namespace wft {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Degeneracy: return "degeneracy";
    case ErrorKind::Range: return "range";
    case ErrorKind::Inconsistency: return "inconsistency";
    case ErrorKind::JunctionSolvability: return "junction-solvability";
    case ErrorKind::SonicTransition: return "sonic-transition";
    case ErrorKind::LargeData: return "large-data";
    case ErrorKind::SmallBV: return "small-bv";
    case ErrorKind::InteractionCap: return "interaction-cap";
    case ErrorKind::Config: return "config";
    case ErrorKind::Internal: return "internal";
  }
  return "unknown";
}

void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, std::string(to_string(kind)) + " error: " + what);
}

}  // namespace wft
