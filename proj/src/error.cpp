#include "pfc/error.hpp"

namespace pfc {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Syntax: return "syntax";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Io: return "io";
    case ErrorKind::UniverseTooLarge: return "universe-too-large";
    case ErrorKind::InconsistentState: return "inconsistent-state";
    case ErrorKind::InconsistentSuccessor: return "inconsistent-successor";
    case ErrorKind::NoApplicableAction: return "no-applicable-action";
    case ErrorKind::IterationCap: return "iteration-cap";
    case ErrorKind::InvalidArgument: return "invalid-argument";
  }
  return "unknown";
}

}  // namespace pfc
