#include "ecd/errors.hpp"

#include <sstream>

namespace ecd {

namespace {

std::string gap_message(const char* what, double lambda, double gap) {
  std::ostringstream os;
  os.precision(6);
  os << what << " at lambda=" << lambda << " (gap=" << gap << ")";
  return os.str();
}

}  // namespace

NearDegeneracyError::NearDegeneracyError(double lambda, double gap)
    : Error(gap_message("spectral gap below floor", lambda, gap)), lambda_(lambda), gap_(gap) {}

DegeneracyError::DegeneracyError(double lambda, double gap)
    : Error(gap_message("degenerate pair inside a sector", lambda, gap)), lambda_(lambda), gap_(gap) {}

}  // namespace ecd
