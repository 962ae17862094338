#pragma once

#include <stdexcept>
#include <string>

namespace rnlw {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define RNLW_ERROR(Name)                                         \
  struct Name : Error {                                          \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

RNLW_ERROR(DivergentWeight);
RNLW_ERROR(TruncationLoss);
RNLW_ERROR(RangeExceeded);
RNLW_ERROR(DomainOverflow);
RNLW_ERROR(NonFinite);
RNLW_ERROR(BlowupDetected);
RNLW_ERROR(SolverParamError);
RNLW_ERROR(InsufficientTrials);
RNLW_ERROR(InadmissibleTriple);
RNLW_ERROR(ConfigError);
RNLW_ERROR(GridError);

#undef RNLW_ERROR

}  // namespace rnlw
