#pragma once

#include <stdexcept>
#include <string>

namespace nlt {

/// Base class for all recoverable failures raised by the library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define NLT_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                    \
  public:                                                        \
    explicit Name(const std::string& what) : Error(what) {}      \
  }

NLT_DEFINE_ERROR(InvalidArgument);
NLT_DEFINE_ERROR(NegativeOrderNonzeroMean);
NLT_DEFINE_ERROR(ExactModeTooLarge);
NLT_DEFINE_ERROR(BadEllipticity);
NLT_DEFINE_ERROR(DegenerateJacobian);
NLT_DEFINE_ERROR(QuadratureNotConverged);
NLT_DEFINE_ERROR(EmptyCone);
NLT_DEFINE_ERROR(SingularSymbol);
NLT_DEFINE_ERROR(BallTooLarge);
NLT_DEFINE_ERROR(NoContraction);
NLT_DEFINE_ERROR(MaxIterReached);
NLT_DEFINE_ERROR(OffGridShift);
NLT_DEFINE_ERROR(DegenerateGradient);
NLT_DEFINE_ERROR(NotSubsolution);
NLT_DEFINE_ERROR(BadTruncation);
NLT_DEFINE_ERROR(LadderStalled);
NLT_DEFINE_ERROR(ConfigError);
NLT_DEFINE_ERROR(IoError);

#undef NLT_DEFINE_ERROR

inline void require(bool cond, const std::string& what) {
  if (!cond) throw InvalidArgument(what);
}

} // namespace nlt
