#pragma once

#include <stdexcept>
#include <string>

namespace triq {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define TRIQ_DEFINE_ERROR(Name)        \
  class Name : public Error {          \
   public:                             \
    using Error::Error;                \
  }

TRIQ_DEFINE_ERROR(InvalidAngle);
TRIQ_DEFINE_ERROR(InvalidDistribution);
TRIQ_DEFINE_ERROR(DomainError);
TRIQ_DEFINE_ERROR(UnknownDistribution);
TRIQ_DEFINE_ERROR(FitDiverged);
TRIQ_DEFINE_ERROR(ParseError);
TRIQ_DEFINE_ERROR(NormError);

#undef TRIQ_DEFINE_ERROR

}  // namespace triq
