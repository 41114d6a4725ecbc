#pragma once

#include <stdexcept>
#include <string>

namespace gqm {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define GQM_DEFINE_ERROR(Name)                  \
  class Name : public Error {                   \
   public:                                      \
    explicit Name(const std::string& what_arg)  \
        : Error(#Name ": " + what_arg) {}       \
  };

GQM_DEFINE_ERROR(InvalidGenerator)
GQM_DEFINE_ERROR(GroupMismatch)
GQM_DEFINE_ERROR(ParseError)
GQM_DEFINE_ERROR(InvalidGroupSpec)
GQM_DEFINE_ERROR(InvalidHomomorphism)
GQM_DEFINE_ERROR(ResourceLimit)
GQM_DEFINE_ERROR(PreconditionViolated)
GQM_DEFINE_ERROR(CentralityViolated)
GQM_DEFINE_ERROR(NonpositiveDefect)
GQM_DEFINE_ERROR(Infeasible)
GQM_DEFINE_ERROR(MissingValue)
GQM_DEFINE_ERROR(MalformedComplex)
GQM_DEFINE_ERROR(BoundaryMismatch)
GQM_DEFINE_ERROR(NonIntegral)
GQM_DEFINE_ERROR(ProductMismatch)
GQM_DEFINE_ERROR(NonNormalArgument)
GQM_DEFINE_ERROR(EmptyPattern)
GQM_DEFINE_ERROR(MissingDefectBound)
GQM_DEFINE_ERROR(NonNormalSample)
GQM_DEFINE_ERROR(NotClosed)
GQM_DEFINE_ERROR(NotTransversal)
GQM_DEFINE_ERROR(InfiniteCosetSpace)

#undef GQM_DEFINE_ERROR

}  // namespace gqm
