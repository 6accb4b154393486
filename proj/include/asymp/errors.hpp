#ifndef ASYMP_ERRORS_HPP
#define ASYMP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace asymp {

// Base class for every domain error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define ASYMP_DEFINE_ERROR(Name)              \
  class Name : public Error {                 \
   public:                                    \
    using Error::Error;                       \
  }

ASYMP_DEFINE_ERROR(DegenerateDirection);
ASYMP_DEFINE_ERROR(OriginError);
ASYMP_DEFINE_ERROR(OutsideLightCone);
ASYMP_DEFINE_ERROR(InvalidArgument);
ASYMP_DEFINE_ERROR(HomogeneityViolation);
ASYMP_DEFINE_ERROR(NonConvergence);
ASYMP_DEFINE_ERROR(NodeCoincidence);
ASYMP_DEFINE_ERROR(SubtractionFailure);
ASYMP_DEFINE_ERROR(FalloffViolation);
ASYMP_DEFINE_ERROR(ChargeMismatch);
ASYMP_DEFINE_ERROR(VanishingViolation);
ASYMP_DEFINE_ERROR(StencilOutOfDomain);
ASYMP_DEFINE_ERROR(WorldlineSingularity);
ASYMP_DEFINE_ERROR(ParseError);

#undef ASYMP_DEFINE_ERROR

}  // namespace asymp

#endif  // ASYMP_ERRORS_HPP
