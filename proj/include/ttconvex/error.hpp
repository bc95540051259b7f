#pragma once

#include <stdexcept>
#include <string>

namespace ttconvex {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define TTCONVEX_DEFINE_ERROR(Name)   \
  class Name : public Error {         \
   public:                            \
    using Error::Error;               \
  }

TTCONVEX_DEFINE_ERROR(AlphabetError);
TTCONVEX_DEFINE_ERROR(ResourceLimitError);
TTCONVEX_DEFINE_ERROR(MissingInverseError);
TTCONVEX_DEFINE_ERROR(ParseError);
TTCONVEX_DEFINE_ERROR(PathError);
TTCONVEX_DEFINE_ERROR(GraphError);
TTCONVEX_DEFINE_ERROR(FiltrationError);
TTCONVEX_DEFINE_ERROR(EmptyRayError);
TTCONVEX_DEFINE_ERROR(WrongStratumClassError);
TTCONVEX_DEFINE_ERROR(NotNielsenError);
TTCONVEX_DEFINE_ERROR(ThresholdError);
TTCONVEX_DEFINE_ERROR(HallwayError);
TTCONVEX_DEFINE_ERROR(NotCuttableError);
TTCONVEX_DEFINE_ERROR(MissingInputError);
TTCONVEX_DEFINE_ERROR(ConfigError);
TTCONVEX_DEFINE_ERROR(EmptyAfterExclusionError);

#undef TTCONVEX_DEFINE_ERROR

}  // namespace ttconvex
