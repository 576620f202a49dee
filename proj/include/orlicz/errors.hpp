#ifndef ORLICZ_ERRORS_HPP
#define ORLICZ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace orlicz {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define ORLICZ_DECLARE_ERROR(Name)                                   \
  class Name : public Error {                                        \
   public:                                                           \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

// young
ORLICZ_DECLARE_ERROR(InvalidParams);
ORLICZ_DECLARE_ERROR(DegenerateRatio);
ORLICZ_DECLARE_ERROR(NonInvertible);
ORLICZ_DECLARE_ERROR(NotSubcritical);

// grid / modulars
ORLICZ_DECLARE_ERROR(BadGeometry);
ORLICZ_DECLARE_ERROR(DiagonalPair);
ORLICZ_DECLARE_ERROR(DomainMismatch);
ORLICZ_DECLARE_ERROR(NonPositiveBeta);

// eigen
ORLICZ_DECLARE_ERROR(ZeroFunction);
ORLICZ_DECLARE_ERROR(DegenerateGradient);

// multiplicity
ORLICZ_DECLARE_ERROR(NoPositiveF);

// cli
ORLICZ_DECLARE_ERROR(ParseError);
ORLICZ_DECLARE_ERROR(ValidationError);
ORLICZ_DECLARE_ERROR(MissingSection);

#undef ORLICZ_DECLARE_ERROR

}  // namespace orlicz

#endif  // ORLICZ_ERRORS_HPP
