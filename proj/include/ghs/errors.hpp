#pragma once

#include <stdexcept>
#include <string>

namespace ghs {

/// Base class for every error raised by the library. `kind()` is the
/// stable machine-readable name used in CLI error reports.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual const char* kind() const noexcept = 0;
};

#define GHS_DEFINE_ERROR(Name)                                        \
  class Name : public Error {                                         \
   public:                                                            \
    explicit Name(const std::string& what) : Error(what) {}           \
    const char* kind() const noexcept override { return #Name; }      \
  };

// Argument outside the mathematical domain of a function.
GHS_DEFINE_ERROR(DomainError)
// Vector length does not match the model dimension.
GHS_DEFINE_ERROR(DimensionError)
GHS_DEFINE_ERROR(ConfigError)
// Input carries too little information (constant data, identical values).
GHS_DEFINE_ERROR(DegenerateError)
// A numerical step failed (non-convergence, failed factorization).
GHS_DEFINE_ERROR(NumericalError)
GHS_DEFINE_ERROR(LengthError)
// Requested precision not reachable within the allowed budget.
GHS_DEFINE_ERROR(ResourceError)
GHS_DEFINE_ERROR(IoError)

#undef GHS_DEFINE_ERROR

}  // namespace ghs
