#ifndef KINREL_ERRORS_HPP
#define KINREL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace kinrel {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual const char* kind() const noexcept { return "error"; }
};

#define KINREL_DEFINE_ERROR(Name, tag)                          \
  class Name : public Error {                                   \
   public:                                                      \
    explicit Name(const std::string& what) : Error(what) {}     \
    const char* kind() const noexcept override { return tag; }  \
  };

// Input outside the model's working interval.
KINREL_DEFINE_ERROR(DomainError, "domain")
// A model violates one of its structural invariants.
KINREL_DEFINE_ERROR(ModelError, "model")
// Operation called outside its admissible parameter range.
KINREL_DEFINE_ERROR(PreconditionError, "precondition")
KINREL_DEFINE_ERROR(RootNotBracketed, "root_not_bracketed")
KINREL_DEFINE_ERROR(QuadratureError, "quadrature")
// Branch integration left its monotone regime or stalled.
KINREL_DEFINE_ERROR(IntegrationError, "integration")
// Malformed model document or command-line parameter.
KINREL_DEFINE_ERROR(ConfigError, "config")

#undef KINREL_DEFINE_ERROR

}  // namespace kinrel

#endif  // KINREL_ERRORS_HPP
