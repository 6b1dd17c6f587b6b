#pragma once

#include <stdexcept>
#include <string>

namespace boostray {

enum class ErrorKind {
  Format,
  Value,
  Length,
  Consistency,
  Io,
  Stratification,
  Domain,
  Configuration,
  Shape,
  Input,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base class for every error raised by the library. The kind drives the
/// CLI exit-code mapping.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define BOOSTRAY_DEFINE_ERROR(Name, Kind)                                 \
  class Name : public Error {                                            \
   public:                                                               \
    explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {} \
  };

BOOSTRAY_DEFINE_ERROR(FormatError, Format)
BOOSTRAY_DEFINE_ERROR(ValueError, Value)
BOOSTRAY_DEFINE_ERROR(LengthError, Length)
BOOSTRAY_DEFINE_ERROR(ConsistencyError, Consistency)
BOOSTRAY_DEFINE_ERROR(IoError, Io)
BOOSTRAY_DEFINE_ERROR(StratificationError, Stratification)
BOOSTRAY_DEFINE_ERROR(DomainError, Domain)
BOOSTRAY_DEFINE_ERROR(ConfigurationError, Configuration)
BOOSTRAY_DEFINE_ERROR(ShapeError, Shape)
BOOSTRAY_DEFINE_ERROR(InputError, Input)

#undef BOOSTRAY_DEFINE_ERROR

}  // namespace boostray
