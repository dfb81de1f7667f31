#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace locklab {

// Base of every domain error raised by the library. The CLI maps these to
// exit code 1, except SoundnessViolation which maps to 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define LOCKLAB_DEFINE_ERROR(Name) \
  class Name : public Error {      \
   public:                         \
    using Error::Error;            \
  }

LOCKLAB_DEFINE_ERROR(DimensionMismatch);
LOCKLAB_DEFINE_ERROR(AllZeroError);
LOCKLAB_DEFINE_ERROR(SamePartyError);
LOCKLAB_DEFINE_ERROR(DomainError);
LOCKLAB_DEFINE_ERROR(InvariantError);
LOCKLAB_DEFINE_ERROR(CertificateNotFound);
LOCKLAB_DEFINE_ERROR(ShapeError);
LOCKLAB_DEFINE_ERROR(LocalityError);
LOCKLAB_DEFINE_ERROR(NoOpenPartition);
LOCKLAB_DEFINE_ERROR(ConfigError);
LOCKLAB_DEFINE_ERROR(BudgetExceeded);
LOCKLAB_DEFINE_ERROR(CorruptLog);

// An internal consistency property was falsified. Never expected.
LOCKLAB_DEFINE_ERROR(SoundnessViolation);

#undef LOCKLAB_DEFINE_ERROR

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace locklab
