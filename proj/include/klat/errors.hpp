#ifndef KLAT_ERRORS_HPP
#define KLAT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace klat {

// Exit-code contract shared with the CLI front end:
//   0 ok, 2 schema/precondition, 3 space mismatch, 4 carrier too large,
//   5 hypothesis failed, 6 tolerance missed.
enum class ExitCode : int {
  ok = 0,
  schema = 2,
  space_mismatch = 3,
  carrier_too_large = 4,
  hypothesis_failed = 5,
  tolerance_missed = 6,
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input: bad JSON shape, missing field, value out of range.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// Operands live on different state spaces.
class SpaceMismatchError : public Error {
 public:
  using Error::Error;
};

// Brute-force enumeration requested on a carrier above its cap.
class CarrierTooLargeError : public Error {
 public:
  using Error::Error;
};

// A documented operation precondition does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace klat

#endif
