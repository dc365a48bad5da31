#pragma once

#include <stdexcept>
#include <string>

namespace d4 {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SpecMismatchError : Error {
  using Error::Error;
};
struct DivisionByZeroError : Error {
  using Error::Error;
};
struct DegenerateEquationError : Error {
  using Error::Error;
};
struct InvalidInputError : Error {
  using Error::Error;
};
// Conjugation would send a root subgroup outside U.
struct OutOfUError : Error {
  using Error::Error;
};
// Brute-force request beyond the supported size without an override.
struct RefusalError : Error {
  using Error::Error;
};
struct FusionMismatchError : Error {
  using Error::Error;
};
struct CalibrationError : Error {
  using Error::Error;
};
struct DataError : Error {
  using Error::Error;
};
struct RuleInapplicableError : Error {
  using Error::Error;
};
// The accumulated constraints admit no solution.
struct InfeasibleError : Error {
  using Error::Error;
};
struct NotImplementedError : Error {
  using Error::Error;
};

}  // namespace d4
