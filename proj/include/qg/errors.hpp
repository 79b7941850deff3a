#pragma once

#include <stdexcept>
#include <string>

namespace qg {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ClosureOverflow : Error {
  using Error::Error;
};
struct NotNearInteger : Error {
  using Error::Error;
};
struct UnsupportedGroup : Error {
  using Error::Error;
};
struct DimensionMismatch : Error {
  using Error::Error;
};
struct SingularMatrix : Error {
  using Error::Error;
};
struct EmptyKernel : Error {
  using Error::Error;
};
struct NotSymmetric : Error {
  using Error::Error;
};
struct ReducibleInput : Error {
  using Error::Error;
};
struct NonpositiveK : Error {
  using Error::Error;
};
struct WindowTooCoarse : Error {
  double suggested_step = 0.0;
  WindowTooCoarse(const std::string& msg, double step)
      : Error(msg), suggested_step(step) {}
};
struct ParseError : Error {
  using Error::Error;
};
struct UnknownExample : Error {
  using Error::Error;
};

}  // namespace qg
