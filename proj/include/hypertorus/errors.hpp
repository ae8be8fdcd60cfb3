#pragma once

#include <stdexcept>
#include <string>

namespace hypertorus {

// Spatial grid too coarse for the frequency support being synthesized.
class AliasingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Requested computation needs more time resolution than supplied.
class ResolutionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The exact (Plancherel) route needs an integer-valued symbol.
class ExactnessUnavailable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// NaN / overflow detected during time stepping.
class NumericalAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Parameter combination outside the supported ill-posedness cases.
class UnsupportedCase : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace hypertorus
