#pragma once

#include <stdexcept>

namespace vfb {

// Base class for everything thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : Error { using Error::Error; };     // argument outside its documented range
struct ConfigError : Error { using Error::Error; };     // bad key/value in a run configuration
struct NumericalError : Error { using Error::Error; };  // quadrature or ODE integration failure
struct StateError : Error { using Error::Error; };      // solver state became inadmissible
struct HorizonError : Error { using Error::Error; };    // analysis needs a longer time span
struct IoError : Error { using Error::Error; };

}  // namespace vfb
