#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qhflux {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UsageError : Error {
  using Error::Error;
};

struct DomainError : Error {
  using Error::Error;
};

struct SingularMatrixError : Error {
  SingularMatrixError(std::size_t pivot, const std::string& what)
      : Error(what), pivot_index(pivot) {}
  std::size_t pivot_index;
};

// repeated hole positions where an operation needs them distinct
struct SingularConfigurationError : Error {
  using Error::Error;
};

// Upsilon too small to take logarithmic derivatives in double range
struct DegenerateConfigurationError : Error {
  using Error::Error;
};

struct IntegrationError : Error {
  IntegrationError(std::size_t node, const std::string& what)
      : Error(what), node_index(node) {}
  std::size_t node_index;
};

struct ResourceError : Error {
  using Error::Error;
};

struct PrecisionError : Error {
  using Error::Error;
};

}  // namespace qhflux
