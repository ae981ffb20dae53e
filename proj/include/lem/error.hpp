#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace lem {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed configuration: unknown key, bad type, or range violation.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Raster file problems: bad magic, truncated payload, dimension overflow.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Structural problems in a flow graph, e.g. a cycle in the receiver array.
class StructureError : public Error {
 public:
  using Error::Error;
};

/// Newton iteration failed to converge within the configured cap.
/// Carries the index of the offending cell.
class ConvergenceError : public Error {
 public:
  ConvergenceError(std::uint32_t cell, const std::string& what)
      : Error(what), cell_(cell) {}
  std::uint32_t cell() const { return cell_; }

 private:
  std::uint32_t cell_;
};

}  // namespace lem
