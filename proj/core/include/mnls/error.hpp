#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mnls {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid argument or configuration (bad grid, asymmetric coupling, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class GridMismatchError : public Error {
 public:
  GridMismatchError() : Error("fields live on different grids") {}
};

class NonFiniteError : public Error {
 public:
  NonFiniteError(const std::string& what, std::size_t node)
      : Error(what + " is not finite at node " + std::to_string(node)), node_(node) {}
  std::size_t node() const { return node_; }

 private:
  std::size_t node_;
};

// A dilated field does not decay inside the box.
class TailMassError : public Error {
 public:
  TailMassError(double tail_fraction, double tolerance)
      : Error("tail mass fraction " + std::to_string(tail_fraction) +
              " exceeds tolerance " + std::to_string(tolerance)),
        tail_fraction_(tail_fraction) {}
  double tail_fraction() const { return tail_fraction_; }

 private:
  double tail_fraction_;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace mnls
