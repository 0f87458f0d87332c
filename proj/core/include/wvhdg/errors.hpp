#pragma once

#include <stdexcept>
#include <string>

namespace wvhdg {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed user input: bad bounding box, negative degree, bad file contents.
class InputError : public Error {
public:
  using Error::Error;
};

class TopologyError : public Error {
public:
  using Error::Error;
};

/// A point was passed outside the reference element, or a quadrature order is not available.
class DomainError : public Error {
public:
  using Error::Error;
};

class AssemblyError : public Error {
public:
  using Error::Error;
};

/// 1 + 2k*theta <= 0 somewhere: the nonlinear mass matrix is no longer positive definite.
class NondegeneracyError : public Error {
public:
  NondegeneracyError(const std::string& what, int element) : Error(what), element_(element) {}
  int element() const noexcept { return element_; }

private:
  int element_;
};

class ProjectionError : public Error {
public:
  ProjectionError(const std::string& what, int element) : Error(what), element_(element) {}
  int element() const noexcept { return element_; }

private:
  int element_;
};

class CondensationError : public Error {
public:
  using Error::Error;
};

class InitializationError : public Error {
public:
  using Error::Error;
};

/// The corrector loop hit s_max, or a step failed inside the corrector.
class NonconvergenceError : public Error {
public:
  NonconvergenceError(const std::string& what, int step, int iteration, double last_change)
      : Error(what), step_(step), iteration_(iteration), last_change_(last_change) {}
  int step() const noexcept { return step_; }
  int iteration() const noexcept { return iteration_; }
  double last_change() const noexcept { return last_change_; }

private:
  int step_;
  int iteration_;
  double last_change_;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

} // namespace wvhdg
