#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace unfitted {

/// Invalid experiment or domain configuration (bad ε, unknown kind, empty active set).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed geometric input such as a zero-area element.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A caller broke a documented precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Internal inconsistency detected while processing one element.
class InternalError : public std::runtime_error {
 public:
  InternalError(const std::string& what, std::size_t element)
      : std::runtime_error(what + " (element " + std::to_string(element) + ")"),
        element_(element) {}
  std::size_t element() const noexcept { return element_; }

 private:
  std::size_t element_;
};

/// The local stiffness on T∩Ω lost definiteness on a direction that still
/// carries boundary flux: the stabilization parameter is effectively unbounded.
class SliverDegenerate : public std::runtime_error {
 public:
  explicit SliverDegenerate(std::size_t element)
      : std::runtime_error("sliver-degenerate cut element " + std::to_string(element)),
        element_(element) {}
  std::size_t element() const noexcept { return element_; }

 private:
  std::size_t element_;
};

class AssemblyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolveError : public std::runtime_error {
 public:
  SolveError(const std::string& what, long pivot)
      : std::runtime_error(what), pivot_(pivot) {}
  /// Column of the failed pivot, or -1 when the backend does not report one.
  long pivot() const noexcept { return pivot_; }

 private:
  long pivot_;
};

}  // namespace unfitted
