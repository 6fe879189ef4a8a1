#pragma once

#include <stdexcept>
#include <string>

namespace omdlab {

/// Rejected input: a caller violated an operation precondition
/// (dimension mismatch, out-of-domain point, norm bound exceeded).
class invalid_input : public std::invalid_argument {
 public:
  explicit invalid_input(const std::string& what) : std::invalid_argument(what) {}
};

/// Configuration error: an unsupported or inconsistent setup
/// (unknown pair/map combination, empty domain, bad sweep grid).
/// CLI exit code 1.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure: a solver did not converge or a link/quadrature
/// left its admissible range. Carries diagnostics in the message.
/// CLI exit code 2.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace omdlab
