#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace nashcsg {

using StateId = int;
using ActionId = int;
using PlayerId = int;

// Idle action; never a member of any availability set.
inline constexpr ActionId kIdle = -1;

// Distribution sums are accepted within this tolerance.
inline constexpr double kProbTolerance = 1e-9;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ModelError : public Error {
 public:
  using Error::Error;
};

class FormulaError : public Error {
 public:
  FormulaError(const std::string& message, std::size_t position)
      : Error(message + " (at column " + std::to_string(position + 1) + ")"),
        position_(position) {}
  explicit FormulaError(const std::string& message)
      : Error(message), position_(std::string::npos) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

class NotConvergedError : public Error {
 public:
  NotConvergedError(const std::string& message, double residual, int iterations)
      : Error(message), residual_(residual), iterations_(iterations) {}
  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

// Formats a double with the given number of significant digits ("%.*g").
std::string format_double(double value, int significant_digits = 12);

}  // namespace nashcsg
