#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace netalign {

// Input text could not be tokenized. `line` is 1-based.
class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& msg, std::size_t line)
      : std::runtime_error(msg), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// A structural assumption on the inputs does not hold.
class validation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A parameter is outside its admissible range.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite state or failed convergence; carries where it happened.
class numeric_error : public std::runtime_error {
 public:
  numeric_error(const std::string& msg, std::size_t iteration, double residual)
      : std::runtime_error(msg), iteration_(iteration), residual_(residual) {}
  std::size_t iteration() const noexcept { return iteration_; }
  double residual() const noexcept { return residual_; }

 private:
  std::size_t iteration_;
  double residual_;
};

}  // namespace netalign
