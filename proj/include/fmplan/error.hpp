#pragma once

#include <stdexcept>
#include <string>

#include "fmplan/grid.hpp"

namespace fmplan {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. The message names the byte offset or line.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// A parameter outside its admissible domain (alpha < 2, sigma <= 0, ...).
class ConstraintError : public Error {
 public:
  using Error::Error;
};

/// A goal cell that is not inside the safe-start region.
class AssumptionViolation : public Error {
 public:
  AssumptionViolation(const std::string& what, Cell cell) : Error(what), cell_(cell) {}
  Cell cell() const { return cell_; }

 private:
  Cell cell_;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class OutOfBoundsError : public Error {
 public:
  using Error::Error;
};

}  // namespace fmplan
