#pragma once

#include <stdexcept>
#include <string>

namespace qkdsec {

/// Invalid input to a library call (out-of-range index, bad probability vector, ...).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computed quantity failed a consistency check (non-real projection, trace drift).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The two outcome vectors of a measurement basis are (nearly) parallel.
class DegenerateBasisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input lies outside the region where the security model is defined (e.g. Q < e_bit1).
class OutOfModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// No Pauli channel reproduces the requested bit error rate.
class InfeasibleError : public std::runtime_error {
 public:
  InfeasibleError(const std::string& what, double lo, double hi)
      : std::runtime_error(what), lo_(lo), hi_(hi) {}

  double attainable_lo() const noexcept { return lo_; }
  double attainable_hi() const noexcept { return hi_; }

 private:
  double lo_;
  double hi_;
};

}  // namespace qkdsec
