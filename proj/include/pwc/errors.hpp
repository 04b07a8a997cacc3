#pragma once

#include <stdexcept>
#include <string>

namespace pwc {

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// The sets overlap in positive measure, so the standing hypothesis
/// mes(S1 ∩ S2) = 0 does not hold.
struct OverlapError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct PreconditionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct GridMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A finite-p tail could not be bounded from the attached decay data.
struct MissingDecayBound : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Quadrature uncertainty is too large to certify the requested inequality.
struct CertificationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// No support point of the transform was found inside the scanned window.
struct InconclusiveSupport : std::runtime_error {
  InconclusiveSupport(const std::string& what, double lo, double hi)
      : std::runtime_error(what), window_lo(lo), window_hi(hi) {}
  double window_lo;
  double window_hi;
};

}  // namespace pwc
