#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ptlattice {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A lattice specification or argument violates its invariants.
class InvalidSpec : public Error {
 public:
  using Error::Error;
};

/// Aberth iteration did not settle within the sweep budget.
class ConvergenceFailure : public Error {
 public:
  ConvergenceFailure(const std::string& what, std::vector<int> indices,
                     std::vector<double> residuals)
      : Error(what), unconverged_(std::move(indices)), residuals_(std::move(residuals)) {}

  const std::vector<int>& unconverged() const noexcept { return unconverged_; }
  const std::vector<double>& residuals() const noexcept { return residuals_; }

 private:
  std::vector<int> unconverged_;
  std::vector<double> residuals_;
};

/// The candidate eigenvalue does not admit an eigenvector to working precision.
class DefectiveCandidate : public Error {
 public:
  using Error::Error;
};

class DegenerateNormalization : public Error {
 public:
  using Error::Error;
};

class IllConditionedFit : public Error {
 public:
  using Error::Error;
};

/// Left-half amplitudes cannot be made real by a single global phase.
class NotRealizable : public Error {
 public:
  using Error::Error;
};

/// The upper end of a threshold search is not in the broken phase.
class BracketFailure : public Error {
 public:
  using Error::Error;
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

/// The broken/unbroken predicate was observed to be non-monotone in gamma.
class MonotonicityViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace ptlattice
