#pragma once

#include <stdexcept>
#include <string>

namespace splitting {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A split flow was asked to run with t < 0 but only supports forward time.
class NegativeTimeUnsupported : public Error {
 public:
  using Error::Error;
};

/// Processing needs the commutator [A,B] and the split system has none.
class MissingCommutator : public Error {
 public:
  using Error::Error;
};

/// Processing requested for coefficients with alpha != beta.
class EffectiveOrderViolation : public Error {
 public:
  using Error::Error;
};

/// |A_h| >= 1: the harmonic amplification matrix has no rotation form.
class Unstable : public Error {
 public:
  using Error::Error;
};

/// HMC proposals must come from an exactly reversible, volume-preserving map.
class ProcessedIntegratorForbidden : public Error {
 public:
  using Error::Error;
};

class NonFiniteEnergy : public Error {
 public:
  using Error::Error;
};

/// Unknown method, target or problem name.
class UnknownName : public Error {
 public:
  using Error::Error;
};

}  // namespace splitting
