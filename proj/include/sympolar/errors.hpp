#pragma once

#include <stdexcept>
#include <string>

namespace sympolar {

// Base of the library's error hierarchy.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Wrong dimensions, odd-sized symplectic input, mismatched operands.
class BadShape : public Error {
 public:
  using Error::Error;
};

// Iterative kernel failed to converge or conditioning exceeded the cap.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

class NotIsotropic : public Error {
 public:
  using Error::Error;
};

class RankDeficient : public Error {
 public:
  using Error::Error;
};

class ConstraintViolated : public Error {
 public:
  using Error::Error;
};

class NotTransverse : public Error {
 public:
  using Error::Error;
};

// A plane ellipsoid was handed to an operation expecting it on a
// different Lagrangian plane.
class PlaneMismatch : public Error {
 public:
  using Error::Error;
};

// Theorem hypotheses not satisfied by the input (e.g. capacity below pi).
class HypothesisNotMet : public Error {
 public:
  using Error::Error;
};

// Two independent computation routes disagreed beyond tolerance.
class InternalInconsistency : public Error {
 public:
  using Error::Error;
};

// Quadrature grid too small for the requested state.
class GridWarning : public Error {
 public:
  using Error::Error;
};

}  // namespace sympolar
