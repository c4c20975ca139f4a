#pragma once

#include <stdexcept>
#include <string>

namespace halfstep {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad chain geometry: cut on a boundary, shift longer than the chain, chain mismatch.
class GeometryError : public Error {
 public:
  using Error::Error;
};

// Non-unitary input, broken chiral symmetry, closed gap.
class AdmissibilityError : public Error {
 public:
  using Error::Error;
};

// Counts that depend on the truncation: ambiguous localization, chain-doubling mismatch.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// A construction that is impossible because some index is nonzero.
class IndexObstruction : public Error {
 public:
  using Error::Error;
};

class SpecError : public Error {
 public:
  SpecError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace halfstep
