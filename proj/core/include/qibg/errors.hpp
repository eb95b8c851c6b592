#pragma once

#include <stdexcept>
#include <string>

namespace qibg {

// Base for every error the library raises on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class NotUnimodular : public Error {
 public:
  explicit NotUnimodular(const std::string& det)
      : Error("matrix is not unimodular (determinant " + det + ")"), det_(det) {}
  const std::string& determinant() const noexcept { return det_; }

 private:
  std::string det_;
};

class NotIntegral : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// An internal invariant failed at runtime. Seeing one of these means a bug,
// not bad input.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace qibg
