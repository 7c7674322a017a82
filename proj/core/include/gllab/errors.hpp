#pragma once

#include <stdexcept>
#include <string>

namespace gllab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation point lies within the singular guard of a root, pole or charge.
class SingularPoint : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, double worst_residual)
      : Error(what), worst_residual_(worst_residual) {}
  double worst_residual() const noexcept { return worst_residual_; }

 private:
  double worst_residual_;
};

class InvalidDomain : public Error {
 public:
  using Error::Error;
};

class DegenerateHull : public Error {
 public:
  using Error::Error;
};

class InvalidEpsilon : public Error {
 public:
  using Error::Error;
};

class RootOnContour : public Error {
 public:
  using Error::Error;
};

class NonIntegerWinding : public Error {
 public:
  NonIntegerWinding(const std::string& what, double raw)
      : Error(what), raw_(raw) {}
  double raw_winding() const noexcept { return raw_; }

 private:
  double raw_;
};

class SearchExhausted : public Error {
 public:
  using Error::Error;
};

class SingularCurve : public Error {
 public:
  using Error::Error;
};

class ProjectionDegenerate : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace gllab
