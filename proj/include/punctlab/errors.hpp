#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace punctlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& message)
      : Error("syntax error at " + std::to_string(position) + ": " + message),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class UnknownIdentifier : public Error {
 public:
  UnknownIdentifier(std::size_t position, const std::string& name)
      : Error("unknown identifier '" + name + "' at " + std::to_string(position)),
        position_(position),
        name_(name) {}
  std::size_t position() const noexcept { return position_; }
  const std::string& name() const noexcept { return name_; }

 private:
  std::size_t position_;
  std::string name_;
};

/// 0/0, 0*inf, inf-inf and similar forms.
class IndeterminateError : public Error {
 public:
  using Error::Error;
};

/// Evaluation failed near an essential singularity of the expression itself
/// (exp/sin/cos of the point at infinity) or produced a non-finite density.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

class OutsideDomain : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// All sampled quantities vanish (e.g. a constant map).
class Degenerate : public Error {
 public:
  using Error::Error;
};

class NotBiholomorphic : public Error {
 public:
  using Error::Error;
};

class PointOnCurve : public Error {
 public:
  using Error::Error;
};

class NonIntegral : public Error {
 public:
  NonIntegral(double raw, const std::string& why)
      : Error("winding number not integral (" + std::to_string(raw) + "): " + why), raw_(raw) {}
  double raw() const noexcept { return raw_; }

 private:
  double raw_;
};

}  // namespace punctlab
