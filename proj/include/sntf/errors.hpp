#pragma once

#include <stdexcept>
#include <string>

namespace sntf {

/// Operand shapes are incompatible for the requested operation.
class ShapeError : public std::runtime_error {
public:
  explicit ShapeError(const std::string& what) : std::runtime_error(what) {}
};

/// A Fourier face failed the invertibility test.
class SingularFaceError : public std::runtime_error {
public:
  SingularFaceError(int face, double cond, const std::string& what)
      : std::runtime_error(what), face_(face), cond_(cond) {}
  int face() const { return face_; }
  double condition() const { return cond_; }

private:
  int face_;
  double cond_;
};

/// A computation produced a NaN/Inf or an otherwise invalid number.
class NumericError : public std::runtime_error {
public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// File could not be read/written or has an invalid format.
class IoError : public std::runtime_error {
public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sntf
