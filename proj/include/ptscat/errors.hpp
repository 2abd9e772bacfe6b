#pragma once

#include <stdexcept>
#include <string>

namespace ptscat {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

/// Transfer-matrix entries left the representable range (large Im k * rho).
class Overflow : public Error {
 public:
  using Error::Error;
};

class SingularMatching : public Error {
 public:
  using Error::Error;
};

/// Wavenumber outside the region where the requested quantity is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// |gamma| = 2: the point interaction has the whole complex plane as spectrum.
class WholePlaneSpectrum : public Error {
 public:
  using Error::Error;
};

class SingularImageSet : public Error {
 public:
  using Error::Error;
};

/// The bracket I - 2(1+ik)T_k is not invertible.
class SMatrixNonexistent : public Error {
 public:
  using Error::Error;
};

class DegenerateFit : public Error {
 public:
  using Error::Error;
};

class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

class InvalidPotential : public Error {
 public:
  using Error::Error;
};

/// Configuration could not be parsed or validated; `where` names the field.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

}  // namespace ptscat
