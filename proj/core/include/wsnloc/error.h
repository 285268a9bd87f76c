#pragma once

#include <stdexcept>
#include <string>

namespace wsnloc {

// Every failure raised by the library derives from Error. The CLI maps the
// concrete type onto its exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Arguments outside the mathematical domain of an operation (d <= 0, i == j, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Invalid experiment or model configuration (probabilities out of range, bad keys, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// The Gram matrix does not have p positive eigenvalues.
class DegenerateGeometryError : public Error {
 public:
  using Error::Error;
};

// A node was flagged as a receiver but no message was delivered to it.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace wsnloc
