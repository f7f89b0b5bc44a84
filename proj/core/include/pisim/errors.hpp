#pragma once

#include <stdexcept>
#include <string>

namespace pisim {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: wrong shape, non-finite entries, out-of-range parameters.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A numerical routine did not converge or a computed residual breached its bound.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// Two eigenvalue clusters are too close to be told apart at the clustering radius.
class ClusterAmbiguity : public Error {
 public:
  using Error::Error;
};

/// Two matrices have different Jordan structure.
class NotSimilar : public Error {
 public:
  using Error::Error;
};

class NotPartialIsometry : public Error {
 public:
  using Error::Error;
};

class NotProjection : public Error {
 public:
  using Error::Error;
};

}  // namespace pisim
