#pragma once

#include <stdexcept>
#include <string>

namespace pothole {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad argument or violated precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// File could not be read, written or decoded.
class IoError : public Error {
 public:
  using Error::Error;
};

/// The normal matrix of a least-squares fit is singular.
class RankDeficiency : public Error {
 public:
  using Error::Error;
};

/// The closed-form angle has a negative discriminant.
class NoRealRoot : public Error {
 public:
  using Error::Error;
};

/// A fit produced a non-positive scale, so no physical road model exists.
class DegenerateGeometry : public Error {
 public:
  using Error::Error;
};

}  // namespace pothole
