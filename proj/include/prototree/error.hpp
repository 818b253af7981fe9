#pragma once

#include <stdexcept>
#include <string>

namespace prototree {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-contract input (bad matrix, bad tree, bad arguments).
/// The CLI maps these to exit code 2 and the server to HTTP 400.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A session or payload bound to a different dendrogram.
class DigestMismatchError : public Error {
 public:
  using Error::Error;
};

/// Something looked up by id that does not exist.
class NotFoundError : public Error {
 public:
  using Error::Error;
};

}  // namespace prototree
