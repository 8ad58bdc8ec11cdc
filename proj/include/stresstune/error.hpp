#pragma once

#include <stdexcept>
#include <string>

namespace stresstune {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad size, out-of-range value, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The input graph (or a patch subgraph) is not connected where it must be.
class DisconnectedGraph : public Error {
 public:
  using Error::Error;
};

/// An iterative numerical routine hit its iteration cap.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// A point set is affinely degenerate where full span is required.
class DegenerateGeometry : public Error {
 public:
  using Error::Error;
};

/// Patch construction or stitching could not proceed.
class PatchError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace stresstune
