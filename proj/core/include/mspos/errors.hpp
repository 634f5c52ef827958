#pragma once

#include <stdexcept>

namespace mspos {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed configuration or invalid arguments (scenario files, solver
/// parameters, mismatched grids, empty selections).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Filesystem / stream failures.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Degenerate geometry: coincident points, candidate on top of a gNB,
/// parallel bearings.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// Numerical failures: singular normal equations, empty subspaces,
/// peakless periodograms, zero robust scale.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// The iterate left the sanity region around the scenario.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace mspos
