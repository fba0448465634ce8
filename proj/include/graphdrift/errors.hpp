#pragma once

#include <stdexcept>
#include <string>

namespace graphdrift {

// Input data does not match the declared attribute schema (mixed kinds,
// mismatched numeric dimensions, unknown keys in a dataset file).
struct SchemaError : std::runtime_error {
  explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

// A dataset or config file could not be parsed.
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Graph too large for an exact computation with a hard size cap.
struct SizeLimitError : std::runtime_error {
  explicit SizeLimitError(const std::string& what) : std::runtime_error(what) {}
};

// Covariance of the reference sample is unusable even after shrinkage.
struct DegeneratePrototypesError : std::runtime_error {
  explicit DegeneratePrototypesError(const std::string& what) : std::runtime_error(what) {}
};

// A distance matrix is not realisable as a Euclidean configuration.
struct GeometryError : std::runtime_error {
  explicit GeometryError(const std::string& what) : std::runtime_error(what) {}
};

// Monte Carlo population too small for the requested tail quantile.
struct InsufficientSimulationsError : std::runtime_error {
  explicit InsufficientSimulationsError(const std::string& what) : std::runtime_error(what) {}
};

// A feature is undefined for the given graph (e.g. density of a 1-vertex graph).
struct DegenerateGraphError : std::runtime_error {
  explicit DegenerateGraphError(const std::string& what) : std::runtime_error(what) {}
};

// Experiment configuration is inconsistent or incomplete.
struct InvalidConfigError : std::runtime_error {
  explicit InvalidConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace graphdrift
