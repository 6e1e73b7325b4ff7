#pragma once

#include <stdexcept>
#include <string>

namespace rdstc {

/// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Operands with incompatible shapes, wrong-length inputs, unsupported schemes.
class DimensionError : public Error {
  public:
    explicit DimensionError(const std::string& what) : Error(what) {}
};

/// Input required to be Hermitian was not (beyond tolerance).
class NonHermitianError : public Error {
  public:
    explicit NonHermitianError(const std::string& what) : Error(what) {}
};

/// Expected-PSD matrix had an eigenvalue below the clamp tolerance.
class NotPsdError : public Error {
  public:
    explicit NotPsdError(const std::string& what) : Error(what) {}
};

/// Cholesky pivot collapsed: matrix not positive definite within tolerance.
class SingularMatrixError : public Error {
  public:
    SingularMatrixError(const std::string& what, double pivot)
        : Error(what + " (pivot magnitude " + std::to_string(pivot) + ")"), pivot_magnitude(pivot) {}
    double pivot_magnitude;
};

/// Adaptive update produced a non-finite matrix.
class DivergenceError : public Error {
  public:
    DivergenceError(const std::string& what, long iteration)
        : Error(what + " (iteration " + std::to_string(iteration) + ")"), iteration(iteration) {}
    long iteration;
};

/// Bad configuration file or option set.
class ConfigError : public Error {
  public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

/// Filesystem failure while reading or writing results.
class IoError : public Error {
  public:
    explicit IoError(const std::string& what) : Error(what) {}
};

} // namespace rdstc
