#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ermdp {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Errors caused by invalid inputs (bad models, parameters out of range,
/// malformed configuration). CLI maps these to exit code 1.
struct ValidationError : Error {
    using Error::Error;
};

/// Errors raised while executing an otherwise valid request (iteration caps,
/// I/O failures, overflowing bounds). CLI maps these to exit code 2.
struct RuntimeError : Error {
    using Error::Error;
};

struct RowNotStochastic : ValidationError {
    int state;
    int action;
    RowNotStochastic(int s, int a, const std::string& detail)
        : ValidationError("transition row (" + std::to_string(s) + "," + std::to_string(a) +
                          ") is not a probability distribution: " + detail),
          state(s), action(a) {}
};

struct RewardOutOfRange : ValidationError {
    int state;
    int action;
    RewardOutOfRange(int s, int a, double value)
        : ValidationError("reward (" + std::to_string(s) + "," + std::to_string(a) + ") = " +
                          std::to_string(value) + " lies outside [0,1]"),
          state(s), action(a) {}
};

struct GammaOutOfRange : ValidationError {
    explicit GammaOutOfRange(double gamma)
        : ValidationError("discount factor " + std::to_string(gamma) +
                          " must lie strictly inside (0,1)") {}
};

struct NonFiniteEntry : ValidationError {
    using ValidationError::ValidationError;
};

struct ShapeMismatch : ValidationError {
    using ValidationError::ValidationError;
};

struct InvalidDistribution : ValidationError {
    using ValidationError::ValidationError;
};

struct IndexOutOfRange : ValidationError {
    using ValidationError::ValidationError;
};

struct NonPositiveEps : ValidationError {
    using ValidationError::ValidationError;
};

struct IterationCap : RuntimeError {
    long long iterations;
    explicit IterationCap(long long iters)
        : RuntimeError("fixed-point iteration did not converge within " +
                       std::to_string(iters) + " sweeps"),
          iterations(iters) {}
};

struct BoundOverflow : RuntimeError {
    double log10_total;
    explicit BoundOverflow(double log10_value)
        : RuntimeError("sample bound exceeds 2^62 total samples (log10(T) = " +
                       std::to_string(log10_value) + ")"),
          log10_total(log10_value) {}
};

struct EpsOutOfRange : ValidationError {
    double eps;
    double cap;
    EpsOutOfRange(double eps_value, double cap_value)
        : ValidationError("eps = " + std::to_string(eps_value) +
                          " is outside the admissible range (0, " + std::to_string(cap_value) + ")"),
          eps(eps_value), cap(cap_value) {}
};

struct DeltaOutOfRange : ValidationError {
    using ValidationError::ValidationError;
};

struct VacuousRegime : ValidationError {
    using ValidationError::ValidationError;
};

struct BetaZero : ValidationError {
    using ValidationError::ValidationError;
};

struct ProbabilityOverflow : ValidationError {
    using ValidationError::ValidationError;
};

struct IoError : RuntimeError {
    using RuntimeError::RuntimeError;
};

struct ConfigError : ValidationError {
    using ValidationError::ValidationError;
};

}  // namespace ermdp
