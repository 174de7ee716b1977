#pragma once

#include <stdexcept>
#include <string>

namespace ridgelab {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input does not describe a valid lattice distribution (bad weights, bad ps, bad JSON).
class InvalidDistribution : public Error {
public:
    using Error::Error;
};

/// Zero variance: the standardized variable does not exist.
class DegenerateDistribution : public Error {
public:
    using Error::Error;
};

/// |f(z)| vanished relative to the log-domain scale, so log|f| is unreliable.
class EvaluationNearZero : public Error {
public:
    using Error::Error;
};

class RootFindingDiverged : public Error {
public:
    using Error::Error;
};

/// Raw coefficient form above the degree cap; use the factored form instead.
class DegreeCapExceeded : public Error {
public:
    using Error::Error;
};

class QuadratureNotConverged : public Error {
public:
    using Error::Error;
};

/// Delta <= c0_eff: the stability bound is vacuous.
class StripTooNarrow : public Error {
public:
    using Error::Error;
};

class SolverNotConverged : public Error {
public:
    using Error::Error;
};

/// Arc touches the open left edge of the square, which the kernel bound excludes.
class ArcExcluded : public Error {
public:
    using Error::Error;
};

}  // namespace ridgelab
