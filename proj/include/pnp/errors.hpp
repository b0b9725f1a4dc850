#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pnp {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid parameters, grid specifications or configuration files.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Vectors that do not conform to the grid they are used with.
class DimensionError : public Error {
public:
    using Error::Error;
};

// Kernel derivative requested at coincident points.
class SingularEvaluationError : public Error {
public:
    using Error::Error;
};

// Evaluation point outside the admissible region (e.g. on the boundary).
class DomainError : public Error {
public:
    using Error::Error;
};

// A boundary or interface linear system could not be solved.
class LinearSolveError : public Error {
public:
    using Error::Error;
};

// Non-finite values appeared during an iteration.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, std::size_t step)
        : Error(what + " (step " + std::to_string(step) + ")"), step_(step) {}

    [[nodiscard]] std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

// Iteration budget exhausted (used by the channel continuation, where a stage
// that fails to converge cannot seed the next one).
class NonConvergenceError : public Error {
public:
    NonConvergenceError(const std::string& what, std::size_t stage,
                        double residual_dphi, double residual_c)
        : Error(what), stage_(stage), residual_dphi_(residual_dphi), residual_c_(residual_c) {}

    [[nodiscard]] std::size_t stage() const noexcept { return stage_; }
    [[nodiscard]] double residual_dphi() const noexcept { return residual_dphi_; }
    [[nodiscard]] double residual_c() const noexcept { return residual_c_; }

private:
    std::size_t stage_;
    double residual_dphi_;
    double residual_c_;
};

// A post-solve consistency check (current constancy, interface continuity) failed.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

}  // namespace pnp
