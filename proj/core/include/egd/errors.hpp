#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace egd {

/// Base class for all errors raised by the library. Simulation drivers
/// attach the failing step index before rethrowing, preserving the
/// dynamic type of the original error.
class Error : public std::runtime_error {
public:
    explicit Error(std::string message)
        : std::runtime_error(std::move(message)) {}

    void attach_step(long step) {
        if (!step_) {
            step_ = step;
            message_ = std::string(std::runtime_error::what()) +
                       " (at simulation step " + std::to_string(step) + ")";
        }
    }
    std::optional<long> step() const { return step_; }

    const char* what() const noexcept override {
        return message_.empty() ? std::runtime_error::what() : message_.c_str();
    }

private:
    std::optional<long> step_;
    std::string message_;
};

#define EGD_DEFINE_ERROR(NAME)                         \
    class NAME : public Error {                        \
    public:                                            \
        explicit NAME(std::string message)             \
            : Error(std::move(message)) {}             \
    }

EGD_DEFINE_ERROR(InvalidDensity);
EGD_DEFINE_ERROR(GridMismatch);
EGD_DEFINE_ERROR(DegenerateMean);
EGD_DEFINE_ERROR(ShiftTooSmall);
EGD_DEFINE_ERROR(InvalidParams);
EGD_DEFINE_ERROR(NoSolution);
EGD_DEFINE_ERROR(BracketError);
EGD_DEFINE_ERROR(TimestepTooLarge);
EGD_DEFINE_ERROR(Unsupported);
EGD_DEFINE_ERROR(EmptySupport);
EGD_DEFINE_ERROR(IncompatibleRuns);
EGD_DEFINE_ERROR(ConfigError);

#undef EGD_DEFINE_ERROR

/// Raised when an iterative solver fails to reach its tolerance.
class MaxIterExceeded : public Error {
public:
    MaxIterExceeded(std::string message, int iterations, double residual)
        : Error(std::move(message) + " (" + std::to_string(iterations) +
                " iterations, residual " + std::to_string(residual) + ")"),
          iterations_(iterations),
          residual_(residual) {}

    int iterations() const { return iterations_; }
    double residual() const { return residual_; }

private:
    int iterations_;
    double residual_;
};

}  // namespace egd
