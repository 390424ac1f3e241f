#ifndef SAC_ERRORS_HPP
#define SAC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sac {

/// Mismatched sizes between fields, grids and mode counts.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Argument outside the mathematical domain of an operation (negative time, dt <= 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A field or value that must be finite is not.
class NonFiniteError : public DomainError {
public:
    using DomainError::DomainError;
};

class UnsupportedNormError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when the partition of [0, T] needs more steps than the configured ceiling.
class RunawayPartitionError : public std::runtime_error {
public:
    RunawayPartitionError(std::size_t ceiling, double reached)
        : std::runtime_error("timestep count exceeded ceiling " + std::to_string(ceiling) +
                             " at t = " + std::to_string(reached)),
          ceiling_(ceiling), reached_(reached) {}

    std::size_t ceiling() const noexcept { return ceiling_; }
    double reached_time() const noexcept { return reached_; }

private:
    std::size_t ceiling_;
    double reached_;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class StudyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace sac

#endif  // SAC_ERRORS_HPP
