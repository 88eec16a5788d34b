#ifndef EOCONV_ERRORS_HPP
#define EOCONV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace eoconv
{

class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent configuration. The CLI maps this to exit code 2.
class ConfigError : public Error
{
public:
    using Error::Error;
};

// Invalid argument to a physics routine (non-positive rate, zero voltage, ...).
class PreconditionError : public Error
{
public:
    using Error::Error;
};

// Geometry validation or discretization failure.
class GeometryError : public Error
{
public:
    using Error::Error;
};

class SolverError : public Error
{
public:
    SolverError(const std::string& what, double residual)
        : Error(what), residual_(residual)
    {
    }

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

// No eigenmode passed the confinement check.
class NoConfinedModeError : public SolverError
{
public:
    using SolverError::SolverError;
};

// Pipeline failure annotated with the stage that raised it.
class StageError : public Error
{
public:
    StageError(std::string stage, const std::string& what, bool config_error = false)
        : Error("stage '" + stage + "': " + what), stage_(std::move(stage)), config_error_(config_error)
    {
    }

    const std::string& stage() const noexcept { return stage_; }
    bool is_config_error() const noexcept { return config_error_; }

private:
    std::string stage_;
    bool config_error_;
};

} // namespace eoconv

#endif // EOCONV_ERRORS_HPP
