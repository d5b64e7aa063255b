#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ramannli {

/// Broad failure classes; the CLI maps each one to its own exit code.
enum class ErrorClass { Parse, Validation, Numerical, Gate };

class Error : public std::runtime_error {
public:
    Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), class_(cls) {}
    ErrorClass error_class() const noexcept { return class_; }

private:
    ErrorClass class_;
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error(ErrorClass::Parse, what) {}
};

/// Carries every violated invariant, not just the first one.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> diagnostics);
    const std::vector<std::string>& diagnostics() const noexcept { return diagnostics_; }

private:
    std::vector<std::string> diagnostics_;
};

class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(ErrorClass::Numerical, what) {}
};

/// Non-finite state inside the Raman integrator.
class DivergenceError : public NumericalError {
public:
    DivergenceError(const std::string& what, double z) : NumericalError(what), z_(z) {}
    double position() const noexcept { return z_; }

private:
    double z_;
};

/// A closed-form expression hit one of its singular configurations.
class DegenerateError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Integrand left its domain (e.g. a negative power profile).
class DomainError : public NumericalError {
public:
    DomainError(const std::string& what, double where) : NumericalError(what), where_(where) {}
    double where() const noexcept { return where_; }

private:
    double where_;
};

class GateError : public Error {
public:
    explicit GateError(const std::string& what) : Error(ErrorClass::Gate, what) {}
};

}  // namespace ramannli
