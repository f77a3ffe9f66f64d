#pragma once

#include <stdexcept>
#include <string>

namespace hhc {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A point (or scaled corner) fell outside a surface's declared domain.
class DomainError : public Error {
public:
    DomainError(const std::string& what, double x, double y)
        : Error(what), x_(x), y_(y) {}
    double x() const noexcept { return x_; }
    double y() const noexcept { return y_; }

private:
    double x_;
    double y_;
};

class NonFiniteError : public Error {
public:
    using Error::Error;
};

class ParameterError : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature hit its depth or panel cap. Carries the best value found.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double best_value, double error_estimate)
        : Error(what), best_value_(best_value), error_estimate_(error_estimate) {}
    double best_value() const noexcept { return best_value_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double best_value_;
    double error_estimate_;
};

}  // namespace hhc
