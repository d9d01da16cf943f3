#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace dcqed {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

// Adaptive quadrature ran out of panels.
class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, std::complex<double> estimate, double error)
        : Error(what), estimate_(estimate), error_(error) {}
    std::complex<double> estimate() const { return estimate_; }
    double error() const { return error_; }

private:
    std::complex<double> estimate_;
    double error_;
};

class SingularInterior : public Error {
public:
    using Error::Error;
};

class BranchPointOnPath : public Error {
public:
    using Error::Error;
};

class GapSingularity : public Error {
public:
    using Error::Error;
};

class BranchCut : public Error {
public:
    using Error::Error;
};

class GridTooCoarse : public Error {
public:
    using Error::Error;
};

class BracketingFailure : public Error {
public:
    using Error::Error;
};

// Fixed-point iteration failed; carries the residual history.
class NoConvergence : public Error {
public:
    NoConvergence(const std::string& what, std::vector<double> history)
        : Error(what), history_(std::move(history)) {}
    const std::vector<double>& history() const { return history_; }

private:
    std::vector<double> history_;
};

class PoleProximity : public Error {
public:
    using Error::Error;
};

class AboveGapMode : public Error {
public:
    using Error::Error;
};

class QubitOnResonance : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace dcqed
