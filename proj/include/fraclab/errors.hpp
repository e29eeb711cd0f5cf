#pragma once

#include <stdexcept>
#include <string>

namespace fraclab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input: bad spec, bad config, parameter out of its domain.
class ValidationError : public Error {
public:
    using Error::Error;
};

// A numerical routine could not produce a finite answer.
class NumericalError : public Error {
public:
    using Error::Error;
};

// Integrand returned a non-finite value; `where` names the offending point.
class QuadratureError : public NumericalError {
public:
    QuadratureError(const std::string& what, std::string where)
        : NumericalError(what + " at " + where), where_(std::move(where)) {}
    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

// Lemma series evaluated outside its convergence range.
class DivergentSeries : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class IoError : public Error {
public:
    IoError(const std::string& what, std::string path)
        : Error(what + ": " + path), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace fraclab
