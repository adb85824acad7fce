#pragma once

#include <stdexcept>
#include <string>

namespace csdnet {

// Base of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input document (syntax, wrong types, unknown fields).
class ParseError : public Error {
public:
    using Error::Error;
};

// Well-formed input that breaks a model or argument invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

// Numerical failure: singular systems, divergence, infeasible programs.
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace csdnet
