#ifndef ILLE_ERRORS_HPP
#define ILLE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ille {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad data fed into an operation (non-finite entries, negative weights, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A scalar parameter is outside its admissible range.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Matrix dimensions do not line up, or a required structural property
/// (e.g. symmetry) is missing.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// A numerical routine failed to produce a usable result.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Malformed input file.
class ParseError : public Error {
public:
    using Error::Error;
};

} // namespace ille

#endif
