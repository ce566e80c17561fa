#pragma once

#include <stdexcept>
#include <string>

namespace bakerlab {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numeric argument lies outside the range an operation accepts.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Evaluation requested at (or numerically on top of) a pole.
class SingularityError : public Error {
public:
    using Error::Error;
};

/// A point or curve could not be certified to lie where the operation needs it.
class UncertifiedError : public Error {
public:
    using Error::Error;
};

/// Loop refinement or winding computation could not be made unambiguous.
class AmbiguityError : public Error {
public:
    using Error::Error;
};

/// Malformed experiment configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace bakerlab
