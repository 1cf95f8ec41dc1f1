#ifndef CAE_ERROR_HPP
#define CAE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace cae {

/// Base class for all errors thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Mismatched matrix/vector dimensions.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Invalid argument values or unusable input data.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// A transform or algorithm parameter is out of its admissible range.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Malformed file contents (bad magic, ragged rows, truncation).
class FormatError : public Error {
public:
    using Error::Error;
};

/// Non-finite values or other numeric breakdown at runtime.
class NumericError : public Error {
public:
    using Error::Error;
};

} // namespace cae

#endif
