#pragma once

#include <stdexcept>
#include <string>

namespace lifmoran {

// Base of everything thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad or inconsistent inputs: files, columns, dimensions, indices, flags.
class InputError : public Error {
public:
    using Error::Error;
};

// Numerical failure: singular systems, quadrature that does not converge.
class NumericalError : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public InputError {
public:
    using InputError::InputError;
};

class IndexOutOfRange : public InputError {
public:
    using InputError::InputError;
};

// All raw values equal; the Moran coefficient is undefined for such data.
class ZeroVariance : public InputError {
public:
    using InputError::InputError;
};

class EmptyRange : public InputError {
public:
    using InputError::InputError;
};

class MissingColumn : public InputError {
public:
    using InputError::InputError;
};

class NonNumericValue : public InputError {
public:
    using InputError::InputError;
};

class DuplicateId : public InputError {
public:
    using InputError::InputError;
};

class EmptyDataset : public InputError {
public:
    using InputError::InputError;
};

class MalformedGeoJson : public InputError {
public:
    using InputError::InputError;
};

class JoinKeyMissing : public InputError {
public:
    using InputError::InputError;
};

class GalParseError : public InputError {
public:
    using InputError::InputError;
};

class SingularSystem : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class QuadratureError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace lifmoran
