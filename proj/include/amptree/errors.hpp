#pragma once

#include <stdexcept>
#include <string>

namespace amptree {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InputShapeError : public Error {
public:
    using Error::Error;
};

class CapacityError : public Error {
public:
    using Error::Error;
};

class DegenerateInputError : public Error {
public:
    using Error::Error;
};

class RangeError : public Error {
public:
    using Error::Error;
};

class WeightError : public Error {
public:
    using Error::Error;
};

class InconsistentFixedPointError : public Error {
public:
    using Error::Error;
};

// Threshold outside what a fixed-size construction can realize.
class UnsupportedThresholdError : public RangeError {
public:
    using RangeError::RangeError;
};

class InvalidStaircaseError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace amptree
