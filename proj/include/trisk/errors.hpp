#pragma once

#include <stdexcept>
#include <string>

namespace trisk {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input file does not match the expected schema (missing column, bad header,
// duplicate key, unparseable cell).
struct SchemaError : Error {
    using Error::Error;
};

// A value is outside the mathematical domain of an operation.
struct DomainError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

struct UnknownRating : Error {
    using Error::Error;
};

struct UnknownCountry : Error {
    using Error::Error;
};

struct EmptySample : Error {
    using Error::Error;
};

struct InsufficientData : Error {
    using Error::Error;
};

struct WeightSumError : Error {
    using Error::Error;
};

struct EmptyTable : Error {
    using Error::Error;
};

} // namespace trisk
