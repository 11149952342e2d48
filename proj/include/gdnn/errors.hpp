#pragma once

#include <stdexcept>
#include <string>

namespace gd {

// Failure taxonomy at the library boundary. The CLI maps these onto its
// documented exit codes; library code never calls exit().

// Incompatible matrix/vector dimensions.
struct ShapeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Argument outside its documented range (rates, counts, indices).
struct ParamError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad configuration file or flag combination.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed dataset file or out-of-range label.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Unreadable or corrupt model checkpoint.
struct CheckpointError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Non-finite values where finite ones are required, or an iterative
// routine that failed to converge.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Problem size beyond an enumeration bound.
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Call-sequence violation (e.g. a gradient pass fed a cache from a
// different forward call).
struct ContractError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace gd
