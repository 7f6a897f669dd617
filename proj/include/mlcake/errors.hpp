#pragma once

#include <stdexcept>
#include <string>

namespace mlcake {

// Base class for everything thrown by the library.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input: bad rationals, non-normalized
// valuations, intervals with lo > hi, dimension mismatches.
struct validation_error : error {
    using error::error;
};

// A cut query asked for more value than the queried region holds,
// or a long-cut target outside the range of the cut-value function.
struct unattainable_error : error {
    using error::error;
};

// The recursive solver only supports layer counts of the form
// 2^a * 3^b with b <= 1; anything else raises this.
struct unsupported_shape_error : error {
    using error::error;
};

// An invariant the protocols rely on failed. Never expected for
// valid normalized instances; indicates a bug if seen.
struct internal_error : error {
    using error::error;
};

} // namespace mlcake
