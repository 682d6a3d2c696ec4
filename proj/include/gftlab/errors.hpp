#pragma once

#include <stdexcept>
#include <string>

namespace gftlab {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Distribution construction rejected (bad probabilities, unsorted support, ...).
struct InvalidDistribution : Error {
    using Error::Error;
};

// condition_at_least() called with a threshold above the whole support.
struct EmptyTail : Error {
    using Error::Error;
};

// Empirical operations called on an empty sample multiset.
struct EmptySamples : Error {
    using Error::Error;
};

// Empirical optimizer found no sample on the profitable side of cost/value.
struct NoQualifyingSample : Error {
    using Error::Error;
};

// Fixed-k strategy exhausted its hard draw cap without a qualifying sample.
struct SampleCapExceeded : Error {
    using Error::Error;
};

// Exact evaluation requested for a distribution pair with no closed form.
struct UnsupportedExactPair : Error {
    using Error::Error;
};

// Instance constructor parameters violate a structural precondition.
struct DegenerateInstance : Error {
    using Error::Error;
};

// Walk parameters violate their invariants (non-integer step ratio, ...).
struct InvalidSpec : Error {
    using Error::Error;
};

// Generic parameter validation failure for constructors/transforms.
struct InvalidParameters : Error {
    using Error::Error;
};

// Transform invoked on the branch it does not support.
struct BranchUnsupported : Error {
    using Error::Error;
};

// normalize() needs a strictly positive optimal revenue.
struct ZeroRevenue : Error {
    using Error::Error;
};

// Harness configuration rejected; message carries the offending field path.
struct ConfigError : Error {
    using Error::Error;
};

// Report emission/parsing I/O failure.
struct IoError : Error {
    using Error::Error;
};

}  // namespace gftlab
