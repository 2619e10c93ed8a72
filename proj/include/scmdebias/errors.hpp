#pragma once

#include <stdexcept>
#include <string>

namespace scmdebias {

// Bad input files, out-of-vocabulary tokens, malformed records.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Degenerate geometry or statistics (zero norms, undefined correlations).
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid arguments or configuration.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace scmdebias
