#pragma once

#include <stdexcept>
#include <string>

namespace kernid {

/// Point dimensions disagree, or a kernel family got a design it cannot handle.
class DimensionMismatchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A search box with low >= high for some parameter.
class InvalidBoundsError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Cholesky failed even after jitter escalation.
class NotPsdError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A design handed to a rank check does not satisfy the theorem hypothesis.
class ConditionNotMetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed design/params/dataset document.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace kernid
