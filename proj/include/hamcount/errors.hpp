#pragma once

#include <stdexcept>
#include <string>

namespace hamcount {

/// Argument outside the mathematical domain of an operation (p > 1, k > n, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Input exceeds a configured resource cap (exponential-time kernels).
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller violated a structural precondition of an operation.
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Malformed external input (edge-list files, configs).
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace hamcount
