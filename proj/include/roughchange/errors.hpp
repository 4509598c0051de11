#pragma once

#include <stdexcept>
#include <string>

namespace roughchange {

/// Bad caller input: out-of-range parameter, empty attribute set, size mismatch.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Two rasters/fields/masks that must share a pixel grid do not.
class DimensionMismatch : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// File could not be opened, read, or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File contents are not a supported image encoding (bad header, 16-bit, ...).
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An internal precondition that callers cannot trigger through the public API was broken.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace roughchange
