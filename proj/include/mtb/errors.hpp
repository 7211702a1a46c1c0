#pragma once

#include <stdexcept>

namespace mtb {

/// File could not be opened, read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed field file. The message names the offending header field or
/// the byte offset of the bad payload entry.
class FieldFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two trees built with different sweep directions were passed to a matcher.
class DirectionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace mtb
