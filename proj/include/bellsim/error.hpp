#pragma once

#include <stdexcept>
#include <string>

namespace bellsim {

/// Raised for invalid user-supplied configuration (bad n, malformed
/// distribution spec, out-of-range grid). The message names the field.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when an internal invariant fails. Never expected to fire.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace bellsim
