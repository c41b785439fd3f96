#pragma once

#include <stdexcept>
#include <string>

namespace fairshield {

/// Raised when a JSON config is malformed; the message carries the field path.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised when a computation would exceed a configured budget (state counts,
/// horizon caps). The message names the limit that was hit.
class ResourceLimitError : public std::runtime_error {
public:
    explicit ResourceLimitError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace fairshield
