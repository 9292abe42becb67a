#pragma once

#include <stdexcept>
#include <string>

namespace thetaspan {

/// Invalid user-facing configuration (bad p, k, truncation, format...).
/// Maps to CLI exit code 2.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// Multi-modular rank certification could not reach agreement within the
/// prime budget. Maps to CLI exit code 3.
class CertificationError : public std::runtime_error {
public:
    explicit CertificationError(const std::string& what) : std::runtime_error(what) {}
};

/// Cache file exists but is malformed (bad magic, truncated payload).
/// Key mismatches are not errors, they are cache misses. Maps to CLI exit code 4.
class CacheError : public std::runtime_error {
public:
    explicit CacheError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace thetaspan
