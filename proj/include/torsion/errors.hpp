#pragma once

#include <stdexcept>
#include <string>

namespace torsion {

/// Bad user input or a configured resource cap was exceeded. CLI exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// An isomorphism search ran out of budget. Never converted to a silent
/// boolean; callers must treat this as a failure.
struct UndecidedError : std::runtime_error {
    explicit UndecidedError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace torsion
