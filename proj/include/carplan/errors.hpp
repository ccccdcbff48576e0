#pragma once

#include <stdexcept>
#include <string>

namespace carplan {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed or invalid scene input. `where` carries "path:line" when known.
struct SceneError : Error {
    explicit SceneError(const std::string& msg, std::string where = {})
        : Error(where.empty() ? msg : where + ": " + msg), location(std::move(where)) {}
    std::string location;
};

// A problem statement the solver cannot accept (inadmissible goal, off-domain start).
struct ConfigurationError : Error {
    using Error::Error;
};

// A saved value field does not match the scene or grid it is used with.
struct CompatibilityError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace carplan
