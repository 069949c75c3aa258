#pragma once

#include <stdexcept>
#include <string>

namespace geodesic {

/// Raised when a computation would exceed a configured search bound,
/// period cap or memory budget.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace geodesic
