#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace treezeta {

// Exit-code classes used by the CLI: parse = 2, domain = 3, resource = 4.

struct parse_error : std::runtime_error {
    parse_error(const std::string& what, std::size_t position)
        : std::runtime_error(what + " at position " + std::to_string(position)),
          position(position) {}
    std::size_t position;
};

struct domain_error : std::domain_error {
    using std::domain_error::domain_error;
};

/// Raised when an exact birth needs more bits than the configured budget.
struct birth_overflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Fewer distinct trees than requested occur below the search bound.
struct insufficient_bound : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace treezeta
