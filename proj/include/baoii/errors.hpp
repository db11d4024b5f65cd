#pragma once

#include <stdexcept>
#include <string>

namespace baoii {

// Solver breakdown, unreachable targets, conditioning failures.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed user input: config files, timelines, parameter domains.
struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace baoii
