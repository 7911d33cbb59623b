#pragma once

#include <stdexcept>

namespace jcsim {

// Truncation / cross-method convergence failure. The CLI maps this to exit code 2.
struct convergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Integrator breakdown, degenerate null space and similar. CLI exit code 3.
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace jcsim
