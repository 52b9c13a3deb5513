#ifndef HESSLV_ERRORS_HPP
#define HESSLV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hesslv {

// Parameter or input outside the admissible set (n>2k, q>k, sigma>=0, ...).
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Requested computation is refused in the current stability regime
// (no global solution is available below the critical exponent).
struct RegimeError : std::runtime_error {
    explicit RegimeError(const std::string& what) : std::runtime_error(what) {}
};

// Adaptive integration failed: step underflow, step budget exhausted,
// or loss of the structure the solver relies on (e.g. negative flux).
struct NonConvergence : std::runtime_error {
    explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

// Input data degenerate for the requested transform (e.g. v' = 0 at s > 0).
struct DegenerateInput : std::runtime_error {
    explicit DegenerateInput(const std::string& what) : std::runtime_error(what) {}
};

} // namespace hesslv

#endif
