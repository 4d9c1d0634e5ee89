#pragma once

#include <stdexcept>
#include <string>

namespace wormcov {

/// An instance is too large for an exact-enumeration routine.
struct CapExceeded : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A Monte Carlo estimate could not be formed (e.g. no samples landed in the
/// target class); carries the phase that failed.
struct SamplingError : std::runtime_error {
    SamplingError(const std::string& what, std::string phase_arg)
        : std::runtime_error(what + " [" + phase_arg + "]"), phase(std::move(phase_arg)) {}
    std::string phase;
};

}  // namespace wormcov
