#pragma once

#include <stdexcept>
#include <string>

namespace wfrec {

// min(a,b) > epsilon^2/2 is required before planning or verifying; thrown
// wherever that precondition fails so the CLI can map it to a dedicated
// exit code.
struct FellerViolated : std::runtime_error {
    explicit FellerViolated(const std::string& what) : std::runtime_error(what) {}
};

// A fraction parameter (m_fraction, alpha_fraction, kappa_fraction) outside (0,1).
struct InvalidFraction : std::invalid_argument {
    explicit InvalidFraction(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed or semantically invalid run configuration (bad key, bad value,
// empty stopping spec, ...).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Raised by the decay-rate fit when fewer than 3 snapshots sit above the
// TV noise floor.
struct DegenerateFit : std::runtime_error {
    explicit DegenerateFit(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem failures while writing reports/CSV; mapped to exit code 74.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wfrec
