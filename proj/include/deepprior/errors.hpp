// Error taxonomy for the prior-evaluation library.
//
// Domain errors flag mathematically invalid inputs, configuration errors flag
// malformed setups (bad width lists, bad grids), accuracy errors flag a
// refinement loop that stopped short of its tolerance, and resource errors
// flag enumerations that would exceed the configured budgets.  Divergence of
// a density at the origin is a legitimate outcome, not an error; it travels
// as a flag on the returned value.  The CLI maps these types onto its exit
// codes.

#pragma once

#include <stdexcept>
#include <string>

namespace deepprior {

class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Raised when an input hits a pole of the gamma function or an integral
// that diverges for the requested parameters.
class DivergenceError : public DomainError {
public:
    explicit DivergenceError(const std::string& what) : DomainError(what) {}
};

// A refinement loop exhausted its budget before meeting the target
// tolerance.  Carries the best estimate so callers can decide whether the
// achieved accuracy is still usable.
class AccuracyError : public std::runtime_error {
public:
    AccuracyError(const std::string& what, double best, double rel_err)
        : std::runtime_error(what), best_estimate(best), achieved_rel_err(rel_err) {}

    double best_estimate;
    double achieved_rel_err;
};

class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace deepprior
