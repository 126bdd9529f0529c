// errors.hpp: Exception hierarchy shared by every module and the CLI.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace timeless {

enum class ErrorCode {
    config,      // malformed or invalid user configuration
    domain,      // argument outside an operation's mathematical domain
    structural,  // inconsistent dimensions / shapes
    usage,       // invalid call into an output helper (empty series, NaN)
    numerical,   // failed convergence, invariant violation, decomposition failure
    capacity,    // requested Hilbert space larger than the configured bound
};

inline std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::config: return "E_CONFIG";
        case ErrorCode::domain: return "E_DOMAIN";
        case ErrorCode::structural: return "E_STRUCTURAL";
        case ErrorCode::usage: return "E_USAGE";
        case ErrorCode::numerical: return "E_NUMERICAL";
        case ErrorCode::capacity: return "E_CAPACITY";
    }
    return "E_UNKNOWN";
}

// Process exit status the CLI uses for each error family.
inline int exit_status(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::numerical: return 3;
        case ErrorCode::capacity: return 4;
        default: return 2;
    }
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& w) : Error(ErrorCode::config, w) {}
};
struct DomainError : Error {
    explicit DomainError(const std::string& w) : Error(ErrorCode::domain, w) {}
};
struct StructuralError : Error {
    explicit StructuralError(const std::string& w) : Error(ErrorCode::structural, w) {}
};
struct UsageError : Error {
    explicit UsageError(const std::string& w) : Error(ErrorCode::usage, w) {}
};
struct NumericalError : Error {
    explicit NumericalError(const std::string& w) : Error(ErrorCode::numerical, w) {}
};
struct CapacityError : Error {
    explicit CapacityError(const std::string& w) : Error(ErrorCode::capacity, w) {}
};

}  // namespace timeless
