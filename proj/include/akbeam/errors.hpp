#pragma once

#include <stdexcept>
#include <string>

namespace akbeam {

/// Base class for all akbeam errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A movable pier is closer than the minimum gap to another support.
struct PierTooClose : Error {
    explicit PierTooClose(const std::string& msg) : Error(msg) {}
};

/// A support or load position falls outside [0, total_length].
struct PositionOutOfDomain : Error {
    explicit PositionOutOfDomain(const std::string& msg) : Error(msg) {}
};

/// The assembled stiffness system could not be solved to tolerance.
struct SingularStiffness : Error {
    explicit SingularStiffness(const std::string& msg) : Error(msg) {}
};

/// The generalized least-squares trend system is rank deficient.
struct RankDeficientTrend : Error {
    explicit RankDeficientTrend(const std::string& msg) : Error(msg) {}
};

/// Correlation matrix remained numerically singular after nugget escalation.
struct IllConditioned : Error {
    explicit IllConditioned(const std::string& msg) : Error(msg) {}
};

/// No candidate left in the enrichment pool after exclusions.
struct PoolExhausted : Error {
    explicit PoolExhausted(const std::string& msg) : Error(msg) {}
};

/// relative_error() called with a zero reference probability.
struct ZeroReference : Error {
    explicit ZeroReference(const std::string& msg) : Error(msg) {}
};

/// Configuration document is invalid; message names the offending field.
struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

/// Run outputs refer to different reference studies and cannot be merged.
struct MismatchedReference : Error {
    explicit MismatchedReference(const std::string& msg) : Error(msg) {}
};

}  // namespace akbeam
