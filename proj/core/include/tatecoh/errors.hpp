#pragma once

#include <stdexcept>
#include <string>

namespace tatecoh {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// p-adic scalar arithmetic
struct NonUnit : Error { using Error::Error; };
struct NotCoprime : Error { using Error::Error; };
struct PrecisionMismatch : Error { using Error::Error; };

// power series over Z/p^N
struct InsufficientPrecision : Error { using Error::Error; };
struct LambdaOverflow : Error { using Error::Error; };
struct NotDistinguished : Error { using Error::Error; };
struct PointNotInMaximalIdeal : Error { using Error::Error; };

// group-ring idempotents and finite modules
struct ActionOrderInvalid : Error { using Error::Error; };
struct IllDefinedEndomorphism : Error { using Error::Error; };
struct NonInvertibleAction : Error { using Error::Error; };

// descent
struct MissingAction : Error { using Error::Error; };
struct BranchZeroUnsupported : Error { using Error::Error; };
struct LevelTooSmall : Error { using Error::Error; };

// elementary module calculus
struct BranchZero : Error { using Error::Error; };
struct UncertifiedValuation : Error { using Error::Error; };

// L-series
struct BranchMismatch : Error { using Error::Error; };
struct OddBranch : Error { using Error::Error; };
struct NonIntegralResult : Error { using Error::Error; };
struct CalibrationFailed : Error { using Error::Error; };
struct ConventionUnresolved : Error { using Error::Error; };

// cache and config
struct CorruptCache : Error { using Error::Error; };
struct VersionMismatch : Error { using Error::Error; };

struct ValidationError : Error {
    std::string field;
    ValidationError(std::string field_path, const std::string& what_arg)
        : Error(field_path + ": " + what_arg), field(std::move(field_path)) {}
};

} // namespace tatecoh
