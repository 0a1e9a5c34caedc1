#pragma once

#include <stdexcept>
#include <string>

namespace covpanel {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Configuration / input-layout problems (missing directories, bad config keys).
struct ConfigError : Error { using Error::Error; };

struct EmptySeries : Error { using Error::Error; };
struct InsufficientData : Error { using Error::Error; };
struct PanelStartAfterListing : Error { using Error::Error; };
struct NonFiniteLikelihood : Error { using Error::Error; };

// Fitted GARCH persistence at or above the breakdown threshold; the
// unconditional variance is not defined for such fits.
struct BreakdownError : Error { using Error::Error; };

struct UndefinedTest : Error { using Error::Error; };
struct EmptySample : Error { using Error::Error; };
struct DegenerateBaseline : Error { using Error::Error; };

// Base for optimizer failures; the econometrics headers derive versions
// that carry the best parameters seen before the iteration budget ran out.
struct ConvergenceFailure : Error { using Error::Error; };

// A precondition the library itself is responsible for was violated.
struct InternalInvariantViolation : Error { using Error::Error; };

}  // namespace covpanel
