#pragma once

#include <stdexcept>
#include <string>

namespace sympcal {

// All library failures are typed; the CLI maps parse errors to exit code 2
// and everything else to nonzero with a message.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct AmbiguityError : Error { using Error::Error; };
struct DegeneracyError : Error { using Error::Error; };
struct ResolutionError : Error { using Error::Error; };
struct UnsupportedError : Error { using Error::Error; };
struct LoopError : Error { using Error::Error; };
struct OrbitError : Error { using Error::Error; };
struct DivergenceError : Error { using Error::Error; };
struct AdmissibilityError : Error { using Error::Error; };
struct NondegeneracyError : Error { using Error::Error; };
struct ParseError : Error { using Error::Error; };
struct InternalError : Error { using Error::Error; };

} // namespace sympcal
