#pragma once

#include <stdexcept>
#include <string>

namespace smoothlab {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define SMOOTHLAB_DEFINE_ERROR(Name)                                  \
    struct Name : Error {                                             \
        explicit Name(const std::string& msg) : Error(msg) {}         \
    }

// Structurally unusable input (negative probability, empty state list...).
// Distinct from a law that is well-formed but fails a validation check.
SMOOTHLAB_DEFINE_ERROR(MalformedLaw);
SMOOTHLAB_DEFINE_ERROR(OutOfRange);
SMOOTHLAB_DEFINE_ERROR(NegativeArgument);
SMOOTHLAB_DEFINE_ERROR(NonpositiveU);
SMOOTHLAB_DEFINE_ERROR(GridMismatch);
SMOOTHLAB_DEFINE_ERROR(StrategyMismatch);
SMOOTHLAB_DEFINE_ERROR(ContinuousState);
SMOOTHLAB_DEFINE_ERROR(TooDeep);
SMOOTHLAB_DEFINE_ERROR(TooLarge);
SMOOTHLAB_DEFINE_ERROR(AtomExplosion);
SMOOTHLAB_DEFINE_ERROR(CapExceeded);
SMOOTHLAB_DEFINE_ERROR(EllipticityViolation);
SMOOTHLAB_DEFINE_ERROR(InvalidDelta);
SMOOTHLAB_DEFINE_ERROR(ParseError);

#undef SMOOTHLAB_DEFINE_ERROR

}  // namespace smoothlab
