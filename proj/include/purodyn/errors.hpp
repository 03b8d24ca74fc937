#pragma once

#include <stdexcept>

namespace purodyn {

// Base class for every error thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error { using Error::Error; };
struct NonHermitianInput : Error { using Error::Error; };
struct NonHermitianComponent : Error { using Error::Error; };
struct InvalidDensityMatrix : Error { using Error::Error; };
struct NonUnitaryBasis : Error { using Error::Error; };
struct BlochNormExceeded : Error { using Error::Error; };
struct StepTooLarge : Error { using Error::Error; };
struct StateInvariantViolated : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };
struct ObjectiveNonFinite : Error { using Error::Error; };
struct GridMismatch : Error { using Error::Error; };
struct NonUnitaryTarget : Error { using Error::Error; };
struct IndexOutOfRange : Error { using Error::Error; };
struct UnsupportedNodeCount : Error { using Error::Error; };
struct ConfigInvalid : Error { using Error::Error; };

}  // namespace purodyn
