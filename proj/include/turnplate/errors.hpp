// errors.hpp
// Exception types thrown by the turnplate library.

#pragma once

#include <stdexcept>
#include <string>

namespace turnplate {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// numerics
struct NotHermitian : Error { using Error::Error; };
struct NoConvergence : Error { using Error::Error; };

// ring
struct InvalidSpec : Error { using Error::Error; };

// symmetry
struct InvalidDivisor : Error { using Error::Error; };
struct NotCommuting : Error { using Error::Error; };
struct AmbiguousLabel : Error { using Error::Error; };
struct NoSymmetry : Error { using Error::Error; };

// perturb
struct InvalidPartition : Error { using Error::Error; };
struct EmptyManifold : Error { using Error::Error; };
struct GapTooSmall : Error { using Error::Error; };

// fock
struct SectorOverflow : Error { using Error::Error; };

} // namespace turnplate
