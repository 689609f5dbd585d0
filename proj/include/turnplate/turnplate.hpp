// turnplate.hpp
// Umbrella header for the turnplate library.

#pragma once

#include "turnplate/dynamics.hpp"
#include "turnplate/errors.hpp"
#include "turnplate/fock.hpp"
#include "turnplate/io.hpp"
#include "turnplate/matching.hpp"
#include "turnplate/numerics.hpp"
#include "turnplate/perturb.hpp"
#include "turnplate/ring.hpp"
#include "turnplate/symmetry.hpp"
