// matching.hpp
// The energy/symmetry matching condition
// E_{l,m} = (l/n + Z_m) eps + eps0 and the resulting turnplate period. A
// successful fit certifies that the evolution at tau = 2 pi / eps acts as the
// cyclic shift up to a global phase.

#pragma once

#include "turnplate/numerics.hpp"
#include "turnplate/symmetry.hpp"

#include <optional>
#include <vector>

namespace turnplate {

struct MatchingFit {
    double epsilon;            // energy quantum, > 0
    double epsilon0;           // offset, canonicalized into [0, epsilon)
    std::vector<int> z_values; // Z_m per labeled eigenvalue
    double residual;           // max |E - ((l/n + Z) eps + eps0)|
};

struct TurnplateReport {
    double tau;
    std::vector<double> step_fidelities; // |<T^k psi0 | psi(k tau)>|, k = 1..hops
    std::vector<Complex> step_phases;    // unit phases of the same overlaps
    double phase_consistency_dev;        // max |ratio_k - ratio_1| of successive phases
};

// Search every eigenvalue pair and Z offset for the matching condition.
// Returns the valid fit with the largest eps (the minimal period), or nullopt
// if no fit has residual <= tol with all |Z_m| <= z_max. A single eigenvalue
// is under-determined and yields nullopt.
std::optional<MatchingFit> fit_matching(const std::vector<double>& values,
                                        const std::vector<int>& labels, int order,
                                        double tol = 1e-9, int z_max = 10);

double period(const MatchingFit& fit);

// Evolve psi0 to k tau for k = 1..hops and compare against T^k psi0. The
// per-step global phase is reported, not asserted against any closed form.
TurnplateReport verify_turnplate(const ComplexMatrix& h, const ShiftOperator& t,
                                 const MatchingFit& fit, const Vec& psi0, int hops);

} // namespace turnplate
