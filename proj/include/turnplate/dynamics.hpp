// dynamics.hpp
// Time evolution of single-excitation states: probability traces, transfer
// matrices, and first-transfer detection.

#pragma once

#include "turnplate/numerics.hpp"

#include <optional>
#include <vector>

namespace turnplate {

// Uniform time grid with one real series per site, values in [0, 1].
struct TraceSeries {
    std::vector<double> times;
    std::vector<std::vector<double>> series; // series[site][step]
};

// S(t) = exp(+i H t), the fundamental solution of the coupling-amplitude
// equation; related to the propagator by S = U†.
struct TransferMatrix {
    ComplexMatrix matrix;
};

// psi(t) = exp(-i H t) psi0 at each grid point, from one eigendecomposition.
std::vector<Vec> evolve_state(const ComplexMatrix& h, const Vec& psi0,
                              const std::vector<double>& times);

std::vector<double> uniform_grid(double t_max, int steps);

// P_i(t) = |<i|psi(t)>|^2 on a uniform grid including both endpoints.
TraceSeries probability_trace(const ComplexMatrix& h, const Vec& psi0, double t_max, int steps);

TransferMatrix transfer_matrix(const ComplexMatrix& h, double t);

// Time of the first interior local maximum of the target series exceeding
// threshold, refined by a 3-point parabola on log-probability. target_site is
// 0-based here (1-based at the CLI).
std::optional<double> detect_transfer_time(const TraceSeries& trace, int target_site,
                                           double threshold);

} // namespace turnplate
