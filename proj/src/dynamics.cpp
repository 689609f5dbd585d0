#include "turnplate/dynamics.hpp"
#include "turnplate/errors.hpp"

#include <cmath>

namespace turnplate {

std::vector<double> uniform_grid(double t_max, int steps) {
    std::vector<double> times;
    times.reserve(steps + 1);
    for (int i = 0; i <= steps; ++i) times.push_back(t_max * i / steps);
    return times;
}

std::vector<Vec> evolve_state(const ComplexMatrix& h, const Vec& psi0,
                              const std::vector<double>& times) {
    const auto eigen = hermitian_eig(h);
    const int n = h.dim();
    // coefficients in the eigenbasis, rotated per time point
    Vec coeff(n);
    for (int k = 0; k < n; ++k) {
        Complex s = 0.0;
        for (int i = 0; i < n; ++i) s += std::conj(eigen.vectors(i, k)) * psi0[i];
        coeff[k] = s;
    }
    std::vector<Vec> out;
    out.reserve(times.size());
    for (const double t : times) {
        Vec psi(n);
        for (int k = 0; k < n; ++k) {
            const Complex ck = coeff[k] * std::exp(Complex(0.0, -eigen.values[k] * t));
            for (int i = 0; i < n; ++i) psi[i] += eigen.vectors(i, k) * ck;
        }
        out.push_back(std::move(psi));
    }
    return out;
}

TraceSeries probability_trace(const ComplexMatrix& h, const Vec& psi0, double t_max, int steps) {
    if (steps < 2) throw Error("probability_trace: need at least 2 steps");
    TraceSeries trace;
    trace.times = uniform_grid(t_max, steps);
    const auto states = evolve_state(h, psi0, trace.times);
    const int n = h.dim();
    trace.series.assign(n, std::vector<double>(trace.times.size()));
    for (size_t s = 0; s < states.size(); ++s)
        for (int i = 0; i < n; ++i) trace.series[i][s] = std::norm(states[s][i]);
    return trace;
}

TransferMatrix transfer_matrix(const ComplexMatrix& h, double t) {
    return {propagator(h, -t)};
}

std::optional<double> detect_transfer_time(const TraceSeries& trace, int target_site,
                                           double threshold) {
    const auto& p = trace.series[target_site];
    const auto& times = trace.times;
    const size_t len = p.size();

    // Peaks are the above-threshold excursions of the series. Fast residual
    // oscillations decorate a transfer peak with micro-maxima and fragment the
    // threshold crossing, so excursions separated by less than 2% of the
    // trace span belong to one peak, and the peak time is the maximum of the
    // whole region, not its first crest.
    std::vector<std::pair<size_t, size_t>> runs; // [begin, end)
    size_t i = 0;
    while (i < len) {
        if (!(p[i] > threshold)) {
            ++i;
            continue;
        }
        size_t end = i;
        while (end < len && p[end] > threshold) ++end;
        runs.emplace_back(i, end);
        i = end;
    }
    const double merge_gap = 0.02 * (times.back() - times.front());
    std::vector<std::pair<size_t, size_t>> merged;
    for (const auto& run : runs) {
        if (!merged.empty() && times[run.first] - times[merged.back().second - 1] < merge_gap)
            merged.back().second = run.second;
        else
            merged.push_back(run);
    }

    for (const auto& [begin, end] : merged) {
        // A region touching either end of the grid cannot be certified as a
        // maximum (this also rejects constant traces).
        if (begin == 0 || end == len) continue;
        size_t best = begin;
        for (size_t k = begin; k < end; ++k)
            if (p[k] > p[best]) best = k;
        // parabola through the log-probabilities; near a unit-fidelity peak
        // log P is quadratic to leading order
        const double lm = std::log(p[best - 1]);
        const double l0 = std::log(p[best]);
        const double lp = std::log(p[best + 1]);
        const double denom = lm - 2.0 * l0 + lp;
        double offset = 0.0;
        if (denom < 0.0) offset = 0.5 * (lm - lp) / denom;
        const double dt = times[best + 1] - times[best];
        return times[best] + offset * dt;
    }
    return std::nullopt;
}

} // namespace turnplate
