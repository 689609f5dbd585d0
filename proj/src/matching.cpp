#include "turnplate/matching.hpp"
#include "turnplate/errors.hpp"

#include <cmath>
#include <numbers>

namespace turnplate {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

struct Candidate {
    double epsilon = 0.0;
    double epsilon0 = 0.0;
    std::vector<int> z;
    double residual = 1e300;
    bool valid = false;
};

// Score one epsilon: pick eps0 so that the reference eigenvalue fits exactly
// with Z = 0, round every Z_m, and take the max deviation.
Candidate score(const std::vector<double>& values, const std::vector<int>& labels, int order,
                double epsilon, int ref, int z_max) {
    const int m = static_cast<int>(values.size());
    Candidate c;
    c.epsilon = epsilon;
    c.epsilon0 = values[ref] - (static_cast<double>(labels[ref]) / order) * epsilon;
    c.z.resize(m);
    c.residual = 0.0;
    for (int i = 0; i < m; ++i) {
        const double zf = (values[i] - c.epsilon0) / epsilon - static_cast<double>(labels[i]) / order;
        c.z[i] = static_cast<int>(std::lround(zf));
        const double fitted = (static_cast<double>(labels[i]) / order + c.z[i]) * epsilon + c.epsilon0;
        c.residual = std::max(c.residual, std::abs(values[i] - fitted));
    }
    // canonicalize eps0 into [0, eps); the shift moves into every Z_m
    const int shift = static_cast<int>(std::floor(c.epsilon0 / epsilon));
    if (shift != 0) {
        c.epsilon0 -= shift * epsilon;
        for (auto& z : c.z) z += shift;
    }
    for (const auto& z : c.z)
        if (std::abs(z) > z_max) return c;
    c.valid = true;
    return c;
}

} // namespace

std::optional<MatchingFit> fit_matching(const std::vector<double>& values,
                                        const std::vector<int>& labels, int order,
                                        double tol, int z_max) {
    const int m = static_cast<int>(values.size());
    if (m < 2) return std::nullopt;

    // Candidate quanta come from eigenvalue pairs: eps = dE / (dl/n + dZ).
    // Among fits meeting the tolerance, keep the largest eps: every exact fit
    // has exact sub-fits at eps/(k n + 1), so the largest one is the physical
    // (minimal-period) quantum.
    Candidate best;
    auto better = [&](const Candidate& a, const Candidate& b) {
        if (!b.valid) return true;
        if (std::abs(a.epsilon - b.epsilon) > 1e-9 * std::max(a.epsilon, b.epsilon))
            return a.epsilon > b.epsilon;
        if (a.residual != b.residual) return a.residual < b.residual;
        return std::abs(a.epsilon0) < std::abs(b.epsilon0);
    };

    for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
            if (j == k) continue;
            const double de = values[j] - values[k];
            const double dl = static_cast<double>(labels[j] - labels[k]) / order;
            for (int dz = -z_max; dz <= z_max; ++dz) {
                const double denom = dl + dz;
                if (std::abs(denom) < 1e-12) continue;
                const double epsilon = de / denom;
                if (!(epsilon > tol)) continue;
                for (int ref = 0; ref < m; ++ref) {
                    Candidate c = score(values, labels, order, epsilon, ref, z_max);
                    if (c.valid && c.residual <= tol && better(c, best)) best = c;
                }
            }
        }

    if (!best.valid || best.residual > tol) return std::nullopt;
    return MatchingFit{best.epsilon, best.epsilon0, best.z, best.residual};
}

double period(const MatchingFit& fit) {
    return two_pi / fit.epsilon;
}

TurnplateReport verify_turnplate(const ComplexMatrix& h, const ShiftOperator& t,
                                 const MatchingFit& fit, const Vec& psi0, int hops) {
    TurnplateReport report;
    report.tau = period(fit);
    report.phase_consistency_dev = 0.0;

    const auto eigen = hermitian_eig(h);
    Vec shifted = psi0;
    for (int k = 1; k <= hops; ++k) {
        shifted = matvec(t.matrix, shifted);
        const Vec psi = matvec(propagator(eigen, k * report.tau), psi0);
        const Complex overlap = inner(shifted, psi);
        const double fid = std::abs(overlap);
        report.step_fidelities.push_back(fid);
        report.step_phases.push_back(fid > 0.0 ? overlap / fid : Complex(0.0));
    }
    for (size_t k = 0; k + 1 < report.step_phases.size(); ++k) {
        const Complex ratio = report.step_phases[k + 1] / report.step_phases[k];
        const Complex first = report.step_phases[0];
        report.phase_consistency_dev =
            std::max(report.phase_consistency_dev, std::abs(ratio - first));
    }
    return report;
}

} // namespace turnplate
