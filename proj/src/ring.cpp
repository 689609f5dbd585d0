#include "turnplate/ring.hpp"
#include "turnplate/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace turnplate {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

double normalize_phase(double x) {
    double y = std::fmod(x, two_pi);
    if (y > std::numbers::pi) y -= two_pi;
    if (y <= -std::numbers::pi) y += two_pi;
    return y;
}

RingSpec::RingSpec(int n_sites, std::vector<Link> links)
    : n_sites_(n_sites), links_(std::move(links)) {
    if (n_sites_ < 3 || n_sites_ % 2 == 0)
        throw InvalidSpec("ring length must be odd and >= 3, got " + std::to_string(n_sites_));
    if (static_cast<int>(links_.size()) != n_sites_)
        throw InvalidSpec("expected " + std::to_string(n_sites_) + " links, got " +
                          std::to_string(links_.size()));
    for (auto& link : links_) {
        if (!(link.mag > 0.0) || !std::isfinite(link.mag) || !std::isfinite(link.phase))
            throw InvalidSpec("link magnitudes must be positive and finite");
        link.phase = normalize_phase(link.phase);
    }
}

RingSpec RingSpec::uniform(int n_sites, double mag, double total_phase) {
    std::vector<Link> links(static_cast<size_t>(std::max(n_sites, 0)),
                            Link{mag, total_phase / n_sites});
    return RingSpec(n_sites, std::move(links));
}

Complex RingSpec::coupling(int l) const {
    return std::polar(links_[l].mag, links_[l].phase);
}

RingSpec RingSpec::conjugated() const {
    std::vector<Link> links = links_;
    for (auto& link : links) link.phase = -link.phase;
    return RingSpec(n_sites_, std::move(links));
}

ComplexMatrix build_hamiltonian(const RingSpec& spec) {
    const int n = spec.n_sites();
    ComplexMatrix h(n);
    for (int l = 0; l < n; ++l) {
        const int next = (l + 1) % n;
        const Complex j = spec.coupling(l);
        h(l, next) = j;
        h(next, l) = std::conj(j);
    }
    return h;
}

double phase_sum(const RingSpec& spec) {
    double s = 0.0;
    for (const auto& link : spec.links()) s += link.phase;
    return s;
}

double total_phase(const RingSpec& spec) {
    return normalize_phase(phase_sum(spec));
}

std::pair<RingSpec, GaugeMap> gauge_normalize(const RingSpec& spec) {
    const int n = spec.n_sites();
    const double s = phase_sum(spec);
    const double target = s / n; // in (-pi, pi] since each stored phase is

    std::vector<Link> links;
    links.reserve(n);
    for (const auto& link : spec.links()) links.push_back(Link{link.mag, target});

    // D = diag(e^{i chi}) maps H(spec) to H(spec'):
    // phi'_l = phi_l + chi_l - chi_{l+1}, so chi_{l+1} = chi_l + phi_l - target
    // with chi_0 = 0; the sum telescopes and the wrap link lands on target too.
    GaugeMap g;
    g.phase_sum = s;
    g.site_phases.assign(n, 0.0);
    for (int l = 0; l + 1 < n; ++l)
        g.site_phases[l + 1] = g.site_phases[l] + spec.links()[l].phase - target;

    return {RingSpec(n, std::move(links)), g};
}

ComplexMatrix gauge_matrix(const GaugeMap& g) {
    const int n = static_cast<int>(g.site_phases.size());
    ComplexMatrix d(n);
    for (int i = 0; i < n; ++i) d(i, i) = std::polar(1.0, g.site_phases[i]);
    return d;
}

std::vector<double> uniform_ring_spectrum(int n_sites, double mag, double total_phase) {
    std::vector<double> values;
    values.reserve(n_sites);
    for (int k = 0; k < n_sites; ++k)
        values.push_back(2.0 * mag * std::cos((two_pi * k + total_phase) / n_sites));
    std::sort(values.begin(), values.end());
    return values;
}

} // namespace turnplate
