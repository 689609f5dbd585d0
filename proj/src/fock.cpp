#include "turnplate/fock.hpp"
#include "turnplate/dynamics.hpp"
#include "turnplate/errors.hpp"
#include "turnplate/matching.hpp"
#include "turnplate/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace turnplate {

namespace {

void enumerate_states(int n_modes, int remaining, int mode, std::vector<int>& current,
                      std::vector<std::vector<int>>& out) {
    if (mode == n_modes - 1) {
        current[mode] = remaining;
        out.push_back(current);
        return;
    }
    for (int c = remaining; c >= 0; --c) {
        current[mode] = c;
        enumerate_states(n_modes, remaining - c, mode + 1, current, out);
    }
}

} // namespace

FockBasis FockBasis::build(int n_modes, int total_photons) {
    FockBasis basis;
    basis.n_modes = n_modes;
    basis.total_photons = total_photons;
    std::vector<int> current(n_modes, 0);
    enumerate_states(n_modes, total_photons, 0, current, basis.states);
    return basis;
}

int FockBasis::index_of(const std::vector<int>& occ) const {
    const auto it = std::lower_bound(states.begin(), states.end(), occ,
                                     [](const std::vector<int>& a, const std::vector<int>& b) {
                                         return a > b; // descending lexicographic
                                     });
    if (it == states.end() || *it != occ) throw Error("occupation vector not in basis");
    return static_cast<int>(it - states.begin());
}

double SectorState::total_norm() const {
    double s = 0.0;
    for (const auto& amps : sectors)
        for (const auto& a : amps) s += std::norm(a);
    return std::sqrt(s);
}

ComplexMatrix sector_hamiltonian(const std::vector<Complex>& couplings, int n_modes,
                                 int n_photons) {
    const auto basis = FockBasis::build(n_modes, n_photons);
    const int dim = static_cast<int>(basis.states.size());
    ComplexMatrix h(dim);
    std::vector<int> occ;
    for (int col = 0; col < dim; ++col) {
        const auto& state = basis.states[col];
        for (int l = 0; l < static_cast<int>(couplings.size()); ++l) {
            const int a = l, b = (l + 1) % n_modes;
            // J_l a_a a†_b : move one photon a -> b
            if (state[a] > 0) {
                occ = state;
                occ[a] -= 1;
                occ[b] += 1;
                const double amp = std::sqrt(static_cast<double>(state[a]) * (state[b] + 1));
                h(basis.index_of(occ), col) += couplings[l] * amp;
            }
            // J_l* a†_a a_b : move one photon b -> a
            if (state[b] > 0) {
                occ = state;
                occ[b] -= 1;
                occ[a] += 1;
                const double amp = std::sqrt(static_cast<double>(state[b]) * (state[a] + 1));
                h(basis.index_of(occ), col) += std::conj(couplings[l]) * amp;
            }
        }
    }
    return h;
}

ComplexMatrix build_sector_hamiltonian(const RingSpec& spec, int n_photons) {
    std::vector<Complex> couplings;
    for (int l = 0; l < spec.n_sites(); ++l) couplings.push_back(spec.coupling(l));
    return sector_hamiltonian(couplings, spec.n_sites(), n_photons);
}

SectorState single_mode_state(const Vec& input, int mode, int n_modes, int n_max) {
    if (mode < 0 || mode >= n_modes) throw Error("input mode out of range");
    if (static_cast<int>(input.size()) > n_max + 1) {
        for (size_t m = n_max + 1; m < input.size(); ++m)
            if (input[m] != 0.0)
                throw SectorOverflow("input state has support beyond n_max photons");
    }
    SectorState state;
    state.n_modes = n_modes;
    state.sectors.resize(n_max + 1);
    for (int s = 0; s <= n_max; ++s) {
        const auto basis = FockBasis::build(n_modes, s);
        state.sectors[s].assign(basis.states.size(), 0.0);
        if (s < static_cast<int>(input.size())) {
            std::vector<int> occ(n_modes, 0);
            occ[mode] = s;
            state.sectors[s][basis.index_of(occ)] = input[s];
        }
    }
    return state;
}

std::vector<SectorState> evolve_fock(const RingSpec& spec, const Vec& input, int mode, int n_max,
                                     const std::vector<double>& times) {
    const int n_modes = spec.n_sites();
    const SectorState init = single_mode_state(input, mode, n_modes, n_max);
    if (std::abs(init.total_norm() - 1.0) > 1e-10)
        throw Error("evolve_fock: input state is not normalized");

    std::vector<HermitianEigen> eigs;
    for (int s = 0; s <= n_max; ++s) eigs.push_back(hermitian_eig(build_sector_hamiltonian(spec, s)));

    std::vector<SectorState> out;
    out.reserve(times.size());
    for (const double t : times) {
        SectorState st;
        st.n_modes = n_modes;
        st.sectors.resize(n_max + 1);
        for (int s = 0; s <= n_max; ++s) {
            const auto& eig = eigs[s];
            const int dim = static_cast<int>(eig.values.size());
            // rotate through the eigenbasis of this sector
            Vec coeff(dim);
            for (int k = 0; k < dim; ++k) {
                Complex acc = 0.0;
                for (int i = 0; i < dim; ++i)
                    acc += std::conj(eig.vectors(i, k)) * init.sectors[s][i];
                coeff[k] = acc * std::exp(Complex(0.0, -eig.values[k] * t));
            }
            Vec amps(dim);
            for (int k = 0; k < dim; ++k)
                for (int i = 0; i < dim; ++i) amps[i] += eig.vectors(i, k) * coeff[k];
            st.sectors[s] = std::move(amps);
        }
        out.push_back(std::move(st));
    }
    return out;
}

ModeDensity reduce_mode(const SectorState& state, int mode, int n_max) {
    if (mode < 0 || mode >= state.n_modes) throw Error("mode out of range");
    // Group amplitudes by the occupation of every other mode; each group
    // contributes an outer product over the kept mode's photon number.
    std::map<std::vector<int>, Vec> groups;
    for (int s = 0; s < static_cast<int>(state.sectors.size()); ++s) {
        const auto basis = FockBasis::build(state.n_modes, s);
        for (size_t idx = 0; idx < state.sectors[s].size(); ++idx) {
            const Complex amp = state.sectors[s][idx];
            if (amp == 0.0) continue;
            std::vector<int> rest = basis.states[idx];
            const int photons = rest[mode];
            rest.erase(rest.begin() + mode);
            auto& bucket = groups[rest];
            if (bucket.empty()) bucket.assign(n_max + 1, 0.0);
            if (photons <= n_max) bucket[photons] += amp;
        }
    }
    ModeDensity rho;
    rho.dim = n_max + 1;
    rho.matrix = ComplexMatrix(n_max + 1);
    for (const auto& [rest, bucket] : groups)
        for (int a = 0; a <= n_max; ++a)
            for (int b = 0; b <= n_max; ++b) rho.matrix(a, b) += bucket[a] * std::conj(bucket[b]);
    return rho;
}

double fidelity(const ModeDensity& rho, const Vec& psi) {
    Complex f = 0.0;
    for (int a = 0; a < rho.dim && a < static_cast<int>(psi.size()); ++a)
        for (int b = 0; b < rho.dim && b < static_cast<int>(psi.size()); ++b)
            f += std::conj(psi[a]) * rho.matrix(a, b) * psi[b];
    return f.real();
}

Vec phase_identified(const Vec& psi, int hops, double theta) {
    Vec out = psi;
    for (size_t m = 0; m < out.size(); ++m)
        out[m] *= std::exp(Complex(0.0, static_cast<double>(m) * hops * theta));
    return out;
}

double single_photon_oracle(Complex s, Complex a, Complex b, double theta) {
    const double pa = std::norm(a), pb = std::norm(b);
    const Complex direct = pa + pb * s * std::exp(Complex(0.0, -theta));
    return std::norm(direct) + pb * (1.0 - std::norm(s)) * pa;
}

std::optional<FockTurnplateMeta> fock_turnplate_meta(const RingSpec& spec, int input_mode,
                                                     double tol, int z_max) {
    const int n_sites = spec.n_sites();

    // The one-photon sector carries conjugated couplings relative to the
    // single-excitation matrix, so the matching condition is fitted on the
    // conjugated spec: the model the photons actually evolve under.
    const auto normalized = gauge_normalize(spec.conjugated()).first;
    const auto sym = detect_symmetry(normalized);
    const auto eigen = hermitian_eig(build_hamiltonian(normalized));
    const auto t = shift_operator(n_sites, sym.p);
    const auto labels = symmetry_labels(eigen, t, sym.n);

    // The condition has to hold only on the spectral support of the
    // transported state; in the strong-coupling regime the input site lives
    // almost entirely in the slow manifold, so drop eigenvectors it barely
    // touches (weight below 1e-3).
    std::vector<double> values;
    std::vector<int> sub_labels;
    for (int k = 0; k < n_sites; ++k) {
        double w = std::norm(labels.refined_vectors(input_mode, k));
        if (w > 1e-3) {
            values.push_back(labels.values[k]);
            sub_labels.push_back(labels.labels[k]);
        }
    }
    const auto fit = fit_matching(values, sub_labels, sym.n, tol, z_max);
    if (!fit) return std::nullopt;

    // The fitted quantum certifies evolution proportional to the one-step
    // shift at tau_fit, but the state can hop several scales per step; the
    // physical hop time is tau_fit / integer. Measure it in the one-photon
    // sector and snap.
    const double tau_fit = period(*fit);
    const auto h1 = build_sector_hamiltonian(spec, 1);
    Vec e_in(n_sites, 0.0);
    e_in[input_mode] = 1.0;

    const int scan_steps = 4000;
    TraceSeries offsite;
    offsite.times = uniform_grid(tau_fit, scan_steps);
    offsite.series.assign(1, std::vector<double>(offsite.times.size(), 0.0));
    const auto states = evolve_state(h1, e_in, offsite.times);
    for (size_t s = 0; s < states.size(); ++s)
        for (int j = 0; j < n_sites; ++j)
            if (j != input_mode)
                offsite.series[0][s] = std::max(offsite.series[0][s], std::norm(states[s][j]));
    double tau_raw = tau_fit;
    if (const auto first = detect_transfer_time(offsite, 0, 0.99)) tau_raw = *first;

    FockTurnplateMeta meta;
    meta.tau = tau_fit / std::max(1.0, std::round(tau_fit / tau_raw));

    const Vec at_tau = evolve_state(h1, e_in, {meta.tau})[0];
    int best = -1;
    double best_p = -1.0;
    for (int j = 0; j < n_sites; ++j) {
        if (j == input_mode) continue;
        if (std::norm(at_tau[j]) > best_p) {
            best_p = std::norm(at_tau[j]);
            best = j;
        }
    }
    meta.first_hop_site = best;
    meta.theta = std::arg(at_tau[best]);

    meta.hops_per_site.assign(n_sites, 0);
    const int delta = ((best - input_mode) % n_sites + n_sites) % n_sites;
    int site = input_mode;
    for (int k = 1; k < n_sites; ++k) {
        site = (site + delta) % n_sites;
        if (site == input_mode) break;
        if (meta.hops_per_site[site] == 0) meta.hops_per_site[site] = k;
    }
    return meta;
}

} // namespace turnplate
