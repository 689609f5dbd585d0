// fock.hpp
// Truncated multimode bosonic simulation of the resonator ring.
// The ring Hamiltonian conserves total photon number, so each sector 0..n_max
// is evolved exactly; no truncation error for inputs within n_max photons.

#pragma once

#include "turnplate/numerics.hpp"
#include "turnplate/ring.hpp"

#include <optional>
#include <vector>

namespace turnplate {

// Occupation-number basis of one photon-number sector. States are ordered
// descending-lexicographically with mode 1 most significant, i.e. the first
// state is (n, 0, ..., 0) and the last (0, ..., 0, n); the one-photon sector
// therefore lists modes in site order.
struct FockBasis {
    int n_modes;
    int total_photons;
    std::vector<std::vector<int>> states;

    static FockBasis build(int n_modes, int total_photons);
    int index_of(const std::vector<int>& occ) const;
};

// Amplitudes per photon-number sector 0..n_max over n_modes modes.
struct SectorState {
    int n_modes;
    std::vector<Vec> sectors; // sectors[s] over FockBasis(n_modes, s)

    double total_norm() const;
};

// Reduced density matrix of one mode, (n_max+1) x (n_max+1).
struct ModeDensity {
    int dim;
    ComplexMatrix matrix;
};

// Sector Hamiltonian for arbitrary nearest-neighbour couplings on a cycle of
// n_modes modes (link l couples modes l and l+1 mod n_modes). Matrix elements
// carry the bosonic sqrt(m (m'+1)) factors.
ComplexMatrix sector_hamiltonian(const std::vector<Complex>& couplings, int n_modes,
                                 int n_photons);
ComplexMatrix build_sector_hamiltonian(const RingSpec& spec, int n_photons);

// State with the given single-mode amplitudes (photon numbers 0..) on `mode`
// (0-based) and vacuum elsewhere. Throws SectorOverflow past n_max.
SectorState single_mode_state(const Vec& input, int mode, int n_modes, int n_max);

// Evolve a single-mode input sector by sector through exp(-i H_s t).
std::vector<SectorState> evolve_fock(const RingSpec& spec, const Vec& input, int mode, int n_max,
                                     const std::vector<double>& times);

// Partial trace over every mode but one.
ModeDensity reduce_mode(const SectorState& state, int mode, int n_max);

// <psi|rho|psi>
double fidelity(const ModeDensity& rho, const Vec& psi);

// Multiply the m-photon component by e^{i m hops theta}: the per-site basis
// identification that absorbs the per-photon transfer phase.
Vec phase_identified(const Vec& psi, int hops, double theta);

// Analytic reduced-state fidelity at a mode receiving single-photon amplitude
// s, for input a|0> + b|1> compared against the theta-adjusted input. Through
// the transposed-sector relation, s is the (input, output) entry of the
// single-excitation propagator exp(-i H t).
double single_photon_oracle(Complex s, Complex a, Complex b, double theta);

// Turnplate bookkeeping for a Fock run: the matching-fit period, the measured
// first-hop site and per-hop phase (single-photon sector, brute force), and
// the hop count per site along the transfer orbit.
struct FockTurnplateMeta {
    double tau;
    int first_hop_site; // 0-based
    double theta;
    std::vector<int> hops_per_site;
};

std::optional<FockTurnplateMeta> fock_turnplate_meta(const RingSpec& spec, int input_mode,
                                                     double tol = 1e-9, int z_max = 10);

} // namespace turnplate
