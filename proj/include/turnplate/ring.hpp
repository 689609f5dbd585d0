// ring.hpp
// Ring model instances: complex link couplings, the single-excitation
// Hamiltonian, total phase, and gauge transformations.

#pragma once

#include "turnplate/numerics.hpp"

#include <utility>
#include <vector>

namespace turnplate {

// One link: magnitude and phase of the complex coupling J = mag * e^{i phase}.
struct Link {
    double mag;
    double phase;
};

// Ring of n_sites sites (odd, >= 3) with n_sites links. Link l (0-based)
// couples site l and site l+1 mod N; CLI and docs use 1-based site labels.
// Phases are stored reduced into (-pi, pi].
class RingSpec {
  public:
    RingSpec(int n_sites, std::vector<Link> links);
    static RingSpec uniform(int n_sites, double mag, double total_phase);

    int n_sites() const { return n_sites_; }
    const std::vector<Link>& links() const { return links_; }
    Complex coupling(int l) const; // J_l

    // Spec with all link phases negated (time-reversed couplings).
    RingSpec conjugated() const;

  private:
    int n_sites_;
    std::vector<Link> links_;
};

// Site-local phase redefinition D = diag(e^{i site_phases}). phase_sum keeps
// the literal (unreduced) link-phase sum the normalization divided by.
struct GaugeMap {
    std::vector<double> site_phases;
    double phase_sum;
};

// reduce into (-pi, pi]
double normalize_phase(double x);

// N x N Hermitian single-excitation Hamiltonian: (l, l+1) = J_l, wrap entry
// (N-1, 0) = J_{N-1}* so that <l|H|l+1 mod N> = J_l throughout.
ComplexMatrix build_hamiltonian(const RingSpec& spec);

// Literal sum of stored link phases (not reduced).
double phase_sum(const RingSpec& spec);

// phase_sum reduced into (-pi, pi]; the only gauge-invariant phase quantity.
double total_phase(const RingSpec& spec);

// Equivalent spec with every link phase equal to phase_sum/N, plus the gauge
// D with H(spec') = D H(spec) D†.
std::pair<RingSpec, GaugeMap> gauge_normalize(const RingSpec& spec);

ComplexMatrix gauge_matrix(const GaugeMap& g);

// Analytic spectrum of the uniform-phase ring: {2 mag cos((2 pi k + phase)/N)},
// sorted ascending. Used as an independent oracle for the eigensolver.
std::vector<double> uniform_ring_spectrum(int n_sites, double mag, double total_phase);

} // namespace turnplate
