// perturb.hpp
// Strong/weak coupling split, the degenerate zero-energy manifold, the
// second-order effective Hamiltonian, and manifold leakage.

#pragma once

#include "turnplate/numerics.hpp"
#include "turnplate/ring.hpp"

#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace turnplate {

// Zero-energy eigenspace of H0. For ring partitions the basis vectors are the
// uncoupled site kets; site_indices lists the dominant site (0-based) per
// basis vector when that structure holds.
struct ManifoldBasis {
    std::vector<int> site_indices;
    ComplexMatrix projector;
    std::vector<Vec> basis; // orthonormal columns spanning the manifold
};

struct EffectiveHamiltonian {
    ComplexMatrix matrix; // n x n, Hermitian, in the manifold basis
    double g;             // effective coupling magnitude
    double phase;         // total phase around the effective ring
};

// H0 keeps the strong-link terms, V the weak-link terms; H0 + V = H exactly.
// weak_links holds 0-based link indices and must be a nonempty proper subset.
std::pair<ComplexMatrix, ComplexMatrix> split_hamiltonian(const RingSpec& spec,
                                                          const std::set<int>& weak_links);

// Links with magnitude < 0.1 x max magnitude.
std::set<int> default_weak_links(const RingSpec& spec);

ManifoldBasis zero_manifold(const ComplexMatrix& h0, double tol);

// Second-order degenerate perturbation theory at E0 = 0:
// H_eff = P V P - P V Q (H0|_Q)^{-1} Q V P restricted to the manifold.
// Complement modes with |E| < 1e-12 are dropped from the pseudo-inverse.
EffectiveHamiltonian effective_hamiltonian(const ComplexMatrix& h0, const ComplexMatrix& v,
                                           const ManifoldBasis& manifold);

// Effective ring spec read off the nearest-neighbour entries of H_eff.
// Requires the matrix to be ring shaped (n >= 3, off-ring entries small).
RingSpec effective_ring_spec(const EffectiveHamiltonian& eff);

// max over sampled t in [0, t_max] of ||(I - P) psi(t)||^2 under the full H.
double manifold_leakage(const ComplexMatrix& h, const ManifoldBasis& manifold, const Vec& psi0,
                        double t_max, int steps);

} // namespace turnplate
