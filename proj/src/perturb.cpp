#include "turnplate/perturb.hpp"
#include "turnplate/dynamics.hpp"
#include "turnplate/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace turnplate {

std::pair<ComplexMatrix, ComplexMatrix> split_hamiltonian(const RingSpec& spec,
                                                          const std::set<int>& weak_links) {
    const int n = spec.n_sites();
    if (weak_links.empty() || static_cast<int>(weak_links.size()) >= n)
        throw InvalidPartition("weak links must be a nonempty proper subset of the links");
    for (const int l : weak_links)
        if (l < 0 || l >= n) throw InvalidPartition("weak link index out of range");

    ComplexMatrix h0(n), v(n);
    for (int l = 0; l < n; ++l) {
        const int next = (l + 1) % n;
        const Complex j = spec.coupling(l);
        ComplexMatrix& target = weak_links.count(l) ? v : h0;
        target(l, next) = j;
        target(next, l) = std::conj(j);
    }
    return {std::move(h0), std::move(v)};
}

std::set<int> default_weak_links(const RingSpec& spec) {
    double max_mag = 0.0;
    for (const auto& link : spec.links()) max_mag = std::max(max_mag, link.mag);
    std::set<int> weak;
    for (int l = 0; l < spec.n_sites(); ++l)
        if (spec.links()[l].mag < 0.1 * max_mag) weak.insert(l);
    return weak;
}

ManifoldBasis zero_manifold(const ComplexMatrix& h0, double tol) {
    const auto eigen = hermitian_eig(h0);
    const int n = h0.dim();

    std::vector<Vec> basis;
    for (int k = 0; k < n; ++k) {
        if (std::abs(eigen.values[k]) >= tol) continue;
        Vec v(n);
        for (int i = 0; i < n; ++i) v[i] = eigen.vectors(i, k);
        basis.push_back(std::move(v));
    }
    if (basis.empty()) throw EmptyManifold("no eigenvalue below the manifold tolerance");

    // When the manifold vectors are (numerically) site kets, order them by
    // site index and pin their phase so downstream matrices are deterministic.
    std::vector<int> dominant;
    bool site_kets = true;
    for (const auto& v : basis) {
        int best = 0;
        for (int i = 1; i < n; ++i)
            if (std::abs(v[i]) > std::abs(v[best])) best = i;
        if (std::abs(v[best]) < 1.0 - 1e-9) site_kets = false;
        dominant.push_back(best);
    }
    ManifoldBasis out;
    if (site_kets) {
        std::vector<size_t> order(basis.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](size_t a, size_t b) { return dominant[a] < dominant[b]; });
        for (const size_t idx : order) {
            Vec v = basis[idx];
            const Complex pivot = v[dominant[idx]];
            const Complex rot = std::conj(pivot) / std::abs(pivot);
            for (auto& x : v) x *= rot;
            out.basis.push_back(std::move(v));
            out.site_indices.push_back(dominant[idx]);
        }
    } else {
        out.basis = std::move(basis);
    }

    out.projector = ComplexMatrix(n);
    for (const auto& v : out.basis)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) out.projector(i, j) += v[i] * std::conj(v[j]);
    return out;
}

EffectiveHamiltonian effective_hamiltonian(const ComplexMatrix& h0, const ComplexMatrix& v,
                                           const ManifoldBasis& manifold) {
    const int dim = h0.dim();
    const int m = static_cast<int>(manifold.basis.size());
    const auto eigen = hermitian_eig(h0);

    // complement modes = eigenvectors of H0 outside the manifold span
    std::vector<int> complement;
    for (int k = 0; k < dim; ++k) {
        Vec ek(dim);
        for (int i = 0; i < dim; ++i) ek[i] = eigen.vectors(i, k);
        double overlap = 0.0;
        for (const auto& b : manifold.basis) overlap += std::norm(inner(b, ek));
        if (overlap < 0.5) complement.push_back(k);
    }

    double min_gap = 1e300, v_max = max_abs(v);
    for (const int k : complement) min_gap = std::min(min_gap, std::abs(eigen.values[k]));
    if (!complement.empty() && min_gap < 10.0 * v_max)
        throw GapTooSmall("complement gap is below 10 x the perturbation scale");

    // first order P V P, in manifold coordinates
    std::vector<Vec> v_basis;
    for (const auto& b : manifold.basis) v_basis.push_back(matvec(v, b));
    ComplexMatrix heff(m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) heff(a, b) = inner(manifold.basis[a], v_basis[b]);

    // second order -sum_k <a|V|k><k|V|b> / E_k, built from one row of
    // amplitudes per complement mode so Hermiticity is exact
    for (const int k : complement) {
        const double energy = eigen.values[k];
        if (std::abs(energy) < 1e-12) continue;
        Vec ek(dim);
        for (int i = 0; i < dim; ++i) ek[i] = eigen.vectors(i, k);
        Vec w(m);
        for (int a = 0; a < m; ++a) w[a] = inner(ek, v_basis[a]); // <k|V|a>
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) heff(a, b) -= std::conj(w[a]) * w[b] / energy;
    }

    EffectiveHamiltonian out;
    out.matrix = std::move(heff);

    // report the ring-read couplings: g from the nearest-neighbour entries,
    // phase as the argument sum around the cycle
    double g = 0.0, phase = 0.0;
    for (int a = 0; a < m; ++a) {
        const Complex entry = out.matrix(a, (a + 1) % m);
        g = std::max(g, std::abs(entry));
        phase += std::arg(entry);
    }
    out.g = g;
    out.phase = normalize_phase(phase);
    return out;
}

RingSpec effective_ring_spec(const EffectiveHamiltonian& eff) {
    const int n = eff.matrix.dim();
    if (n < 3) throw Error("effective Hamiltonian is too small to form a ring");
    std::vector<Link> links;
    for (int a = 0; a < n; ++a) {
        const Complex j = eff.matrix(a, (a + 1) % n);
        if (std::abs(j) <= 0.0) throw Error("effective Hamiltonian is not ring shaped");
        links.push_back(Link{std::abs(j), std::arg(j)});
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const int d = (b - a + n) % n;
            if (d == 0 || d == 1 || d == n - 1) continue;
            if (std::abs(eff.matrix(a, b)) > 1e-6 * eff.g)
                throw Error("effective Hamiltonian has long-range entries");
        }
    return RingSpec(n, std::move(links));
}

double manifold_leakage(const ComplexMatrix& h, const ManifoldBasis& manifold, const Vec& psi0,
                        double t_max, int steps) {
    const auto states = evolve_state(h, psi0, uniform_grid(t_max, steps));
    double worst = 0.0;
    for (const auto& psi : states) {
        const Vec proj = matvec(manifold.projector, psi);
        double outside = 0.0;
        for (size_t i = 0; i < psi.size(); ++i) outside += std::norm(psi[i] - proj[i]);
        worst = std::max(worst, outside);
    }
    return worst;
}

} // namespace turnplate
