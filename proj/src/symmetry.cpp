#include "turnplate/symmetry.hpp"
#include "turnplate/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace turnplate {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Map j in 0..n-1 (T eigenvalue omega^j) to the label l = -j reduced into the
// symmetric range {-(n-1)/2, ..., (n-1)/2}.
int label_from_root_index(int j, int n) {
    int l = (-j) % n;
    if (l > (n - 1) / 2) l -= n;
    if (l < -(n - 1) / 2) l += n;
    return l;
}

// Eigenvalue clusters: runs of ascending values closer than tol.
std::vector<std::pair<int, int>> clusters(const std::vector<double>& values, double tol) {
    std::vector<std::pair<int, int>> out;
    const int n = static_cast<int>(values.size());
    int start = 0;
    for (int i = 1; i <= n; ++i) {
        if (i == n || values[i] - values[i - 1] > tol) {
            out.emplace_back(start, i);
            start = i;
        }
    }
    return out;
}

} // namespace

CyclicSymmetry detect_symmetry(const RingSpec& spec) {
    const int n_sites = spec.n_sites();
    const auto normalized = gauge_normalize(spec).first;
    const auto& links = normalized.links();
    for (int n = n_sites; n > 1; --n) {
        if (n_sites % n != 0) continue;
        const int p = n_sites / n;
        bool periodic = true;
        for (int i = 0; i < n_sites && periodic; ++i) {
            const double a = links[i].mag;
            const double b = links[(i + p) % n_sites].mag;
            if (std::abs(a - b) > 1e-12 * std::max(a, b)) periodic = false;
        }
        if (periodic) return {n, p};
    }
    return {1, n_sites};
}

ShiftOperator shift_operator(int n_sites, int step) {
    if (step < 1 || n_sites % step != 0)
        throw InvalidDivisor("shift step must divide the ring length");
    ComplexMatrix t(n_sites);
    for (int i = 0; i < n_sites; ++i) t((i + step) % n_sites, i) = 1.0;
    return {n_sites, step, std::move(t)};
}

ComplexMatrix symmetry_projector(int n_sites, int step, int order, int label) {
    ComplexMatrix p(n_sites);
    // P_l(a, b) = (1/n) sum over pairs a = i + k p, b = i + k' p of
    // omega^{(k - k') l}; i.e. (1/n) omega^{l (a - b)/p} on sites congruent
    // mod p.
    for (int a = 0; a < n_sites; ++a)
        for (int b = 0; b < n_sites; ++b) {
            if ((a - b) % step != 0) continue;
            const int dk = (a - b) / step;
            p(a, b) = std::polar(1.0 / order, two_pi * label * dk / order);
        }
    return p;
}

namespace {

// Diagonalize a small unitary matrix u: eigendecompose its Hermitian part,
// then the anti-Hermitian part inside any cos-degenerate subcluster (this is
// what separates conjugate eigenvalue pairs). Returns the basis columns.
ComplexMatrix diagonalize_unitary(const ComplexMatrix& u) {
    const int k = u.dim();
    ComplexMatrix herm(k), anti(k);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) {
            herm(a, b) = 0.5 * (u(a, b) + std::conj(u(b, a)));
            anti(a, b) = Complex(0.0, -0.5) * (u(a, b) - std::conj(u(b, a)));
        }
    auto he = hermitian_eig(herm);
    ComplexMatrix basis = he.vectors;
    for (const auto& [cb, ce] : clusters(he.values, 1e-6)) {
        const int kk = ce - cb;
        if (kk == 1) continue;
        ComplexMatrix sub(kk);
        for (int a = 0; a < kk; ++a)
            for (int b = 0; b < kk; ++b) {
                Complex s = 0.0;
                for (int i = 0; i < k; ++i)
                    for (int j = 0; j < k; ++j)
                        s += std::conj(basis(i, cb + a)) * anti(i, j) * basis(j, cb + b);
                sub(a, b) = s;
            }
        auto se = hermitian_eig(sub);
        ComplexMatrix refined(k);
        for (int c = 0; c < kk; ++c)
            for (int i = 0; i < k; ++i) {
                Complex s = 0.0;
                for (int a = 0; a < kk; ++a) s += basis(i, cb + a) * se.vectors(a, c);
                refined(i, c) = s;
            }
        for (int c = 0; c < kk; ++c)
            for (int i = 0; i < k; ++i) basis(i, cb + c) = refined(i, c);
    }
    return basis;
}

} // namespace

SymmetryLabels symmetry_labels(const HermitianEigen& eigen, const ShiftOperator& t, int order,
                               double cluster_tol) {
    const int n = t.matrix.dim();

    SymmetryLabels out;
    out.values = eigen.values;
    out.refined_vectors = eigen.vectors;
    out.labels.assign(n, 0);
    if (order == 1) return out;

    // B = V† T V. [H, T] = 0 makes B block diagonal over degenerate clusters.
    ComplexMatrix b(n);
    for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c) {
            Complex s = 0.0;
            for (int i = 0; i < n; ++i) {
                // row i of T v is v(i - p)
                s += std::conj(eigen.vectors(i, a)) * eigen.vectors((i - t.step + n) % n, c);
            }
            b(a, c) = s;
        }

    const auto cl = clusters(eigen.values, cluster_tol);
    for (size_t ca = 0; ca < cl.size(); ++ca)
        for (size_t cb = 0; cb < cl.size(); ++cb) {
            if (ca == cb) continue;
            for (int a = cl[ca].first; a < cl[ca].second; ++a)
                for (int c = cl[cb].first; c < cl[cb].second; ++c)
                    if (std::abs(b(a, c)) > 1e-8)
                        throw NotCommuting("shift operator does not commute with the Hamiltonian");
        }

    // Refine inside each degenerate cluster so the projected T is diagonal.
    for (const auto& [begin, end] : cl) {
        const int k = end - begin;
        if (k == 1) continue;
        ComplexMatrix tw(k);
        for (int a = 0; a < k; ++a)
            for (int c = 0; c < k; ++c) tw(a, c) = b(begin + a, begin + c);
        const ComplexMatrix basis = diagonalize_unitary(tw);
        ComplexMatrix refined(n); // columns 0..k-1 used
        for (int c = 0; c < k; ++c)
            for (int i = 0; i < n; ++i) {
                Complex s = 0.0;
                for (int a = 0; a < k; ++a) s += eigen.vectors(i, begin + a) * basis(a, c);
                refined(i, c) = s;
            }
        for (int c = 0; c < k; ++c)
            for (int i = 0; i < n; ++i) out.refined_vectors(i, begin + c) = refined(i, c);
    }

    // Rayleigh quotients v† T v give the T eigenvalues; snap to roots of unity.
    for (int c = 0; c < n; ++c) {
        Complex tv = 0.0;
        for (int i = 0; i < n; ++i) {
            const int src = (i - t.step + n) % n;
            tv += std::conj(out.refined_vectors(i, c)) * out.refined_vectors(src, c);
        }
        int best_j = 0;
        double best_dist = 1e300;
        for (int j = 0; j < order; ++j) {
            const double d = std::abs(tv - std::polar(1.0, two_pi * j / order));
            if (d < best_dist) {
                best_dist = d;
                best_j = j;
            }
        }
        if (best_dist > 1e-6)
            throw AmbiguousLabel("projected shift eigenvalue is not an n-th root of unity");
        out.labels[c] = label_from_root_index(best_j, order);
    }
    return out;
}

std::vector<BlockRing> block_reduce(const RingSpec& spec, const CyclicSymmetry& sym) {
    if (sym.n <= 1) throw NoSymmetry("block reduction needs a nontrivial cyclic symmetry");
    const auto normalized = gauge_normalize(spec).first;
    const double full_phase = phase_sum(normalized);
    const double link_phase = full_phase / spec.n_sites();
    const int p = sym.p;

    std::vector<BlockRing> blocks;
    for (int l = -(sym.n - 1) / 2; l <= (sym.n - 1) / 2; ++l) {
        BlockRing block;
        block.label = l;
        block.total_phase = full_phase / sym.n + two_pi * l / sym.n;
        if (p == 1) {
            block.scalar = 2.0 * normalized.links()[0].mag * std::cos(block.total_phase);
        } else {
            // magnitudes J_1..J_p, shared phase on the first p-1 links, and the
            // symmetry shift 2 pi l / n folded into the wrap link.
            std::vector<Link> links;
            for (int i = 0; i < p; ++i) {
                double phase = link_phase;
                if (i == p - 1) phase += two_pi * l / sym.n;
                links.push_back(Link{normalized.links()[i].mag, phase});
            }
            block.spec = RingSpec(p, std::move(links));
        }
        blocks.push_back(std::move(block));
    }
    return blocks;
}

std::vector<double> BlockRing::spectrum() const {
    if (scalar) return {*scalar};
    return hermitian_eig(build_hamiltonian(*spec)).values;
}

std::pair<Complex, double> char_poly_check(const RingSpec& spec) {
    double prod = 1.0;
    for (const auto& link : spec.links()) prod *= link.mag;
    const double predicted = 2.0 * prod * std::cos(total_phase(spec));
    return {determinant(build_hamiltonian(spec)), predicted};
}

} // namespace turnplate
