#include "test_util.hpp"

#include <doctest.h>

#include <numbers>

using namespace turnplate;
using namespace turnplate::testutil;

namespace {

constexpr double pi = std::numbers::pi;
const double sqrt3 = std::sqrt(3.0);

// N = 3p sites, chain couplings j_strong, junction couplings j_weak, total
// phase concentrated on link 1.
RingSpec chained(int n_sites, double j_weak, double j_strong, double total_phase) {
    const int p = n_sites / 3;
    std::vector<Link> links;
    for (int l = 0; l < n_sites; ++l) {
        const int r = l % p;
        const bool weak = (r == 0 || r == p - 1);
        links.push_back(Link{weak ? j_weak : j_strong, l == 0 ? total_phase : 0.0});
    }
    return RingSpec(n_sites, links);
}

std::optional<MatchingFit> fit_ring(const RingSpec& spec, double tol) {
    const auto normalized = gauge_normalize(spec).first;
    const auto sym = detect_symmetry(normalized);
    const auto labels = symmetry_labels(hermitian_eig(build_hamiltonian(normalized)),
                                        shift_operator(spec.n_sites(), sym.p), sym.n);
    return fit_matching(labels.values, labels.labels, sym.n, tol, 10);
}

} // namespace

TEST_SUITE("perturb") {

TEST_CASE("split keeps strong and weak terms apart") {
    const auto spec = chained(9, 1.0, 100.0, -pi / 2);
    const auto weak = default_weak_links(spec);
    CHECK(weak == std::set<int>{0, 2, 3, 5, 6, 8});
    const auto [h0, v] = split_hamiltonian(spec, weak);
    const auto e0 = hermitian_eig(h0).values;
    for (int k = 0; k < 3; ++k) {
        CHECK(e0[k] == doctest::Approx(-100.0).epsilon(1e-12));
        CHECK(std::abs(e0[3 + k]) < 1e-12);
        CHECK(e0[6 + k] == doctest::Approx(100.0).epsilon(1e-12));
    }
    // exact reconstruction on random specs
    auto rng = make_rng(50);
    for (int trial = 0; trial < 5; ++trial) {
        const auto s = random_spec(rng, 9);
        const auto [a, b] = split_hamiltonian(s, {0, 4, 7});
        ComplexMatrix sum(9);
        for (int i = 0; i < 9; ++i)
            for (int j = 0; j < 9; ++j) sum(i, j) = a(i, j) + b(i, j);
        CHECK(max_abs_diff(sum, build_hamiltonian(s)) == 0.0);
    }
}

TEST_CASE("all-but-one weak leaves a single bond") {
    const auto spec = RingSpec::uniform(3, 1.0, 0.0);
    const auto [h0, v] = split_hamiltonian(spec, {0, 1});
    int nonzero = 0;
    for (const auto& x : h0.data()) nonzero += (x != 0.0);
    CHECK(nonzero == 2);
    CHECK_THROWS_AS(split_hamiltonian(spec, {}), InvalidPartition);
    CHECK_THROWS_AS(split_hamiltonian(spec, {0, 1, 2}), InvalidPartition);
    CHECK_THROWS_AS(split_hamiltonian(spec, {7}), InvalidPartition);
}

TEST_CASE("zero manifold of the chained ring") {
    const auto spec = chained(9, 1.0, 100.0, -pi / 2);
    const auto [h0, v] = split_hamiltonian(spec, default_weak_links(spec));
    const auto manifold = zero_manifold(h0, 1e-8);
    CHECK(manifold.site_indices == std::vector<int>{0, 3, 6});
    CHECK(max_abs_diff(matmul(manifold.projector, manifold.projector), manifold.projector) <
          1e-12);
    CHECK(max_abs_diff(manifold.projector, adjoint(manifold.projector)) < 1e-12);
    double trace = 0.0;
    for (int i = 0; i < 9; ++i) trace += manifold.projector(i, i).real();
    CHECK(trace == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("a vanishing strong part makes the whole space the manifold") {
    const auto manifold = zero_manifold(ComplexMatrix(3), 1e-8);
    CHECK(manifold.basis.size() == 3);
    CHECK(manifold.site_indices == std::vector<int>{0, 1, 2});
    CHECK(max_abs_diff(manifold.projector, ComplexMatrix::identity(3)) < 1e-12);

    // a single strong bond leaves only the untouched site at zero energy
    const auto spec = RingSpec::uniform(3, 1.0, 0.0);
    const auto [h0, v] = split_hamiltonian(spec, {1, 2});
    CHECK(zero_manifold(h0, 1e-8).basis.size() == 1);
    CHECK_THROWS_AS(zero_manifold(build_hamiltonian(spec), 1e-12), EmptyManifold);
}

TEST_CASE("effective hamiltonian reproduces the analytic strong-coupling form") {
    const double phi = -pi / 2;
    const auto spec = chained(9, 1.0, 100.0, phi);
    const auto [h0, v] = split_hamiltonian(spec, default_weak_links(spec));
    const auto manifold = zero_manifold(h0, 1e-8);

    // first order vanishes identically for this partition
    ComplexMatrix pvp(3);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) pvp(a, b) = inner(manifold.basis[a], matvec(v, manifold.basis[b]));
    CHECK(max_abs(pvp) < 1e-14);

    const auto eff = effective_hamiltonian(h0, v, manifold);
    const double g = 0.01;
    CHECK(std::abs(eff.matrix(0, 1) - (-g) * std::polar(1.0, phi)) < 1e-5);
    CHECK(std::abs(eff.matrix(0, 2) - Complex(-g)) < 1e-5);
    CHECK(std::abs(eff.matrix(1, 2) - Complex(-g)) < 1e-5);
    for (int a = 0; a < 3; ++a) CHECK(std::abs(eff.matrix(a, a)) < 1e-5);
    CHECK(max_abs_diff(eff.matrix, adjoint(eff.matrix)) < 1e-12);
    CHECK(eff.g == doctest::Approx(g).epsilon(1e-4));
    CHECK(std::abs(eff.matrix(0, 1)) == doctest::Approx(g).epsilon(1e-5));

    // effective ring total phase picks up pi per link for p = 3
    CHECK(normalize_phase(eff.phase - (phi + 3 * pi)) == doctest::Approx(0.0).epsilon(1e-9));

    // spectrum of H_eff matches the three exact eigenvalues nearest zero
    const auto exact = hermitian_eig(build_hamiltonian(spec)).values;
    std::vector<double> nearest(exact.begin() + 3, exact.begin() + 6);
    const auto eff_values = hermitian_eig(eff.matrix).values;
    for (int k = 0; k < 3; ++k) CHECK(std::abs(eff_values[k] - nearest[k]) < 1e-5);
}

TEST_CASE("zero perturbation gives a zero effective hamiltonian") {
    const auto spec = chained(9, 1.0, 100.0, 0.0);
    const auto [h0, v] = split_hamiltonian(spec, default_weak_links(spec));
    const auto manifold = zero_manifold(h0, 1e-8);
    const auto eff = effective_hamiltonian(h0, ComplexMatrix(9), manifold);
    CHECK(max_abs(eff.matrix) == 0.0);
}

TEST_CASE("gap precondition") {
    const auto spec = chained(9, 1.0, 5.0, 0.0); // ratio 5 < 10
    const auto [h0, v] = split_hamiltonian(spec, {0, 2, 3, 5, 6, 8});
    const auto manifold = zero_manifold(h0, 1e-8);
    CHECK_THROWS_AS(effective_hamiltonian(h0, v, manifold), GapTooSmall);
}

TEST_CASE("manifold leakage stays small and scales like the coupling ratio squared") {
    const auto spec = chained(9, 1.0, 100.0, -pi / 2);
    const auto h = build_hamiltonian(spec);
    const auto [h0, v] = split_hamiltonian(spec, default_weak_links(spec));
    const auto manifold = zero_manifold(h0, 1e-8);
    Vec psi0(9, 0.0);
    psi0[0] = 1.0;
    const double tau = 2.0 * pi / (3.0 * 0.01 * sqrt3);
    const double leak100 = manifold_leakage(h, manifold, psi0, 3.0 * tau, 600);
    CHECK(leak100 <= 1e-3);
    // V = 0: evolution under H0 alone never leaves the manifold
    CHECK(manifold_leakage(h0, manifold, psi0, 3.0 * tau, 100) < 1e-20);

    const auto spec200 = chained(9, 1.0, 200.0, -pi / 2);
    const auto [h0b, vb] = split_hamiltonian(spec200, default_weak_links(spec200));
    const double leak200 = manifold_leakage(build_hamiltonian(spec200),
                                            zero_manifold(h0b, 1e-8), psi0, 3.0 * tau, 600);
    const double ratio = leak100 / leak200;
    CHECK(ratio > 2.0);
    CHECK(ratio < 8.0);
}

TEST_CASE("effective fit predicts the measured transfer of the full ring") {
    for (const int n_sites : {9, 15}) {
        const auto spec = chained(n_sites, 1.0, 100.0, -pi / 2);
        const auto [h0, v] = split_hamiltonian(spec, default_weak_links(spec));
        const auto manifold = zero_manifold(h0, 1e-8);
        const auto eff = effective_hamiltonian(h0, v, manifold);
        const auto fit = fit_ring(effective_ring_spec(eff), 1e-5);
        REQUIRE(fit.has_value());
        const double tau_fit = period(*fit);

        // measure the full ring at the site the effective one-step shift
        // predicts (manifold slot 1 = site 1+p); compare at the fit period
        const int target = manifold.site_indices[1];
        const auto h = build_hamiltonian(spec);
        Vec psi0(n_sites, 0.0);
        psi0[0] = 1.0;
        const auto trace = probability_trace(h, psi0, 1.3 * tau_fit, 40000);
        const auto measured = detect_transfer_time(trace, target, 0.99);
        REQUIRE(measured.has_value());
        CHECK(std::abs(*measured - tau_fit) / tau_fit < 5e-3);

        // rotation direction agrees between H_eff and the full ring at the
        // minimal hop time
        const double tau_min = *measured < 0.75 * tau_fit ? tau_fit / 2.0 : tau_fit;
        const auto u_full = propagator(h, tau_min);
        int full_first = 1;
        double best = -1.0;
        for (const int site : {manifold.site_indices[1], manifold.site_indices[2]})
            if (std::norm(u_full(site, 0)) > best) {
                best = std::norm(u_full(site, 0));
                full_first = site;
            }
        const auto u_min = propagator(eff.matrix, tau_min);
        int eff_first = std::norm(u_min(1, 0)) > std::norm(u_min(2, 0)) ? 1 : 2;
        CHECK(manifold.site_indices[eff_first] == full_first);
    }
}

}
